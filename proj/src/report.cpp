#include "pnm/report.hpp"

#include <numeric>

#include "pnm/enumerate.hpp"
#include "pnm/error.hpp"
#include "pnm/matching.hpp"
#include "pnm/problems.hpp"

namespace pnm {

Json numbering_json(const PortedGraph& pg) {
  Json ports = Json::array();
  for (NodeId u = 0; u < pg.node_count(); ++u)
    for (int i = 1; i <= pg.degree(u); ++i) {
      const Port t = pg.forward({u, i});
      ports.push_back({u, i, t.node, t.index});
    }
  return ports;
}

Json trace_json(const Trace& trace) {
  Json j;
  j["rounds"] = trace.states.empty() ? 0 : static_cast<int>(trace.states.size()) - 1;
  Json states = Json::array();
  for (const auto& round : trace.states) {
    Json row = Json::array();
    for (const Bytes& s : round) row.push_back(to_hex(s));
    states.push_back(row);
  }
  j["states"] = states;
  if (!trace.messages.empty()) {
    Json msgs = Json::array();
    for (const auto& round : trace.messages) {
      Json row = Json::array();
      for (const auto& node : round) {
        Json ports = Json::array();
        for (const Bytes& m : node) ports.push_back(to_hex(m));
        row.push_back(ports);
      }
      msgs.push_back(row);
    }
    j["messages"] = msgs;
  }
  return j;
}

Json run_json(const Machine& m, const PortedGraph& pg, const RunResult& r, bool with_trace) {
  Json j;
  j["machine"] = m.name();
  j["class"] = class_name(m.tag());
  j["nodes"] = pg.node_count();
  j["timed_out"] = r.timed_out;
  j["rounds"] = r.rounds;
  Json outputs = Json::object();
  for (std::size_t v = 0; v < r.outputs.size(); ++v)
    outputs[std::to_string(v)] = r.outputs[v] ? Json(*r.outputs[v]) : Json(nullptr);
  j["outputs"] = outputs;
  if (with_trace) j["trace"] = trace_json(r.trace);
  return j;
}

Json partition_json(const Partition& p) {
  Json j;
  j["block_count"] = p.block_count;
  j["blocks"] = p.blocks();
  return j;
}

Json refutation_json(const Refutation& r) {
  Json j;
  j["refuted"] = r.refuted;
  if (!r.refuted) j["reason"] = r.reason;
  j["class"] = r.class_code;
  j["variant"] = variant_code(r.variant);
  j["X"] = r.x;
  j["partition"] = partition_json(r.partition);
  j["audited_solution_count"] = r.audited;
  return j;
}

namespace {

struct Positive {
  std::uint64_t runs = 0;
  std::uint64_t valid = 0;
  int max_rounds = 0;
};

Positive audit_runs(const Machine& m, const Graph& g, const std::vector<PortNumbering>& ps,
                    const GraphProblem& problem) {
  Positive pos;
  for (const PortNumbering& p : ps) {
    const RunResult r = run(m, PortedGraph(g, p), 64, {.record_states = false});
    ++pos.runs;
    pos.max_rounds = std::max(pos.max_rounds, r.rounds);
    if (r.timed_out) continue;
    Solution s;
    for (const auto& y : r.outputs) s.push_back(*y);
    if (problem.verify(g, s)) ++pos.valid;
  }
  return pos;
}

Json positive_json(const std::string& cls, const Machine& m, const std::string& scope, const Positive& pos) {
  Json j;
  j["class"] = cls;
  j["machine"] = m.name();
  j["numberings"] = scope;
  j["runs"] = pos.runs;
  j["valid"] = pos.valid;
  j["max_rounds"] = pos.max_rounds;
  return j;
}

}  // namespace

Separation run_separation(const std::string& demo, std::uint64_t seed) {
  Separation out;
  Json& j = out.report;
  j["demo"] = demo;
  Graph g;
  GraphProblem problem;
  std::vector<NodeId> x;
  PortNumbering weak_p;
  std::string weak_class;
  Positive pos;
  Json positive;

  if (demo == "star") {
    j["separation"] = "VB != SV";
    g = gen::star(3);
    problem = leaf_election();
    const MachinePtr m = leaf_election_machine(3);
    const auto ps = numberings(g, NumberingScope::All, 1000, seed);
    pos = audit_runs(*m, g, ps, problem);
    positive = positive_json("SV", *m, "all " + std::to_string(ps.size()), pos);
    x = {1, 2, 3};
    weak_p = random_port_numbering(g, seed);
    weak_class = "vb";
  } else if (demo == "parity") {
    j["separation"] = "SB != MB";
    const ParityPair pair = parity_separation_pair();
    g = graph_union(pair.a, pair.b);
    problem = odd_odd();
    const MachinePtr m = odd_odd_machine(3);
    const auto ps = numberings(g, NumberingScope::All, 50, seed);
    pos = audit_runs(*m, g, ps, problem);
    positive = positive_json("MB", *m, std::to_string(ps.size()) + " sampled", pos);
    x = {pair.u, pair.a.node_count() + pair.w};
    weak_p = random_port_numbering(g, seed);
    weak_class = "sb";
  } else if (demo == "regular") {
    j["separation"] = "VVc != VV";
    g = gen::no_one_factor_cubic();
    problem = nonconstant_on_G();
    const MachinePtr m = symmetry_break_machine(3);
    const auto ps = numberings(g, NumberingScope::Consistent, 30, seed);
    pos = audit_runs(*m, g, ps, problem);
    positive = positive_json("VVc", *m, std::to_string(ps.size()) + " sampled consistent", pos);
    weak_p = symmetric_port_numbering(g);
    const RunResult sym = run(*m, PortedGraph(g, weak_p), 64, {.record_states = false});
    std::set<std::int64_t> values;
    for (const auto& y : sym.outputs) values.insert(y.value_or(-1));
    positive["on_symmetric_numbering_outputs"] = Json(values);
    x.resize(static_cast<std::size_t>(g.node_count()));
    std::iota(x.begin(), x.end(), 0);
    weak_class = "vv";
  } else {
    throw ArgumentError("unknown demo '" + demo + "' (expected star, parity or regular)");
  }

  j["graph"] = {{"nodes", g.node_count()}, {"edges", g.edges()}};
  j["stronger"] = positive;
  const Refutation r = impossibility_check(g, x, problem, weak_class, weak_p);
  const BisimCheck cert = r.refuted ? verify_refutation(g, problem, weak_p, r) : BisimCheck{false, "certificate", r.reason};
  Json weaker;
  weaker["class"] = weak_class == "vv" ? "VV" : (weak_class == "vb" ? "VB" : "SB");
  weaker["numbering"] = numbering_json(PortedGraph(g, weak_p));
  weaker["refutation"] = refutation_json(r);
  weaker["certificate_verified"] = cert.ok;
  if (!cert.ok) weaker["certificate_failure"] = cert.counterexample;
  j["weaker"] = weaker;
  out.ok = pos.runs > 0 && pos.valid == pos.runs && r.refuted && cert.ok;
  j["ok"] = out.ok;
  return out;
}

}  // namespace pnm
