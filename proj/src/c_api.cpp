#include "pnm/pnm.h"

#include <cstring>
#include <new>
#include <sstream>

#include "pnm/bisim.hpp"
#include "pnm/compiler.hpp"
#include "pnm/enumerate.hpp"
#include "pnm/error.hpp"
#include "pnm/graph_io.hpp"
#include "pnm/kripke.hpp"
#include "pnm/matching.hpp"
#include "pnm/problems.hpp"
#include "pnm/report.hpp"
#include "pnm/simulation.hpp"

struct pnm_graph {
  pnm::PortedGraph pg;
};

struct pnm_formula {
  pnm::Formula f;
};

struct pnm_machine {
  pnm::MachinePtr m;
};

namespace {

thread_local std::string last_error;

pnm_status status_of(pnm::ErrorCode code) {
  switch (code) {
    case pnm::ErrorCode::Argument: return PNM_ARGUMENT;
    case pnm::ErrorCode::Parse: return PNM_PARSE;
    case pnm::ErrorCode::Validation: return PNM_VALIDATION;
    case pnm::ErrorCode::Signature: return PNM_SIGNATURE;
    case pnm::ErrorCode::Budget: return PNM_BUDGET;
    case pnm::ErrorCode::ClassViolation: return PNM_CLASS;
    case pnm::ErrorCode::Certificate: return PNM_CERTIFICATE;
  }
  return PNM_INTERNAL;
}

template <typename F>
pnm_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const pnm::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return PNM_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PNM_BUDGET;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PNM_INTERNAL;
  }
}

pnm_status fail(pnm_status status, const std::string& message) {
  last_error = message;
  return status;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw pnm::ArgumentError(std::string(what) + " is null");
}

int to_int(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw pnm::ArgumentError("bad number in '" + spec + "'");
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

pnm::Graph generated(const std::string& spec, std::uint64_t seed) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts.empty() ? spec : parts[0];
  auto arg = [&](std::size_t i) {
    if (parts.size() <= i) throw pnm::ArgumentError("generator '" + spec + "' is missing a parameter");
    return to_int(parts[i], spec);
  };
  if (kind == "star") return pnm::gen::star(arg(1));
  if (kind == "cycle") return pnm::gen::cycle(arg(1));
  if (kind == "path") return pnm::gen::path(arg(1));
  if (kind == "complete") return pnm::gen::complete(arg(1));
  if (kind == "cubic16") return pnm::gen::no_one_factor_cubic();
  if (kind == "random") {
    pnm::Rng rng(seed);
    return pnm::random_bounded_graph(arg(1), arg(2), rng);
  }
  if (kind == "parity" && parts.size() == 2) {
    const pnm::ParityPair pair = pnm::parity_separation_pair();
    if (parts[1] == "a") return pair.a;
    if (parts[1] == "b") return pair.b;
    if (parts[1] == "union") return pnm::graph_union(pair.a, pair.b);
  }
  throw pnm::ArgumentError("unknown graph source '" + spec + "'");
}

pnm::PortNumbering make_numbering(const pnm::Graph& g, const std::string& mode, std::uint64_t seed) {
  if (mode == "random") return pnm::random_port_numbering(g, seed);
  if (mode == "consistent") return pnm::consistent_port_numbering(g, seed);
  if (mode == "symmetric") return pnm::symmetric_port_numbering(g);
  if (mode == "sorted") {
    std::vector<std::vector<pnm::NodeId>> order(static_cast<std::size_t>(g.node_count()));
    for (pnm::NodeId v = 0; v < g.node_count(); ++v)
      order[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    return pnm::numbering_from_orders(g, order, order);
  }
  throw pnm::ArgumentError("unknown numbering '" + mode + "' (expected random, consistent, symmetric or sorted)");
}

pnm::Json parse_json(const char* text) {
  require(text, "json");
  return pnm::Json::parse(text);
}

int inbox_rank(pnm::InboxKind k) {
  return k == pnm::InboxKind::Vector ? 2 : (k == pnm::InboxKind::Multiset ? 1 : 0);
}

}  // namespace

extern "C" {

const char* pnm_last_error(void) { return last_error.c_str(); }

const char* pnm_status_name(pnm_status status) {
  switch (status) {
    case PNM_OK: return "ok";
    case PNM_ARGUMENT: return "argument";
    case PNM_PARSE: return "parse";
    case PNM_VALIDATION: return "validation";
    case PNM_SIGNATURE: return "signature";
    case PNM_BUDGET: return "budget";
    case PNM_CLASS: return "class";
    case PNM_CERTIFICATE: return "certificate";
    case PNM_INTERNAL: return "internal";
  }
  return "unknown";
}

void pnm_string_free(char* s) { std::free(s); }

pnm_status pnm_graph_load(const char* source, const char* numbering, uint64_t seed, pnm_graph** out) {
  return guarded([&] {
    require(source, "source");
    require(out, "out");
    const std::string src = source;
    const std::string mode = numbering ? numbering : "random";
    if (ends_with(src, ".pn")) {
      *out = new pnm_graph{pnm::parse_ported_graph(pnm::read_file(src))};
      return PNM_OK;
    }
    pnm::Graph g = ends_with(src, ".g") ? pnm::parse_graph(pnm::read_file(src)) : generated(src, seed);
    pnm::PortNumbering p = make_numbering(g, mode, seed);
    *out = new pnm_graph{pnm::PortedGraph(std::move(g), std::move(p))};
    return PNM_OK;
  });
}

void pnm_graph_free(pnm_graph* g) { delete g; }
int pnm_graph_node_count(const pnm_graph* g) { return g ? g->pg.node_count() : 0; }
int pnm_graph_max_degree(const pnm_graph* g) { return g ? g->pg.max_degree() : 0; }
int pnm_graph_is_consistent(const pnm_graph* g) { return g && pnm::is_consistent(g->pg.numbering()); }

pnm_status pnm_graph_text(const pnm_graph* g, const char* format, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    const std::string fmt = format ? format : "pn";
    if (fmt == "pn") *out = dup(pnm::format_ported_graph(g->pg));
    else if (fmt == "g") *out = dup(pnm::format_graph(g->pg.graph()));
    else throw pnm::ArgumentError("unknown graph format '" + fmt + "' (expected g or pn)");
    return PNM_OK;
  });
}

pnm_status pnm_graph_info(const pnm_graph* g, char** out_json) {
  return guarded([&] {
    require(g, "graph");
    require(out_json, "out");
    const pnm::Graph& graph = g->pg.graph();
    pnm::Json j;
    j["nodes"] = graph.node_count();
    j["edges"] = graph.edges();
    std::vector<int> degrees;
    for (pnm::NodeId v = 0; v < graph.node_count(); ++v) degrees.push_back(graph.degree(v));
    j["degrees"] = degrees;
    j["max_degree"] = graph.max_degree();
    j["connected"] = pnm::is_connected(graph);
    const auto k = pnm::regular_degree(graph);
    j["regular_degree"] = k ? pnm::Json(*k) : pnm::Json(nullptr);
    j["bipartite"] = pnm::bipartition(graph).has_value();
    if (graph.node_count() <= pnm::kOneFactorNodeCap) j["has_one_factor"] = pnm::has_one_factor(graph);
    j["in_script_G"] = pnm::is_in_script_G(graph);
    j["consistent"] = pnm::is_consistent(g->pg.numbering());
    j["numbering"] = pnm::numbering_json(g->pg);
    *out_json = dup(j.dump());
    return PNM_OK;
  });
}

pnm_status pnm_kripke(const pnm_graph* g, const char* variant, char** out_json) {
  return guarded([&] {
    require(g, "graph");
    require(variant, "variant");
    require(out_json, "out");
    *out_json = dup(pnm::model_json(pnm::kripke_model(g->pg, pnm::parse_variant(variant))));
    return PNM_OK;
  });
}

pnm_status pnm_formula_parse(const char* text, pnm_formula** out) {
  return guarded([&] {
    require(text, "formula");
    require(out, "out");
    *out = new pnm_formula{pnm::parse_formula(text)};
    return PNM_OK;
  });
}

void pnm_formula_free(pnm_formula* f) { delete f; }
int pnm_formula_depth(const pnm_formula* f) { return f ? pnm::modal_depth(f->f) : 0; }
int pnm_formula_graded(const pnm_formula* f) { return f && pnm::has_grades(f->f); }

pnm_status pnm_formula_print(const pnm_formula* f, char** out) {
  return guarded([&] {
    require(f, "formula");
    require(out, "out");
    *out = dup(pnm::print_formula(f->f));
    return PNM_OK;
  });
}

pnm_status pnm_machine_named(const char* name, int delta, pnm_machine** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    if (delta < 1) throw pnm::ArgumentError("delta must be at least 1");
    *out = new pnm_machine{pnm::named_machine(name, delta)};
    return PNM_OK;
  });
}

pnm_status pnm_machine_compile(const pnm_formula* f, const char* variant, int delta, int graded,
                               pnm_machine** out) {
  return guarded([&] {
    require(f, "formula");
    require(variant, "variant");
    require(out, "out");
    if (delta < 1) throw pnm::ArgumentError("delta must be at least 1");
    const pnm::Signature sig{delta, pnm::parse_variant(variant), graded != 0};
    *out = new pnm_machine{pnm::compile(f->f, sig)};
    return PNM_OK;
  });
}

pnm_status pnm_machine_random(uint64_t seed, int delta, const char* class_code, int horizon,
                              pnm_machine** out) {
  return guarded([&] {
    require(class_code, "class");
    require(out, "out");
    if (delta < 1 || horizon < 0) throw pnm::ArgumentError("delta must be positive and horizon non-negative");
    *out = new pnm_machine{pnm::random_machine(seed, delta, pnm::parse_class(class_code), horizon)};
    return PNM_OK;
  });
}

pnm_status pnm_machine_wrap(const pnm_machine* inner, const char* wrapper, pnm_machine** out) {
  return guarded([&] {
    require(inner, "machine");
    require(wrapper, "wrapper");
    require(out, "out");
    const std::string w = wrapper;
    const pnm::ClassTag tag = inner->m->tag();
    if (w == "set_from_multiset") {
      if (tag.inbox == pnm::InboxKind::Vector)
        throw pnm::ArgumentError("set_from_multiset needs a multiset or set machine");
      *out = new pnm_machine{pnm::set_from_multiset(inner->m)};
    } else if (w == "multiset_from_vector") {
      if (tag.outbox != pnm::OutboxKind::Vector)
        throw pnm::ArgumentError("multiset_from_vector needs a vector-outbox machine");
      *out = new pnm_machine{pnm::multiset_from_vector(inner->m)};
    } else if (w == "bcast_multiset") {
      if (tag.outbox != pnm::OutboxKind::Broadcast)
        throw pnm::ArgumentError("bcast_multiset needs a broadcast machine");
      *out = new pnm_machine{pnm::bcast_multiset_from_broadcast(inner->m)};
    } else {
      throw pnm::ArgumentError("unknown wrapper '" + w +
                               "' (expected set_from_multiset, multiset_from_vector or bcast_multiset)");
    }
    return PNM_OK;
  });
}

void pnm_machine_free(pnm_machine* m) { delete m; }
int pnm_machine_delta(const pnm_machine* m) { return m ? m->m->delta() : 0; }

pnm_status pnm_machine_info(const pnm_machine* m, char** out_json) {
  return guarded([&] {
    require(m, "machine");
    require(out_json, "out");
    pnm::Json j;
    j["name"] = m->m->name();
    j["class"] = pnm::class_name(m->m->tag());
    j["delta"] = m->m->delta();
    *out_json = dup(j.dump());
    return PNM_OK;
  });
}

pnm_status pnm_machine_in_class(const pnm_machine* m, const char* class_code) {
  return guarded([&] {
    require(m, "machine");
    require(class_code, "class");
    const pnm::ClassTag want = pnm::parse_class(class_code);
    const pnm::ClassTag have = m->m->tag();
    const bool inbox_ok = inbox_rank(have.inbox) <= inbox_rank(want.inbox);
    const bool outbox_ok = want.outbox == pnm::OutboxKind::Vector || have.outbox == pnm::OutboxKind::Broadcast;
    if (!inbox_ok || !outbox_ok)
      return fail(PNM_CLASS, "machine " + m->m->name() + " is " + pnm::class_name(have) + ", not in " +
                                 std::string(class_code));
    return PNM_OK;
  });
}

pnm_status pnm_machine_conformance(const pnm_machine* m, int samples, uint64_t seed, char** out_json) {
  return guarded([&] {
    require(m, "machine");
    require(out_json, "out");
    const pnm::ConformanceReport r = pnm::check_class_conformance(*m->m, samples, seed);
    pnm::Json j;
    j["machine"] = m->m->name();
    j["class"] = pnm::class_name(m->m->tag());
    j["ok"] = r.ok;
    j["probes"] = r.probes;
    if (!r.ok) j["counterexample"] = r.counterexample;
    *out_json = dup(j.dump());
    if (!r.ok) return fail(PNM_CLASS, r.counterexample);
    return PNM_OK;
  });
}

pnm_status pnm_run(const pnm_machine* m, const pnm_graph* g, int max_rounds, int with_trace, int* timed_out,
                   char** out_json) {
  return guarded([&] {
    require(m, "machine");
    require(g, "graph");
    require(out_json, "out");
    if (max_rounds < 0) throw pnm::ArgumentError("max rounds must be non-negative");
    const pnm::RunResult r =
        pnm::run(*m->m, g->pg, max_rounds, {.record_states = with_trace != 0, .record_messages = with_trace != 0});
    if (timed_out) *timed_out = r.timed_out;
    *out_json = dup(pnm::run_json(*m->m, g->pg, r, with_trace != 0).dump());
    return PNM_OK;
  });
}

pnm_status pnm_check(const pnm_graph* g, const pnm_formula* f, const char* variant, char** out_json) {
  return guarded([&] {
    require(g, "graph");
    require(f, "formula");
    require(variant, "variant");
    require(out_json, "out");
    const pnm::Variant v = pnm::parse_variant(variant);
    const int delta = std::max(1, g->pg.max_degree());
    pnm::validate_signature(f->f, {delta, v, pnm::has_grades(f->f)});
    const std::vector<char> truth = pnm::eval(pnm::kripke_model(g->pg, v, delta), f->f);
    std::vector<int> worlds;
    for (std::size_t w = 0; w < truth.size(); ++w)
      if (truth[w]) worlds.push_back(static_cast<int>(w));
    pnm::Json j;
    j["formula"] = pnm::print_formula(f->f);
    j["variant"] = variant;
    j["depth"] = pnm::modal_depth(f->f);
    j["worlds"] = worlds;
    *out_json = dup(j.dump());
    return PNM_OK;
  });
}

pnm_status pnm_bisim(const pnm_graph* const* graphs, size_t count, const char* variant, int graded,
                     char** out_json) {
  return guarded([&] {
    require(graphs, "graphs");
    require(variant, "variant");
    require(out_json, "out");
    if (count == 0) throw pnm::ArgumentError("bisim needs at least one graph");
    const pnm::Variant v = pnm::parse_variant(variant);
    int delta = 1;
    for (size_t i = 0; i < count; ++i) {
      require(graphs[i], "graph");
      delta = std::max(delta, graphs[i]->pg.max_degree());
    }
    pnm::KripkeModel k = pnm::kripke_model(graphs[0]->pg, v, delta);
    std::vector<int> offsets{0};
    for (size_t i = 1; i < count; ++i) {
      offsets.push_back(k.worlds);
      k = pnm::disjoint_union(k, pnm::kripke_model(graphs[i]->pg, v, delta));
    }
    const pnm::Partition p = graded ? pnm::coarsest_graded_bisimulation(k) : pnm::coarsest_bisimulation(k);
    const pnm::BisimCheck check = pnm::verify_partition(k, p, graded != 0);
    pnm::Json j;
    j["variant"] = variant;
    j["graded"] = graded != 0;
    j["world_offsets"] = offsets;
    j["partition"] = pnm::partition_json(p);
    j["verified"] = check.ok;
    if (!check.ok) j["failure"] = check.clause + ": " + check.counterexample;
    *out_json = dup(j.dump());
    if (!check.ok) return fail(PNM_CERTIFICATE, check.counterexample);
    return PNM_OK;
  });
}

pnm_status pnm_decompile(const pnm_machine* m, int delta, int horizon, const char* variant, char** out_formula) {
  return guarded([&] {
    require(m, "machine");
    require(variant, "variant");
    require(out_formula, "out");
    const pnm::Formula f = pnm::decompile(*m->m, delta, horizon, pnm::parse_variant(variant));
    *out_formula = dup(pnm::print_formula(f));
    return PNM_OK;
  });
}

pnm_status pnm_separate(const char* demo, uint64_t seed, char** out_json) {
  return guarded([&] {
    require(demo, "demo");
    require(out_json, "out");
    const pnm::Separation s = pnm::run_separation(demo, seed);
    *out_json = dup(s.report.dump());
    if (!s.ok) return fail(PNM_CERTIFICATE, std::string("separation '") + demo + "' did not verify");
    return PNM_OK;
  });
}

pnm_status pnm_verify_solution(const pnm_graph* g, const char* problem, const char* solution_json, int* valid,
                               char** out_json) {
  return guarded([&] {
    require(g, "graph");
    require(problem, "problem");
    require(out_json, "out");
    const pnm::GraphProblem prob = pnm::named_problem(problem);
    pnm::Json in = parse_json(solution_json);
    if (in.is_object() && in.contains("results") && in["results"].is_object()) in = in["results"];
    if (in.is_object() && in.contains("outputs")) in = in["outputs"];
    const int n = g->pg.node_count();
    pnm::Solution s(static_cast<std::size_t>(n), 0);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    auto assign = [&](int v, const pnm::Json& value) {
      if (v < 0 || v >= n) throw pnm::ValidationError("solution names node " + std::to_string(v) + " outside the graph");
      if (!value.is_number_integer()) throw pnm::ValidationError("node " + std::to_string(v) + " has no integer value");
      s[v] = value.get<std::int64_t>();
      seen[v] = 1;
    };
    if (in.is_array()) {
      for (std::size_t v = 0; v < in.size(); ++v) assign(static_cast<int>(v), in[v]);
    } else if (in.is_object()) {
      for (const auto& [key, value] : in.items()) assign(to_int(key, key), value);
    } else {
      throw pnm::ValidationError("solution must be a JSON array or object");
    }
    for (int v = 0; v < n; ++v)
      if (!seen[v]) throw pnm::ValidationError("solution has no value for node " + std::to_string(v));
    const bool ok = prob.verify(g->pg.graph(), s);
    if (valid) *valid = ok;
    pnm::Json j;
    j["problem"] = prob.name;
    j["valid"] = ok;
    *out_json = dup(j.dump());
    return PNM_OK;
  });
}

}  // extern "C"
