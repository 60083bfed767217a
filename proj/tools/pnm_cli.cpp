#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pnm/pnm.h"

using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInvalid = 2, kTimeout = 3, kCertificate = 4, kBudget = 5 };

struct Failed {
  pnm_status status;
  std::string message;
};

int exit_code(pnm_status s) {
  switch (s) {
    case PNM_OK: return kOk;
    case PNM_PARSE:
    case PNM_VALIDATION:
    case PNM_SIGNATURE:
    case PNM_CLASS: return kInvalid;
    case PNM_CERTIFICATE: return kCertificate;
    case PNM_BUDGET: return kBudget;
    default: return kFailure;
  }
}

void ok(pnm_status s) {
  if (s != PNM_OK) throw Failed{s, pnm_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  pnm_string_free(s);
  return out;
}

struct GraphDel {
  void operator()(pnm_graph* g) const { pnm_graph_free(g); }
};
struct FormulaDel {
  void operator()(pnm_formula* f) const { pnm_formula_free(f); }
};
struct MachineDel {
  void operator()(pnm_machine* m) const { pnm_machine_free(m); }
};
using GraphHandle = std::unique_ptr<pnm_graph, GraphDel>;
using FormulaHandle = std::unique_ptr<pnm_formula, FormulaDel>;
using MachineHandle = std::unique_ptr<pnm_machine, MachineDel>;

GraphHandle load_graph(const std::string& source, const std::string& numbering, std::uint64_t seed) {
  pnm_graph* g = nullptr;
  ok(pnm_graph_load(source.c_str(), numbering.c_str(), seed, &g));
  return GraphHandle(g);
}

FormulaHandle parse(const std::string& text) {
  pnm_formula* f = nullptr;
  ok(pnm_formula_parse(text.c_str(), &f));
  return FormulaHandle(f);
}

MachineHandle named(const std::string& name, int delta) {
  pnm_machine* m = nullptr;
  ok(pnm_machine_named(name.c_str(), delta, &m));
  return MachineHandle(m);
}

MachineHandle compiled(const pnm_formula* f, const std::string& variant, int delta) {
  pnm_machine* m = nullptr;
  ok(pnm_machine_compile(f, variant.c_str(), delta, pnm_formula_graded(f), &m));
  return MachineHandle(m);
}

MachineHandle wrapped(MachineHandle inner, const std::string& wrapper) {
  if (wrapper.empty()) return inner;
  pnm_machine* m = nullptr;
  ok(pnm_machine_wrap(inner.get(), wrapper.c_str(), &m));
  return MachineHandle(m);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failed{PNM_ARGUMENT, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Common {
  bool json = false;
  std::uint64_t seed = 0;
  std::string numbering = "random";
};

struct Report {
  std::string command;
  Json inputs = Json::object();
  Json results;
};

void print(const Common& c, const Report& r, double ms, const std::string& text) {
  if (c.json) {
    Json j;
    j["command"] = r.command;
    j["inputs"] = r.inputs;
    j["results"] = r.results;
    j["timing_ms"] = ms;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

std::string outputs_text(const Json& outputs) {
  std::string s;
  for (const auto& [node, y] : outputs.items())
    s += "node " + node + ": " + (y.is_null() ? std::string("running") : y.dump()) + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Port-numbered network machines, modal logic and bisimulation"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", common.json, "Print a JSON report");
    sub->add_option("--seed", common.seed, "Seed for every random choice");
  };
  auto add_numbering = [&](CLI::App* sub) {
    sub->add_option("--numbering", common.numbering, "random, consistent, symmetric or sorted")
        ->check(CLI::IsMember({"random", "consistent", "symmetric", "sorted"}));
  };

  std::string graph, machine, formula, variant = "++", klass, wrapper, problem, solution, demo, spec, format = "pn",
                                       output;
  std::vector<std::string> graphs;
  int max_rounds = 100, delta = 0, horizon = -1, samples = 200;
  bool trace = false, graded = false;

  auto* run = app.add_subcommand("run", "Run a machine or a compiled formula on a ported graph");
  run->add_option("--graph", graph, ".g/.pn file or generator spec")->required();
  auto* run_machine = run->add_option("--machine", machine, "Named machine");
  auto* run_formula = run->add_option("--formula", formula, "Formula to compile and run");
  run_machine->excludes(run_formula);
  run->add_option("--variant", variant, "Variant for --formula: ++, -+, +- or --");
  run->add_option("--class", klass, "Assert the machine's class: vvc, vv, mv, sv, vb, mb or sb");
  run->add_option("--wrap", wrapper, "set_from_multiset, multiset_from_vector or bcast_multiset");
  run->add_option("--max-rounds", max_rounds);
  run->add_flag("--trace", trace, "Include the state and message trace");
  add_common(run);
  add_numbering(run);

  auto* check = app.add_subcommand("check", "Worlds satisfying a formula in K(G,p)");
  check->add_option("--graph", graph)->required();
  check->add_option("--formula", formula)->required();
  check->add_option("--variant", variant);
  add_common(check);
  add_numbering(check);

  auto* comp = app.add_subcommand("compile", "Compile a formula into a machine");
  comp->add_option("--formula", formula)->required();
  comp->add_option("--variant", variant);
  comp->add_option("--delta", delta)->required();
  add_common(comp);

  auto* decomp = app.add_subcommand("decompile", "Formula equivalent to a machine up to a horizon");
  auto* dm = decomp->add_option("--machine", machine);
  auto* df = decomp->add_option("--formula", formula, "Compile this formula first");
  dm->excludes(df);
  decomp->add_option("--variant", variant);
  decomp->add_option("--delta", delta)->required();
  decomp->add_option("--horizon", horizon)->required();
  add_common(decomp);

  auto* bisim = app.add_subcommand("bisim", "Coarsest bisimulation of one model or a disjoint union");
  bisim->add_option("--graph", graphs)->required();
  bisim->add_option("--variant", variant);
  bisim->add_flag("--graded", graded);
  add_common(bisim);
  add_numbering(bisim);

  auto* sep = app.add_subcommand("separate", "Positive run plus impossibility certificate");
  sep->add_option("demo", demo, "star, parity or regular")->required()->check(CLI::IsMember({"star", "parity", "regular"}));
  add_common(sep);

  auto* gen = app.add_subcommand("gen", "Write a generated graph");
  gen->add_option("spec", spec, "Generator spec, e.g. star:3 or cubic16")->required();
  gen->add_option("--format", format)->check(CLI::IsMember({"g", "pn"}));
  gen->add_option("-o,--output", output);
  add_common(gen);
  add_numbering(gen);

  auto* verify = app.add_subcommand("verify", "Validate a graph, a solution, or a machine's class");
  verify->add_option("--graph", graph);
  verify->add_option("--problem", problem, "leaf_election, odd_odd or nonconstant");
  verify->add_option("--solution", solution, "JSON file mapping nodes to values, or a run report");
  verify->add_option("--machine", machine, "Probe this machine's declared class");
  verify->add_option("--delta", delta);
  verify->add_option("--samples", samples);
  add_common(verify);
  add_numbering(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kFailure;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  Report r;
  r.command = app.get_subcommands().front()->get_name();
  r.inputs["seed"] = common.seed;

  try {
    if (*run) {
      if (machine.empty() && formula.empty()) throw Failed{PNM_ARGUMENT, "run needs --machine or --formula"};
      if (klass == "vvc" && common.numbering == "random") common.numbering = "consistent";
      auto g = load_graph(graph, common.numbering, common.seed);
      if (klass == "vvc" && !pnm_graph_is_consistent(g.get()))
        throw Failed{PNM_VALIDATION, "class vvc needs a consistent port numbering"};
      const int d = std::max(1, pnm_graph_max_degree(g.get()));
      MachineHandle m;
      if (!machine.empty()) {
        m = named(machine, d);
      } else {
        auto f = parse(formula);
        m = compiled(f.get(), variant, d);
      }
      m = wrapped(std::move(m), wrapper);
      if (!klass.empty()) ok(pnm_machine_in_class(m.get(), klass.c_str()));
      r.inputs["graph"] = graph;
      r.inputs["numbering"] = common.numbering;
      if (!machine.empty()) r.inputs["machine"] = machine;
      if (!formula.empty()) {
        r.inputs["formula"] = formula;
        r.inputs["variant"] = variant;
      }
      if (!wrapper.empty()) r.inputs["wrap"] = wrapper;
      if (!klass.empty()) r.inputs["class"] = klass;
      r.inputs["max_rounds"] = max_rounds;
      int timed_out = 0;
      char* out = nullptr;
      ok(pnm_run(m.get(), g.get(), max_rounds, trace, &timed_out, &out));
      r.results = Json::parse(take(out));
      std::string text = timed_out ? "timed out after " + std::to_string(max_rounds) + " rounds\n"
                                   : "rounds: " + std::to_string(r.results["rounds"].get<int>()) + "\n";
      print(common, r, elapsed(), text + outputs_text(r.results["outputs"]));
      return timed_out ? kTimeout : kOk;
    }

    if (*check) {
      auto g = load_graph(graph, common.numbering, common.seed);
      auto f = parse(formula);
      char* out = nullptr;
      ok(pnm_check(g.get(), f.get(), variant.c_str(), &out));
      r.inputs = {{"graph", graph}, {"formula", formula}, {"variant", variant}, {"seed", common.seed}};
      r.results = Json::parse(take(out));
      std::string text;
      for (const auto& w : r.results["worlds"]) text += (text.empty() ? "" : " ") + w.dump();
      print(common, r, elapsed(), text + "\n");
      return kOk;
    }

    if (*comp) {
      auto f = parse(formula);
      auto m = compiled(f.get(), variant, delta);
      char* out = nullptr;
      ok(pnm_machine_info(m.get(), &out));
      r.inputs = {{"formula", formula}, {"variant", variant}, {"delta", delta}};
      r.results = Json::parse(take(out));
      r.results["modal_depth"] = pnm_formula_depth(f.get());
      r.results["rounds"] = pnm_formula_depth(f.get()) + 1;
      print(common, r, elapsed(),
            r.results["class"].get<std::string>() + " machine, stops after " +
                std::to_string(pnm_formula_depth(f.get()) + 1) + " rounds\n");
      return kOk;
    }

    if (*decomp) {
      if (machine.empty() && formula.empty()) throw Failed{PNM_ARGUMENT, "decompile needs --machine or --formula"};
      MachineHandle m;
      if (!machine.empty()) {
        m = named(machine, delta);
        r.inputs["machine"] = machine;
      } else {
        auto f = parse(formula);
        m = compiled(f.get(), variant, delta);
        r.inputs["formula"] = formula;
      }
      r.inputs["variant"] = variant;
      r.inputs["delta"] = delta;
      r.inputs["horizon"] = horizon;
      char* out = nullptr;
      ok(pnm_decompile(m.get(), delta, horizon, variant.c_str(), &out));
      const std::string text = take(out);
      r.results = {{"formula", text}};
      print(common, r, elapsed(), text + "\n");
      return kOk;
    }

    if (*bisim) {
      std::vector<GraphHandle> owned;
      std::vector<const pnm_graph*> raw;
      for (const auto& src : graphs) {
        owned.push_back(load_graph(src, common.numbering, common.seed));
        raw.push_back(owned.back().get());
      }
      char* out = nullptr;
      const pnm_status s = pnm_bisim(raw.data(), raw.size(), variant.c_str(), graded, &out);
      r.inputs = {{"graphs", graphs}, {"variant", variant}, {"graded", graded}, {"numbering", common.numbering},
                  {"seed", common.seed}};
      if (out) r.results = Json::parse(take(out));
      ok(s);
      std::string text;
      for (const auto& block : r.results["partition"]["blocks"]) text += block.dump() + "\n";
      print(common, r, elapsed(), text);
      return kOk;
    }

    if (*sep) {
      char* out = nullptr;
      const pnm_status s = pnm_separate(demo.c_str(), common.seed, &out);
      r.inputs = {{"demo", demo}, {"seed", common.seed}};
      if (out) r.results = Json::parse(take(out));
      std::string text;
      if (!r.results.is_null()) {
        const Json& st = r.results["stronger"];
        const Json& wk = r.results["weaker"];
        text = r.results["separation"].get<std::string>() + "\n";
        text += "  " + st["class"].get<std::string>() + " " + st["machine"].get<std::string>() + ": " +
                st["valid"].dump() + "/" + st["runs"].dump() + " runs valid\n";
        text += "  " + wk["class"].get<std::string>() + " refuted: " + wk["refutation"]["refuted"].dump() +
                ", certificate verified: " + wk["certificate_verified"].dump() + "\n";
      }
      print(common, r, elapsed(), text);
      if (s != PNM_OK) {
        std::cerr << "error (" << pnm_status_name(s) << "): " << pnm_last_error() << "\n";
        return exit_code(s);
      }
      return kOk;
    }

    if (*gen) {
      auto g = load_graph(spec, common.numbering, common.seed);
      char* out = nullptr;
      ok(pnm_graph_text(g.get(), format.c_str(), &out));
      const std::string text = take(out);
      if (output.empty()) {
        std::cout << text;
      } else {
        std::ofstream file(output, std::ios::binary);
        if (!file) throw Failed{PNM_ARGUMENT, "cannot write " + output};
        file << text;
      }
      return kOk;
    }

    if (*verify) {
      if (!machine.empty()) {
        auto m = named(machine, std::max(1, delta));
        char* out = nullptr;
        const pnm_status s = pnm_machine_conformance(m.get(), samples, common.seed, &out);
        r.inputs = {{"machine", machine}, {"delta", std::max(1, delta)}, {"samples", samples}, {"seed", common.seed}};
        if (out) r.results = Json::parse(take(out));
        print(common, r, elapsed(),
              r.results["class"].get<std::string>() + " conformance: " + (s == PNM_OK ? "ok" : "violated") + "\n");
        if (s != PNM_OK) std::cerr << "error (class): " << pnm_last_error() << "\n";
        return exit_code(s);
      }
      if (graph.empty()) throw Failed{PNM_ARGUMENT, "verify needs --graph or --machine"};
      auto g = load_graph(graph, common.numbering, common.seed);
      r.inputs = {{"graph", graph}, {"numbering", common.numbering}, {"seed", common.seed}};
      char* out = nullptr;
      if (problem.empty()) {
        ok(pnm_graph_info(g.get(), &out));
        r.results = Json::parse(take(out));
        print(common, r, elapsed(), "valid ported graph on " + std::to_string(pnm_graph_node_count(g.get())) + " nodes\n");
        return kOk;
      }
      if (solution.empty()) throw Failed{PNM_ARGUMENT, "verify --problem needs --solution"};
      const std::string text = read_text(solution);
      int valid = 0;
      ok(pnm_verify_solution(g.get(), problem.c_str(), text.c_str(), &valid, &out));
      r.inputs["problem"] = problem;
      r.inputs["solution"] = solution;
      r.results = Json::parse(take(out));
      print(common, r, elapsed(), valid ? "valid\n" : "invalid\n");
      return valid ? kOk : kInvalid;
    }
  } catch (const Failed& f) {
    std::cerr << "error (" << pnm_status_name(f.status) << "): " << f.message << "\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
