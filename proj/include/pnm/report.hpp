#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "pnm/bisim.hpp"
#include "pnm/graph.hpp"
#include "pnm/machine.hpp"

namespace pnm {

using Json = nlohmann::ordered_json;

Json numbering_json(const PortedGraph& pg);
Json run_json(const Machine& m, const PortedGraph& pg, const RunResult& r, bool with_trace);
/// Trace export: rounds, hex states per node per round, and the message
/// table when it was recorded.
Json trace_json(const Trace& trace);
Json partition_json(const Partition& p);
Json refutation_json(const Refutation& r);

/// One of the three separations: the stronger-class machine is run and
/// audited, and the weaker class gets a re-verified refutation.
struct Separation {
  bool ok = false;
  Json report;
};

/// demo is "star", "parity" or "regular".
Separation run_separation(const std::string& demo, std::uint64_t seed);

}  // namespace pnm
