#pragma once

#include <string>
#include <string_view>

#include "pnm/graph.hpp"

namespace pnm {

// Text formats. Both start with `nodes <n>`; blank lines and `#` comments
// are ignored.
//   .g   one `e <u> <v>` line per edge
//   .pn  one `p <u> <i> <v> <j>` line per port, meaning p((u,i)) = (v,j)

Graph parse_graph(std::string_view text);
/// The graph is recovered from the arcs of p and the result validated fully.
PortedGraph parse_ported_graph(std::string_view text);

std::string format_graph(const Graph& g);
std::string format_ported_graph(const PortedGraph& pg);

std::string read_file(const std::string& path);

}  // namespace pnm
