#include "pnm/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "pnm/error.hpp"

namespace pnm {

namespace {

struct Line {
  int number;
  std::vector<std::string> words;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream words(raw);
    Line line{number, {}};
    for (std::string w; words >> w;) line.words.push_back(w);
    if (!line.words.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const Line& line, const std::string& what) {
  throw ValidationError("line " + std::to_string(line.number) + ": " + what);
}

int to_int(const Line& line, const std::string& word) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(word, &used);
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + word + "'");
  }
  if (used != word.size()) fail(line, "expected an integer, got '" + word + "'");
  return value;
}

int read_header(const std::vector<Line>& lines) {
  if (lines.empty()) throw ValidationError("empty graph file");
  const Line& head = lines.front();
  if (head.words.size() != 2 || head.words[0] != "nodes") fail(head, "expected `nodes <n>`");
  const int n = to_int(head, head.words[1]);
  if (n < 0) fail(head, "negative node count");
  return n;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  const auto lines = tokenize(text);
  const int n = read_header(lines);
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    if (line.words.size() != 3 || line.words[0] != "e") fail(line, "expected `e <u> <v>`");
    edges.emplace_back(to_int(line, line.words[1]), to_int(line, line.words[2]));
  }
  return Graph::from_edges(n, edges);
}

PortedGraph parse_ported_graph(std::string_view text) {
  const auto lines = tokenize(text);
  const int n = read_header(lines);
  std::vector<std::vector<std::pair<int, Port>>> entries(n);
  std::set<Edge> edge_set;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    if (line.words.size() != 5 || line.words[0] != "p") fail(line, "expected `p <u> <i> <v> <j>`");
    const int u = to_int(line, line.words[1]), i = to_int(line, line.words[2]);
    const int v = to_int(line, line.words[3]), j = to_int(line, line.words[4]);
    if (u < 0 || u >= n || v < 0 || v >= n) fail(line, "node id out of range");
    if (i < 1 || j < 1) fail(line, "port indices start at 1");
    if (u == v) fail(line, "port maps node " + std::to_string(u) + " to itself");
    entries[u].push_back({i, {v, j}});
    edge_set.insert({std::min(u, v), std::max(u, v)});
  }
  std::vector<std::vector<Port>> table(n);
  for (NodeId u = 0; u < n; ++u) {
    auto& e = entries[u];
    std::sort(e.begin(), e.end());
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k].first != static_cast<int>(k) + 1)
        throw ValidationError("node " + std::to_string(u) + " does not list ports 1.." +
                              std::to_string(e.size()) + " exactly once");
      table[u].push_back(e[k].second);
    }
  }
  std::vector<Edge> edges(edge_set.begin(), edge_set.end());
  return PortedGraph(Graph::from_edges(n, edges), PortNumbering(std::move(table)));
}

std::string format_graph(const Graph& g) {
  std::string out = "nodes " + std::to_string(g.node_count()) + "\n";
  for (auto [u, v] : g.edges()) out += "e " + std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

std::string format_ported_graph(const PortedGraph& pg) {
  std::string out = "nodes " + std::to_string(pg.node_count()) + "\n";
  for (NodeId u = 0; u < pg.node_count(); ++u)
    for (int i = 1; i <= pg.degree(u); ++i) {
      const Port t = pg.forward({u, i});
      out += "p " + std::to_string(u) + " " + std::to_string(i) + " " + std::to_string(t.node) +
             " " + std::to_string(t.index) + "\n";
    }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace pnm
