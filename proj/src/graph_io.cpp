#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "amoeba/graph.hpp"

namespace amoeba {

namespace {

std::string format_length(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, end);
}

template <typename T>
T parse_token(const std::string& token, std::size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParameterError("line " + std::to_string(line_no) + ": cannot parse '" + token + "'");
  }
  return value;
}

// Next non-empty, non-comment line split into whitespace tokens.
bool next_record(std::istream& in, std::vector<std::string>& tokens, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    tokens.clear();
    for (std::string t; ls >> t;) tokens.push_back(std::move(t));
    if (!tokens.empty()) return true;
  }
  return false;
}

}  // namespace

void write_graph(std::ostream& out, const DirectedGraph& graph) {
  out << graph.node_count() << ' ' << graph.edge_count() << '\n';
  for (const auto& e : graph.edges()) {
    out << e.tail << ' ' << e.head << ' ' << format_length(e.length) << '\n';
  }
}

DirectedGraph read_graph(std::istream& in) {
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  if (!next_record(in, tokens, line_no) || tokens.size() != 2) {
    throw ParameterError("graph file: expected header 'n m'");
  }
  const auto n = parse_token<std::size_t>(tokens[0], line_no);
  const auto m = parse_token<std::size_t>(tokens[1], line_no);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!next_record(in, tokens, line_no)) {
      throw ParameterError("graph file: expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    }
    if (tokens.size() != 3) {
      throw ParameterError("line " + std::to_string(line_no) + ": expected 'tail head length'");
    }
    edges.push_back({parse_token<NodeId>(tokens[0], line_no), parse_token<NodeId>(tokens[1], line_no),
                     parse_token<double>(tokens[2], line_no)});
  }
  if (next_record(in, tokens, line_no)) {
    throw ParameterError("graph file: trailing data at line " + std::to_string(line_no));
  }
  return DirectedGraph(n, std::move(edges));
}

void save_graph(const std::string& path, const DirectedGraph& graph) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open '" + path + "' for writing");
  write_graph(out, graph);
  if (!out) throw ParameterError("failed writing '" + path + "'");
}

DirectedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  return read_graph(in);
}

UpdateSet read_updates(std::istream& in, const DirectedGraph& graph) {
  UpdateSet set;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  bool any_increase = false, any_decrease = false;
  while (next_record(in, tokens, line_no)) {
    if (tokens.size() != 3) {
      throw ParameterError("line " + std::to_string(line_no) + ": expected 'tail head new_length'");
    }
    const auto tail = parse_token<NodeId>(tokens[0], line_no);
    const auto head = parse_token<NodeId>(tokens[1], line_no);
    const auto length = parse_token<double>(tokens[2], line_no);
    const auto id = graph.find_edge(tail, head);
    if (!id) {
      throw ParameterError("line " + std::to_string(line_no) + ": no edge (" + tokens[0] + ", " + tokens[1] + ")");
    }
    if (!(length > 0.0)) throw ParameterError("line " + std::to_string(line_no) + ": length must be positive");
    const double old_length = graph.edge(*id).length;
    any_increase |= length > old_length;
    any_decrease |= length < old_length;
    set.changes.push_back({*id, old_length, length});
  }
  set.category = any_increase && any_decrease ? UpdateCategory::mixed
                 : any_decrease              ? UpdateCategory::decrease
                                             : UpdateCategory::increase;
  if (graph.edge_count() > 0) {
    set.rue = static_cast<double>(set.changes.size()) / static_cast<double>(graph.edge_count());
  }
  return set;
}

}  // namespace amoeba
