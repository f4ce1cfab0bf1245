#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bosoul/graph.hpp"

namespace bosoul {

/// A graph read from an edge-list file. labels[id] is the token that named
/// node `id` in the file.
struct EdgeList {
  Graph graph;
  std::vector<std::string> labels;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;

  std::size_t dropped() const noexcept { return self_loops_dropped + duplicates_dropped; }

  std::optional<NodeId> id_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) return static_cast<NodeId>(i);
    }
    return std::nullopt;
  }
};

namespace detail {

inline std::optional<std::uint64_t> parse_unsigned(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses a whitespace-separated edge list. Lines starting with '#' are
/// comments, except `# nodes <N>` which declares integer labels 0..N-1 so
/// isolated nodes survive a write/read cycle.
///
/// When every label is a non-negative integer, ids follow numeric order;
/// otherwise they follow order of first appearance. Self-loops and repeated
/// edges are dropped and counted.
inline EdgeList parse_edge_list(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> raw;
  std::vector<std::string> first_seen;
  std::unordered_map<std::string, std::size_t> seen;
  std::optional<std::uint64_t> declared_nodes;

  auto note = [&](const std::string& label) {
    if (seen.emplace(label, first_seen.size()).second) first_seen.push_back(label);
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string a, b, extra;
    if (!(tokens >> a)) continue;  // blank
    if (a.front() == '#') {
      std::istringstream directive(line.substr(1));
      std::string key, value;
      if (directive >> key >> value && key == "nodes") {
        declared_nodes = detail::parse_unsigned(value);
        if (!declared_nodes) throw ParseError(line_no, "bad node count '" + value + "'");
      }
      continue;
    }
    if (!(tokens >> b)) throw ParseError(line_no, "expected two node labels, found one");
    if (tokens >> extra) throw ParseError(line_no, "expected two node labels, found more");
    note(a);
    note(b);
    raw.emplace_back(std::move(a), std::move(b));
  }

  EdgeList out;
  bool numeric = true;
  for (const auto& label : first_seen) numeric = numeric && detail::parse_unsigned(label).has_value();

  if (numeric) {
    std::map<std::uint64_t, std::string> ordered;
    for (const auto& label : first_seen) ordered.emplace(*detail::parse_unsigned(label), label);
    if (declared_nodes) {
      for (std::uint64_t v = 0; v < *declared_nodes; ++v) {
        if (!ordered.contains(v)) ordered.emplace(v, std::to_string(v));
      }
    }
    for (auto& [value, label] : ordered) {
      // "01" and "1" would otherwise collapse onto one id.
      if (label != std::to_string(value)) {
        numeric = false;
        break;
      }
      out.labels.push_back(label);
    }
  }
  if (!numeric) out.labels = first_seen;

  std::unordered_map<std::string, NodeId> id;
  for (std::size_t i = 0; i < out.labels.size(); ++i) id.emplace(out.labels[i], static_cast<NodeId>(i));

  std::set<Edge> unique;
  for (const auto& [a, b] : raw) {
    NodeId u = id.at(a), v = id.at(b);
    if (u == v) {
      ++out.self_loops_dropped;
      continue;
    }
    if (!unique.insert(u < v ? Edge{u, v} : Edge{v, u}).second) ++out.duplicates_dropped;
  }
  std::vector<Edge> edges(unique.begin(), unique.end());
  out.graph = Graph(out.labels.size(), edges);
  return out;
}

inline EdgeList load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path + "'");
  return parse_edge_list(in);
}

/// Writes `g` in the format parse_edge_list reads. Without labels, node ids
/// are written and a `# nodes` line preserves isolated nodes.
inline void write_edge_list(std::ostream& out, const Graph& g,
                            const std::vector<std::string>* labels = nullptr) {
  if (labels == nullptr) out << "# nodes " << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) {
    if (labels) {
      out << (*labels)[e.u] << ' ' << (*labels)[e.v] << '\n';
    } else {
      out << e.u << ' ' << e.v << '\n';
    }
  }
}

/// Two-column CSV `node_id,label`.
inline void write_label_map(std::ostream& out, const std::vector<std::string>& labels) {
  out << "node_id,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

}  // namespace bosoul
