#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "normdyn/error.hpp"
#include "normdyn/graph.hpp"

namespace normdyn {

/// Parsed edge-list file. labels[i] is the external label of dense node i.
///
/// When every endpoint token is an integer in [0, n) the labels are the
/// identity ("0".."n-1"). Otherwise all tokens are treated as opaque labels
/// and assigned dense ids in order of first appearance; ids that no edge
/// mentions get the placeholder label "_<id>".
struct EdgeListFile {
  Graph graph;
  std::vector<std::string> labels;
  bool relabeled = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_index(std::string_view tok, std::uint64_t& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace detail

// Format: first non-comment line "n <count>", then one "<i> <j>" per line.
// '#' starts a comment line; blank lines are skipped; CRLF is accepted.
inline EdgeListFile parse_edge_list(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> n;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::size_t> pair_lines;

  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto toks = detail::split_ws(line);
    if (!n) {
      std::uint64_t count = 0;
      if (toks.size() != 2 || toks[0] != "n" || !detail::parse_index(toks[1], count)) {
        throw ParseError(line_no, "expected header 'n <count>'");
      }
      n = count;
      continue;
    }
    if (toks.size() != 2) throw ParseError(line_no, "expected '<i> <j>'");
    pairs.emplace_back(std::string(toks[0]), std::string(toks[1]));
    pair_lines.push_back(line_no);
  }
  if (!n) throw ParseError(line_no, "missing header 'n <count>'");

  bool numeric = true;
  for (const auto& [a, b] : pairs) {
    std::uint64_t x = 0, y = 0;
    if (!detail::parse_index(a, x) || !detail::parse_index(b, y) || x >= *n || y >= *n) {
      numeric = false;
      break;
    }
  }

  EdgeListFile out;
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  if (numeric) {
    for (const auto& [a, b] : pairs) {
      std::uint64_t x = 0, y = 0;
      detail::parse_index(a, x);
      detail::parse_index(b, y);
      edges.push_back({NodeId(x), NodeId(y)});
    }
    out.labels.reserve(*n);
    for (std::size_t i = 0; i < *n; ++i) out.labels.push_back(std::to_string(i));
  } else {
    out.relabeled = true;
    std::map<std::string, NodeId> ids;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      NodeId ends[2];
      const std::string* toks[2] = {&pairs[k].first, &pairs[k].second};
      for (int s = 0; s < 2; ++s) {
        auto [it, inserted] = ids.try_emplace(*toks[s], NodeId(out.labels.size()));
        if (inserted) {
          if (out.labels.size() >= *n) {
            throw ParseError(pair_lines[k], "more distinct labels than header count " + std::to_string(*n));
          }
          out.labels.push_back(*toks[s]);
        }
        ends[s] = it->second;
      }
      edges.push_back({ends[0], ends[1]});
    }
    for (std::size_t i = out.labels.size(); i < *n; ++i) out.labels.push_back("_" + std::to_string(i));
  }

  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges[k].u == edges[k].v) throw ParseError(pair_lines[k], "self-loop");
  }
  out.graph = Graph::from_edges(*n, edges);
  return out;
}

inline EdgeListFile read_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  return parse_edge_list(in);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n " << g.node_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write edge list '" + path + "'");
  write_edge_list(g, out);
}

// Companion "index,label" CSV for relabeled inputs.
inline void write_label_map(const std::vector<std::string>& labels, std::ostream& out) {
  out << "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

}  // namespace normdyn
