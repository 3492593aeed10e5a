#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "catana/core/error.hpp"
#include "catana/graph/graph.hpp"

namespace catana::graph {

using nlohmann::json;

enum class GraphFormat { json, graphml, dot };

inline GraphFormat parse_format(const std::string& s) {
  if (s == "json") return GraphFormat::json;
  if (s == "graphml") return GraphFormat::graphml;
  if (s == "dot") return GraphFormat::dot;
  throw ContractError("unknown graph format: " + s);
}

// {"nodes": [...], "adjacency": {"A": {"B": 3}}}
inline json to_adjacency_json(const CollaborationGraph& g) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : g.nodes()) j["nodes"].push_back(n);
  j["adjacency"] = json::object();
  for (const auto& [e, w] : g.edges()) j["adjacency"][e.first][e.second] = w;
  return j;
}

inline CollaborationGraph from_adjacency_json(const json& j) {
  CollaborationGraph g;
  try {
    for (const auto& n : j.at("nodes")) g.add_node(n.get<std::string>());
    for (const auto& [origin, row] : j.at("adjacency").items()) {
      for (const auto& [dest, w] : row.items()) g.add_edge(origin, dest, w.get<std::uint64_t>());
    }
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed graph json: ") + e.what());
  }
  return g;
}

inline json to_json_value(const Collaboration& c) {
  return {{"identity_id", c.identity_id}, {"video_id", c.video_id}, {"origin", c.origin},
          {"destination", c.destination}};
}

inline Collaboration collaboration_from_json(const json& j) {
  return {j.at("identity_id").get<std::string>(), j.at("video_id").get<std::string>(),
          j.at("origin").get<std::string>(), j.at("destination").get<std::string>()};
}

// graph.json: the adjacency document plus the collaboration evidence list.
inline json to_graph_document(const BuiltGraph& built) {
  json j = to_adjacency_json(built.graph);
  j["collaborations"] = json::array();
  for (const auto& c : built.collaborations) j["collaborations"].push_back(to_json_value(c));
  return j;
}

inline BuiltGraph from_graph_document(const json& j) {
  BuiltGraph b{from_adjacency_json(j), {}};
  if (j.contains("collaborations")) {
    try {
      for (const auto& c : j.at("collaborations")) b.collaborations.push_back(collaboration_from_json(c));
    } catch (const json::exception& e) {
      throw ContractError(std::string("malformed collaborations: ") + e.what());
    }
  }
  return b;
}

inline std::string to_graphml(const CollaborationGraph& g) {
  namespace pt = boost::property_tree;
  pt::ptree root;
  auto& gml = root.add("graphml", "");
  gml.put("<xmlattr>.xmlns", "http://graphml.graphdrawing.org/xmlns");
  auto& key = gml.add("key", "");
  key.put("<xmlattr>.id", "weight");
  key.put("<xmlattr>.for", "edge");
  key.put("<xmlattr>.attr.name", "weight");
  key.put("<xmlattr>.attr.type", "long");
  auto& graph = gml.add("graph", "");
  graph.put("<xmlattr>.id", "collaborations");
  graph.put("<xmlattr>.edgedefault", "directed");
  for (const auto& n : g.nodes()) graph.add("node", "").put("<xmlattr>.id", n);
  for (const auto& [e, w] : g.edges()) {
    auto& edge = graph.add("edge", "");
    edge.put("<xmlattr>.source", e.first);
    edge.put("<xmlattr>.target", e.second);
    auto& data = edge.add("data", std::to_string(w));
    data.put("<xmlattr>.key", "weight");
  }
  std::ostringstream out;
  pt::write_xml(out, root, pt::xml_writer_make_settings<std::string>(' ', 2));
  return out.str();
}

inline CollaborationGraph from_graphml(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_xml(in, root, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ContractError(std::string("malformed graphml: ") + e.what());
  }
  const auto gml = root.get_child_optional("graphml");
  if (!gml) throw ContractError("graphml root element missing");
  const auto graph = gml->get_child_optional("graph");
  if (!graph) throw ContractError("graphml graph element missing");
  CollaborationGraph g;
  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      g.add_node(child.get<std::string>("<xmlattr>.id"));
    } else if (tag == "edge") {
      std::uint64_t w = 1;
      for (const auto& [dtag, data] : child) {
        if (dtag == "data" && data.get<std::string>("<xmlattr>.key", "") == "weight") {
          w = data.get_value<std::uint64_t>();
        }
      }
      g.add_edge(child.get<std::string>("<xmlattr>.source"), child.get<std::string>("<xmlattr>.target"), w);
    }
  }
  return g;
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

struct DotToken {
  enum Kind { id, arrow, punct, end } kind;
  std::string text;
};

class DotLexer {
 public:
  explicit DotLexer(const std::string& s) : s_(s) {}

  DotToken next() {
    skip();
    if (pos_ >= s_.size()) return {DotToken::end, ""};
    const char c = s_[pos_];
    if (c == '"') {
      std::string out;
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) throw ContractError("dot: unterminated string");
      ++pos_;
      return {DotToken::id, out};
    }
    if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
      pos_ += 2;
      return {DotToken::arrow, "->"};
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-') {
      std::string out;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                  s_[pos_] == '.' || (s_[pos_] == '-' && !(pos_ + 1 < s_.size() && s_[pos_ + 1] == '>')))) {
        out += s_[pos_++];
      }
      return {DotToken::id, out};
    }
    ++pos_;
    return {DotToken::punct, std::string(1, c)};
  }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_.compare(pos_, 2, "//") == 0) {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string to_dot(const CollaborationGraph& g) {
  std::ostringstream out;
  out << "digraph collaborations {\n";
  for (const auto& n : g.nodes()) out << "  " << detail::dot_quote(n) << ";\n";
  for (const auto& [e, w] : g.edges()) {
    out << "  " << detail::dot_quote(e.first) << " -> " << detail::dot_quote(e.second) << " [label=\"" << w
        << "\", weight=" << w << "];\n";
  }
  out << "}\n";
  return out.str();
}

// Reads the subset of DOT that to_dot writes: node statements and single
// edge statements with an optional attribute list (weight or label).
inline CollaborationGraph from_dot(const std::string& text) {
  using detail::DotToken;
  detail::DotLexer lex(text);
  auto expect = [&](DotToken::Kind kind, const std::string& what) {
    auto t = lex.next();
    if (t.kind != kind || (kind == DotToken::punct && t.text != what)) {
      throw ContractError("dot: expected " + what + ", got '" + t.text + "'");
    }
    return t;
  };
  auto head = lex.next();
  if (head.kind == DotToken::id && head.text == "strict") head = lex.next();
  if (head.kind != DotToken::id || head.text != "digraph") throw ContractError("dot: expected digraph");
  auto t = lex.next();
  if (t.kind == DotToken::id) t = lex.next();
  if (t.kind != DotToken::punct || t.text != "{") throw ContractError("dot: expected {");

  CollaborationGraph g;
  t = lex.next();
  while (!(t.kind == DotToken::punct && t.text == "}")) {
    if (t.kind == DotToken::end) throw ContractError("dot: unexpected end of input");
    if (t.kind == DotToken::punct && t.text == ";") {
      t = lex.next();
      continue;
    }
    if (t.kind != DotToken::id) throw ContractError("dot: unexpected '" + t.text + "'");
    const std::string first = t.text;
    t = lex.next();
    if (t.kind == DotToken::arrow) {
      const std::string second = expect(DotToken::id, "node id").text;
      std::uint64_t weight = 1;
      std::string label;
      t = lex.next();
      if (t.kind == DotToken::punct && t.text == "[") {
        t = lex.next();
        while (!(t.kind == DotToken::punct && t.text == "]")) {
          if (t.kind == DotToken::punct && (t.text == "," || t.text == ";")) {
            t = lex.next();
            continue;
          }
          if (t.kind != DotToken::id) throw ContractError("dot: bad attribute list");
          const std::string key = t.text;
          expect(DotToken::punct, "=");
          const std::string value = expect(DotToken::id, "attribute value").text;
          try {
            if (key == "weight") weight = std::stoull(value);
            if (key == "label") label = value;
          } catch (const std::exception&) {
            throw ContractError("dot: non-numeric weight '" + value + "'");
          }
          t = lex.next();
        }
        if (weight == 1 && !label.empty()) {
          try {
            weight = std::stoull(label);
          } catch (const std::exception&) {
            throw ContractError("dot: non-numeric label '" + label + "'");
          }
        }
        t = lex.next();
      }
      g.add_edge(first, second, weight);
    } else {
      g.add_node(first);
      if (t.kind == DotToken::punct && t.text == "[") {
        while (!(t.kind == DotToken::punct && t.text == "]")) {
          t = lex.next();
          if (t.kind == DotToken::end) throw ContractError("dot: unterminated attribute list");
        }
        t = lex.next();
      }
    }
  }
  return g;
}

inline std::string export_graph(const CollaborationGraph& g, GraphFormat f) {
  switch (f) {
    case GraphFormat::json:
      return to_adjacency_json(g).dump(2) + "\n";
    case GraphFormat::graphml:
      return to_graphml(g);
    case GraphFormat::dot:
      return to_dot(g);
  }
  return {};
}

inline CollaborationGraph import_graph(const std::string& text, GraphFormat f) {
  switch (f) {
    case GraphFormat::json:
      try {
        return from_adjacency_json(json::parse(text));
      } catch (const json::parse_error& e) {
        throw ContractError(std::string("malformed graph json: ") + e.what());
      }
    case GraphFormat::graphml:
      return from_graphml(text);
    case GraphFormat::dot:
      return from_dot(text);
  }
  return {};
}

}  // namespace catana::graph
