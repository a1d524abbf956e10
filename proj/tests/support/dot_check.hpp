#pragma once

// Minimal structural validator for the DOT subset the library emits:
// one undirected graph, node statements with attribute lists, edge
// statements between declared nodes.

#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>

namespace dotcheck {

struct Parsed {
  bool ok = false;
  std::string error;
  std::map<std::string, std::map<std::string, std::string>> nodes;
  std::set<std::pair<std::string, std::string>> edges;
};

inline Parsed parse(const std::string& text) {
  Parsed out;
  std::istringstream in(text);
  std::string line;
  const std::regex header(R"(^graph\s+[A-Za-z_][A-Za-z0-9_]*\s*\{$)");
  const std::regex defaults(R"(^\s*node\s*\[[^\]]*\];$)");
  const std::regex node(R"(^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\[(.*)\];$)");
  const std::regex edge(R"(^\s*([A-Za-z_][A-Za-z0-9_]*)\s*--\s*([A-Za-z_][A-Za-z0-9_]*)\s*;$)");
  const std::regex attr(R"(\s*([A-Za-z_]+)\s*=\s*("[^"]*"|[A-Za-z0-9_.\-]+)\s*)");
  if (!std::getline(in, line) || !std::regex_match(line, header)) {
    out.error = "bad header";
    return out;
  }
  bool closed = false;
  std::smatch m;
  while (std::getline(in, line)) {
    if (closed) {
      if (!line.empty()) {
        out.error = "content after closing brace";
        return out;
      }
      continue;
    }
    if (line == "}") {
      closed = true;
    } else if (std::regex_match(line, defaults)) {
      continue;
    } else if (std::regex_match(line, m, edge)) {
      const std::string a = m[1], b = m[2];
      if (!out.nodes.count(a) || !out.nodes.count(b)) {
        out.error = "edge to undeclared node: " + line;
        return out;
      }
      out.edges.insert({a, b});
    } else if (std::regex_match(line, m, node)) {
      std::map<std::string, std::string> attrs;
      std::string rest = m[2];
      // Split on commas outside quotes.
      std::string cur;
      bool quoted = false;
      for (char c : rest) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
          std::smatch am;
          if (!std::regex_match(cur, am, attr)) {
            out.error = "bad attribute: " + cur;
            return out;
          }
          attrs[am[1]] = am[2];
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (quoted) {
        out.error = "unterminated quote";
        return out;
      }
      std::smatch am;
      if (!std::regex_match(cur, am, attr)) {
        out.error = "bad attribute: " + cur;
        return out;
      }
      attrs[am[1]] = am[2];
      out.nodes[m[1]] = attrs;
    } else {
      out.error = "unrecognized line: " + line;
      return out;
    }
  }
  if (!closed) {
    out.error = "missing closing brace";
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace dotcheck
