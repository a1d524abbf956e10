#pragma once

// Append-only JSON-lines cache of Donaldson search results, keyed by a hash of
// the canonical negative definite graph so that mutants share entries.

#include <pretzel/lattice.hpp>
#include <pretzel/plumbing.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pretzel {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string graph_hash(const StarGraph& g) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a64(g.canonical_key());
  return os.str();
}

// Searches the leg-sorted form of `g` and maps the witness back, so the
// result depends only on the canonical graph.
inline SearchResult search_canonical(const StarGraph& g, const SearchConfig& cfg) {
  std::vector<std::size_t> map;
  const StarGraph c = canonical_form(g, &map);
  SearchResult r = find_embedding(c, cfg);
  if (r.witness) {
    Embedding back;
    back.rows.resize(map.size());
    for (std::size_t v = 0; v < map.size(); ++v) back.rows[v] = r.witness->rows[map[v]];
    r.witness = std::move(back);
  }
  return r;
}

class DonaldsonCache {
 public:
  static constexpr const char* kFileName = "donaldson.jsonl";

  explicit DonaldsonCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    std::ifstream in(file());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (j.is_discarded() || !j.is_object() || !j.contains("hash") || !j.contains("graph")) continue;
      Entry e;
      e.graph = j.value("graph", "");
      const std::string outcome = j.value("outcome", "");
      if (outcome == "Embeddable")
        e.result.outcome = SearchOutcome::Embeddable;
      else if (outcome == "NotEmbeddable")
        e.result.outcome = SearchOutcome::NotEmbeddable;
      else
        continue;
      e.result.nodes = j.value("nodes", std::uint64_t{0});
      e.result.wu_rule_applied = j.value("wu", false);
      if (j.contains("witness") && j["witness"].is_array())
        e.result.witness = Embedding{j["witness"].get<std::vector<std::vector<int>>>()};
      entries_[j["hash"].get<std::string>()] = std::move(e);
    }
  }

  std::filesystem::path file() const { return dir_ / kFileName; }

  // Thread-safe. Only complete answers are stored.
  SearchResult solve(const StarGraph& g, const SearchConfig& cfg) {
    std::vector<std::size_t> map;
    const StarGraph c = canonical_form(g, &map);
    const std::string key = c.canonical_key();
    const std::string hash = graph_hash(c);
    SearchResult r;
    bool hit = false;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = entries_.find(hash);
      if (it != entries_.end() && it->second.graph == key) {
        r = it->second.result;
        hit = true;
        ++hits_;
      }
    }
    if (!hit) {
      r = find_embedding(c, cfg);
      std::lock_guard<std::mutex> lock(mu_);
      ++misses_;
      if (r.outcome != SearchOutcome::Inconclusive && !entries_.count(hash)) {
        entries_[hash] = Entry{key, r};
        pending_.push_back(hash);
      }
    }
    if (r.witness) {
      Embedding back;
      back.rows.resize(map.size());
      for (std::size_t v = 0; v < map.size(); ++v) back.rows[v] = r.witness->rows[map[v]];
      r.witness = std::move(back);
    }
    return r;
  }

  // Appends new entries in hash order.
  void flush() {
    std::lock_guard<std::mutex> lock(mu_);
    if (pending_.empty()) return;
    std::sort(pending_.begin(), pending_.end());
    std::ofstream out(file(), std::ios::app);
    if (!out) throw std::runtime_error("cannot write cache file " + file().string());
    for (const auto& hash : pending_) {
      const Entry& e = entries_.at(hash);
      nlohmann::json j;
      j["hash"] = hash;
      j["graph"] = e.graph;
      j["outcome"] = to_string(e.result.outcome);
      j["nodes"] = e.result.nodes;
      j["wu"] = e.result.wu_rule_applied;
      if (e.result.witness) j["witness"] = e.result.witness->rows;
      out << j.dump() << '\n';
    }
    pending_.clear();
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  struct Entry {
    std::string graph;
    SearchResult result;
  };

  std::filesystem::path dir_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> pending_;
  std::mutex mu_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace pretzel
