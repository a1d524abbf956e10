#pragma once

// Wu class, knot signature and the Donaldson obstruction: a complete search
// for embeddings of a negative definite graph lattice (Z^n, Q) into the
// standard negative diagonal lattice (Z^k, -Id).

#include <pretzel/exact.hpp>
#include <pretzel/plumbing.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pretzel {

class SingularMod2Error : public std::domain_error {
 public:
  SingularMod2Error() : std::domain_error("incidence matrix is singular mod 2 (even determinant)") {}
};

// 0/1 characteristic vector w with Q(w, x) = Q(x, x) mod 2 for all x.
struct WuClass {
  std::vector<bool> members;

  std::size_t size() const { return members.size(); }
  bool contains(std::size_t v) const { return members[v]; }
  std::vector<std::size_t> vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (members[i]) out.push_back(i);
    return out;
  }
  friend bool operator==(const WuClass&, const WuClass&) = default;
};

// Gaussian elimination over GF(2) on Q w = diag(Q).
inline WuClass wu_class(const IntMatrix& q) {
  const std::size_t n = q.size();
  const std::size_t words = (n + 1 + 63) / 64;  // last bit column holds the rhs
  std::vector<std::vector<std::uint64_t>> rows(n, std::vector<std::uint64_t>(words, 0));
  auto set = [&](std::size_t r, std::size_t c) { rows[r][c / 64] |= std::uint64_t{1} << (c % 64); };
  auto get = [&](std::size_t r, std::size_t c) { return (rows[r][c / 64] >> (c % 64)) & 1u; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (q(i, j) % 2 != 0) set(i, j);
    if (q(i, i) % 2 != 0) set(i, n);
  }
  std::vector<std::size_t> pivot_row(n);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = r;
    while (p < n && !get(p, c)) ++p;
    if (p == n) throw SingularMod2Error();
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != r && get(i, c))
        for (std::size_t w = 0; w < words; ++w) rows[i][w] ^= rows[r][w];
    }
    pivot_row[c] = r++;
  }
  WuClass out;
  out.members.resize(n);
  for (std::size_t c = 0; c < n; ++c) out.members[c] = get(pivot_row[c], n) != 0;
  return out;
}

inline WuClass wu_class(const StarGraph& g) { return wu_class(incidence_matrix(g)); }

inline long pairing(const IntMatrix& q, const WuClass& a, const WuClass& b) {
  long s = 0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (a.members[i])
      for (std::size_t j = 0; j < q.size(); ++j)
        if (b.members[j]) s += q(i, j);
  return s;
}

// sign(Q) - Q(w, w) for a negative definite Q, where sign(Q) = -rank.
inline long signature_term(const IntMatrix& q, const WuClass& w) {
  return -static_cast<long>(q.size()) - pairing(q, w, w);
}

// Knot signature via the negative definite plumbing; the sign flips back when
// the construction had to pass to the mirror.
inline long signature(const ParamList& p) {
  const StarGraph g = negative_definite_graph(p);
  const IntMatrix q = incidence_matrix(g);
  const long s = signature_term(q, wu_class(q));
  return g.mirrored ? -s : s;
}

// Row i is the image of vertex i in coordinates e_1..e_k.
struct Embedding {
  std::vector<std::vector<int>> rows;

  std::size_t dimension() const { return rows.empty() ? 0 : rows.front().size(); }
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

// -(M M^T) == Q entrywise.
inline bool verify_embedding(const IntMatrix& q, const Embedding& m) {
  if (m.rows.size() != q.size()) return false;
  const std::size_t k = m.dimension();
  for (const auto& r : m.rows)
    if (r.size() != k) return false;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      long dot = 0;
      for (std::size_t c = 0; c < k; ++c) dot += long{m.rows[i][c]} * m.rows[j][c];
      if (-dot != q(i, j)) return false;
    }
  return true;
}

inline bool verify_embedding(const StarGraph& g, const Embedding& m) {
  return verify_embedding(incidence_matrix(g), m);
}

struct ProjectedEmbedding {
  std::vector<std::size_t> vertices;  // original vertex indices kept
  IntMatrix gram;                     // pairings of the restricted rows
  Embedding embedding;
};

// Restricts every row to `columns`, keeps the vertices whose restricted row is
// nonzero, and rebuilds their pairings. The result need not be a subgraph.
inline ProjectedEmbedding project_embedding(const Embedding& m, const std::vector<std::size_t>& columns) {
  if (columns.empty()) throw std::invalid_argument("project_embedding: empty column subset");
  for (std::size_t c : columns)
    if (c >= m.dimension()) throw std::out_of_range("project_embedding: column out of range");
  ProjectedEmbedding out;
  for (std::size_t v = 0; v < m.rows.size(); ++v) {
    std::vector<int> row;
    row.reserve(columns.size());
    for (std::size_t c : columns) row.push_back(m.rows[v][c]);
    if (std::any_of(row.begin(), row.end(), [](int x) { return x != 0; })) {
      out.vertices.push_back(v);
      out.embedding.rows.push_back(std::move(row));
    }
  }
  const std::size_t n = out.vertices.size();
  out.gram = IntMatrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long dot = 0;
      for (std::size_t c = 0; c < columns.size(); ++c)
        dot += long{out.embedding.rows[i][c]} * out.embedding.rows[j][c];
      out.gram(i, j) = -dot;
    }
  return out;
}

struct SearchConfig {
  bool wu_pruning = true;
  std::optional<std::uint64_t> node_limit;
  // Oracle mode: every row of the right norm, no symmetry breaking, no Wu rule.
  bool exhaustive = false;
  // Worker threads for the top level of the search; the witness does not
  // depend on this.
  unsigned threads = 1;
};

enum class SearchOutcome { Embeddable, NotEmbeddable, Inconclusive };

inline const char* to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Embeddable: return "Embeddable";
    case SearchOutcome::NotEmbeddable: return "NotEmbeddable";
    case SearchOutcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Inconclusive;
  std::optional<Embedding> witness;  // rows in vertex order
  std::uint64_t nodes = 0;
  bool wu_rule_applied = false;

  bool embeds() const { return outcome == SearchOutcome::Embeddable; }
};

namespace detail {

inline int isqrt(long v) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(v)));
  while (long{r} * r > v) --r;
  while (long{r + 1} * (r + 1) <= v) ++r;
  return r;
}

// Depth-first search placing one row per vertex in `order`.
//
// Symmetry breaking (non-exhaustive mode) quotients by the signed column
// permutations of Z^k: columns are introduced in index order, each new
// column's first nonzero entry is positive, the new entries of a row are
// non-increasing, and within a run of columns that are identical over the
// rows placed so far the new row is non-increasing as well.
class EmbeddingSearch {
 public:
  EmbeddingSearch(const IntMatrix& q, std::size_t dim, std::vector<std::size_t> order,
                  const SearchConfig& cfg)
      : q_(q), k_(dim), order_(std::move(order)), cfg_(cfg), n_(q.size()) {
    norm_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) norm_[i] = -q_(order_[i], order_[i]);
    target_.assign(n_, std::vector<long>(n_, 0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) target_[i][j] = -q_(order_[i], order_[j]);
    suffix_norm_.assign(n_ + 1, 0);
    for (std::size_t i = n_; i-- > 0;) suffix_norm_[i] = suffix_norm_[i + 1] + norm_[i];
    equal_rank_ = (k_ == n_);
  }

  // Vertices (positions in `order`) whose rows must sum to a vector with all
  // coordinates +-1. Must be a prefix of the order.
  void set_wu_prefix(std::size_t count) {
    wu_count_ = count;
    wu_suffix_norm_.assign(count + 1, 0);
    for (std::size_t i = count; i-- > 0;) wu_suffix_norm_[i] = wu_suffix_norm_[i + 1] + norm_[i];
  }

  struct Outcome {
    bool found = false;
    bool limit_hit = false;
    std::vector<std::vector<int>> rows;  // by position
    std::uint64_t nodes = 0;
  };

  // Top-level candidates for position 0; each is explored independently.
  std::vector<std::vector<int>> root_candidates() {
    rows_.clear();
    used_ = 0;
    std::vector<std::vector<int>> out;
    if (n_ == 0) return out;
    candidates(0, [&](const std::vector<int>& row) {
      out.push_back(row);
      return false;
    });
    return out;
  }

  // Explores the subtree under a fixed first row. `stop` lets other workers
  // abandon branches that can no longer produce the least witness.
  Outcome explore_from(const std::vector<int>& first, const std::atomic<bool>* stop = nullptr,
                       std::atomic<std::uint64_t>* shared_nodes = nullptr) {
    Outcome out;
    stop_ = stop;
    shared_nodes_ = shared_nodes;
    nodes_ = 0;
    limit_hit_ = false;
    rows_.assign(1, first);
    used_ = columns_used(first);
    count_node();
    bool ok = !limit_hit_ && feasible_after(0) && place(1);
    out.found = ok;
    out.limit_hit = limit_hit_;
    out.nodes = nodes_;
    if (ok) out.rows = rows_;
    return out;
  }

  Outcome run_all() {
    Outcome total;
    if (n_ == 0) {
      total.found = true;
      return total;
    }
    for (const auto& first : root_candidates()) {
      Outcome o = explore_from(first);
      total.nodes += o.nodes;
      if (o.limit_hit) {
        total.limit_hit = true;
        return total;
      }
      if (o.found) {
        total.found = true;
        total.rows = std::move(o.rows);
        return total;
      }
    }
    return total;
  }

  std::uint64_t budget_used() const { return nodes_; }

 private:
  std::size_t columns_used(const std::vector<int>& row) const {
    if (cfg_.exhaustive) return k_;
    std::size_t u = 0;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0) u = c + 1;
    return u;
  }

  void count_node() {
    ++nodes_;
    std::uint64_t seen = nodes_;
    if (shared_nodes_) seen = shared_nodes_->fetch_add(1) + 1;
    if (cfg_.node_limit && seen > *cfg_.node_limit) limit_hit_ = true;
  }

  bool stopped() const { return limit_hit_ || (stop_ && stop_->load(std::memory_order_relaxed)); }

  // Checks that hold once position `pos` has been placed.
  bool feasible_after(std::size_t pos) const {
    if (cfg_.exhaustive) return true;
    if (equal_rank_ && used_ + suffix_norm_[pos + 1] < k_) return false;
    if (wu_count_ > 0 && pos < wu_count_) {
      if (used_ + wu_suffix_norm_[pos + 1] < k_) return false;
      if (pos + 1 == wu_count_) {
        if (used_ != k_) return false;
        for (std::size_t c = 0; c < k_; ++c) {
          long s = 0;
          for (std::size_t i = 0; i < wu_count_; ++i) s += rows_[i][c];
          if (s != 1 && s != -1) return false;
        }
      }
    }
    return true;
  }

  bool place(std::size_t pos) {
    if (pos == n_) return true;
    if (stopped()) return false;
    bool found = false;
    const std::size_t saved_used = used_;
    candidates(pos, [&](const std::vector<int>& row) {
      count_node();
      if (stopped()) return true;
      rows_.push_back(row);
      used_ = std::max(saved_used, columns_used(row));
      if (feasible_after(pos) && place(pos + 1)) {
        found = true;
        return true;
      }
      rows_.pop_back();
      used_ = saved_used;
      return stopped();
    });
    used_ = saved_used;
    return found;
  }

  // Calls `emit(row)` for each admissible row at `pos` in canonical order;
  // stops early when `emit` returns true.
  template <typename Emit>
  void candidates(std::size_t pos, Emit&& emit) {
    const long norm = norm_[pos];
    std::vector<int> row(k_, 0);
    if (cfg_.exhaustive) {
      std::vector<long> dots(pos, 0);
      exhaustive_fill(pos, 0, norm, row, dots, emit);
      return;
    }
    const std::size_t used = used_;
    // Column runs: same_as_prev[c] when column c equals column c-1 on all
    // placed rows.
    std::vector<char> same_as_prev(used, 0);
    for (std::size_t c = 1; c < used; ++c) {
      bool same = true;
      for (std::size_t i = 0; i < pos && same; ++i) same = rows_[i][c] == rows_[i][c - 1];
      same_as_prev[c] = same;
    }
    // suffix[i][c] = sum over columns c.. used-1 of rows_[i]^2
    std::vector<std::vector<long>> suffix(pos, std::vector<long>(used + 1, 0));
    for (std::size_t i = 0; i < pos; ++i)
      for (std::size_t c = used; c-- > 0;)
        suffix[i][c] = suffix[i][c + 1] + long{rows_[i][c]} * rows_[i][c];
    std::vector<long> dots(pos, 0);
    bool done = false;
    old_fill(pos, 0, norm, row, dots, suffix, same_as_prev, emit, done);
  }

  template <typename Emit>
  void old_fill(std::size_t pos, std::size_t c, long rem, std::vector<int>& row, std::vector<long>& dots,
                const std::vector<std::vector<long>>& suffix, const std::vector<char>& same_as_prev,
                Emit& emit, bool& done) {
    if (done) return;
    const std::size_t used = used_;
    if (c == used) {
      for (std::size_t i = 0; i < pos; ++i)
        if (dots[i] != target_[pos][i]) return;
      new_fill(used, rem, rem, row, emit, done);
      return;
    }
    const int bound = isqrt(rem);
    int hi = bound;
    if (c > 0 && same_as_prev[c]) hi = std::min(hi, row[c - 1]);
    for (int x = -bound; x <= hi && !done; ++x) {
      const long rem2 = rem - long{x} * x;
      row[c] = x;
      bool ok = true;
      for (std::size_t i = 0; i < pos; ++i) {
        dots[i] += long{x} * rows_[i][c];
        const long r = target_[pos][i] - dots[i];
        if (r * r > rem2 * suffix[i][c + 1]) ok = false;
      }
      if (ok) old_fill(pos, c + 1, rem2, row, dots, suffix, same_as_prev, emit, done);
      for (std::size_t i = 0; i < pos; ++i) dots[i] -= long{x} * rows_[i][c];
    }
    row[c] = 0;
  }

  // Remaining norm goes to fresh columns as a non-increasing positive sequence.
  template <typename Emit>
  void new_fill(std::size_t c, long rem, long cap, std::vector<int>& row, Emit& emit, bool& done) {
    if (done) return;
    if (rem == 0) {
      if (emit(row)) done = true;
      return;
    }
    if (c >= k_) return;
    const int top = isqrt(std::min(rem, cap));
    for (int x = 1; x <= top && !done; ++x) {
      row[c] = x;
      new_fill(c + 1, rem - long{x} * x, long{x} * x, row, emit, done);
    }
    row[c] = 0;
  }

  template <typename Emit>
  bool exhaustive_fill(std::size_t pos, std::size_t c, long rem, std::vector<int>& row,
                       std::vector<long>& dots, Emit& emit) {
    if (c == k_) {
      if (rem != 0) return false;
      for (std::size_t i = 0; i < pos; ++i)
        if (dots[i] != target_[pos][i]) return false;
      return emit(row);
    }
    const int bound = isqrt(rem);
    for (int x = -bound; x <= bound; ++x) {
      row[c] = x;
      for (std::size_t i = 0; i < pos; ++i) dots[i] += long{x} * rows_[i][c];
      const bool stop = exhaustive_fill(pos, c + 1, rem - long{x} * x, row, dots, emit);
      for (std::size_t i = 0; i < pos; ++i) dots[i] -= long{x} * rows_[i][c];
      if (stop) {
        row[c] = 0;
        return true;
      }
    }
    row[c] = 0;
    return false;
  }

  const IntMatrix& q_;
  std::size_t k_;
  std::vector<std::size_t> order_;
  SearchConfig cfg_;
  std::size_t n_;
  std::vector<long> norm_;
  std::vector<std::vector<long>> target_;
  std::vector<long> suffix_norm_;
  std::vector<long> wu_suffix_norm_;
  std::size_t wu_count_ = 0;
  bool equal_rank_ = true;

  std::vector<std::vector<int>> rows_;
  std::size_t used_ = 0;
  std::uint64_t nodes_ = 0;
  bool limit_hit_ = false;
  const std::atomic<bool>* stop_ = nullptr;
  std::atomic<std::uint64_t>* shared_nodes_ = nullptr;
};

inline SearchResult run_search(const IntMatrix& q, std::size_t dim, std::vector<std::size_t> order,
                               std::size_t wu_prefix, const SearchConfig& cfg) {
  SearchResult result;
  result.wu_rule_applied = wu_prefix > 0;
  EmbeddingSearch search(q, dim, order, cfg);
  if (wu_prefix > 0) search.set_wu_prefix(wu_prefix);

  auto finish = [&](const EmbeddingSearch::Outcome& o) {
    result.nodes = o.nodes;
    if (o.found) {
      result.outcome = SearchOutcome::Embeddable;
      Embedding e;
      e.rows.assign(q.size(), {});
      for (std::size_t i = 0; i < order.size(); ++i) e.rows[order[i]] = o.rows[i];
      if (q.size() == 0) e.rows.clear();
      result.witness = std::move(e);
    } else {
      result.outcome = o.limit_hit ? SearchOutcome::Inconclusive : SearchOutcome::NotEmbeddable;
    }
  };

  if (cfg.threads <= 1 || q.size() == 0) {
    finish(search.run_all());
    return result;
  }

  // Parallel: workers claim root branches in index order; the least index
  // with a witness wins, so the result matches the sequential search.
  const auto roots = search.root_candidates();
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{roots.size()};
  std::atomic<std::size_t> first_limit{roots.size()};
  std::atomic<std::uint64_t> shared_nodes{0};
  std::mutex mu;
  std::vector<EmbeddingSearch::Outcome> outcomes(roots.size());
  auto worker = [&] {
    EmbeddingSearch local(q, dim, order, cfg);
    if (wu_prefix > 0) local.set_wu_prefix(wu_prefix);
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= roots.size() || i > best.load()) return;
      std::atomic<bool> never{false};
      auto o = local.explore_from(roots[i], &never, cfg.node_limit ? &shared_nodes : nullptr);
      if (!cfg.node_limit) shared_nodes.fetch_add(o.nodes);
      std::lock_guard<std::mutex> lock(mu);
      if (o.limit_hit) {
        std::size_t cur = first_limit.load();
        while (i < cur && !first_limit.compare_exchange_weak(cur, i)) {}
      }
      if (o.found) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {}
      }
      outcomes[i] = std::move(o);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < cfg.threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  EmbeddingSearch::Outcome merged;
  merged.nodes = shared_nodes.load();
  if (first_limit.load() < roots.size() && first_limit.load() <= best.load()) {
    merged.limit_hit = true;
  } else if (best.load() < roots.size()) {
    merged.found = true;
    merged.rows = outcomes[best.load()].rows;
  }
  finish(merged);
  return result;
}

}  // namespace detail

// Search order for a star graph: center, then Wu vertices, then the remaining
// vertices leg by leg (longer legs first), each leg from the center outward.
inline std::vector<std::size_t> star_search_order(const StarGraph& g, const WuClass& wu) {
  std::vector<std::size_t> order{0};
  for (std::size_t v = 1; v < g.vertex_count(); ++v)
    if (wu.contains(v)) order.push_back(v);
  std::vector<std::size_t> legs(g.legs.size());
  for (std::size_t j = 0; j < legs.size(); ++j) legs[j] = j;
  std::stable_sort(legs.begin(), legs.end(),
                   [&](std::size_t a, std::size_t b) { return g.legs[a].size() > g.legs[b].size(); });
  for (std::size_t j : legs) {
    const std::size_t start = g.leg_start(j);
    for (std::size_t i = 0; i < g.legs[j].size(); ++i)
      if (!wu.contains(start + i)) order.push_back(start + i);
  }
  return order;
}

// General entry point: embeds (Z^n, q) into (Z^dim, -Id) with rows placed in
// `order`. The Wu rule is used only for equal rank, odd determinant and a
// vanishing signature term.
inline SearchResult find_embedding_into(const IntMatrix& q, std::size_t dim, std::vector<std::size_t> order,
                                        const SearchConfig& cfg) {
  if (cfg.node_limit && *cfg.node_limit == 0) throw std::invalid_argument("node_limit must be positive");
  if (order.size() != q.size()) throw std::invalid_argument("search order must list every vertex");
  std::size_t wu_prefix = 0;
  if (cfg.wu_pruning && !cfg.exhaustive && dim == q.size() && q.size() > 0) {
    try {
      const WuClass wu = wu_class(q);
      if (signature_term(q, wu) == 0) {
        // Move the Wu vertices to the front, keeping their relative order.
        std::stable_partition(order.begin(), order.end(), [&](std::size_t v) { return wu.contains(v); });
        wu_prefix = wu.vertices().size();
      }
    } catch (const SingularMod2Error&) {
    }
  }
  return detail::run_search(q, dim, std::move(order), wu_prefix, cfg);
}

inline SearchResult find_embedding_into(const IntMatrix& q, std::size_t dim, const SearchConfig& cfg = {}) {
  std::vector<std::size_t> order(q.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  return find_embedding_into(q, dim, std::move(order), cfg);
}

// Embedding of a negative definite star graph into the diagonal lattice of
// the same rank.
inline SearchResult find_embedding(const StarGraph& g, const SearchConfig& cfg = {}) {
  const IntMatrix q = incidence_matrix(g);
  WuClass wu;
  try {
    wu = wu_class(q);
  } catch (const SingularMod2Error&) {
    wu.members.assign(q.size(), false);
  }
  return find_embedding_into(q, q.size(), star_search_order(g, wu), cfg);
}

}  // namespace pretzel
