#pragma once

// Slice verdicts: obstruction aggregation, ribbon family matching, the
// exceptional family, detectably ribbon reduction and bounded enumeration.

#include <pretzel/fibered.hpp>
#include <pretzel/lattice.hpp>
#include <pretzel/params.hpp>
#include <pretzel/plumbing.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace pretzel {

struct ObstructionReport {
  BigInt det_value = 0;
  bool det_is_square = false;
  long signature = 0;
  // Set when the search ran; det or signature obstructions skip it.
  std::optional<SearchResult> donaldson;

  bool searched() const { return donaldson.has_value(); }
  bool all_pass() const {
    return det_is_square && signature == 0 && donaldson && donaldson->outcome == SearchOutcome::Embeddable;
  }
};

enum class FamilyTag { F1, F2, F3, F4 };

inline const char* to_string(FamilyTag t) {
  switch (t) {
    case FamilyTag::F1: return "F1";
    case FamilyTag::F2: return "F2";
    case FamilyTag::F3: return "F3";
    case FamilyTag::F4: return "F4";
  }
  return "?";
}

struct RibbonFamily {
  FamilyTag tag = FamilyTag::F1;
  std::vector<int> pairs;  // q_i >= 3, ascending
  int k = 0;               // F2: the even entry; F4: k with {k, -k-1}
  int t = 0;               // F3
  bool mirrored = false;   // matched after negating every parameter

  // e.g. "F3(t=1; pairs=5,7)" or "-F2(k=4; pairs=5,7)".
  std::string describe() const {
    std::string s = mirrored ? "-" : "";
    s += to_string(tag);
    std::string args;
    auto add = [&](const std::string& a) { args += (args.empty() ? "" : "; ") + a; };
    if (tag == FamilyTag::F2 || tag == FamilyTag::F4) add("k=" + std::to_string(k));
    if (tag == FamilyTag::F3) add("t=" + std::to_string(t));
    if (!pairs.empty()) {
      std::string list;
      for (std::size_t i = 0; i < pairs.size(); ++i) list += (i ? "," : "") + std::to_string(pairs[i]);
      add("pairs=" + list);
    }
    return args.empty() ? s : s + "(" + args + ")";
  }

  // The family's standard parameter order for these parameters.
  ParamList instantiate() const {
    std::vector<int> v;
    switch (tag) {
      case FamilyTag::F1: v = {1, 1, 1, 1, -3, -3, -3}; break;
      case FamilyTag::F2: break;
      case FamilyTag::F3: v = {1, 3, t + 1, -4 - t}; break;
      case FamilyTag::F4: v = {k, -k - 1}; break;
    }
    for (int q : pairs) v.push_back(q);
    for (int q : pairs) v.push_back(-q);
    if (tag == FamilyTag::F2) v.push_back(k);
    if (mirrored)
      for (int& x : v) x = -x;
    return ParamList(v);
  }

  friend bool operator==(const RibbonFamily&, const RibbonFamily&) = default;
};

namespace detail {

using Multiset = std::multiset<int>;

inline bool take(Multiset& m, int v) {
  auto it = m.find(v);
  if (it == m.end()) return false;
  m.erase(it);
  return true;
}

// `rest` splits into pairs {q, -q} with q odd, q >= 3 and q > `exceed`.
inline std::optional<std::vector<int>> as_pairs(Multiset rest, int exceed = 0) {
  std::vector<int> pairs;
  while (!rest.empty()) {
    const int v = *rest.rbegin();
    if (v < 3 || v % 2 == 0 || v <= exceed) return std::nullopt;
    rest.erase(std::prev(rest.end()));
    if (!take(rest, -v)) return std::nullopt;
    pairs.push_back(v);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

inline std::optional<RibbonFamily> match_f1(const Multiset& m) {
  if (m == Multiset{1, 1, 1, 1, -3, -3, -3}) return RibbonFamily{FamilyTag::F1, {}, 0, 0, false};
  return std::nullopt;
}

inline std::optional<RibbonFamily> match_f2(const Multiset& m) {
  int evens = 0;
  int k = 0;
  for (int v : m)
    if (v % 2 == 0) {
      ++evens;
      k = v;
    }
  if (evens != 1) return std::nullopt;
  Multiset rest = m;
  take(rest, k);
  auto pairs = as_pairs(rest);
  if (!pairs || pairs->empty()) return std::nullopt;
  return RibbonFamily{FamilyTag::F2, *pairs, k, 0, false};
}

// {1, 3, t+1, -4-t} plus pairs, t >= 0; every candidate -4-t is tried.
inline std::optional<RibbonFamily> match_f3(const Multiset& m) {
  std::set<int> candidates;
  for (int v : m)
    if (v <= -4) candidates.insert(v);
  for (int w : candidates) {
    Multiset rest = m;
    const int t = -4 - w;
    if (!take(rest, 1) || !take(rest, 3) || !take(rest, w) || !take(rest, t + 1)) continue;
    if (auto pairs = as_pairs(rest)) return RibbonFamily{FamilyTag::F3, *pairs, 0, t, false};
  }
  return std::nullopt;
}

// {k, -k-1} plus pairs with 1 < k < q_i.
inline std::optional<RibbonFamily> match_f4(const Multiset& m) {
  std::set<int> candidates;
  for (int v : m)
    if (v >= 2) candidates.insert(v);
  for (int k : candidates) {
    Multiset rest = m;
    if (!take(rest, k) || !take(rest, -k - 1)) continue;
    if (auto pairs = as_pairs(rest, k)) return RibbonFamily{FamilyTag::F4, *pairs, k, 0, false};
  }
  return std::nullopt;
}

inline Multiset to_multiset(const std::vector<int>& v, int sign) {
  Multiset m;
  for (int x : v) m.insert(sign * x);
  return m;
}

}  // namespace detail

// Every family the multiset belongs to, in tag order; for each tag the
// unmirrored reading is preferred.
inline std::vector<RibbonFamily> match_families(const MutationClass& c) {
  using Matcher = std::optional<RibbonFamily> (*)(const detail::Multiset&);
  const Matcher matchers[] = {detail::match_f1, detail::match_f2, detail::match_f3, detail::match_f4};
  std::vector<RibbonFamily> out;
  for (Matcher match : matchers) {
    for (int sign : {1, -1}) {
      if (auto f = match(detail::to_multiset(c.multiset, sign))) {
        f->mirrored = sign < 0;
        out.push_back(*f);
        break;
      }
    }
  }
  return out;
}

inline std::optional<RibbonFamily> match_family(const MutationClass& c) {
  auto all = match_families(c);
  if (all.empty()) return std::nullopt;
  return all.front();
}

// Pairs {p, -p} plus the triple (a, -a-2, -(a+1)^2/2), a = 1 or 97 mod 120,
// up to mirror.
inline bool is_exceptional(const MutationClass& c) {
  for (int sign : {1, -1}) {
    const auto m = detail::to_multiset(c.multiset, sign);
    int evens = 0;
    int e = 0;
    for (int v : m)
      if (v % 2 == 0) {
        ++evens;
        e = v;
      }
    if (evens != 1 || e >= 0) continue;
    const long twice = -2L * e;
    const long r = detail::isqrt(twice);
    if (r * r != twice) continue;
    const long a = r - 1;
    if (a % 120 != 1 && a % 120 != 97) continue;
    detail::Multiset rest = m;
    detail::take(rest, e);
    if (!detail::take(rest, static_cast<int>(a)) || !detail::take(rest, static_cast<int>(-a - 2))) continue;
    bool paired = true;
    while (!rest.empty() && paired) {
      const int v = *rest.rbegin();
      rest.erase(std::prev(rest.end()));
      paired = v > 0 && detail::take(rest, -v);
    }
    if (paired) return true;
  }
  return false;
}

struct RibbonReduction {
  ParamList result;
  bool reaches_base = false;  // result is a whitelisted ribbon base
};

namespace detail {

// Bases: (k even), (k, -k-1), (1, t+1, 3, -4-t), 10_75; up to mirror.
inline bool is_ribbon_base(const ParamList& p) {
  const auto c = mutation_class(p);
  for (int sign : {1, -1}) {
    const Multiset m = to_multiset(c.multiset, sign);
    if (match_f1(m)) return true;
    if (m.size() == 1 && *m.begin() % 2 == 0) return true;
    if (m.size() == 2) {
      const int lo = *m.begin();
      const int hi = *m.rbegin();
      if (hi >= 1 && lo == -hi - 1) return true;
    }
    if (m.size() == 4) {
      auto f = match_f3(m);
      if (f && f->pairs.empty()) return true;
    }
  }
  return false;
}

}  // namespace detail

// Cancels cyclically adjacent (q, -q), |q| >= 2, leftmost first, until none
// remain. Unitary entries flype freely, so adjacency is read on the
// non-unitary entries; unitaries are kept in front of the result.
inline RibbonReduction detectably_ribbon_reduce(const ParamList& p) {
  std::vector<int> units;
  std::vector<int> s;
  for (int v : p) (v == 1 || v == -1 ? units : s).push_back(v);
  for (;;) {
    const std::size_t n = s.size();
    if (n < 2 || units.size() + n <= 2) break;
    std::size_t hit = n;
    for (std::size_t i = 0; i < n && hit == n; ++i)
      if (s[i] == -s[(i + 1) % n]) hit = i;
    if (hit == n) break;
    if (hit + 1 < n) {
      s.erase(s.begin() + static_cast<std::ptrdiff_t>(hit), s.begin() + static_cast<std::ptrdiff_t>(hit) + 2);
    } else {
      s.erase(s.begin() + static_cast<std::ptrdiff_t>(hit));
      s.erase(s.begin());
    }
  }
  std::vector<int> out = units;
  out.insert(out.end(), s.begin(), s.end());
  RibbonReduction r{ParamList(out), false};
  r.reaches_base = detail::is_ribbon_base(r.result);
  return r;
}

enum class SliceStatus { RibbonKnown, NotSlice, Exceptional, ObstructionsVanish, Inconclusive, NotApplicable };
enum class NotSliceReason { None, Determinant, Signature, Donaldson };

inline const char* to_string(SliceStatus s) {
  switch (s) {
    case SliceStatus::RibbonKnown: return "RibbonKnown";
    case SliceStatus::NotSlice: return "NotSlice";
    case SliceStatus::Exceptional: return "Exceptional";
    case SliceStatus::ObstructionsVanish: return "ObstructionsVanish";
    case SliceStatus::Inconclusive: return "Inconclusive";
    case SliceStatus::NotApplicable: return "NotApplicable";
  }
  return "?";
}

inline const char* to_string(NotSliceReason r) {
  switch (r) {
    case NotSliceReason::None: return "none";
    case NotSliceReason::Determinant: return "determinant";
    case NotSliceReason::Signature: return "signature";
    case NotSliceReason::Donaldson: return "donaldson";
  }
  return "?";
}

struct Verdict {
  ParamList input;
  ParamList normalized;
  PretzelKind kind = PretzelKind::Link;
  FiberVerdict fibered;
  std::optional<ObstructionReport> obstructions;  // absent for links
  std::optional<StarGraph> graph;                 // negative definite plumbing
  std::vector<RibbonFamily> families;
  bool exceptional = false;
  bool detectably_ribbon = false;
  SliceStatus status = SliceStatus::NotApplicable;
  NotSliceReason reason = NotSliceReason::None;

  std::optional<RibbonFamily> family() const {
    if (families.empty()) return std::nullopt;
    return families.front();
  }

  // "NotSlice(determinant)" or the bare status.
  std::string status_string() const {
    std::string s = to_string(status);
    if (status == SliceStatus::NotSlice) s += std::string("(") + to_string(reason) + ")";
    return s;
  }
};

using DonaldsonSolver = std::function<SearchResult(const StarGraph&, const SearchConfig&)>;

struct AnalyzeOptions {
  SearchConfig search;
  // Replaces find_embedding, e.g. to consult a cache.
  DonaldsonSolver solver;
};

inline Verdict analyze(const ParamList& p, const AnalyzeOptions& opts = {}) {
  Verdict v;
  v.input = p;
  v.normalized = normalize(p);
  v.kind = classify_type(v.normalized);
  if (!is_knot(v.kind)) {
    v.fibered = {FiberStatus::NotAKnot, Subcase::None};
    return v;
  }
  v.fibered = is_fibered(v.normalized);

  ObstructionReport ob;
  ob.det_value = determinant(v.normalized);
  ob.det_is_square = is_perfect_square(ob.det_value);
  ob.signature = signature(v.normalized);
  v.graph = negative_definite_graph(v.normalized);
  if (!ob.det_is_square) {
    v.reason = NotSliceReason::Determinant;
  } else if (ob.signature != 0) {
    v.reason = NotSliceReason::Signature;
  } else {
    ob.donaldson = opts.solver ? opts.solver(*v.graph, opts.search) : find_embedding(*v.graph, opts.search);
    if (ob.donaldson->outcome == SearchOutcome::NotEmbeddable) v.reason = NotSliceReason::Donaldson;
  }

  const MutationClass cls = mutation_class(v.normalized);
  v.families = match_families(cls);
  v.exceptional = is_exceptional(cls) || is_exceptional(mutation_class(p));
  v.detectably_ribbon = detectably_ribbon_reduce(v.normalized).reaches_base;

  if (v.reason != NotSliceReason::None)
    v.status = SliceStatus::NotSlice;
  else if (ob.donaldson->outcome == SearchOutcome::Inconclusive)
    v.status = SliceStatus::Inconclusive;
  else if (v.exceptional)
    v.status = SliceStatus::Exceptional;
  else if (!v.families.empty())
    v.status = SliceStatus::RibbonKnown;
  else
    v.status = SliceStatus::ObstructionsVanish;
  v.obstructions = std::move(ob);
  return v;
}

struct ClassReport {
  MutationClass cls;
  Verdict verdict;                          // analysis of the sorted representative
  bool fiberable = false;                   // some cyclic ordering fibers
  std::optional<ParamList> fibered_order;   // first fibered ordering found
  FiberVerdict fiber;                       // verdict of that ordering, else of the representative
};

namespace detail {

// Orderings that can differ in fiberedness: the cyclic sign pattern of the
// odd non-unitary entries around the even one. Each pattern is realized with
// the values of each sign in ascending order, unitaries in front.
inline std::optional<std::pair<ParamList, FiberVerdict>> first_fibered_ordering(const std::vector<int>& sorted) {
  std::vector<int> units, pos, neg;
  int even = 0;
  bool has_even = false;
  for (int v : sorted) {
    if (v == 1 || v == -1)
      units.push_back(v);
    else if (v % 2 == 0) {
      even = v;
      has_even = true;
    } else
      (v > 0 ? pos : neg).push_back(v);
  }
  std::vector<int> tokens;  // +1 / -1 per odd non-unitary slot; the even entry goes last
  tokens.insert(tokens.end(), neg.size(), -1);
  tokens.insert(tokens.end(), pos.size(), 1);
  do {
    std::vector<int> order = units;
    std::size_t ip = 0, in = 0;
    for (int t : tokens) order.push_back(t > 0 ? pos[ip++] : neg[in++]);
    if (has_even) order.push_back(even);
    ParamList p(order);
    FiberVerdict fv = is_fibered(p);
    if (fv.fibered()) return std::make_pair(p, fv);
    if (!has_even) break;  // Type 1: order-independent
  } while (std::next_permutation(tokens.begin(), tokens.end()));
  return std::nullopt;
}

inline void for_each_multiset(int len, int max_param, std::vector<int>& cur, int min_idx,
                              const std::vector<int>& values, const std::function<void(const std::vector<int>&)>& f) {
  if (static_cast<int>(cur.size()) == len) {
    f(cur);
    return;
  }
  for (int i = min_idx; i < static_cast<int>(values.size()); ++i) {
    cur.push_back(values[i]);
    for_each_multiset(len, max_param, cur, i, values, f);
    cur.pop_back();
  }
}

inline bool is_normal_form(const std::vector<int>& sorted) {
  const bool plus1 = std::binary_search(sorted.begin(), sorted.end(), 1);
  const bool minus1 = std::binary_search(sorted.begin(), sorted.end(), -1);
  if (plus1 && minus1) return false;
  if (plus1 && std::binary_search(sorted.begin(), sorted.end(), -2)) return false;
  if (minus1 && std::binary_search(sorted.begin(), sorted.end(), 2)) return false;
  return true;
}

}  // namespace detail

// Normalized knot classes with 3..max_strands entries, |p_i| <= max_param,
// one per mirror pair, as ascending multisets ordered by class key.
inline std::vector<MutationClass> enumerate_classes(int max_strands, int max_param) {
  if (max_strands < 3 || max_param < 2) throw std::invalid_argument("enumerate: need max_strands >= 3, max_param >= 2");
  std::vector<int> values;
  for (int v = -max_param; v <= max_param; ++v)
    if (v != 0) values.push_back(v);
  std::map<std::string, MutationClass> by_key;
  std::vector<int> cur;
  for (int len = 3; len <= max_strands; ++len) {
    detail::for_each_multiset(len, max_param, cur, 0, values, [&](const std::vector<int>& m) {
      if (!detail::is_normal_form(m)) return;
      ParamList p(m);
      if (!is_knot(classify_type(p))) return;
      MutationClass c = mutation_class(p);
      if (c.multiset != c.mirror_normalized) return;
      by_key.emplace(c.key(), std::move(c));
    });
  }
  std::vector<MutationClass> out;
  out.reserve(by_key.size());
  for (auto& [key, c] : by_key) out.push_back(std::move(c));
  return out;
}

inline ClassReport analyze_class(const MutationClass& c, const AnalyzeOptions& opts = {}) {
  ClassReport r;
  r.cls = c;
  r.verdict = analyze(ParamList(c.multiset), opts);
  if (auto hit = detail::first_fibered_ordering(c.multiset)) {
    r.fiberable = true;
    r.fibered_order = hit->first;
    r.fiber = hit->second;
  } else {
    r.fiber = r.verdict.fibered;
  }
  return r;
}

// Parallel over classes; output order is the class-key order regardless of
// `jobs`.
inline std::vector<ClassReport> enumerate(int max_strands, int max_param, const AnalyzeOptions& opts = {},
                                          unsigned jobs = 1) {
  const auto classes = enumerate_classes(max_strands, max_param);
  std::vector<ClassReport> out(classes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < classes.size(); i = next.fetch_add(1))
      out[i] = analyze_class(classes[i], opts);
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace pretzel
