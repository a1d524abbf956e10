#pragma once

// Fiberedness of pretzel knots following Gabai's classification. Types 2 and 3
// are decided through the auxiliary pretzel link L' built from the signs of
// the non-unitary parameters.

#include <pretzel/params.hpp>

#include <algorithm>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pretzel {

enum class FiberStatus { Fibered, NotFibered, ReducesToType3, NotAKnot };
enum class Subcase { T1, T2A, T2B, T2C, T3A, T3B, T3C, None };

inline const char* to_string(FiberStatus s) {
  switch (s) {
    case FiberStatus::Fibered: return "Fibered";
    case FiberStatus::NotFibered: return "NotFibered";
    case FiberStatus::ReducesToType3: return "ReducesToType3";
    case FiberStatus::NotAKnot: return "NotAKnot";
  }
  return "?";
}

inline const char* to_string(Subcase s) {
  switch (s) {
    case Subcase::T1: return "T1";
    case Subcase::T2A: return "T2A";
    case Subcase::T2B: return "T2B";
    case Subcase::T2C: return "T2C";
    case Subcase::T3A: return "T3A";
    case Subcase::T3B: return "T3B";
    case Subcase::T3C: return "T3C";
    case Subcase::None: return "none";
  }
  return "?";
}

struct FiberVerdict {
  FiberStatus status = FiberStatus::NotAKnot;
  Subcase subcase = Subcase::None;

  bool fibered() const { return status == FiberStatus::Fibered; }
  friend bool operator==(const FiberVerdict&, const FiberVerdict&) = default;
};

struct AuxLink {
  std::vector<int> entries;
  friend bool operator==(const AuxLink&, const AuxLink&) = default;
};

namespace detail {

inline int sign_of(int v) { return v > 0 ? 1 : -1; }

// Non-unitary entries in cyclic order, rotated so that the even entry is last.
// Unitary entries flype freely and carry no position.
inline std::vector<int> non_unitary_even_last(const ParamList& p) {
  std::vector<int> nu;
  for (int v : p)
    if (v != 1 && v != -1) nu.push_back(v);
  auto even = std::find_if(nu.begin(), nu.end(), [](int v) { return v % 2 == 0; });
  if (even == nu.end()) throw std::invalid_argument("no even parameter");
  std::rotate(nu.begin(), even + 1, nu.end());
  return nu;
}

// True when some rotation, possibly reversed and possibly negated, of the
// cyclic sequence `s` satisfies `model`.
inline bool matches_pretzel_form(const std::vector<int>& s,
                                 const std::function<bool(std::span<const int>)>& model) {
  const std::size_t n = s.size();
  std::vector<int> t(n);
  for (int sgn : {1, -1}) {
    for (bool rev : {false, true}) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t src = rev ? (r + n - i) % n : (r + i) % n;
          t[i] = sgn * s[src];
        }
        if (model(t)) return true;
      }
    }
  }
  return false;
}

// (2,-2,2,-2,...) over the first `len` entries.
inline bool alternating_prefix(std::span<const int> s, std::size_t len) {
  if (len > s.size()) return false;
  for (std::size_t i = 0; i < len; ++i)
    if (s[i] != (i % 2 == 0 ? 2 : -2)) return false;
  return true;
}

// P(2,-2,...,2,-2)
inline bool form_alternating(std::span<const int> s) {
  return !s.empty() && s.size() % 2 == 0 && alternating_prefix(s, s.size());
}
// P(2,-2,...,2,-2,n)
inline bool form_alternating_then_any(std::span<const int> s) {
  return s.size() % 2 == 1 && alternating_prefix(s, s.size() - 1);
}
// P(2,-2,...,2,-2,2,-4)
inline bool form_alternating_then_2_minus4(std::span<const int> s) {
  return s.size() >= 2 && s.size() % 2 == 0 && alternating_prefix(s, s.size() - 2) &&
         s[s.size() - 2] == 2 && s[s.size() - 1] == -4;
}
// P(2,-2,...,2,-2,-2)
inline bool form_alternating_then_minus2(std::span<const int> s) {
  return s.size() % 2 == 1 && alternating_prefix(s, s.size() - 1) && s.back() == -2;
}

struct SignCounts {
  int positive = 0;
  int negative = 0;
  int diff() const { return positive > negative ? positive - negative : negative - positive; }
};

inline SignCounts count_signs(const ParamList& p, bool odd_only) {
  SignCounts c;
  for (int v : p) {
    if (odd_only && v % 2 == 0) continue;
    (v > 0 ? c.positive : c.negative)++;
  }
  return c;
}

}  // namespace detail

// Auxiliary link L'. Type 2: (-2a_i over odd non-unitary entries, 2m).
// Type 3: (-2a_i over every non-unitary entry), so the even entry contributes
// -2m/|m| like the others.
inline AuxLink aux_link(const ParamList& p, PretzelKind kind) {
  if (kind != PretzelKind::Type2 && kind != PretzelKind::Type3)
    throw std::invalid_argument("auxiliary link is defined for Type 2 and Type 3 knots only");
  AuxLink out;
  const auto nu = detail::non_unitary_even_last(p);
  for (std::size_t i = 0; i + 1 < nu.size(); ++i) out.entries.push_back(-2 * detail::sign_of(nu[i]));
  const int even = nu.back();
  out.entries.push_back(kind == PretzelKind::Type2 ? even : -2 * detail::sign_of(even));
  return out;
}

// Decided on the list as given; callers normalize first when they want the
// simplest diagram.
inline Subcase subcase(const ParamList& p) {
  switch (classify_type(p)) {
    case PretzelKind::Type1:
      return Subcase::T1;
    case PretzelKind::Type2: {
      const auto c = detail::count_signs(p, /*odd_only=*/true);
      if (c.diff() == 2) return Subcase::T2A;
      if (c.diff() != 0) return Subcase::None;
      const auto l = aux_link(p, PretzelKind::Type2);
      return detail::matches_pretzel_form(l.entries, detail::form_alternating) ? Subcase::T2C
                                                                               : Subcase::T2B;
    }
    case PretzelKind::Type3: {
      const auto c = detail::count_signs(p, /*odd_only=*/false);
      if (c.diff() != 0) return Subcase::T3A;
      const auto l = aux_link(p, PretzelKind::Type3);
      return detail::matches_pretzel_form(l.entries, detail::form_alternating) ? Subcase::T3C
                                                                               : Subcase::T3B;
    }
    case PretzelKind::Link:
      break;
  }
  return Subcase::None;
}

inline FiberVerdict is_fibered(const ParamList& p) {
  const PretzelKind kind = classify_type(p);
  if (!is_knot(kind)) return {FiberStatus::NotAKnot, Subcase::None};

  auto verdict = [](bool yes, Subcase s) {
    return FiberVerdict{yes ? FiberStatus::Fibered : FiberStatus::NotFibered, s};
  };

  const Subcase sc = subcase(p);
  switch (sc) {
    case Subcase::T1: {
      for (int s : {1, -1}) {
        const bool all_in = std::all_of(p.begin(), p.end(), [s](int v) { return v == s || v == -3 * s; });
        const bool has_unit = std::find(p.begin(), p.end(), s) != p.end();
        if (all_in && has_unit) return verdict(true, sc);
      }
      return verdict(false, sc);
    }
    case Subcase::T2A: {
      const int even = *std::find_if(p.begin(), p.end(), [](int v) { return v % 2 == 0; });
      return verdict(even == 2 || even == -2, sc);
    }
    case Subcase::T2B: {
      const auto l = aux_link(p, kind);
      return verdict(detail::matches_pretzel_form(l.entries, detail::form_alternating_then_any) ||
                         detail::matches_pretzel_form(l.entries, detail::form_alternating_then_2_minus4),
                     sc);
    }
    case Subcase::T2C:
      return {FiberStatus::ReducesToType3, sc};
    case Subcase::T3A:
      return verdict(detail::count_signs(p, false).diff() == 2, sc);
    case Subcase::T3B: {
      const auto l = aux_link(p, kind);
      return verdict(detail::matches_pretzel_form(l.entries, detail::form_alternating_then_minus2), sc);
    }
    case Subcase::T3C: {
      int best = 0;
      int ties = 0;
      for (int v : p) {
        const int a = v < 0 ? -v : v;
        if (best == 0 || a < best) {
          best = a;
          ties = 1;
        } else if (a == best) {
          ++ties;
        }
      }
      return verdict(ties == 1, sc);
    }
    case Subcase::None:
      // Type 2 with odd sign counts differing by four or more.
      return verdict(false, sc);
  }
  return verdict(false, sc);
}

}  // namespace pretzel
