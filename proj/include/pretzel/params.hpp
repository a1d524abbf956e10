#pragma once

// Pretzel parameter lists: parsing, type classification, unitary normalization,
// mirror image and the mutation-class key.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pretzel {

// Thrown for malformed parameter strings.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a parameter list contains a zero. Those diagrams are connected
// sums of two-bridge knots and are handled by other classifications.
class ConnectedSumError : public ParseError {
 public:
  ConnectedSumError()
      : ParseError("zero parameter: connected sum; see 2-bridge classifications") {}
};

// Ordered, nonempty sequence of nonzero twist counts p_1..p_n.
class ParamList {
 public:
  ParamList() = default;
  explicit ParamList(std::vector<int> params) : params_(std::move(params)) { validate(); }
  ParamList(std::initializer_list<int> params) : params_(params) { validate(); }

  const std::vector<int>& values() const noexcept { return params_; }
  std::size_t size() const noexcept { return params_.size(); }
  int operator[](std::size_t i) const { return params_[i]; }
  auto begin() const noexcept { return params_.begin(); }
  auto end() const noexcept { return params_.end(); }

  // Number of entries equal to +1 or -1.
  int unitary_count() const {
    return static_cast<int>(std::count_if(params_.begin(), params_.end(),
                                          [](int p) { return p == 1 || p == -1; }));
  }

  int even_count() const {
    return static_cast<int>(
        std::count_if(params_.begin(), params_.end(), [](int p) { return p % 2 == 0; }));
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(params_[i]);
    }
    return out;
  }

  friend bool operator==(const ParamList&, const ParamList&) = default;
  friend auto operator<=>(const ParamList&, const ParamList&) = default;

  friend std::ostream& operator<<(std::ostream& os, const ParamList& p) {
    return os << "P(" << p.to_string() << ")";
  }

 private:
  void validate() const {
    if (params_.empty()) throw ParseError("parameter list is empty");
    for (int p : params_)
      if (p == 0) throw ConnectedSumError();
  }

  std::vector<int> params_;
};

enum class PretzelKind { Type1, Type2, Type3, Link };

inline const char* to_string(PretzelKind k) {
  switch (k) {
    case PretzelKind::Type1: return "Type1";
    case PretzelKind::Type2: return "Type2";
    case PretzelKind::Type3: return "Type3";
    case PretzelKind::Link: return "Link";
  }
  return "?";
}

inline bool is_knot(PretzelKind k) { return k != PretzelKind::Link; }

inline PretzelKind classify_type(const ParamList& p) {
  const bool n_odd = p.size() % 2 == 1;
  const int evens = p.even_count();
  if (evens == 0) return n_odd ? PretzelKind::Type1 : PretzelKind::Link;
  if (evens == 1) return n_odd ? PretzelKind::Type2 : PretzelKind::Type3;
  return PretzelKind::Link;
}

inline ParamList mirror(const ParamList& p) {
  std::vector<int> out(p.begin(), p.end());
  for (int& v : out) v = -v;
  return ParamList(std::move(out));
}

namespace detail {

inline bool erase_first(std::vector<int>& v, int value) {
  auto it = std::find(v.begin(), v.end(), value);
  if (it == v.end()) return false;
  v.erase(it);
  return true;
}

// One pass of the (+1,-1) cancellation. Returns true if something changed.
inline bool cancel_unitary_pair(std::vector<int>& v) {
  if (std::find(v.begin(), v.end(), 1) == v.end() ||
      std::find(v.begin(), v.end(), -1) == v.end())
    return false;
  erase_first(v, 1);
  erase_first(v, -1);
  return true;
}

// One flype rewrite: (+-1, -+2) -> (+-2). Returns true if something changed.
inline bool absorb_unitary_into_two(std::vector<int>& v) {
  for (int s : {1, -1}) {
    auto unit = std::find(v.begin(), v.end(), s);
    auto two = std::find(v.begin(), v.end(), -2 * s);
    if (unit != v.end() && two != v.end()) {
      *two = 2 * s;
      v.erase(unit);
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Unitary normalization. All (+1,-1) pairs are removed first; then every
// coexisting (+-1, -+2) is flyped into a single +-2, which keeps the
// surviving entries in their original order. A list that would be emptied
// keeps its last surviving entry pair unresolved, so the result is never empty.
inline ParamList normalize(const ParamList& p) {
  std::vector<int> v(p.begin(), p.end());
  for (;;) {
    bool changed = false;
    while (v.size() > 2 && detail::cancel_unitary_pair(v)) changed = true;
    if (v.size() > 1 && detail::absorb_unitary_into_two(v)) changed = true;
    if (!changed) break;
  }
  return ParamList(std::move(v));
}

// Reverse rule order (flypes first); used to check confluence in tests.
inline ParamList normalize_flypes_first(const ParamList& p) {
  std::vector<int> v(p.begin(), p.end());
  for (;;) {
    bool changed = false;
    while (v.size() > 1 && detail::absorb_unitary_into_two(v)) changed = true;
    if (v.size() > 2 && detail::cancel_unitary_pair(v)) changed = true;
    if (!changed) break;
  }
  return ParamList(std::move(v));
}

struct MutationClass {
  std::vector<int> multiset;           // sorted ascending
  std::vector<int> mirror_normalized;  // min(sorted, sorted negation)

  friend bool operator==(const MutationClass&, const MutationClass&) = default;

  // Stable textual key, e.g. "-3,-3,-3,1,1,1,1".
  std::string key() const {
    std::string out;
    for (std::size_t i = 0; i < mirror_normalized.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(mirror_normalized[i]);
    }
    return out;
  }
};

inline std::vector<int> sorted_values(const std::vector<int>& v) {
  std::vector<int> s(v);
  std::sort(s.begin(), s.end());
  return s;
}

inline MutationClass mutation_class(const ParamList& p) {
  MutationClass c;
  c.multiset = sorted_values(p.values());
  std::vector<int> neg(c.multiset.size());
  std::transform(c.multiset.begin(), c.multiset.end(), neg.begin(), [](int x) { return -x; });
  std::sort(neg.begin(), neg.end());
  c.mirror_normalized = std::min(c.multiset, neg);
  return c;
}

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline int read_int(std::string_view s, std::size_t& i) {
  skip_ws(s, i);
  std::size_t start = i;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  std::size_t digits = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == digits) {
    throw ParseError("expected integer at position " + std::to_string(start) + " in \"" +
                     std::string(s) + "\"");
  }
  long value = std::strtol(std::string(s.substr(start, i - start)).c_str(), nullptr, 10);
  if (value > 1'000'000 || value < -1'000'000) throw ParseError("parameter out of range");
  skip_ws(s, i);
  return static_cast<int>(value);
}

}  // namespace detail

// Parses "1,1,1,1,-3,-3,-3". A bracketed group "[1^4]" (or "[-1^4]",
// "[1^-4]") expands to repeated unitaries. Whitespace is ignored.
inline ParamList parse_params(std::string_view text) {
  std::vector<int> out;
  std::size_t i = 0;
  detail::skip_ws(text, i);
  if (i == text.size()) throw ParseError("parameter list is empty");
  for (;;) {
    detail::skip_ws(text, i);
    if (i < text.size() && text[i] == '[') {
      ++i;
      int base = detail::read_int(text, i);
      if (i >= text.size() || text[i] != '^') throw ParseError("expected '^' in bracket group");
      ++i;
      int count = detail::read_int(text, i);
      if (i >= text.size() || text[i] != ']') throw ParseError("expected ']' in bracket group");
      ++i;
      if (base != 1 && base != -1) throw ParseError("bracket groups expand unitary entries only");
      if (count == 0) throw ParseError("bracket group count must be nonzero");
      if (count < 0) {
        base = -base;
        count = -count;
      }
      out.insert(out.end(), static_cast<std::size_t>(count), base);
    } else {
      out.push_back(detail::read_int(text, i));
    }
    detail::skip_ws(text, i);
    if (i == text.size()) break;
    if (text[i] != ',') throw ParseError("expected ',' at position " + std::to_string(i));
    ++i;
  }
  return ParamList(std::move(out));
}

}  // namespace pretzel
