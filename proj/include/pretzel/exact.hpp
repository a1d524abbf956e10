#pragma once

// Exact integer linear algebra used by the plumbing and lattice modules.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pretzel {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Dense square integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n) : n_(n), a_(n * n, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) : n_(rows.size()) {
    a_.reserve(n_ * n_);
    for (const auto& r : rows) {
      if (r.size() != n_) throw std::invalid_argument("IntMatrix: rows must be square");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  std::size_t size() const noexcept { return n_; }
  long& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  long operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<long> a_;
};

namespace detail {

// Bareiss fraction-free elimination on the leading `order` x `order` block,
// with row swaps on zero pivots.
inline BigInt bareiss(const IntMatrix& m, std::size_t order) {
  if (order == 0) return 1;
  std::vector<BigInt> a(order * order);
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j) a[i * order + j] = m(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return a[i * order + j]; };

  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < order; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < order && at(swap, k) == 0) ++swap;
      if (swap == order) return 0;
      for (std::size_t j = 0; j < order; ++j) std::swap(at(k, j), at(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < order; ++i)
      for (std::size_t j = k + 1; j < order; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * at(order - 1, order - 1);
}

}  // namespace detail

inline BigInt determinant(const IntMatrix& m) { return detail::bareiss(m, m.size()); }

// Leading principal minors d_1..d_n. Without pivoting, the Bareiss pivot at
// step k is exactly d_{k+1}; a zero pivot falls back to per-order elimination.
inline std::vector<BigInt> leading_minors(const IntMatrix& m) {
  const std::size_t n = m.size();
  std::vector<BigInt> out;
  out.reserve(n);
  std::vector<BigInt> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return a[i * n + j]; };
  BigInt prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (at(k, k) == 0) {
      for (std::size_t order = k + 1; order <= n; ++order) out.push_back(detail::bareiss(m, order));
      return out;
    }
    out.push_back(at(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return out;
}

// Sylvester: negative definite iff (-1)^k d_k > 0 for every leading minor.
inline bool is_negative_definite(const IntMatrix& m) {
  if (m.size() == 0 || !m.is_symmetric()) return false;
  auto minors = leading_minors(m);
  for (std::size_t k = 0; k < minors.size(); ++k) {
    const bool odd_order = (k % 2) == 0;  // order k+1
    if (odd_order ? minors[k] >= 0 : minors[k] <= 0) return false;
  }
  return true;
}

inline bool is_perfect_square(const BigInt& v) {
  if (v < 0) return false;
  BigInt r = boost::multiprecision::sqrt(v);
  return r * r == v;
}

}  // namespace pretzel
