#pragma once

// Star-shaped plumbing graphs of pretzel double branched covers.
//
// Vertex numbering used throughout: 0 is the center, then the legs in order,
// each leg listed from the vertex adjacent to the center outward.

#include <pretzel/exact.hpp>
#include <pretzel/params.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pretzel {

class NotAKnotError : public std::invalid_argument {
 public:
  explicit NotAKnotError(const ParamList& p)
      : std::invalid_argument("P(" + p.to_string() + ") is a link, not a knot") {}
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct StarGraph {
  long center_weight = 0;
  std::vector<std::vector<long>> legs;
  bool mirrored = false;

  std::size_t vertex_count() const {
    std::size_t n = 1;
    for (const auto& leg : legs) n += leg.size();
    return n;
  }

  // Weights in vertex order.
  std::vector<long> weights() const {
    std::vector<long> w{center_weight};
    for (const auto& leg : legs) w.insert(w.end(), leg.begin(), leg.end());
    return w;
  }

  // Index of the first vertex of leg `j`.
  std::size_t leg_start(std::size_t j) const {
    std::size_t idx = 1;
    for (std::size_t i = 0; i < j; ++i) idx += legs[i].size();
    return idx;
  }

  // Canonical text form: center weight then legs sorted, mirror flag dropped.
  // Two graphs with the same form have identical lattices.
  std::string canonical_key() const {
    auto sorted_legs = legs;
    std::sort(sorted_legs.begin(), sorted_legs.end());
    std::ostringstream os;
    os << center_weight << ':';
    for (std::size_t j = 0; j < sorted_legs.size(); ++j) {
      if (j) os << '|';
      for (std::size_t i = 0; i < sorted_legs[j].size(); ++i) {
        if (i) os << ',';
        os << sorted_legs[j][i];
      }
    }
    return os.str();
  }

  friend bool operator==(const StarGraph&, const StarGraph&) = default;
};

// Same graph with legs in ascending order. `vertex_map[v]` is the index in the
// result of vertex v of `g`.
inline StarGraph canonical_form(const StarGraph& g, std::vector<std::size_t>* vertex_map = nullptr) {
  std::vector<std::size_t> perm(g.legs.size());
  for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = j;
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return g.legs[a] < g.legs[b]; });
  StarGraph out;
  out.center_weight = g.center_weight;
  out.mirrored = g.mirrored;
  if (vertex_map) vertex_map->assign(g.vertex_count(), 0);
  std::size_t idx = 1;
  for (std::size_t j : perm) {
    out.legs.push_back(g.legs[j]);
    if (vertex_map)
      for (std::size_t i = 0; i < g.legs[j].size(); ++i) (*vertex_map)[g.leg_start(j) + i] = idx + i;
    idx += g.legs[j].size();
  }
  return out;
}

inline void require_knot(const ParamList& p) {
  if (!is_knot(classify_type(p))) throw NotAKnotError(p);
}

// Central vertex of weight -(sum of unitary entries); one single-vertex leg of
// weight p_i per non-unitary entry.
inline StarGraph star_graph(const ParamList& p) {
  require_knot(p);
  StarGraph g;
  for (int v : p) {
    if (v == 1 || v == -1)
      g.center_weight -= v;
    else
      g.legs.push_back({v});
  }
  return g;
}

inline IntMatrix incidence_matrix(const StarGraph& g) {
  IntMatrix m(g.vertex_count());
  m(0, 0) = g.center_weight;
  std::size_t idx = 1;
  for (const auto& leg : g.legs) {
    for (std::size_t i = 0; i < leg.size(); ++i, ++idx) {
      m(idx, idx) = leg[i];
      const std::size_t prev = (i == 0) ? 0 : idx - 1;
      m(idx, prev) = m(prev, idx) = 1;
    }
  }
  return m;
}

// e = center - sum over legs of 1/[b_1, b_2, ...], where [.] is the
// continued fraction b_1 - 1/(b_2 - 1/(...)).
inline Rational euler_number(const StarGraph& g) {
  Rational e = g.center_weight;
  for (const auto& leg : g.legs) {
    Rational r = leg.back();
    for (std::size_t i = leg.size() - 1; i-- > 0;) {
      if (r == 0) throw InternalError("degenerate continued fraction in leg");
      r = Rational(leg[i]) - 1 / r;
    }
    if (r == 0) throw InternalError("degenerate continued fraction in leg");
    e -= 1 / r;
  }
  return e;
}

inline Rational euler_number(const ParamList& p) { return euler_number(star_graph(p)); }

// Canonical negative definite plumbing: mirror when e > 0, then trade every
// positive leg q >= 2 for a chain of q-1 vertices of weight -2, lowering the
// center weight by one per trade.
inline StarGraph negative_definite_graph(const ParamList& p) {
  StarGraph g = star_graph(p);
  const Rational e = euler_number(g);
  if (e == 0) throw InternalError("Euler number vanishes for a knot: P(" + p.to_string() + ")");
  if (e > 0) {
    g.center_weight = -g.center_weight;
    for (auto& leg : g.legs)
      for (long& w : leg) w = -w;
    g.mirrored = true;
  }
  for (auto& leg : g.legs) {
    if (leg.size() == 1 && leg[0] >= 2) {
      const long q = leg[0];
      leg.assign(static_cast<std::size_t>(q - 1), -2);
      g.center_weight -= 1;
    }
  }
  if (!is_negative_definite(incidence_matrix(g)))
    throw InternalError("reduced plumbing is not negative definite: P(" + p.to_string() + ")");
  return g;
}

// |det| of the star incidence matrix; equals the knot determinant.
inline BigInt determinant(const ParamList& p) {
  BigInt d = determinant(incidence_matrix(star_graph(p)));
  return d < 0 ? BigInt(-d) : d;
}

// DOT export. Vertices flagged in `highlight` (e.g. the Wu set) are drawn red
// and carry wu=true.
inline std::string to_dot(const StarGraph& g, const std::vector<bool>& highlight = {},
                          const std::string& name = "plumbing") {
  std::ostringstream os;
  const auto w = g.weights();
  os << "graph " << name << " {\n";
  os << "  node [shape=circle];\n";
  for (std::size_t v = 0; v < w.size(); ++v) {
    const bool hot = v < highlight.size() && highlight[v];
    os << "  v" << v << " [label=\"" << w[v] << "\"";
    if (v == 0) os << ", center=true, shape=doublecircle";
    if (hot) os << ", wu=true, color=red";
    os << "];\n";
  }
  std::size_t idx = 1;
  for (const auto& leg : g.legs) {
    for (std::size_t i = 0; i < leg.size(); ++i, ++idx) {
      const std::size_t prev = (i == 0) ? 0 : idx - 1;
      os << "  v" << prev << " -- v" << idx << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace pretzel
