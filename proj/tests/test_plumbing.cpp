#include <pretzel/lattice.hpp>
#include <pretzel/plumbing.hpp>

#include "support/dot_check.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pretzel;

namespace {

using Legs = std::vector<std::vector<long>>;

ParamList random_knot(std::mt19937& rng, int max_len, int max_abs) {
  std::uniform_int_distribution<int> len(3, max_len);
  std::uniform_int_distribution<int> val(-max_abs, max_abs - 1);
  for (;;) {
    std::vector<int> v(static_cast<std::size_t>(len(rng)));
    for (int& x : v) {
      x = val(rng);
      if (x >= 0) ++x;
    }
    ParamList p = normalize(ParamList(v));
    if (is_knot(classify_type(p))) return p;
  }
}

// |sum_i prod_{j != i} p_j|, the pretzel determinant in closed form.
BigInt closed_form_det(const ParamList& p) {
  BigInt s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    BigInt prod = 1;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) prod *= p[j];
    s += prod;
  }
  return s < 0 ? BigInt(-s) : s;
}

}  // namespace

TEST(StarGraph, Examples) {
  auto g = star_graph({1, 1, 1, 1, -3, -3, -3});
  EXPECT_EQ(g.center_weight, -4);
  EXPECT_EQ(g.legs, (Legs{{-3}, {-3}, {-3}}));
  g = star_graph({-1, -1, 2, 3, -5});
  EXPECT_EQ(g.center_weight, 2);
  EXPECT_EQ(g.legs, (Legs{{2}, {3}, {-5}}));
  g = star_graph({3, -3, 2});
  EXPECT_EQ(g.center_weight, 0);
  EXPECT_EQ(g.legs, (Legs{{3}, {-3}, {2}}));
  EXPECT_FALSE(g.mirrored);
}

TEST(StarGraph, RejectsLinks) {
  EXPECT_THROW(star_graph({2, 2, 3}), NotAKnotError);
  EXPECT_THROW(negative_definite_graph({3, 3}), NotAKnotError);
}

TEST(IncidenceMatrix, Examples) {
  EXPECT_EQ(incidence_matrix(star_graph({1, 1, 1, 1, -3, -3, -3})),
            (IntMatrix{{-4, 1, 1, 1}, {1, -3, 0, 0}, {1, 0, -3, 0}, {1, 0, 0, -3}}));
  StarGraph chain{-2, {{-2, -2}}, false};
  EXPECT_EQ(incidence_matrix(chain), (IntMatrix{{-2, 1, 0}, {1, -2, 1}, {0, 1, -2}}));
  StarGraph single{-2, {}, false};
  EXPECT_EQ(incidence_matrix(single), (IntMatrix{{-2}}));
}

TEST(EulerNumber, Examples) {
  EXPECT_EQ(euler_number(ParamList{1, 1, 1, 1, -3, -3, -3}), Rational(-3));
  EXPECT_EQ(euler_number(ParamList{-1, -1, 2, 3, -5}), Rational(41, 30));
  EXPECT_EQ(euler_number(ParamList{1, 1, 3, -4}), Rational(-2) - Rational(1, 3) + Rational(1, 4));
}

TEST(EulerNumber, MirrorAntisymmetricAndNonzeroForKnots) {
  std::mt19937 rng(31);
  for (int iter = 0; iter < 1500; ++iter) {
    const ParamList p = random_knot(rng, 8, 9);
    const Rational e = euler_number(p);
    EXPECT_NE(e, 0) << p;
    EXPECT_EQ(euler_number(mirror(p)), -e) << p;
  }
}

TEST(NegativeDefiniteGraph, GoldenGraphs) {
  auto g = negative_definite_graph({1, 1, 1, 1, -3, -3, -3});
  EXPECT_EQ(g.center_weight, -4);
  EXPECT_EQ(g.legs, (Legs{{-3}, {-3}, {-3}}));
  EXPECT_FALSE(g.mirrored);

  g = negative_definite_graph({-1, -1, 2, 3, -5});
  EXPECT_TRUE(g.mirrored);
  EXPECT_EQ(g.center_weight, -3);
  EXPECT_EQ(g.legs, (Legs{{-2}, {-3}, {-2, -2, -2, -2}}));

  g = negative_definite_graph({1, 1, 3, -4});
  EXPECT_FALSE(g.mirrored);
  EXPECT_EQ(g.center_weight, -3);
  EXPECT_EQ(g.legs, (Legs{{-2, -2}, {-4}}));
}

TEST(NegativeDefiniteGraph, StructuralInvariants) {
  std::mt19937 rng(32);
  for (int iter = 0; iter < 1500; ++iter) {
    const ParamList p = random_knot(rng, 8, 9);
    const StarGraph g = negative_definite_graph(p);
    const IntMatrix q = incidence_matrix(g);
    EXPECT_TRUE(is_negative_definite(q)) << p;
    EXPECT_EQ(g.mirrored, euler_number(p) > 0) << p;
    const StarGraph s = star_graph(g.mirrored ? mirror(p) : p);
    std::size_t expect = 1;
    for (const auto& leg : s.legs) expect += leg[0] >= 2 ? static_cast<std::size_t>(leg[0] - 1) : 1;
    EXPECT_EQ(g.vertex_count(), expect) << p;
    for (const auto& leg : g.legs)
      for (long w : leg) EXPECT_LE(w, -2) << p;
    const BigInt d = determinant(q);
    EXPECT_EQ(d < 0 ? BigInt(-d) : d, determinant(p)) << p;
  }
}

TEST(NegativeDefiniteGraph, MirrorGivesSameGraph) {
  std::mt19937 rng(33);
  for (int iter = 0; iter < 500; ++iter) {
    const ParamList p = random_knot(rng, 7, 7);
    const StarGraph a = negative_definite_graph(p);
    const StarGraph b = negative_definite_graph(mirror(p));
    EXPECT_EQ(a.center_weight, b.center_weight);
    EXPECT_EQ(a.legs, b.legs);
    EXPECT_NE(a.mirrored, b.mirrored);
  }
}

TEST(Determinant, GoldenValues) {
  EXPECT_EQ(determinant(ParamList{1, 1, 1, 1, -3, -3, -3}), 81);
  EXPECT_EQ(oracle::cofactor_det(incidence_matrix(star_graph({1, 1, 1, 1, -3, -3, -3}))), 81);
  EXPECT_EQ(determinant(ParamList{1, 1, 3, -4}), 25);
  EXPECT_EQ(determinant(ParamList{1, 1, 1}), 3);
}

TEST(Determinant, OddAndMatchesOraclesForKnots) {
  std::mt19937 rng(34);
  for (int iter = 0; iter < 1500; ++iter) {
    const ParamList p = random_knot(rng, 7, 9);
    const BigInt d = determinant(p);
    EXPECT_EQ(d % 2, 1) << p;
    EXPECT_EQ(d, closed_form_det(p)) << p;
    EXPECT_EQ(determinant(mirror(p)), d) << p;
    const IntMatrix q = incidence_matrix(star_graph(p));
    if (q.size() <= 7) {
      const BigInt c = oracle::cofactor_det(q);
      EXPECT_EQ(c < 0 ? BigInt(-c) : c, d) << p;
    }
  }
}

TEST(CanonicalForm, SortsLegsAndMapsVertices) {
  const StarGraph g = negative_definite_graph({5, -3, 2, -7});
  std::vector<std::size_t> map;
  const StarGraph c = canonical_form(g, &map);
  EXPECT_TRUE(std::is_sorted(c.legs.begin(), c.legs.end()));
  EXPECT_EQ(c.canonical_key(), g.canonical_key());
  const auto wg = g.weights(), wc = c.weights();
  const IntMatrix qg = incidence_matrix(g), qc = incidence_matrix(c);
  for (std::size_t u = 0; u < map.size(); ++u)
    for (std::size_t v = 0; v < map.size(); ++v) EXPECT_EQ(qg(u, v), qc(map[u], map[v]));
}

TEST(Dot, ValidAndMarksCenterAndWuSet) {
  for (const ParamList& p : {ParamList{1, 1, 1, 1, -3, -3, -3}, ParamList{-1, -1, 2, 3, -5}, ParamList{3, -3, 2}}) {
    const StarGraph g = negative_definite_graph(p);
    const WuClass wu = wu_class(g);
    const auto parsed = dotcheck::parse(to_dot(g, wu.members));
    ASSERT_TRUE(parsed.ok) << parsed.error;
    EXPECT_EQ(parsed.nodes.size(), g.vertex_count());
    EXPECT_EQ(parsed.edges.size(), g.vertex_count() - 1);
    std::size_t centers = 0, marked = 0;
    for (const auto& [name, attrs] : parsed.nodes) {
      if (attrs.count("center") && attrs.at("center") == "true") ++centers;
      if (attrs.count("wu") && attrs.at("wu") == "true") ++marked;
    }
    EXPECT_EQ(centers, 1u);
    EXPECT_EQ(marked, wu.vertices().size());
  }
  const auto g = negative_definite_graph({1, 1, 1, 1, -3, -3, -3});
  const auto parsed = dotcheck::parse(to_dot(g, wu_class(g).members));
  EXPECT_EQ(parsed.nodes.at("v0").at("label"), "\"-4\"");
  EXPECT_EQ(parsed.nodes.at("v0").at("wu"), "true");
}

TEST(Dot, CheckerRejectsBrokenText) {
  EXPECT_FALSE(dotcheck::parse("graph g {\n  v0 -- v1;\n}\n").ok);
  EXPECT_FALSE(dotcheck::parse("graph g {\n  v0 [label=\"-2\"];\n").ok);
  EXPECT_FALSE(dotcheck::parse("digraph g {\n}\n").ok);
}
