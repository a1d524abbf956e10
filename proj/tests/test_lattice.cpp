#include <pretzel/lattice.hpp>

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>

using namespace pretzel;

namespace {

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
    if (p.size() >= 3 && is_knot(classify_type(p))) return p;
  }
}

// Knots whose negative definite graph has at most `max_rank` vertices.
std::vector<ParamList> small_knots(std::mt19937& rng, std::size_t count, std::size_t max_rank) {
  std::vector<ParamList> out;
  while (out.size() < count) {
    const ParamList p = random_knot(rng, 6, 6);
    if (negative_definite_graph(p).vertex_count() <= max_rank) out.push_back(p);
  }
  return out;
}

// Canonical form of a matrix under signed column permutations.
std::vector<std::vector<int>> column_canonical(const std::vector<std::vector<int>>& rows) {
  const std::size_t k = rows.front().size();
  std::vector<std::vector<int>> cols(k);
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto& r : rows) cols[c].push_back(r[c]);
    auto nz = std::find_if(cols[c].begin(), cols[c].end(), [](int x) { return x != 0; });
    if (nz != cols[c].end() && *nz < 0)
      for (int& x : cols[c]) x = -x;
  }
  std::sort(cols.begin(), cols.end());
  return cols;
}

bool odd_det(const IntMatrix& q) { return determinant(q) % 2 != 0; }

}  // namespace

TEST(WuClass, MatchesBruteForce) {
  std::mt19937 rng(51);
  for (int iter = 0; iter < 400; ++iter) {
    const StarGraph g = negative_definite_graph(random_knot(rng, 7, 7));
    const IntMatrix q = incidence_matrix(g);
    if (q.size() > 14) continue;
    const auto all = oracle::brute_wu(q);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(wu_class(q).members, all.front());
  }
}

TEST(WuClass, Examples) {
  // Center -4 with three -3 legs: only the center.
  const WuClass w = wu_class(negative_definite_graph({1, 1, 1, 1, -3, -3, -3}));
  EXPECT_EQ(w.vertices(), (std::vector<std::size_t>{0}));
  // All weights even: empty class.
  const StarGraph chain{-2, {{-2}}, false};
  EXPECT_TRUE(wu_class(chain).vertices().empty());
  // Center -3, legs (-2,-2) and (-4).
  EXPECT_EQ(wu_class(negative_definite_graph({1, 1, 3, -4})).vertices(), (std::vector<std::size_t>{3}));
}

TEST(WuClass, EvenDeterminantThrows) {
  const StarGraph d4{-2, {{-2}, {-2}, {-2}}, false};
  EXPECT_THROW(wu_class(d4), SingularMod2Error);
}

TEST(Signature, GoldenValues) {
  EXPECT_EQ(signature({1, 1, 1, 1, -3, -3, -3}), 0);
  EXPECT_EQ(signature({1, 1, 1}), 2);
  EXPECT_EQ(signature({-2, 3, 7}), -8);
  EXPECT_EQ(signature({3, 5, 7, 2}), oracle::goeritz_signature({3, 5, 7, 2}));
}

TEST(Signature, MatchesGoeritzAndMirrorAntisymmetric) {
  std::mt19937 rng(52);
  for (int iter = 0; iter < 1500; ++iter) {
    const ParamList p = random_knot(rng, 8, 9);
    const long s = signature(p);
    EXPECT_EQ(s, oracle::goeritz_signature(p)) << p;
    EXPECT_EQ(signature(mirror(p)), -s) << p;
    EXPECT_EQ(s % 2, 0) << p;
  }
}

TEST(Embedding, TenSeventyFiveWitnessMatchesKnownRows) {
  const StarGraph g = negative_definite_graph({1, 1, 1, 1, -3, -3, -3});
  const SearchResult r = find_embedding(g);
  ASSERT_EQ(r.outcome, SearchOutcome::Embeddable);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(r.wu_rule_applied);
  EXPECT_TRUE(verify_embedding(g, *r.witness));
  const std::vector<std::vector<int>> known{{1, 1, 1, 1}, {-1, -1, 0, 1}, {-1, 0, 1, -1}, {-1, 1, -1, 0}};
  const auto target = column_canonical(known);
  std::array<std::size_t, 3> legs{1, 2, 3};
  bool found = false;
  do {
    std::vector<std::vector<int>> permuted{r.witness->rows[0]};
    for (std::size_t v : legs) permuted.push_back(r.witness->rows[v]);
    found = found || column_canonical(permuted) == target;
  } while (std::next_permutation(legs.begin(), legs.end()));
  EXPECT_TRUE(found);
}

TEST(Embedding, Examples) {
  EXPECT_EQ(find_embedding(negative_definite_graph({1, 1, -3})).outcome, SearchOutcome::NotEmbeddable);
  EXPECT_EQ(find_embedding(negative_definite_graph({1, 1, 1, 1, 1, 1, -3, -3, -3, -3, -3})).outcome,
            SearchOutcome::NotEmbeddable);
  const StarGraph g = negative_definite_graph({1, 1, 3, -4});
  const SearchResult r = find_embedding(g);
  ASSERT_EQ(r.outcome, SearchOutcome::Embeddable);
  EXPECT_TRUE(verify_embedding(g, *r.witness));
}

TEST(Embedding, TypeOneFamilyOnlyMiddleMemberEmbeds) {
  // [1^(m+1)] with m copies of -3; only m = 3 passes.
  for (int m = 1; m <= 6; ++m) {
    std::vector<int> v(static_cast<std::size_t>(m + 1), 1);
    v.insert(v.end(), static_cast<std::size_t>(m), -3);
    const auto r = find_embedding(negative_definite_graph(ParamList(v)));
    EXPECT_EQ(r.embeds(), m == 3) << m;
  }
}

TEST(VerifyEmbedding, DetectsWrongRows) {
  const StarGraph g = negative_definite_graph({1, 1, 1, 1, -3, -3, -3});
  Embedding m{{{1, 1, 1, 1}, {-1, -1, 0, 1}, {-1, 0, 1, -1}, {-1, 1, -1, 0}}};
  EXPECT_TRUE(verify_embedding(g, m));
  m.rows[1][0] = 1;
  EXPECT_FALSE(verify_embedding(g, m));
  m.rows[1].pop_back();
  EXPECT_FALSE(verify_embedding(g, m));
}

TEST(ProjectEmbedding, AllColumnsIsIdentity) {
  const StarGraph g = negative_definite_graph({1, 1, 1, 1, -3, -3, -3});
  const Embedding m = *find_embedding(g).witness;
  const ProjectedEmbedding p = project_embedding(m, {0, 1, 2, 3});
  EXPECT_EQ(p.vertices, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(p.gram, incidence_matrix(g));
  EXPECT_EQ(p.embedding, m);
}

TEST(ProjectEmbedding, SingleColumn) {
  const Embedding m{{{1, 1, 1, 1}, {-1, -1, 0, 1}, {0, 1, -1, 0}, {-1, 1, -1, 0}}};
  const ProjectedEmbedding p = project_embedding(m, {0});
  EXPECT_EQ(p.vertices, (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_EQ(p.gram, (IntMatrix{{-1, 1, 1}, {1, -1, -1}, {1, -1, -1}}));
  EXPECT_THROW(project_embedding(m, {}), std::invalid_argument);
  EXPECT_THROW(project_embedding(m, {4}), std::out_of_range);
}

TEST(Embedding, NeverIntoSmallerRank) {
  std::mt19937 rng(53);
  for (const ParamList& p : small_knots(rng, 40, 7)) {
    const IntMatrix q = incidence_matrix(negative_definite_graph(p));
    EXPECT_EQ(find_embedding_into(q, q.size() - 1).outcome, SearchOutcome::NotEmbeddable) << p;
  }
}

TEST(Embedding, WitnessesAreSoundAndDeterminantIsSquare) {
  std::mt19937 rng(54);
  int positives = 0;
  for (int iter = 0; iter < 600; ++iter) {
    const ParamList p = random_knot(rng, 7, 7);
    const StarGraph g = negative_definite_graph(p);
    if (g.vertex_count() > 12) continue;
    const SearchResult r = find_embedding(g);
    ASSERT_NE(r.outcome, SearchOutcome::Inconclusive);
    if (!r.embeds()) continue;
    ++positives;
    ASSERT_TRUE(r.witness);
    EXPECT_EQ(r.witness->dimension(), g.vertex_count());
    EXPECT_TRUE(verify_embedding(g, *r.witness)) << p;
    EXPECT_TRUE(is_perfect_square(determinant(p))) << p;
  }
  EXPECT_GT(positives, 0);
}

TEST(Embedding, AgreesWithExhaustiveAndBruteForce) {
  std::mt19937 rng(55);
  for (const ParamList& p : small_knots(rng, 120, 5)) {
    const IntMatrix q = incidence_matrix(negative_definite_graph(p));
    const bool fast = find_embedding_into(q, q.size()).embeds();
    SearchConfig ex;
    ex.exhaustive = true;
    EXPECT_EQ(find_embedding_into(q, q.size(), ex).embeds(), fast) << p;
    EXPECT_EQ(oracle::brute_embeds(q, q.size()), fast) << p;
  }
}

TEST(Embedding, WuRuleDoesNotChangeOutcome) {
  std::mt19937 rng(56);
  int applied = 0;
  for (const ParamList& p : small_knots(rng, 300, 10)) {
    const StarGraph g = negative_definite_graph(p);
    const SearchResult on = find_embedding(g);
    SearchConfig off_cfg;
    off_cfg.wu_pruning = false;
    const SearchResult off = find_embedding(g, off_cfg);
    EXPECT_EQ(on.outcome, off.outcome) << p;
    EXPECT_FALSE(off.wu_rule_applied);
    if (on.wu_rule_applied) {
      ++applied;
      EXPECT_EQ(signature(p), 0) << p;
    }
  }
  EXPECT_GT(applied, 0);
}

TEST(Embedding, ThreadCountDoesNotChangeWitness) {
  std::mt19937 rng(57);
  for (const ParamList& p : small_knots(rng, 60, 10)) {
    const StarGraph g = negative_definite_graph(p);
    const SearchResult one = find_embedding(g);
    for (unsigned t : {2u, 4u, 8u}) {
      SearchConfig cfg;
      cfg.threads = t;
      const SearchResult many = find_embedding(g, cfg);
      EXPECT_EQ(many.outcome, one.outcome) << p;
      EXPECT_EQ(many.witness, one.witness) << p;
    }
  }
}

TEST(Embedding, NodeLimit) {
  const StarGraph g = negative_definite_graph({1, 1, 1, 1, 1, 1, -3, -3, -3, -3, -3});
  SearchConfig cfg;
  cfg.node_limit = 3;
  const SearchResult r = find_embedding(g, cfg);
  EXPECT_EQ(r.outcome, SearchOutcome::Inconclusive);
  EXPECT_FALSE(r.witness);
  cfg.node_limit = 0;
  EXPECT_THROW(find_embedding(g, cfg), std::invalid_argument);
}

TEST(Embedding, OddDeterminantForKnots) {
  std::mt19937 rng(58);
  for (int iter = 0; iter < 200; ++iter) EXPECT_TRUE(odd_det(incidence_matrix(negative_definite_graph(random_knot(rng, 7, 9)))));
}
