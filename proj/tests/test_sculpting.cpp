#include <gtest/gtest.h>

#include "sculpt/analysis.hpp"
#include "sculpt/sculpting.hpp"
#include "support.hpp"

using namespace sculpt;

TEST(Sculpting, InitialStateHoldsTwoPerMainAndOnePerAncilla) {
  auto s = initial_state(3, 2);
  ASSERT_EQ(s.size(), 1u);
  const auto& occ = s.terms().begin()->first;
  EXPECT_EQ(occ.total(), 8u);
  EXPECT_EQ(occ.count(mode_wire(4, 0)), 1u);
  EXPECT_EQ(occ.count(mode_wire(4, 1)), 0u);
}

TEST(Sculpting, MatchesDenseOracleOnPresets) {
  for (int n = 2; n <= 4; ++n)
    for (auto k : {PresetKind::GHZ, PresetKind::W}) {
      auto g = preset(k, n);
      EXPECT_TRUE(approx_equal(apply_sculpting(g), oracle::dense_to_fock(oracle::dense_sculpt(g))));
    }
  auto t = preset(PresetKind::TYPE5, 3);
  EXPECT_TRUE(approx_equal(apply_sculpting(t), oracle::dense_to_fock(oracle::dense_sculpt(t))));
}

TEST(Sculpting, DotOrderDoesNotMatter) {
  auto g = preset(PresetKind::TYPE5, 3);
  std::vector<std::size_t> order{5, 3, 1, 0, 4, 2};
  EXPECT_TRUE(approx_equal(apply_sculpting(g), apply_sculpting(g, order)));
}

// Closed forms: GHZ -> 2^{-N/2}(Π a†_+ + Π a†_-), W -> -(2^N N)^{-1/2} Σ_k a†_{k-} Π a†_{j+}
// (the lone a_- subtraction leaves -a†_-)
TEST(Sculpting, ClosedFormsOfPresets) {
  const double h = 1 / std::sqrt(2.0);
  for (int n = 2; n <= 4; ++n) {
    oracle::Poly plus = oracle::Poly::one(), minus = oracle::Poly::one();
    for (int j = 0; j < n; ++j) {
      plus = plus * oracle::Poly::linear({{2u * j, h}, {2u * j + 1, h}});
      minus = minus * oracle::Poly::linear({{2u * j, h}, {2u * j + 1, -h}});
    }
    auto ghz = (plus + minus).scaled(std::pow(2.0, -n / 2.0)).on_vacuum();
    EXPECT_TRUE(approx_equal(apply_sculpting(preset(PresetKind::GHZ, n)), ghz)) << n;

    oracle::Poly w;
    for (int k = 0; k < n; ++k) {
      oracle::Poly term = oracle::Poly::one();
      for (int j = 0; j < n; ++j)
        term = term * oracle::Poly::linear({{2u * j, h}, {2u * j + 1, j == k ? -h : h}});
      w = w + term;
    }
    auto wst = w.scaled(-1 / std::sqrt(std::pow(2.0, n) * n)).on_vacuum();
    EXPECT_TRUE(approx_equal(apply_sculpting(preset(PresetKind::W, n)), wst)) << n;
  }
}

TEST(Sculpting, NoBunchingHoldsForEpmGraphs) {
  std::mt19937 rng(99);
  for (int t = 0; t < 50; ++t) {
    auto g = oracle::random_epm_graph(rng);
    EXPECT_TRUE(no_bunching_check(apply_sculpting(g), g.n_main()));
  }
  FockState bunched = FockState::basis(Occupation({{mode_wire(0, 0), 2}}));
  EXPECT_FALSE(no_bunching_check(bunched, 2));
  EXPECT_THROW(to_qubit_state(bunched, 2), std::invalid_argument);
}

TEST(Sculpting, PmPredictEqualsSculptingOnPresets) {
  for (int n = 2; n <= 4; ++n)
    for (auto k : {PresetKind::GHZ, PresetKind::W}) {
      auto g = preset(k, n);
      EXPECT_TRUE(approx_equal(pm_predict(g), apply_sculpting(g))) << preset_name(k) << n;
    }
  auto t = preset(PresetKind::TYPE5, 3);
  EXPECT_TRUE(approx_equal(pm_predict(t), apply_sculpting(t)));
}

TEST(Sculpting, PmPredictEqualsDenseOracleOnRandomGraphs) {
  std::mt19937 rng(12345);
  for (int t = 0; t < 100; ++t) {
    auto g = oracle::random_epm_graph(rng);
    ASSERT_LE(g.edge_count(), 10u);
    auto dense = oracle::dense_to_fock(oracle::dense_sculpt(g));
    EXPECT_TRUE(approx_equal(pm_predict(g), dense)) << serialize_graph(g);
    EXPECT_TRUE(approx_equal(apply_sculpting(g), dense));
  }
}

TEST(Sculpting, PmPredictRejectsNonEpm) {
  const double h = 1 / std::sqrt(2.0);
  SculptingBigraph g(1, {}, {{1, {{"1", InternalState::plus(), h}, {"1", InternalState::minus(), h}}}});
  EXPECT_THROW(pm_predict(g), GraphError);
}

TEST(Sculpting, QubitExtractionReproducesTargets) {
  for (int n = 2; n <= 4; ++n) {
    auto q = to_qubit_state(apply_sculpting(preset(PresetKind::GHZ, n)), n);
    EXPECT_NEAR(q.norm2, std::pow(2.0, 1 - n), 1e-12);
    EXPECT_NEAR(fidelity(q.state, target_state(PresetKind::GHZ, n)), 1.0, 1e-12);
    auto w = to_qubit_state(apply_sculpting(preset(PresetKind::W, n)), n);
    EXPECT_NEAR(w.norm2, 1.0 / std::pow(2.0, n), 1e-12);
    EXPECT_NEAR(fidelity(w.state, target_state(PresetKind::W, n)), 1.0, 1e-12);
  }
  auto t = to_qubit_state(apply_sculpting(preset(PresetKind::TYPE5, 3)), 3);
  EXPECT_NEAR(t.norm2, 5.0 / 144, 1e-12);
  EXPECT_NEAR(fidelity(t.state, target_state(PresetKind::TYPE5, 3)), 1.0, 1e-12);
}
