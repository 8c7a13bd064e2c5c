#include "ghzn/ghz_logic.hpp"
#include "ghzn/noise.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace ghzn;

TEST(GhzState, Amplitudes) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto plus = ghz_state(GhzSign::plus);
  const auto minus = ghz_state(GhzSign::minus);
  EXPECT_EQ(plus[0], cplx(r));
  EXPECT_EQ(plus[7], cplx(r));
  EXPECT_EQ(minus[0], cplx(r));
  EXPECT_EQ(minus[7], cplx(-r));
  for (int b = 1; b < 7; ++b) EXPECT_EQ(plus[b], cplx(0.0));
  EXPECT_TRUE(plus.is_normalized());
  EXPECT_NEAR(std::abs(inner(plus, minus)), 0.0, 1e-16);
}

TEST(Eigenrelations, MinusConventionHolds) {
  const auto rep = check_eigenrelations(ghz_state(GhzSign::minus), GhzSign::minus);
  EXPECT_TRUE(rep.all_hold());
  EXPECT_LT(rep.max_residual(), 1e-12);
  EXPECT_EQ(rep.relations[3].label, "xxx");
  EXPECT_EQ(rep.relations[3].expected, -1.0);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(rep.relations[k].expected, 1.0);
}

TEST(Eigenrelations, PlusConventionIsSignFlipped) {
  const auto psi = ghz_state(GhzSign::plus);
  // Oracle: triple correlations of the plus state are cos(sum of angles).
  EXPECT_NEAR(test::triple_correlation_oracle(psi, 0, kPi / 2, kPi / 2), -1.0, 1e-15);
  EXPECT_NEAR(test::triple_correlation_oracle(psi, 0, 0, 0), 1.0, 1e-15);

  const auto rep = check_eigenrelations(psi, GhzSign::plus);
  EXPECT_TRUE(rep.all_hold());
  EXPECT_LT(rep.max_residual(), 1e-12);
  EXPECT_EQ(rep.relations[0].expected, -1.0);
  EXPECT_EQ(rep.relations[3].expected, 1.0);

  EXPECT_FALSE(check_eigenrelations(psi, GhzSign::minus).all_hold());
}

TEST(Eigenrelations, ProductStateFails) {
  const auto rep = check_eigenrelations(PureState::basis(0), GhzSign::minus);
  for (const auto& rel : rep.relations) {
    EXPECT_FALSE(rel.holds) << rel.label;
    EXPECT_NEAR(rel.residual, std::sqrt(2.0), 1e-12);
  }
}

TEST(Operators, StabilizersCommute) {
  const auto a = ghz_stabilizers();
  const auto xxx = xxx_operator();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_LT(distance(a[i] * a[j], a[j] * a[i]), 1e-12);
    EXPECT_LT(distance(a[i] * xxx, xxx * a[i]), 1e-12);
  }
}

TEST(Operators, XxxIsMinusProductOfStabilizers) {
  const auto a = ghz_stabilizers();
  EXPECT_LT(distance(xxx_operator(), -(a[0] * a[1] * a[2])), 1e-12);
}

TEST(Nchv, MatchesIndependentBruteForce) {
  // Oracle: six nested +-1 loops with the relations written out literally.
  int satisfying = 0, max_abs = 0;
  bool parity_plus = true;
  for (int xs : {1, -1})
    for (int ys : {1, -1})
      for (int xp : {1, -1})
        for (int yp : {1, -1})
          for (int xe : {1, -1})
            for (int ye : {1, -1}) {
              const int r1 = xs * yp * ye, r2 = ys * xp * ye, r3 = ys * yp * xe, r4 = xs * xp * xe;
              satisfying += (r1 == 1 && r2 == 1 && r3 == 1 && r4 == -1);
              parity_plus = parity_plus && r1 * r2 * r3 * r4 == 1;
              max_abs = std::max(max_abs, std::abs(xs * xp * xe - xs * yp * ye - ys * xp * ye - ys * yp * xe));
            }
  ASSERT_EQ(satisfying, 0);
  ASSERT_TRUE(parity_plus);
  ASSERT_EQ(max_abs, 2);

  const auto rep = enumerate_nchv();
  EXPECT_EQ(rep.total, 64);
  EXPECT_EQ(rep.satisfying, satisfying);
  EXPECT_EQ(rep.parity_always_plus, parity_plus);
  EXPECT_EQ(rep.max_abs_mermin, max_abs);
  EXPECT_EQ(rep.max_mermin, 2);
  EXPECT_EQ(rep.min_mermin, -2);
}

TEST(Nchv, AssignmentIndexCoversAllCombinations) {
  std::set<std::array<std::array<int, 2>, 3>> seen;
  for (int i = 0; i < kNchvAssignments; ++i) seen.insert(NchvAssignment::from_index(i).m);
  EXPECT_EQ(seen.size(), 64u);
}

TEST(MerminOperator, TermTable) {
  ASSERT_EQ(kMerminTerms.size(), 4u);
  EXPECT_EQ(kMerminTerms[0].label(), "xxx");
  EXPECT_EQ(kMerminTerms[0].sign, 1);
  EXPECT_EQ(kMerminTerms[1].label(), "xyy");
  EXPECT_EQ(kMerminTerms[2].label(), "yxy");
  EXPECT_EQ(kMerminTerms[3].label(), "yyx");
  for (int k = 1; k < 4; ++k) EXPECT_EQ(kMerminTerms[k].sign, -1);
}

TEST(MerminOperator, TopEigenvalueIsFour) {
  const auto m = mermin_operator();
  EXPECT_NEAR(eigenvalues(m).maxCoeff(), 4.0, 1e-9);

  // Independent route: power iteration on M + 5I from a generic start.
  std::mt19937_64 rng(1);
  Vec8 v = test::random_pure(rng).amplitudes();
  const Mat8 shifted = m.matrix() + 5.0 * Mat8::Identity();
  for (int i = 0; i < 500; ++i) v = (shifted * v).normalized();
  const double rayleigh = v.dot(m.matrix() * v).real();
  EXPECT_NEAR(rayleigh, 4.0, 1e-9);

  const auto ghz = ghz_state(GhzSign::plus);
  EXPECT_LT(((m * ghz).amplitudes() - 4.0 * ghz.amplitudes()).norm(), 1e-12);
}

TEST(MerminValue, ReferenceStates) {
  EXPECT_NEAR(mermin_value(densify(ghz_state(GhzSign::plus))), 4.0, 1e-12);
  EXPECT_NEAR(mermin_value(densify(ghz_state(GhzSign::minus))), -4.0, 1e-12);
  EXPECT_NEAR(mermin_value(DensityMatrix::maximally_mixed()), 0.0, 1e-15);
  EXPECT_NEAR(mermin_value(densify(PureState::basis(0))), 0.0, 1e-15);
}

TEST(MerminValue, DephasedGhzReproducesHeadline) {
  const auto rho = ghz_dephase(densify(ghz_state(GhzSign::plus)), 0.6395);
  EXPECT_NEAR(mermin_value(rho), 2.558, 1e-3);
}

TEST(MerminValue, FourTimesVisibilityOnGrid) {
  const auto ghz = densify(ghz_state(GhzSign::plus));
  for (int i = 0; i <= 20; ++i) {
    const double v = i / 20.0;
    EXPECT_NEAR(mermin_value(ghz_dephase(ghz, v)), 4.0 * v, 1e-10) << v;
  }
}

TEST(MerminValue, LinearAndBounded) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto r1 = test::random_density(rng), r2 = test::random_density(rng);
    const double w = u(rng);
    const double m1 = mermin_value(r1), m2 = mermin_value(r2);
    EXPECT_NEAR(mermin_value(mix(w, r1, r2)), w * m1 + (1 - w) * m2, 1e-10);
    EXPECT_LE(std::abs(m1), 4.0 + 1e-10);
    EXPECT_LE(std::abs(mermin_value(densify(test::random_pure(rng)))), 4.0 + 1e-10);
  }
}
