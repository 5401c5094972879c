#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <string_view>

#include "nonlocal/classical.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/quantum.hpp"
#include "test_support.hpp"

namespace nonlocal {
namespace {

using testing::kPi;

const double kG1Value = (16.0 + std::sqrt(13.0)) / 36.0;
const double kG1Alpha = 2.0 * std::atan(std::sqrt((5.0 + std::sqrt(13.0)) / 6.0));
const double kG2Value = (35.0 + std::cbrt(15740.0 - 972.0 * std::sqrt(29.0)) +
                         std::pow(2.0, 2.0 / 3.0) * std::cbrt(3935.0 + 243.0 * std::sqrt(29.0))) /
                        108.0;
const double kChshValue = (2.0 + std::sqrt(2.0)) / 4.0;

// Bell operator assembled directly from 2x2 projector entries, without the
// library's kron, as an independent check on bell_operator().
CMatrix bell_by_hand(const GameSpec& g, const PlanarAngles& ang) {
  auto proj = [](double t, std::size_t out) {
    const double s = out == 0 ? 0.5 : -0.5;
    const Complex e = std::polar(1.0, t);
    return std::array<std::array<Complex, 2>, 2>{{{0.5, s * e}, {s * std::conj(e), 0.5}}};
  };
  CMatrix b = CMatrix::zeros(4, 4);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t bb = 0; bb < 2; ++bb) {
          const double w = g.pi(x, y) * g.v(x, y, a, bb);
          if (w == 0.0) continue;
          const auto pa = proj(ang.alpha[x], a);
          const auto pb = proj(ang.beta[y], bb);
          for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
              for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) b(2 * i + k, 2 * j + l) += w * pa[i][j] * pb[k][l];
        }
  return b;
}

OptimalSolution closed_form_or_search(std::string_view id) {
  if (id == "g1" || id == "g2") return closed_form_optimum(id);
  return optimize_planar(builtin_game(id), {.grid_points = 91});
}

TEST(Planar, ThetaZeroIsPlusMinusBasis) {
  const auto m = planar_measurement(0.0);
  const CMatrix plus = {{0.5, 0.5}, {0.5, 0.5}};
  const CMatrix minus = {{0.5, -0.5}, {-0.5, 0.5}};
  EXPECT_LE(testing::max_abs_diff(m.projectors[0], plus), 1e-15);
  EXPECT_LE(testing::max_abs_diff(m.projectors[1], minus), 1e-15);
}

TEST(Planar, ThetaPiIsMinusProjector) {
  const CMatrix minus = {{0.5, -0.5}, {-0.5, 0.5}};
  EXPECT_LE(testing::max_abs_diff(planar_measurement(kPi).projectors[0], minus), 1e-15);
}

TEST(Planar, ProjectorInvariantsForAnyAngle) {
  for (int k = 0; k < 100; ++k) {
    const auto m = planar_measurement(testing::uniform(-kPi, kPi));
    EXPECT_LE(m.defect(), 1e-14);
    EXPECT_LE(testing::max_abs_diff(m.projectors[0] + m.projectors[1], CMatrix::identity(2)), 1e-15);
  }
}

TEST(Planar, RejectsGaugeAndRangeViolations) {
  EXPECT_THROW(planar_measurements({{0.1, 1.0}, {0.0, 1.0}}), Error);
  EXPECT_THROW(planar_measurements({{0.0, 4.0}, {0.0, 1.0}}), Error);
  EXPECT_NO_THROW(planar_measurements({{0.0, kPi}, {0.0, -kPi}}));
}

TEST(BellOperator, AllOnePredicateIsIdentity) {
  GameSpec g = builtin_game("g1");
  std::fill(g.predicate.begin(), g.predicate.end(), 1.0);
  const auto [ma, mb] = planar_measurements({{0.0, 0.7}, {0.0, -2.1}});
  EXPECT_LE(testing::max_abs_diff(bell_operator(g, ma, mb), CMatrix::identity(4)), 1e-15);
}

TEST(BellOperator, MatchesHandAssembly) {
  for (const char* id : {"g1", "g2", "chsh"}) {
    const GameSpec g = builtin_game(id);
    for (int rep = 0; rep < 20; ++rep) {
      const PlanarAngles ang{{0.0, testing::uniform(-kPi, kPi)}, {0.0, testing::uniform(-kPi, kPi)}};
      const auto [ma, mb] = planar_measurements(ang);
      const CMatrix b = bell_operator(g, ma, mb);
      EXPECT_TRUE(b.is_hermitian());
      EXPECT_LE(testing::max_abs_diff(b, bell_by_hand(g, ang)), 1e-15);
    }
  }
}

TEST(BellOperator, G1TopEigenvalueAtClosedForm) {
  const auto [ma, mb] = planar_measurements(closed_form_angles("g1"));
  const CMatrix b4 = bell_operator(builtin_game("g1"), ma, mb) * Complex(4.0);
  EXPECT_NEAR(eig_hermitian(b4).max_value(), (16.0 + std::sqrt(13.0)) / 9.0, 1e-12);
}

TEST(BellOperator, ChshAtTsirelsonAngles) {
  const auto [ma, mb] = planar_measurements({{0.0, kPi / 2}, {0.0, kPi / 2}});
  const double top = eig_hermitian(bell_operator(builtin_game("chsh"), ma, mb)).max_value();
  EXPECT_NEAR(top, kChshValue, 1e-12);
}

TEST(BellOperator, DimensionMismatch) {
  const auto [ma, mb] = planar_measurements({{0.0, 1.0}, {0.0, 1.0}});
  MeasurementSet short_b = {mb[0]};
  try {
    bell_operator(builtin_game("g1"), ma, short_b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

// Every eigenvalue of 4B, not just the top one, is a root of the closed-form
// characteristic polynomial at arbitrary angles.
TEST(EigenPolynomial, RootsAreEigenvaluesOfFourB) {
  for (const char* id : {"g1", "g2"}) {
    const GameSpec g = builtin_game(id);
    for (int rep = 0; rep < 100; ++rep) {
      const double a1 = testing::uniform(-kPi, kPi), b1 = testing::uniform(-kPi, kPi);
      const auto [ma, mb] = planar_measurements({{0.0, a1}, {0.0, b1}});
      const auto es = eig_hermitian(bell_operator(g, ma, mb) * Complex(4.0));
      for (double l : es.values) {
        const double r = std::string_view(id) == "g1" ? g1_eigen_polynomial(l, a1, b1) : g2_eigen_polynomial(l, a1, b1);
        EXPECT_NEAR(r, 0.0, 1e-10) << id << " lambda=" << l;
      }
    }
  }
}

TEST(EigenPolynomial, G1CaseOneRoot) { EXPECT_NEAR(g1_eigen_polynomial(2.0, kPi, kPi), 0.0, 1e-12); }

TEST(GameValue, TwoWaysAgreeOnProductState) {
  const GameSpec g = builtin_game("g1");
  QuantumStrategy s = planar_strategy(g, {{0.0, 0.4}, {0.0, -1.3}});
  s.state = {1.0, 0.0, 0.0, 0.0};
  const double via_table = quantum_game_value(g, s);
  const double via_operator = expectation(bell_operator(g, s.meas_a, s.meas_b), s.state);
  EXPECT_NEAR(via_table, via_operator, 1e-12);
}

TEST(GameValue, CorrelationTableIsADistribution) {
  const GameSpec g = builtin_game("cglmp");
  const auto table = correlation_table(g, cglmp_strategy());
  for (std::size_t xy = 0; xy < 4; ++xy) {
    double total = 0.0;
    for (std::size_t ab = 0; ab < 9; ++ab) {
      EXPECT_GE(table[xy * 9 + ab], -1e-15);
      total += table[xy * 9 + ab];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ClosedForm, G1) {
  const auto sol = closed_form_optimum("g1");
  EXPECT_NEAR(sol.value, kG1Value, 1e-12);
  ASSERT_TRUE(sol.residual);
  EXPECT_LE(std::abs(*sol.residual), 1e-9);
  EXPECT_NEAR(sol.angles->alpha[1], kG1Alpha, 1e-15);
  EXPECT_NEAR(sol.angles->beta[1], kG1Alpha - kPi, 1e-15);
  EXPECT_NEAR(sol.value, expectation(bell_operator(builtin_game("g1"), sol.strategy.meas_a, sol.strategy.meas_b),
                                     sol.strategy.state),
              1e-10);
}

TEST(ClosedForm, G2) {
  const auto sol = closed_form_optimum("g2");
  EXPECT_NEAR(sol.value, kG2Value, 1e-12);
  EXPECT_NEAR(sol.value, 0.7822, 5e-5);
  EXPECT_EQ(sol.angles->alpha[1], sol.angles->beta[1]);
  EXPECT_LE(std::abs(*sol.residual), 1e-9);
  EXPECT_NEAR(closed_form_value("g2"), kG2Value, 1e-15);
}

TEST(ClosedForm, UnknownGame) {
  try {
    closed_form_optimum("chsh");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownGame);
  }
}

TEST(Optimize, G1MatchesClosedForm) {
  const auto sol = optimize_planar(builtin_game("g1"));
  EXPECT_NEAR(sol.value, kG1Value, 1e-8);
  EXPECT_NEAR(sol.angles->alpha[1], kG1Alpha, 1e-6);
  EXPECT_NEAR(std::abs(sol.angles->beta[1]), kPi - kG1Alpha, 1e-6);
  EXPECT_LE(std::abs(*sol.residual), 1e-9);
}

TEST(Optimize, G2AnglesCoincide) {
  const auto sol = optimize_planar(builtin_game("g2"));
  EXPECT_NEAR(sol.value, kG2Value, 1e-8);
  EXPECT_NEAR(sol.angles->alpha[1], sol.angles->beta[1], 1e-6);
}

TEST(Optimize, Chsh) { EXPECT_NEAR(optimize_planar(builtin_game("chsh")).value, kChshValue, 1e-8); }

TEST(Optimize, CanonicalAlphaNonNegative) {
  for (const char* id : {"g1", "g2", "chsh"}) {
    const auto sol = optimize_planar(builtin_game(id), {.grid_points = 91});
    EXPECT_GE(sol.angles->alpha[1], 0.0);
    EXPECT_LE(sol.angles->alpha[1], kPi);
  }
}

TEST(Optimize, Deterministic) {
  const GameSpec g = builtin_game("g1");
  const auto one = optimize_planar(g, {.grid_points = 121, .workers = 1});
  const auto three = optimize_planar(g, {.grid_points = 121, .workers = 3});
  EXPECT_EQ(one.value, three.value);
  EXPECT_EQ(one.angles->alpha, three.angles->alpha);
  EXPECT_EQ(one.angles->beta, three.angles->beta);
  EXPECT_EQ(one.strategy.state, three.strategy.state);
}

TEST(Optimize, Guards) {
  try {
    optimize_planar(builtin_game("cglmp"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPlanarApplicable);
  }
  EXPECT_THROW(optimize_planar(builtin_game("g1"), {.grid_points = 10}), Error);
}

TEST(Optimize, NeverBelowClassical) {
  for (const char* id : {"g1", "g2", "chsh"}) {
    const GameSpec g = builtin_game(id);
    EXPECT_GE(optimize_planar(g, {.grid_points = 181}).value, classical_value(g).omega_c - 1e-9) << id;
  }
  for (int rep = 0; rep < 10; ++rep) {
    const GameSpec g = testing::random_binary_game(2, 2, 2, 2);
    EXPECT_GE(optimize_planar(g, {.grid_points = 91}).value, classical_value(g).omega_c - 1e-9);
  }
}

TEST(Variational, RandomStatesBelowTopEigenvalue) {
  for (const char* id : {"g1", "g2", "chsh"}) {
    const GameSpec g = builtin_game(id);
    const auto sol = closed_form_or_search(id);
    const CMatrix b = bell_operator(g, sol.strategy.meas_a, sol.strategy.meas_b);
    const double top = eig_hermitian(b).max_value();
    for (int rep = 0; rep < 100; ++rep) EXPECT_LE(expectation(b, testing::random_unit_vector(4)), top + 1e-12);
  }
  const GameSpec c = builtin_game("cglmp");
  const QuantumStrategy s = cglmp_strategy();
  const CMatrix b = bell_operator(c, s.meas_a, s.meas_b);
  const double top = eig_hermitian(b).max_value();
  for (int rep = 0; rep < 100; ++rep) EXPECT_LE(expectation(b, testing::random_unit_vector(9)), top + 1e-12);
  EXPECT_LE(quantum_game_value(c, s), top + 1e-12);
}

TEST(Cglmp, StrategyInvariants) {
  EXPECT_NEAR(cglmp_kappa(), 0.7922869913932613, 1e-15);
  const QuantumStrategy s = cglmp_strategy();
  EXPECT_NO_THROW(s.validate());
  for (const auto& m : s.meas_a) EXPECT_LE(m.defect(), 1e-12);
  for (const auto& m : s.meas_b) {
    EXPECT_LE(testing::max_abs_diff(m.projectors[0] + m.projectors[1] + m.projectors[2], CMatrix::identity(3)), 1e-12);
  }
  const double kappa = cglmp_kappa();
  const double n = std::sqrt(2.0 + kappa * kappa);
  EXPECT_NEAR(std::abs(s.state[0] - 1.0 / n), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.state[4] - kappa / n), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.state[8] - 1.0 / n), 0.0, 1e-15);
}

TEST(Cglmp, ViolatesClassicalBound) {
  const double raw = 4.0 * quantum_game_value(builtin_game("cglmp"), cglmp_strategy());
  EXPECT_GT(raw, 6.0);
  EXPECT_NEAR(raw, 6.914854, 1e-6);
}

TEST(Multistart, G1CorrelationTablesAgree) {
  const GameSpec g = builtin_game("g1");
  std::vector<std::vector<double>> tables;
  std::size_t starts = 0;
  while (tables.size() < 24 && starts < 400) {
    ++starts;
    const auto opt = refine_planar(g, testing::uniform(-kPi, kPi), testing::uniform(-kPi, kPi), kPi / 4, 5000);
    if (std::abs(opt.value - kG1Value) > 1e-7) continue;
    const auto ang = canonical_angles(opt.alpha1, opt.beta1);
    tables.push_back(correlation_table(g, planar_strategy(g, ang)));
  }
  ASSERT_GE(tables.size(), 20u) << "after " << starts << " starts";
  for (std::size_t i = 0; i < tables.size(); ++i)
    for (std::size_t j = i + 1; j < tables.size(); ++j)
      for (std::size_t k = 0; k < tables[i].size(); ++k) EXPECT_NEAR(tables[i][k], tables[j][k], 1e-5);
}

}  // namespace
}  // namespace nonlocal
