#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "nonlocal/game.hpp"
#include "nonlocal/hermitian.hpp"

namespace nonlocal {

/// One projector per outcome; Hermitian, idempotent and complete.
struct ProjectiveMeasurement {
  std::vector<CMatrix> projectors;

  std::size_t outcomes() const noexcept { return projectors.size(); }
  std::size_t dim() const noexcept { return projectors.empty() ? 0 : projectors.front().rows(); }
  /// Largest of ||P^2 - P||_F, hermiticity defect and ||sum P - I||_F.
  double defect() const;
};

using MeasurementSet = std::vector<ProjectiveMeasurement>;

/// Angles of the planar qubit family M = ((0, e^{i t}), (e^{-i t}, 0)).
/// alpha[0] = beta[0] = 0 fixes the local-unitary gauge.
struct PlanarAngles {
  std::vector<double> alpha;
  std::vector<double> beta;
};

struct QuantumStrategy {
  std::size_t d_a = 0;
  std::size_t d_b = 0;
  CVector state;  // on C^{d_a} (x) C^{d_b}, Alice's factor first
  MeasurementSet meas_a;
  MeasurementSet meas_b;

  /// Throws DimensionMismatch / RangeError when an invariant fails.
  void validate() const;
};

struct OptimalSolution {
  QuantumStrategy strategy;
  double value = 0.0;
  std::optional<PlanarAngles> angles;
  // Characteristic polynomial evaluated at (4 * value, alpha_1, beta_1); only
  // for games with a known closed form.
  std::optional<double> residual;
};

/// Output 0 is the +1 eigenprojector of M(theta), output 1 the -1 one.
ProjectiveMeasurement planar_measurement(double theta);
std::pair<MeasurementSet, MeasurementSet> planar_measurements(const PlanarAngles& angles);

/// B = sum pi(x,y) V(a,b|x,y) P^x_a (x) P^y_b. Throws DimensionMismatch.
CMatrix bell_operator(const GameSpec& spec, const MeasurementSet& meas_a, const MeasurementSet& meas_b);

/// P(a,b|x,y) = <psi| P^x_a (x) P^y_b |psi>, indexed like GameSpec::predicate.
std::vector<double> correlation_table(const GameSpec& spec, const QuantumStrategy& strategy);
/// sum pi V P(a,b|x,y) evaluated from the correlation table.
double quantum_game_value(const GameSpec& spec, const QuantumStrategy& strategy);

/// Strategy whose state is the top eigenvector of the Bell operator for the
/// given planar angles.
QuantumStrategy planar_strategy(const GameSpec& spec, const PlanarAngles& angles);
double planar_objective(const GameSpec& spec, double alpha1, double beta1);

struct PlanarSearchOptions {
  std::size_t grid_points = 721;
  std::size_t refine_iters = 500;
  double step_tol = 1e-10;
  unsigned workers = 0;
};

/// Grid scan of lambda_max(B(alpha_1, beta_1)) over [-pi, pi]^2 followed by
/// alternating golden-section refinement. Only for 2-input 2-output games
/// (NotPlanarApplicable otherwise); grid_points must be at least 64.
OptimalSolution optimize_planar(const GameSpec& spec, const PlanarSearchOptions& options = {});

struct LocalOptimum {
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double value = 0.0;
  std::size_t rounds = 0;
};

/// Alternating golden-section ascent from (alpha1, beta1); each line search
/// brackets +-`bracket` around the current point. Stops when one round moves
/// both coordinates by less than step_tol.
LocalOptimum refine_planar(const GameSpec& spec, double alpha1, double beta1, double bracket,
                           std::size_t max_rounds, double step_tol = 1e-10);

/// Among the reflection-equivalent optima (alpha, beta) ~ (-alpha, -beta),
/// the one with alpha_1 >= 0; angles wrapped into [-pi, pi].
PlanarAngles canonical_angles(double alpha1, double beta1);

/// Closed-form optimal angles for g1 / g2. Throws UnknownGame otherwise.
PlanarAngles closed_form_angles(std::string_view id);
/// The radical expression for omega_q of g1 / g2.
double closed_form_value(std::string_view id);
OptimalSolution closed_form_optimum(std::string_view id);

/// Characteristic equations of 4B(g) in the planar family; roots are the
/// eigenvalues of 4B.
double g1_eigen_polynomial(double lambda, double alpha1, double beta1);
double g2_eigen_polynomial(double lambda, double alpha1, double beta1);

/// Fixed non-maximally entangled qutrit strategy for the CGLMP expression.
QuantumStrategy cglmp_strategy();
double cglmp_kappa();

}  // namespace nonlocal
