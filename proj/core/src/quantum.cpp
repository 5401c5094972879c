#include "nonlocal/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nonlocal/errors.hpp"
#include "nonlocal/parallel.hpp"

namespace nonlocal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMeasurementTol = 1e-10;
constexpr double kStateNormTol = 1e-12;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

double wrap_angle(double t) {
  t = std::remainder(t, 2.0 * kPi);
  // remainder maps to [-pi, pi]; keep +pi rather than -pi for the boundary.
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

void check_planar_game(const GameSpec& spec) {
  if (spec.n_x != 2 || spec.n_y != 2 || spec.n_a != 2 || spec.n_b != 2) {
    throw Error(ErrorCode::NotPlanarApplicable,
                "planar qubit search needs a 2-input 2-output game, '" + spec.id + "' has inputs " +
                    std::to_string(spec.n_x) + "x" + std::to_string(spec.n_y) + " and outputs " +
                    std::to_string(spec.n_a) + "x" + std::to_string(spec.n_b));
  }
}

void check_measurements(const MeasurementSet& set, std::size_t inputs, std::size_t outputs,
                        std::size_t dim, const char* party) {
  if (set.size() != inputs) {
    throw Error(ErrorCode::DimensionMismatch, std::string(party) + " has " +
                                                  std::to_string(set.size()) + " measurements, game needs " +
                                                  std::to_string(inputs));
  }
  for (const auto& m : set) {
    if (m.outcomes() != outputs) {
      throw Error(ErrorCode::DimensionMismatch, std::string(party) + " measurement has " +
                                                    std::to_string(m.outcomes()) + " outcomes, game needs " +
                                                    std::to_string(outputs));
    }
    for (const auto& p : m.projectors)
      if (p.rows() != dim || p.cols() != dim)
        throw Error(ErrorCode::DimensionMismatch, std::string(party) + " projector has wrong dimension");
  }
}

// Maximizes f on [lo, hi]; returns the best abscissa seen and its value.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

double ProjectiveMeasurement::defect() const {
  if (projectors.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t d = dim();
  CMatrix sum = CMatrix::zeros(d, d);
  double worst = 0.0;
  for (const auto& p : projectors) {
    if (p.rows() != d || p.cols() != d) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, p.hermiticity_defect());
    worst = std::max(worst, (p * p - p).frobenius_norm());
    sum += p;
  }
  return std::max(worst, (sum - CMatrix::identity(d)).frobenius_norm());
}

void QuantumStrategy::validate() const {
  if (state.size() != d_a * d_b) {
    throw Error(ErrorCode::DimensionMismatch, "state length " + std::to_string(state.size()) +
                                                  " does not match " + std::to_string(d_a) + "x" +
                                                  std::to_string(d_b));
  }
  if (std::abs(norm(state) - 1.0) > kStateNormTol) {
    throw Error(ErrorCode::RangeError, "state is not normalized");
  }
  auto check = [](const MeasurementSet& set, std::size_t d, const char* party) {
    for (const auto& m : set) {
      if (m.dim() != d) {
        throw Error(ErrorCode::DimensionMismatch, std::string(party) + " projector dimension mismatch");
      }
      if (m.defect() > kMeasurementTol) {
        throw Error(ErrorCode::RangeError, std::string(party) + " measurement is not projective and complete");
      }
    }
  };
  check(meas_a, d_a, "Alice");
  check(meas_b, d_b, "Bob");
}

ProjectiveMeasurement planar_measurement(double theta) {
  const Complex e = std::polar(1.0, theta);
  const CMatrix m{{0.0, e}, {std::conj(e), 0.0}};
  const CMatrix id = CMatrix::identity(2);
  return {{(id + m) * Complex(0.5), (id - m) * Complex(0.5)}};
}

std::pair<MeasurementSet, MeasurementSet> planar_measurements(const PlanarAngles& angles) {
  auto check = [](const std::vector<double>& v, const char* name) {
    if (v.empty() || v.front() != 0.0) {
      throw Error(ErrorCode::RangeError, std::string(name) + "[0] must be 0");
    }
    for (double t : v)
      if (!(t >= -kPi && t <= kPi)) throw Error(ErrorCode::RangeError, std::string(name) + " outside [-pi, pi]");
  };
  check(angles.alpha, "alpha");
  check(angles.beta, "beta");
  MeasurementSet a, b;
  for (double t : angles.alpha) a.push_back(planar_measurement(t));
  for (double t : angles.beta) b.push_back(planar_measurement(t));
  return {std::move(a), std::move(b)};
}

CMatrix bell_operator(const GameSpec& spec, const MeasurementSet& meas_a, const MeasurementSet& meas_b) {
  if (meas_a.empty() || meas_b.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "empty measurement set");
  }
  const std::size_t d_a = meas_a.front().dim();
  const std::size_t d_b = meas_b.front().dim();
  check_measurements(meas_a, spec.n_x, spec.n_a, d_a, "Alice");
  check_measurements(meas_b, spec.n_y, spec.n_b, d_b, "Bob");

  CMatrix bell = CMatrix::zeros(d_a * d_b, d_a * d_b);
  for (std::size_t x = 0; x < spec.n_x; ++x)
    for (std::size_t y = 0; y < spec.n_y; ++y) {
      const double p = spec.pi(x, y);
      if (p == 0.0) continue;
      for (std::size_t a = 0; a < spec.n_a; ++a) {
        // sum_b V(a,b|x,y) P^y_b, then one Kronecker product per a.
        CMatrix bob = CMatrix::zeros(d_b, d_b);
        bool any = false;
        for (std::size_t b = 0; b < spec.n_b; ++b) {
          const double w = spec.v(x, y, a, b);
          if (w == 0.0) continue;
          bob += meas_b[y].projectors[b] * Complex(w);
          any = true;
        }
        if (any) bell += kron(meas_a[x].projectors[a], bob) * Complex(p);
      }
    }
  return bell;
}

std::vector<double> correlation_table(const GameSpec& spec, const QuantumStrategy& strategy) {
  if (strategy.state.size() != strategy.d_a * strategy.d_b) {
    throw Error(ErrorCode::DimensionMismatch, "state length does not match local dimensions");
  }
  check_measurements(strategy.meas_a, spec.n_x, spec.n_a, strategy.d_a, "Alice");
  check_measurements(strategy.meas_b, spec.n_y, spec.n_b, strategy.d_b, "Bob");
  std::vector<double> table(spec.predicate.size());
  for (std::size_t x = 0; x < spec.n_x; ++x)
    for (std::size_t y = 0; y < spec.n_y; ++y)
      for (std::size_t a = 0; a < spec.n_a; ++a)
        for (std::size_t b = 0; b < spec.n_b; ++b) {
          const CMatrix joint = kron(strategy.meas_a[x].projectors[a], strategy.meas_b[y].projectors[b]);
          table[spec.predicate_index(x, y, a, b)] = expectation(joint, strategy.state);
        }
  return table;
}

double quantum_game_value(const GameSpec& spec, const QuantumStrategy& strategy) {
  const auto table = correlation_table(spec, strategy);
  double value = 0.0;
  for (std::size_t x = 0; x < spec.n_x; ++x)
    for (std::size_t y = 0; y < spec.n_y; ++y)
      for (std::size_t a = 0; a < spec.n_a; ++a)
        for (std::size_t b = 0; b < spec.n_b; ++b)
          value += spec.pi(x, y) * spec.v(x, y, a, b) * table[spec.predicate_index(x, y, a, b)];
  return value;
}

QuantumStrategy planar_strategy(const GameSpec& spec, const PlanarAngles& angles) {
  auto [meas_a, meas_b] = planar_measurements(angles);
  const auto eig = eig_hermitian(bell_operator(spec, meas_a, meas_b));
  QuantumStrategy s;
  s.d_a = 2;
  s.d_b = 2;
  s.state = canonical_phase(eig.vector(eig.size() - 1));
  s.meas_a = std::move(meas_a);
  s.meas_b = std::move(meas_b);
  return s;
}

double planar_objective(const GameSpec& spec, double alpha1, double beta1) {
  const MeasurementSet a{planar_measurement(0.0), planar_measurement(alpha1)};
  const MeasurementSet b{planar_measurement(0.0), planar_measurement(beta1)};
  return eig_hermitian(bell_operator(spec, a, b)).max_value();
}

LocalOptimum refine_planar(const GameSpec& spec, double alpha1, double beta1, double bracket,
                           std::size_t max_rounds, double step_tol) {
  check_planar_game(spec);
  LocalOptimum opt{alpha1, beta1, planar_objective(spec, alpha1, beta1), 0};
  const double line_tol = step_tol * 0.1;
  for (; opt.rounds < max_rounds; ++opt.rounds) {
    double moved = 0.0;
    {
      auto [t, v] = golden_max([&](double s) { return planar_objective(spec, s, opt.beta1); },
                               opt.alpha1 - bracket, opt.alpha1 + bracket, line_tol);
      if (v > opt.value) {
        moved += std::abs(t - opt.alpha1);
        opt.alpha1 = t;
        opt.value = v;
      }
    }
    {
      auto [t, v] = golden_max([&](double s) { return planar_objective(spec, opt.alpha1, s); },
                               opt.beta1 - bracket, opt.beta1 + bracket, line_tol);
      if (v > opt.value) {
        moved += std::abs(t - opt.beta1);
        opt.beta1 = t;
        opt.value = v;
      }
    }
    if (moved < step_tol) {
      ++opt.rounds;
      break;
    }
  }
  return opt;
}

PlanarAngles canonical_angles(double alpha1, double beta1) {
  double a = wrap_angle(alpha1);
  double b = wrap_angle(beta1);
  if (a < 0.0 || (a == 0.0 && b < 0.0)) {
    a = wrap_angle(-a);
    b = wrap_angle(-b);
  }
  return {{0.0, a}, {0.0, b}};
}

OptimalSolution optimize_planar(const GameSpec& spec, const PlanarSearchOptions& options) {
  check_planar_game(spec);
  if (options.grid_points < 64) {
    throw Error(ErrorCode::RangeError, "grid_points must be at least 64");
  }
  const std::size_t n = options.grid_points;
  const double step = 2.0 * kPi / static_cast<double>(n - 1);
  auto coord = [&](std::size_t i) { return -kPi + step * static_cast<double>(i); };

  struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t i = 0, j = 0;
  };
  const unsigned workers = resolve_workers(options.workers);
  std::vector<Best> partial(std::max<std::size_t>(1, std::min<std::size_t>(workers, n)));
  parallel_chunks(n, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Best& best = partial[chunk];
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double v = planar_objective(spec, coord(i), coord(j));
        if (v > best.value) best = {v, i, j};
      }
  });
  Best best;
  for (const auto& p : partial)
    if (p.value > best.value) best = p;

  const LocalOptimum opt =
      refine_planar(spec, coord(best.i), coord(best.j), step, options.refine_iters, options.step_tol);
  const PlanarAngles angles = canonical_angles(opt.alpha1, opt.beta1);

  OptimalSolution sol;
  sol.strategy = planar_strategy(spec, angles);
  sol.value = expectation(bell_operator(spec, sol.strategy.meas_a, sol.strategy.meas_b), sol.strategy.state);
  sol.angles = angles;
  if (const auto id = match_catalog(spec); id == "g1") {
    sol.residual = g1_eigen_polynomial(4.0 * sol.value, angles.alpha[1], angles.beta[1]);
  } else if (id == "g2") {
    sol.residual = g2_eigen_polynomial(4.0 * sol.value, angles.alpha[1], angles.beta[1]);
  }
  return sol;
}

PlanarAngles closed_form_angles(std::string_view id) {
  if (id == "g1") {
    const double a1 = 2.0 * std::atan(std::sqrt((5.0 + std::sqrt(13.0)) / 6.0));
    return {{0.0, a1}, {0.0, a1 - kPi}};
  }
  if (id == "g2") {
    const double eta = std::cbrt((43.0 + 9.0 * std::sqrt(29.0)) / 2.0);
    const double a1 = 2.0 * std::atan(std::sqrt((eta * eta + 2.0 * eta - 5.0) / (3.0 * eta)));
    return {{0.0, a1}, {0.0, a1}};
  }
  throw Error(ErrorCode::UnknownGame, "no closed-form optimum for '" + std::string(id) + "'");
}

double closed_form_value(std::string_view id) {
  if (id == "g1") return (16.0 + std::sqrt(13.0)) / 36.0;
  if (id == "g2") {
    const double r = std::sqrt(29.0);
    return (35.0 + std::cbrt(15740.0 - 972.0 * r) + std::pow(2.0, 2.0 / 3.0) * std::cbrt(3935.0 + 243.0 * r)) /
           108.0;
  }
  throw Error(ErrorCode::UnknownGame, "no closed-form value for '" + std::string(id) + "'");
}

OptimalSolution closed_form_optimum(std::string_view id) {
  const PlanarAngles angles = closed_form_angles(id);
  const GameSpec spec = builtin_game(id);
  OptimalSolution sol;
  sol.strategy = planar_strategy(spec, angles);
  sol.value = expectation(bell_operator(spec, sol.strategy.meas_a, sol.strategy.meas_b), sol.strategy.state);
  sol.angles = angles;
  const double lambda = 4.0 * sol.value;
  sol.residual = id == "g1" ? g1_eigen_polynomial(lambda, angles.alpha[1], angles.beta[1])
                            : g2_eigen_polynomial(lambda, angles.alpha[1], angles.beta[1]);
  return sol;
}

double g1_eigen_polynomial(double l, double a1, double b1) {
  const double c = std::cos(a1 / 2.0);
  const double sa = std::sin(a1), sb = std::sin(b1);
  return 2.0 * l * (-19.0 + l * (33.0 + 4.0 * l * (-5.0 + l))) +
         2.0 * (l - 2.0) * (l - 1.0) * (std::cos(a1) - 2.0 * c * c * std::cos(b1)) + 4.0 - sa * sa * sb * sb;
}

double g2_eigen_polynomial(double l, double a1, double b1) {
  const double ca = std::cos(a1), cb = std::cos(b1);
  const double sa = std::sin(a1), sb = std::sin(b1);
  return l * (-30.0 + l * (33.0 + 2.0 * l * (l - 7.0))) + 9.0 - sa * sa * sb * sb +
         (l - 3.0) * (l - 1.0) * (ca - ca * cb + cb);
}

double cglmp_kappa() { return (std::sqrt(11.0) - std::sqrt(3.0)) / 2.0; }

QuantumStrategy cglmp_strategy() {
  const Complex omega = std::polar(1.0, 2.0 * kPi / 3.0);
  // Rank-one projector (1/3)|v><v| onto v = (1, w e^{i t}, w^2 e^{2 i t}).
  auto fourier = [&](double t, Complex w) {
    const CVector v{1.0, w * std::polar(1.0, t), w * w * std::polar(1.0, 2.0 * t)};
    return outer(v, v) * Complex(1.0 / 3.0);
  };
  QuantumStrategy s;
  s.d_a = 3;
  s.d_b = 3;
  const double k = cglmp_kappa();
  const double n = std::sqrt(2.0 + k * k);
  s.state = CVector(9, 0.0);
  s.state[0] = 1.0 / n;
  s.state[4] = k / n;
  s.state[8] = 1.0 / n;
  for (double alpha : {0.0, kPi / 3.0}) {
    ProjectiveMeasurement m;
    for (int a = 0; a < 3; ++a) m.projectors.push_back(fourier(alpha, std::pow(omega, a)));
    s.meas_a.push_back(std::move(m));
  }
  for (double beta : {-kPi / 6.0, kPi / 6.0}) {
    ProjectiveMeasurement m;
    for (int b = 0; b < 3; ++b) m.projectors.push_back(fourier(beta, std::pow(omega, -b)));
    s.meas_b.push_back(std::move(m));
  }
  return s;
}

}  // namespace nonlocal
