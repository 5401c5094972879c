#include "nonlocal/classical.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nonlocal/errors.hpp"
#include "nonlocal/parallel.hpp"

namespace nonlocal {

namespace {

constexpr double kTieTol = 1e-12;

// Digit 0 (input 0) is the most significant so that index order is
// lexicographic in (f(0), f(1), ...).
void decode(std::size_t index, std::size_t radix, std::vector<std::size_t>& digits) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    digits[k] = index % radix;
    index /= radix;
  }
}

std::size_t int_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

double strategy_value(const GameSpec& spec, const DeterministicStrategy& s) {
  if (s.f_a.size() != spec.n_x || s.f_b.size() != spec.n_y) {
    throw Error(ErrorCode::RangeError, "strategy tables do not match the game's input counts");
  }
  for (std::size_t x = 0; x < spec.n_x; ++x)
    if (s.f_a[x] >= spec.n_a)
      throw Error(ErrorCode::RangeError, "f_a(" + std::to_string(x) + ") out of range");
  for (std::size_t y = 0; y < spec.n_y; ++y)
    if (s.f_b[y] >= spec.n_b)
      throw Error(ErrorCode::RangeError, "f_b(" + std::to_string(y) + ") out of range");

  double value = 0.0;
  for (std::size_t x = 0; x < spec.n_x; ++x)
    for (std::size_t y = 0; y < spec.n_y; ++y) value += spec.pi(x, y) * spec.v(x, y, s.f_a[x], s.f_b[y]);
  return value;
}

ClassicalResult classical_value(const GameSpec& spec, unsigned workers) {
  const double count = std::pow(static_cast<double>(spec.n_a), static_cast<double>(spec.n_x)) *
                       std::pow(static_cast<double>(spec.n_b), static_cast<double>(spec.n_y));
  if (count > kEnumerationLimit) {
    throw Error(ErrorCode::TooLarge, "enumeration of " + std::to_string(count) +
                                         " deterministic strategies exceeds the limit");
  }
  if (spec.n_a == 0 || spec.n_b == 0) {
    throw Error(ErrorCode::RangeError, "game has an empty output set");
  }
  const std::size_t alice_count = int_pow(spec.n_a, spec.n_x);
  const std::size_t bob_count = int_pow(spec.n_b, spec.n_y);

  struct Partial {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<DeterministicStrategy> ties;
  };
  const unsigned n_workers = resolve_workers(workers);
  std::vector<Partial> partials(std::max<std::size_t>(1, std::min<std::size_t>(n_workers, alice_count)));

  parallel_chunks(alice_count, n_workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Partial& part = partials[chunk];
    std::vector<std::size_t> f_a(spec.n_x), f_b(spec.n_y);
    // gain[y * n_b + b] = sum_x pi(x,y) V(f_a(x), b | x, y)
    std::vector<double> gain(spec.n_y * spec.n_b);
    for (std::size_t ia = begin; ia < end; ++ia) {
      decode(ia, spec.n_a, f_a);
      for (std::size_t y = 0; y < spec.n_y; ++y)
        for (std::size_t b = 0; b < spec.n_b; ++b) {
          double g = 0.0;
          for (std::size_t x = 0; x < spec.n_x; ++x) g += spec.pi(x, y) * spec.v(x, y, f_a[x], b);
          gain[y * spec.n_b + b] = g;
        }
      for (std::size_t ib = 0; ib < bob_count; ++ib) {
        decode(ib, spec.n_b, f_b);
        double value = 0.0;
        for (std::size_t y = 0; y < spec.n_y; ++y) value += gain[y * spec.n_b + f_b[y]];
        if (value > part.best + kTieTol) {
          part.best = value;
          part.ties.clear();
        }
        if (value >= part.best - kTieTol) part.ties.push_back({f_a, f_b});
        if (value > part.best) part.best = value;
      }
    }
  });

  ClassicalResult result;
  result.strategies_examined = alice_count * bob_count;
  result.omega_c = -std::numeric_limits<double>::infinity();
  for (const auto& p : partials) result.omega_c = std::max(result.omega_c, p.best);
  for (const auto& p : partials)
    for (const auto& s : p.ties)
      if (strategy_value(spec, s) >= result.omega_c - kTieTol) result.maximizers.push_back(s);
  return result;
}

}  // namespace nonlocal
