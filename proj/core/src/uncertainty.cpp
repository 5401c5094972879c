#include "nonlocal/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "nonlocal/errors.hpp"

namespace nonlocal {

namespace {

constexpr double kDegeneracyTol = 1e-8;
constexpr double kTrivialTol = 1e-9;

}  // namespace

std::string_view to_string(Side side) {
  return side == Side::AliceSteersBob ? "alice_steers_bob" : "bob_steers_alice";
}

double FineGrainedRelation::xi_reported(const GameSpec& spec) const {
  return spec.binary_predicate ? xi_normalized : xi_unweighted;
}

std::vector<FineGrainedRelation> fine_grained_relations(const GameSpec& spec, Side side,
                                                        const MeasurementSet& remote_meas) {
  const bool alice = side == Side::AliceSteersBob;
  const std::size_t n_in = alice ? spec.n_x : spec.n_y;
  const std::size_t n_out = alice ? spec.n_a : spec.n_b;
  const std::size_t n_remote_in = alice ? spec.n_y : spec.n_x;
  const std::size_t n_remote_out = alice ? spec.n_b : spec.n_a;

  if (remote_meas.size() != n_remote_in || remote_meas.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "remote party needs " + std::to_string(n_remote_in) +
                                                  " measurements, got " + std::to_string(remote_meas.size()));
  }
  const std::size_t d = remote_meas.front().dim();
  for (const auto& m : remote_meas) {
    if (m.outcomes() != n_remote_out || m.dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "remote measurement shape does not match the game");
    }
  }

  // V and conditional input weight seen from the steering party's (s, o) and
  // the remote party's (r, q).
  auto weight_of = [&](std::size_t s, std::size_t o, std::size_t r, std::size_t q) {
    return alice ? spec.v(s, r, o, q) : spec.v(r, s, q, o);
  };
  auto cond = [&](std::size_t s, std::size_t r) {
    return alice ? spec.pi_b_given_a(r, s) : spec.pi_a_given_b(r, s);
  };

  std::vector<FineGrainedRelation> out;
  out.reserve(n_in * n_out);
  for (std::size_t s = 0; s < n_in; ++s) {
    for (std::size_t o = 0; o < n_out; ++o) {
      FineGrainedRelation rel;
      rel.side = side;
      rel.input = s;
      rel.output = o;
      rel.op = CMatrix::zeros(d, d);
      CMatrix unweighted = CMatrix::zeros(d, d);
      for (std::size_t r = 0; r < n_remote_in; ++r) {
        double top = 0.0;
        for (std::size_t q = 0; q < n_remote_out; ++q) {
          const double v = weight_of(s, o, r, q);
          if (v == 0.0) continue;
          top = std::max(top, v);
          rel.op += remote_meas[r].projectors[q] * Complex(cond(s, r) * v);
          unweighted += remote_meas[r].projectors[q] * Complex(v);
        }
        rel.weight += cond(s, r) * top;
      }
      const auto eig = eig_hermitian(rel.op);
      rel.xi = eig.max_value();
      rel.certain_space = eig.top_eigenspace(kDegeneracyTol);
      for (auto& v : rel.certain_space) v = canonical_phase(v);
      rel.xi_unweighted = eig_hermitian(unweighted).max_value();
      rel.xi_normalized = rel.weight > 0.0 ? rel.xi / rel.weight : 0.0;
      if (spec.binary_predicate) {
        rel.trivial = rel.weight > 0.0 && std::abs(rel.xi_normalized - 1.0) <= kTrivialTol;
      }
      out.push_back(std::move(rel));
    }
  }
  return out;
}

CertainSpace maximally_certain(const FineGrainedRelation& rel) {
  CertainSpace space;
  space.basis = rel.certain_space;
  if (space.basis.empty()) {
    const auto eig = eig_hermitian(rel.op);
    space.basis = eig.top_eigenspace(kDegeneracyTol);
  }
  space.degenerate = space.basis.size() > 1;
  return space;
}

}  // namespace nonlocal
