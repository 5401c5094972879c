#include "nonlocal/steering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nonlocal/errors.hpp"

namespace nonlocal {

namespace {

constexpr double kDistributionTol = 1e-9;

}  // namespace

CMatrix AssemblageEntry::normalized() const {
  if (p <= 0.0) throw Error(ErrorCode::NumericFailure, "cannot normalize a zero-probability state");
  return sigma * Complex(1.0 / p);
}

CMatrix Assemblage::marginal(std::size_t input) const {
  CMatrix sum = at(input, 0).sigma;
  for (std::size_t o = 1; o < n_outputs; ++o) sum += at(input, o).sigma;
  return sum;
}

double Assemblage::no_signaling_deviation() const {
  double worst = 0.0;
  for (std::size_t x = 0; x < n_inputs; ++x)
    for (std::size_t x2 = x + 1; x2 < n_inputs; ++x2)
      worst = std::max(worst, (marginal(x) - marginal(x2)).frobenius_norm());
  return worst;
}

Assemblage steer_assemblage(const QuantumStrategy& strategy, Side side) {
  if (strategy.state.size() != strategy.d_a * strategy.d_b) {
    throw Error(ErrorCode::DimensionMismatch, "state length does not match local dimensions");
  }
  const bool alice = side == Side::AliceSteersBob;
  const MeasurementSet& meas = alice ? strategy.meas_a : strategy.meas_b;
  const std::size_t d_local = alice ? strategy.d_a : strategy.d_b;
  if (meas.empty()) throw Error(ErrorCode::DimensionMismatch, "steering party has no measurements");

  const CMatrix rho = outer(strategy.state, strategy.state);
  Assemblage out;
  out.side = side;
  out.n_inputs = meas.size();
  out.n_outputs = meas.front().outcomes();
  for (const auto& m : meas) {
    if (m.outcomes() != out.n_outputs || m.dim() != d_local) {
      throw Error(ErrorCode::DimensionMismatch, "steering measurements have inconsistent shapes");
    }
    for (const auto& proj : m.projectors) {
      AssemblageEntry e;
      if (alice) {
        e.sigma = partial_trace_first(kron(proj, CMatrix::identity(strategy.d_b)) * rho, strategy.d_a,
                                      strategy.d_b);
      } else {
        e.sigma = partial_trace_second(kron(CMatrix::identity(strategy.d_a), proj) * rho, strategy.d_a,
                                       strategy.d_b);
      }
      e.p = e.sigma.trace().real();
      out.entries.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<SteeringVerdict> saturation_report(const GameSpec& spec, const QuantumStrategy& strategy,
                                               Side side) {
  const bool alice = side == Side::AliceSteersBob;
  const auto relations = fine_grained_relations(spec, side, alice ? strategy.meas_b : strategy.meas_a);
  const Assemblage assemblage = steer_assemblage(strategy, side);

  std::vector<SteeringVerdict> out;
  out.reserve(relations.size());
  for (const auto& rel : relations) {
    SteeringVerdict v;
    v.input = rel.input;
    v.output = rel.output;
    v.trivial_relation = rel.trivial;
    v.empty_relation = rel.empty();
    const AssemblageEntry& entry = assemblage.at(rel.input, rel.output);
    v.p = entry.p;
    v.xi_canonical = rel.xi;
    v.vacuous = entry.p <= kVacuousTol;
    if (!v.vacuous) v.achieved_canonical = trace_product(entry.normalized(), rel.op);
    if (!rel.empty()) {
      v.xi = rel.xi_normalized;
      v.achieved = v.achieved_canonical / rel.weight;
    }
    v.gap = v.vacuous ? 0.0 : v.xi - v.achieved;
    v.saturated = !v.vacuous && v.gap <= kSaturationTol;
    out.push_back(v);
  }
  return out;
}

NoSignalingCheck ns_assemblage_check(std::size_t n_inputs, std::size_t n_outputs,
                                     std::span<const double> p,
                                     std::span<const CertainStateChoice> states) {
  if (p.size() != n_inputs * n_outputs || states.size() != n_inputs * n_outputs) {
    throw Error(ErrorCode::DimensionMismatch, "assemblage tables do not match input/output counts");
  }
  for (std::size_t x = 0; x < n_inputs; ++x) {
    double total = 0.0;
    for (std::size_t a = 0; a < n_outputs; ++a) {
      const double q = p[x * n_outputs + a];
      if (!(q >= -kDistributionTol)) {
        throw Error(ErrorCode::InvalidDistribution, "negative p(a|x) at x=" + std::to_string(x));
      }
      total += q;
    }
    if (std::abs(total - 1.0) > kDistributionTol) {
      throw Error(ErrorCode::InvalidDistribution,
                  "p(.|x=" + std::to_string(x) + ") sums to " + std::to_string(total));
    }
  }

  std::vector<CMatrix> marginals;
  for (std::size_t x = 0; x < n_inputs; ++x) {
    CMatrix sum;
    for (std::size_t a = 0; a < n_outputs; ++a) {
      const auto& choice = states[x * n_outputs + a];
      if (choice.basis.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "empty certain space");
      }
      const std::size_t d = choice.basis[0].size();
      CMatrix rho;
      if (p[x * n_outputs + a] <= kVacuousTol) {
        // Weightless in the mixture, whatever the certain space looks like.
        rho = CMatrix::zeros(d, d);
      } else if (choice.basis.size() == 1) {
        rho = outer(choice.basis[0], choice.basis[0]);
      } else {
        if (!choice.steered) {
          throw Error(ErrorCode::AmbiguousDegenerate, "degenerate certain space at (x,a)=(" +
                                                          std::to_string(x) + "," + std::to_string(a) +
                                                          ") has no steered reference state");
        }
        CMatrix proj = CMatrix::zeros(d, d);
        for (const auto& v : choice.basis) proj += outer(v, v);
        rho = proj * *choice.steered * proj;
        const double t = rho.trace().real();
        // A steered state orthogonal to the space selects no member; take
        // the uniform mixture over the space instead.
        if (t <= kVacuousTol) {
          rho = proj * Complex(1.0 / static_cast<double>(choice.basis.size()));
        } else {
          rho *= Complex(1.0 / t);
        }
      }
      rho *= Complex(std::max(0.0, p[x * n_outputs + a]));
      if (a == 0) {
        sum = std::move(rho);
      } else {
        sum += rho;
      }
    }
    marginals.push_back(std::move(sum));
  }

  NoSignalingCheck out;
  for (std::size_t x = 0; x < n_inputs; ++x)
    for (std::size_t x2 = x + 1; x2 < n_inputs; ++x2)
      out.deviation = std::max(out.deviation, (marginals[x] - marginals[x2]).frobenius_norm());
  out.passes = out.deviation <= kNoSignalingTol;
  return out;
}

SideReport side_report(const GameSpec& spec, const QuantumStrategy& strategy, Side side) {
  const bool alice = side == Side::AliceSteersBob;
  SideReport rep;
  rep.side = side;
  rep.relations = fine_grained_relations(spec, side, alice ? strategy.meas_b : strategy.meas_a);
  rep.verdicts = saturation_report(spec, strategy, side);
  const Assemblage assemblage = steer_assemblage(strategy, side);

  rep.all_saturated = true;
  std::vector<double> p;
  std::vector<CertainStateChoice> choices;
  for (std::size_t k = 0; k < rep.relations.size(); ++k) {
    const auto& rel = rep.relations[k];
    const auto& verdict = rep.verdicts[k];
    const double marginal = alice ? spec.pi_a(rel.input) : spec.pi_b(rel.input);
    rep.up_bound += marginal * verdict.p * rel.xi;
    if (!verdict.vacuous && !verdict.saturated) rep.all_saturated = false;

    p.push_back(verdict.p);
    CertainStateChoice choice;
    choice.basis = maximally_certain(rel).basis;
    if (!verdict.vacuous) choice.steered = assemblage.at(rel.input, rel.output).normalized();
    choices.push_back(std::move(choice));
  }
  // Probabilities come from a normalized state; renormalize away rounding.
  for (std::size_t x = 0; x < assemblage.n_inputs; ++x) {
    double total = 0.0;
    for (std::size_t a = 0; a < assemblage.n_outputs; ++a) total += p[x * assemblage.n_outputs + a];
    for (std::size_t a = 0; a < assemblage.n_outputs; ++a) p[x * assemblage.n_outputs + a] /= total;
  }
  rep.certain_assemblage = ns_assemblage_check(assemblage.n_inputs, assemblage.n_outputs, p, choices);
  return rep;
}

UPQGVReport upqgv_verdict(const GameSpec& spec, const QuantumStrategy& strategy,
                          std::optional<ClassicalResult> classical) {
  strategy.validate();
  UPQGVReport rep;
  rep.game_id = spec.id;
  rep.omega_c = classical ? classical->omega_c : classical_value(spec).omega_c;
  rep.omega_q = quantum_game_value(spec, strategy);
  rep.alice_steers_bob = side_report(spec, strategy, Side::AliceSteersBob);
  rep.bob_steers_alice = side_report(spec, strategy, Side::BobSteersAlice);
  rep.up_bound = std::min(rep.alice_steers_bob.up_bound, rep.bob_steers_alice.up_bound);
  rep.ns_assemblage_deviation = std::min(rep.alice_steers_bob.certain_assemblage.deviation,
                                         rep.bob_steers_alice.certain_assemblage.deviation);
  rep.correspondence_holds = rep.alice_steers_bob.all_saturated || rep.bob_steers_alice.all_saturated;
  return rep;
}

}  // namespace nonlocal
