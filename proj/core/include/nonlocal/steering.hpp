#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nonlocal/classical.hpp"
#include "nonlocal/game.hpp"
#include "nonlocal/hermitian.hpp"
#include "nonlocal/quantum.hpp"
#include "nonlocal/uncertainty.hpp"

namespace nonlocal {

inline constexpr double kSaturationTol = 1e-6;
inline constexpr double kVacuousTol = 1e-9;
inline constexpr double kNoSignalingTol = 1e-6;

struct AssemblageEntry {
  double p = 0.0;
  CMatrix sigma;  // unnormalized, tr(sigma) = p

  /// sigma / p; throws NumericFailure when p is zero.
  CMatrix normalized() const;
};

/// Conditional states prepared on the remote system by the steering party's
/// measurements, indexed by (input, output).
struct Assemblage {
  Side side = Side::AliceSteersBob;
  std::size_t n_inputs = 0;
  std::size_t n_outputs = 0;
  std::vector<AssemblageEntry> entries;

  const AssemblageEntry& at(std::size_t input, std::size_t output) const {
    return entries[input * n_outputs + output];
  }
  /// sum_a sigma_{a|x}
  CMatrix marginal(std::size_t input) const;
  /// max_{x < x'} || marginal(x) - marginal(x') ||_F
  double no_signaling_deviation() const;
};

/// sigma_{a|x} = tr_A[(P^x_a (x) 1) |psi><psi|] for AliceSteersBob, the
/// mirror partial trace for BobSteersAlice.
Assemblage steer_assemblage(const QuantumStrategy& strategy, Side side);

/// Outcome of steering towards one fine-grained relation. xi, achieved and
/// gap are in the normalized convention (see FineGrainedRelation); the
/// *_canonical fields are the unscaled lambda_max(U) and tr(sigma U).
struct SteeringVerdict {
  std::size_t input = 0;
  std::size_t output = 0;
  double p = 0.0;
  double xi = 0.0;
  double achieved = 0.0;
  double gap = 0.0;
  double xi_canonical = 0.0;
  double achieved_canonical = 0.0;
  bool saturated = false;
  bool vacuous = false;
  bool empty_relation = false;
  std::optional<bool> trivial_relation;
};

std::vector<SteeringVerdict> saturation_report(const GameSpec& spec, const QuantumStrategy& strategy,
                                               Side side);

/// Candidate certain state for one (x,a): the top eigenspace of its relation,
/// plus optionally the state actually steered to, which picks a member of a
/// degenerate eigenspace.
struct CertainStateChoice {
  std::vector<CVector> basis;
  std::optional<CMatrix> steered;
};

struct NoSignalingCheck {
  double deviation = 0.0;
  bool passes = false;
};

/// Builds {p(a|x), certain state} and measures how far it is from obeying
/// sum_a p(a|x) rho_{a|x} = sum_a p(a|x') rho_{a|x'}. `p` and `states` are
/// indexed x * n_outputs + a. Throws InvalidDistribution when p is not a
/// conditional distribution, AmbiguousDegenerate when a degenerate space has
/// no steered reference state.
NoSignalingCheck ns_assemblage_check(std::size_t n_inputs, std::size_t n_outputs,
                                     std::span<const double> p,
                                     std::span<const CertainStateChoice> states);

struct SideReport {
  Side side = Side::AliceSteersBob;
  std::vector<FineGrainedRelation> relations;
  std::vector<SteeringVerdict> verdicts;
  // sum pi(x) p(a|x) xi^{(x,a)} with canonical xi
  double up_bound = 0.0;
  NoSignalingCheck certain_assemblage;
  bool all_saturated = false;
};

struct UPQGVReport {
  std::string game_id;
  double omega_c = 0.0;
  double omega_q = 0.0;
  SideReport alice_steers_bob;
  SideReport bob_steers_alice;
  // Tightest of the two sides' bounds / smallest certain-assemblage deviation.
  double up_bound = 0.0;
  double ns_assemblage_deviation = 0.0;
  bool correspondence_holds = false;
};

SideReport side_report(const GameSpec& spec, const QuantumStrategy& strategy, Side side);

/// Full uncertainty/steering analysis of a strategy. omega_q is the value the
/// strategy achieves; optimality is the caller's responsibility.
UPQGVReport upqgv_verdict(const GameSpec& spec, const QuantumStrategy& strategy,
                          std::optional<ClassicalResult> classical = std::nullopt);

}  // namespace nonlocal
