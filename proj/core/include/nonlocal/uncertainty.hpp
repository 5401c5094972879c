#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nonlocal/game.hpp"
#include "nonlocal/hermitian.hpp"
#include "nonlocal/quantum.hpp"

namespace nonlocal {

/// Which party measures (and steers) and whose system carries the relation.
enum class Side { AliceSteersBob, BobSteersAlice };

std::string_view to_string(Side side);

/// Fine-grained uncertainty relation for one conditioning pair (x,a) (or
/// (y,b) on the mirror side):
///   U = sum_{y,b} pi(y|x) V(a,b|x,y) P^y_b,   <v|U|v> <= xi for every state v.
///
/// Three scalings of the same bound are kept:
///   xi            lambda_max(U); what enters the game-value decomposition.
///   xi_normalized xi / weight with weight = sum_y pi(y|x) max_b V(a,b|x,y);
///                 a relation with xi_normalized = 1 is trivial.
///   xi_unweighted lambda_max(sum_{y,b} V(a,b|x,y) P^y_b), the form without
///                 input weights used for weighted expressions such as CGLMP.
struct FineGrainedRelation {
  Side side = Side::AliceSteersBob;
  std::size_t input = 0;   // x (or y)
  std::size_t output = 0;  // a (or b)
  CMatrix op;
  double weight = 0.0;
  double xi = 0.0;
  double xi_normalized = 0.0;
  double xi_unweighted = 0.0;
  std::vector<CVector> certain_space;
  // Only set for binary predicates; nullopt for weighted games.
  std::optional<bool> trivial;

  bool empty() const noexcept { return weight == 0.0; }
  /// Bound in the convention the game is usually quoted in: normalized for
  /// binary predicates, unweighted for weighted ones.
  double xi_reported(const GameSpec& spec) const;
};

/// One relation per (input, output) of the steering party, lexicographic.
/// `remote_meas` are the measurements of the party whose system carries the
/// relations (Bob's for AliceSteersBob). Throws DimensionMismatch.
std::vector<FineGrainedRelation> fine_grained_relations(const GameSpec& spec, Side side,
                                                        const MeasurementSet& remote_meas);

struct CertainSpace {
  std::vector<CVector> basis;
  bool degenerate = false;
};

/// Top eigenspace of the relation operator (1e-8 relative degeneracy threshold).
CertainSpace maximally_certain(const FineGrainedRelation& rel);

}  // namespace nonlocal
