#pragma once

// Probability-weighted vector aggregation and the atan2 score.

#include "polscale/core.hpp"
#include "polscale/positioning.hpp"

#include <optional>
#include <span>

namespace polscale {

using ResultantVector = Vec2;

/// Sum of p_i * v_i over all parties, in registry order. Probabilities are
/// used as given (no renormalization).
ResultantVector resultant(std::span<const double> party_probs, const PartyVectorSet& vectors);

/// Angle measured from the centrist (vertical) axis, left negative:
/// atan2(x, y) in degrees, score = angle / 90. Throws ZeroVector for (0, 0).
Score score_from_vector(const ResultantVector& v);

/// No score when politicalness < tau (the threshold itself passes).
std::optional<Score> score_record(const ClassifiedRecord& record, const PartyVectorSet& vectors,
                                  double tau);

}  // namespace polscale
