#include "polscale/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polscale {

ResultantVector resultant(std::span<const double> party_probs, const PartyVectorSet& vectors) {
    if (party_probs.size() != vectors.parties().size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "got " + std::to_string(party_probs.size()) + " probabilities for " +
                        std::to_string(vectors.parties().size()) + " party vectors");
    }
    ResultantVector v;
    for (std::size_t i = 0; i < party_probs.size(); ++i) {
        const auto& pv = vectors.vectors()[i];
        v.x += party_probs[i] * pv.vx;
        v.y += party_probs[i] * pv.vy;
    }
    return v;
}

Score score_from_vector(const ResultantVector& v) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw Error(ErrorCode::MalformedField, "resultant vector is not finite");
    }
    if (v.x == 0.0 && v.y == 0.0) {
        throw Error(ErrorCode::ZeroVector, "resultant vector is (0, 0); record carries no party signal");
    }
    const double angle = std::atan2(v.x, v.y) * (180.0 / std::numbers::pi);
    // Only a vector set with a downward-pointing party can put y < 0; such
    // texts lie beyond an extreme and are clamped onto it.
    return Score::from_angle(std::clamp(angle, -90.0, 90.0));
}

std::optional<Score> score_record(const ClassifiedRecord& record, const PartyVectorSet& vectors,
                                  double tau) {
    if (record.politicalness < tau) return std::nullopt;
    try {
        return score_from_vector(resultant(record.party_probs, vectors));
    } catch (const Error& e) {
        throw Error(e.code(), "record '" + record.record_id + "': " + e.message());
    }
}

}  // namespace polscale
