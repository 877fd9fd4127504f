#include "polscale/positioning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polscale {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Counts {
    std::size_t identical = 0;
    std::size_t partial = 0;
    std::size_t opposed = 0;

    void add(Stance sa, Stance sb) {
        if (sa == sb) {
            ++identical;
        } else if (sa == Stance::Neutral || sb == Stance::Neutral) {
            ++partial;
        } else {
            ++opposed;
        }
    }
};

std::string pair_name(const StanceMatrix& m, PartyId a, PartyId b) {
    return "'" + m.parties().name(a) + "' and '" + m.parties().name(b) + "'";
}

}  // namespace

AgreementDistance AgreementDistance::from_counts(std::size_t identical, std::size_t partial,
                                                 std::size_t opposed) {
    const std::size_t total = identical + partial + opposed;
    if (total == 0) throw Error(ErrorCode::NoOverlap, "no shared statements");
    const double d = (0.5 * static_cast<double>(partial) + static_cast<double>(opposed)) /
                     static_cast<double>(total);
    return {identical, partial, opposed, total, d};
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::WahlomatDerived: return "WahlomatDerived";
        case Provenance::Optimized: return "Optimized";
        case Provenance::Manual: return "Manual";
    }
    return "Manual";
}

std::optional<Provenance> parse_provenance(std::string_view text) {
    if (text == "WahlomatDerived") return Provenance::WahlomatDerived;
    if (text == "Optimized") return Provenance::Optimized;
    if (text == "Manual") return Provenance::Manual;
    return std::nullopt;
}

PartyVectorSet::PartyVectorSet(PartyRegistry parties, std::vector<PartyVector> vectors,
                               Provenance provenance)
    : parties_(std::move(parties)), vectors_(std::move(vectors)), provenance_(provenance) {
    if (vectors_.size() != parties_.size()) {
        throw Error(ErrorCode::MissingParty, "vector set has " + std::to_string(vectors_.size()) +
                                                 " vectors for " + std::to_string(parties_.size()) +
                                                 " parties");
    }
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        const auto& v = vectors_[i];
        if (!std::isfinite(v.vx) || !std::isfinite(v.vy) || !std::isfinite(v.theta_deg)) {
            throw Error(ErrorCode::MalformedField,
                        "vector for party '" + parties_.names()[i] + "' is not finite");
        }
    }
}

PartyVectorSet PartyVectorSet::from_angles(PartyRegistry parties, const std::vector<double>& angles_deg,
                                           Provenance provenance) {
    std::vector<PartyVector> vs;
    vs.reserve(angles_deg.size());
    for (double theta : angles_deg) {
        auto u = unit_vector(theta);
        vs.push_back({theta, u.x, u.y});
    }
    return PartyVectorSet(std::move(parties), std::move(vs), provenance);
}

AgreementDistance pairwise_distance(const StanceMatrix& matrix, PartyId a, PartyId b) {
    Counts c;
    for (std::size_t row = 0; row < matrix.statement_count(); ++row) {
        const Stance sa = matrix.at(row, a);
        const Stance sb = matrix.at(row, b);
        if (answered(sa) && answered(sb)) c.add(sa, sb);
    }
    if (c.identical + c.partial + c.opposed == 0) {
        throw Error(ErrorCode::NoOverlap, "parties " + pair_name(matrix, a, b) +
                                              " share no answered statement");
    }
    return AgreementDistance::from_counts(c.identical, c.partial, c.opposed);
}

double mean_group_distance(const StanceMatrix& matrix, PartyId a, PartyId b) {
    const auto labels = matrix.group_labels();
    std::map<std::string, Counts> per_group;
    for (std::size_t row = 0; row < matrix.statement_count(); ++row) {
        const Stance sa = matrix.at(row, a);
        const Stance sb = matrix.at(row, b);
        if (answered(sa) && answered(sb)) per_group[matrix.group(row)].add(sa, sb);
    }
    double sum = 0.0;
    std::size_t n = 0;
    // Fixed label order keeps the floating-point sum reproducible.
    for (const auto& label : labels) {
        auto it = per_group.find(label);
        if (it == per_group.end()) continue;
        const auto& c = it->second;
        sum += AgreementDistance::from_counts(c.identical, c.partial, c.opposed).distance;
        ++n;
    }
    if (n == 0) {
        throw Error(ErrorCode::NoOverlap, "parties " + pair_name(matrix, a, b) +
                                              " share no answered statement in any election");
    }
    return sum / static_cast<double>(n);
}

double party_distance(const StanceMatrix& matrix, PartyId a, PartyId b, DistanceMode mode) {
    return mode == DistanceMode::Pooled ? pairwise_distance(matrix, a, b).distance
                                        : mean_group_distance(matrix, a, b);
}

double relative_angle(double d_to_extreme, double d_to_center, Side side) {
    if (!(d_to_extreme >= 0.0) || !(d_to_center >= 0.0)) {
        throw Error(ErrorCode::OutOfRange, "distances must be non-negative");
    }
    const double sum = d_to_extreme + d_to_center;
    if (sum <= 0.0) {
        throw Error(ErrorCode::DegenerateDistances,
                    "party coincides with both reference anchors (both distances are 0)");
    }
    const double phi = side == Side::Left ? -90.0 : 90.0;
    return std::clamp(phi * d_to_center / sum, -90.0, 90.0);
}

Vec2 unit_vector(double theta_deg) {
    const double rad = theta_deg * kDegToRad;
    return {std::sin(rad), std::cos(rad)};
}

PositioningPlan PositioningPlan::german_default(const PartyRegistry& parties) {
    PositioningPlan plan;
    plan.left_anchor = parties.at("Linke");
    plan.center_anchor = parties.at("FDP");
    plan.right_anchor = parties.at("AfD");
    plan.placements[parties.at("B90")] = {Side::Left, plan.left_anchor, plan.center_anchor};
    plan.placements[parties.at("SPD")] = {Side::Left, plan.left_anchor, plan.center_anchor};
    plan.placements[parties.at("CDU")] = {Side::Right, plan.right_anchor, plan.center_anchor};
    return plan;
}

PartyVectorSet build_vector_set(const StanceMatrix& matrix, const PositioningPlan& plan,
                                DistanceMode mode) {
    const auto& parties = matrix.parties();
    std::vector<double> angles(parties.size(), 0.0);
    std::vector<bool> placed(parties.size(), false);

    auto pin = [&](PartyId id, double theta) {
        if (id.index >= parties.size()) throw Error(ErrorCode::MissingParty, "anchor outside registry");
        angles[id.index] = theta;
        placed[id.index] = true;
    };
    pin(plan.left_anchor, -90.0);
    pin(plan.center_anchor, 0.0);
    pin(plan.right_anchor, 90.0);

    for (const auto& [party, rule] : plan.placements) {
        if (party.index >= parties.size()) {
            throw Error(ErrorCode::MissingParty, "placement for a party outside the registry");
        }
        if (placed[party.index]) continue;  // anchors stay pinned
        try {
            const double d_ext = party_distance(matrix, party, rule.extreme, mode);
            const double d_ctr = party_distance(matrix, party, rule.center, mode);
            angles[party.index] = relative_angle(d_ext, d_ctr, rule.side);
        } catch (const Error& e) {
            throw Error(e.code(), "placing party '" + parties.name(party) + "': " + e.message());
        }
        placed[party.index] = true;
    }

    for (auto id : parties.ids()) {
        if (!placed[id.index]) {
            throw Error(ErrorCode::MissingParty,
                        "party '" + parties.name(id) + "' is neither an anchor nor placed");
        }
    }
    return PartyVectorSet::from_angles(parties, angles, Provenance::WahlomatDerived);
}

}  // namespace polscale
