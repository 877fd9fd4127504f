#pragma once

// Placement of parties on the left-right semicircle from pairwise agreement
// distances over a stance matrix.

#include "polscale/core.hpp"

#include <map>
#include <string_view>
#include <vector>

namespace polscale {

/// Counts over statements both parties answered: I identical, P exactly one
/// neutral, O opposed. distance = (0.5 P + O) / T.
struct AgreementDistance {
    std::size_t identical = 0;
    std::size_t partial = 0;
    std::size_t opposed = 0;
    std::size_t total = 0;
    double distance = 0.0;

    /// Throws NoOverlap when all counts are zero.
    static AgreementDistance from_counts(std::size_t identical, std::size_t partial,
                                         std::size_t opposed);
};

enum class Side { Left, Right };

enum class Provenance { WahlomatDerived, Optimized, Manual };

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view text);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct PartyVector {
    double theta_deg = 0.0;
    double vx = 0.0;
    double vy = 1.0;

    friend bool operator==(const PartyVector&, const PartyVector&) = default;
};

/// One vector per registry party. Derived sets are unit length; optimized
/// sets carry displaced endpoints and are not renormalized.
class PartyVectorSet {
public:
    PartyVectorSet(PartyRegistry parties, std::vector<PartyVector> vectors, Provenance provenance);

    /// Unit vectors from angles in degrees.
    static PartyVectorSet from_angles(PartyRegistry parties, const std::vector<double>& angles_deg,
                                      Provenance provenance);

    const PartyRegistry& parties() const noexcept { return parties_; }
    const PartyVector& at(PartyId id) const { return vectors_.at(id.index); }
    const std::vector<PartyVector>& vectors() const noexcept { return vectors_; }
    Provenance provenance() const noexcept { return provenance_; }

    friend bool operator==(const PartyVectorSet&, const PartyVectorSet&) = default;

private:
    PartyRegistry parties_;
    std::vector<PartyVector> vectors_;
    Provenance provenance_;
};

enum class DistanceMode {
    Pooled,       // all statements counted together
    PerElection,  // distance per statement group, then averaged over groups with overlap
};

/// Pairwise-complete counting: statements where either party is Absent are
/// skipped. Throws NoOverlap (naming both parties) when nothing is shared.
AgreementDistance pairwise_distance(const StanceMatrix& matrix, PartyId a, PartyId b);

/// Unweighted mean of per-group distances over groups where both parties
/// answered at least one statement.
double mean_group_distance(const StanceMatrix& matrix, PartyId a, PartyId b);

double party_distance(const StanceMatrix& matrix, PartyId a, PartyId b, DistanceMode mode);

/// theta = phi * d_center / (d_center + d_extreme), phi = -90 (Left) or +90
/// (Right). Zero distance to the extreme anchor puts the party on it.
double relative_angle(double d_to_extreme, double d_to_center, Side side);

Vec2 unit_vector(double theta_deg);

struct Placement {
    Side side = Side::Left;
    PartyId extreme;
    PartyId center;
};

/// Three fixed anchors plus one placement rule per remaining party.
struct PositioningPlan {
    PartyId left_anchor;
    PartyId center_anchor;
    PartyId right_anchor;
    std::map<PartyId, Placement> placements;

    /// B90 and SPD between Linke and FDP; CDU between FDP and AfD.
    static PositioningPlan german_default(const PartyRegistry& parties);
};

PartyVectorSet build_vector_set(const StanceMatrix& matrix, const PositioningPlan& plan,
                                DistanceMode mode = DistanceMode::Pooled);

}  // namespace polscale
