#pragma once

// Refinement of party vectors against outlet-level ground truth: minimize the
// outlet MAE over per-party displacements constrained to Euclidean balls.

#include "polscale/core.hpp"
#include "polscale/positioning.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polscale {

struct OptimizationConfig {
    double tau = 0.8;
    /// Ball radius per party (registry order). Zero pins a party.
    std::vector<double> delta;
    double initial_step = 0.1;
    double min_step = 1e-4;
    /// Budget of objective evaluations.
    std::size_t max_iterations = 10000;
    /// Drives the coordinate polling order.
    std::uint64_t seed = 0;

    /// delta_default for every party, 0 for the pinned ones.
    static OptimizationConfig with_pinned(const PartyRegistry& parties, std::span<const PartyId> pinned,
                                          double delta_default = 0.25);
    /// Linke and AfD pinned, 0.25 elsewhere.
    static OptimizationConfig german_default(const PartyRegistry& parties);
};

struct TracePoint {
    std::size_t iteration = 0;
    double mae = 0.0;
};

struct OutletFit {
    std::string outlet;
    double label = 0.0;
    std::size_t n_political = 0;
    double estimate_before = 0.0;
    double estimate_after = 0.0;
};

struct OptimizationResult {
    PartyVectorSet vectors;
    std::vector<Vec2> displacement;
    double mae_before = 0.0;
    double mae_after = 0.0;
    std::vector<TracePoint> trace;
    std::vector<OutletFit> outlets;
    std::size_t evaluations = 0;
    double final_step = 0.0;
};

/// Compass search over the free coordinates (2 per party with delta > 0):
/// poll +/- step along each coordinate in a seeded order, project each trial
/// onto its party's ball, accept strict improvements, halve the step after a
/// sweep without progress, stop below min_step or when the budget is spent.
///
/// Records are grouped by their `outlet` field; only records at or above tau
/// with a non-zero probability vector contribute. Records of unrated outlets
/// are ignored. Throws EmptyOutlet when a rated outlet has no contributing
/// record and InfeasibleConfig for a malformed configuration.
OptimizationResult optimize_vectors(const PartyVectorSet& baseline,
                                    std::span<const ClassifiedRecord> records,
                                    std::span<const OutletRating> ratings,
                                    const OptimizationConfig& config);

/// The optimizer's objective for a fixed displacement, exposed for oracles.
double outlet_mae(const PartyVectorSet& vectors, std::span<const ClassifiedRecord> records,
                  std::span<const OutletRating> ratings, double tau);

/// baseline + displacement; parties with a zero displacement keep their
/// baseline vector bit for bit.
PartyVectorSet displaced(const PartyVectorSet& baseline, std::span<const Vec2> displacement,
                         Provenance provenance = Provenance::Optimized);

}  // namespace polscale
