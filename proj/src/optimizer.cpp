#include "polscale/optimizer.hpp"

#include "polscale/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

namespace polscale {

OptimizationConfig OptimizationConfig::with_pinned(const PartyRegistry& parties,
                                                   std::span<const PartyId> pinned,
                                                   double delta_default) {
    OptimizationConfig cfg;
    cfg.delta.assign(parties.size(), delta_default);
    for (auto id : pinned) cfg.delta.at(id.index) = 0.0;
    return cfg;
}

OptimizationConfig OptimizationConfig::german_default(const PartyRegistry& parties) {
    const PartyId pinned[] = {parties.at("Linke"), parties.at("AfD")};
    return with_pinned(parties, pinned);
}

PartyVectorSet displaced(const PartyVectorSet& baseline, std::span<const Vec2> displacement,
                         Provenance provenance) {
    if (displacement.size() != baseline.vectors().size()) {
        throw Error(ErrorCode::DimensionMismatch, "displacement does not cover every party");
    }
    std::vector<PartyVector> out = baseline.vectors();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Vec2 d = displacement[i];
        if (d.x == 0.0 && d.y == 0.0) continue;
        out[i].vx += d.x;
        out[i].vy += d.y;
        out[i].theta_deg = std::atan2(out[i].vx, out[i].vy) * (180.0 / std::numbers::pi);
    }
    return PartyVectorSet(baseline.parties(), std::move(out), provenance);
}

namespace {

struct OutletData {
    std::string outlet;
    double label = 0.0;
    // Row-major n_records x n_parties.
    std::vector<double> probs;
    std::size_t n = 0;
};

bool has_signal(const ClassifiedRecord& r) {
    return std::any_of(r.party_probs.begin(), r.party_probs.end(), [](double p) { return p != 0.0; });
}

std::vector<OutletData> group_outlets(std::span<const ClassifiedRecord> records,
                                      std::span<const OutletRating> ratings, std::size_t n_parties,
                                      double tau) {
    std::vector<OutletData> outlets;
    std::map<std::string, std::size_t> index;
    for (const auto& r : ratings) {
        if (!index.emplace(r.outlet, outlets.size()).second) {
            throw Error(ErrorCode::MalformedField, "outlet '" + r.outlet + "' is rated twice");
        }
        outlets.push_back({r.outlet, r.scaled_label, {}, 0});
    }
    for (const auto& rec : records) {
        if (!rec.outlet) continue;
        auto it = index.find(*rec.outlet);
        if (it == index.end()) continue;
        if (rec.politicalness < tau || !has_signal(rec)) continue;
        if (rec.party_probs.size() != n_parties) {
            throw Error(ErrorCode::DimensionMismatch,
                        "record '" + rec.record_id + "' does not match the party registry");
        }
        auto& o = outlets[it->second];
        o.probs.insert(o.probs.end(), rec.party_probs.begin(), rec.party_probs.end());
        ++o.n;
    }
    for (const auto& o : outlets) {
        if (o.n == 0) {
            throw Error(ErrorCode::EmptyOutlet,
                        "outlet '" + o.outlet + "' has no political record at tau = " + std::to_string(tau));
        }
    }
    return outlets;
}

/// Mean score per outlet; NaN if some record has a zero resultant.
std::vector<double> outlet_estimates(const std::vector<OutletData>& outlets,
                                     const std::vector<PartyVector>& vectors) {
    std::vector<double> out;
    out.reserve(outlets.size());
    const std::size_t k = vectors.size();
    for (const auto& o : outlets) {
        double sum = 0.0;
        for (std::size_t r = 0; r < o.n; ++r) {
            const double* p = o.probs.data() + r * k;
            double x = 0.0, y = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                x += p[i] * vectors[i].vx;
                y += p[i] * vectors[i].vy;
            }
            if (x == 0.0 && y == 0.0) {
                sum = std::numeric_limits<double>::quiet_NaN();
                break;
            }
            sum += score_from_vector({x, y}).value;
        }
        out.push_back(sum / static_cast<double>(o.n));
    }
    return out;
}

double mae_of(const std::vector<OutletData>& outlets, const std::vector<double>& estimates) {
    double sum = 0.0;
    for (std::size_t i = 0; i < outlets.size(); ++i) {
        if (std::isnan(estimates[i])) return std::numeric_limits<double>::infinity();
        sum += std::abs(estimates[i] - outlets[i].label);
    }
    return sum / static_cast<double>(outlets.size());
}

std::vector<PartyVector> shifted(const std::vector<PartyVector>& base, const std::vector<Vec2>& disp) {
    std::vector<PartyVector> out = base;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].vx += disp[i].x;
        out[i].vy += disp[i].y;
    }
    return out;
}

/// Uniform integer in [0, bound) by rejection; independent of the standard
/// library's distribution implementation.
std::size_t uniform_below(std::mt19937_64& rng, std::size_t bound) {
    const std::uint64_t range = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % range);
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[uniform_below(rng, i)]);
    }
}

void validate(const OptimizationConfig& cfg, std::size_t n_parties) {
    if (cfg.delta.size() != n_parties) {
        throw Error(ErrorCode::InfeasibleConfig, "delta has " + std::to_string(cfg.delta.size()) +
                                                     " entries for " + std::to_string(n_parties) +
                                                     " parties");
    }
    for (double d : cfg.delta) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw Error(ErrorCode::InfeasibleConfig, "delta must be finite and non-negative");
        }
    }
    if (!(cfg.initial_step > 0.0) || !(cfg.min_step > 0.0) || !(cfg.min_step < cfg.initial_step)) {
        throw Error(ErrorCode::InfeasibleConfig, "require 0 < min_step < initial_step");
    }
    if (!std::isfinite(cfg.tau)) throw Error(ErrorCode::InfeasibleConfig, "tau must be finite");
}

}  // namespace

double outlet_mae(const PartyVectorSet& vectors, std::span<const ClassifiedRecord> records,
                  std::span<const OutletRating> ratings, double tau) {
    const auto outlets = group_outlets(records, ratings, vectors.vectors().size(), tau);
    return mae_of(outlets, outlet_estimates(outlets, vectors.vectors()));
}

OptimizationResult optimize_vectors(const PartyVectorSet& baseline,
                                    std::span<const ClassifiedRecord> records,
                                    std::span<const OutletRating> ratings,
                                    const OptimizationConfig& config) {
    const std::size_t k = baseline.vectors().size();
    validate(config, k);
    if (ratings.empty()) throw Error(ErrorCode::NoEstimates, "no rated outlets to optimize against");
    const auto outlets = group_outlets(records, ratings, k, config.tau);
    const auto& base = baseline.vectors();

    // Coordinate c maps to party c / 2, axis c % 2.
    std::vector<std::size_t> coords;
    for (std::size_t p = 0; p < k; ++p) {
        if (config.delta[p] > 0.0) {
            coords.push_back(2 * p);
            coords.push_back(2 * p + 1);
        }
    }

    std::vector<Vec2> disp(k);
    const auto before = outlet_estimates(outlets, base);
    double best = mae_of(outlets, before);
    const double mae_before = best;
    std::size_t evals = 1;
    std::vector<TracePoint> trace{{0, best}};

    std::mt19937_64 rng(config.seed);
    double step = config.initial_step;
    std::vector<std::size_t> order(coords.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    while (!coords.empty() && step >= config.min_step && evals < config.max_iterations) {
        shuffle(order, rng);
        bool improved = false;
        for (std::size_t oi = 0; oi < order.size() && evals < config.max_iterations; ++oi) {
            const std::size_t c = coords[order[oi]];
            const std::size_t party = c / 2;
            for (double sign : {1.0, -1.0}) {
                if (evals >= config.max_iterations) break;
                Vec2 trial = disp[party];
                (c % 2 == 0 ? trial.x : trial.y) += sign * step;
                const double norm = std::hypot(trial.x, trial.y);
                const double radius = config.delta[party];
                if (norm > radius) {
                    trial.x *= radius / norm;
                    trial.y *= radius / norm;
                }
                if (trial == disp[party]) continue;
                auto cand = disp;
                cand[party] = trial;
                const double value = mae_of(outlets, outlet_estimates(outlets, shifted(base, cand)));
                ++evals;
                if (value < best) {
                    best = value;
                    disp = std::move(cand);
                    trace.push_back({evals - 1, best});
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    OptimizationResult result{displaced(baseline, disp), disp, mae_before, best, std::move(trace), {},
                              evals, step};
    const auto after = outlet_estimates(outlets, result.vectors.vectors());
    for (std::size_t i = 0; i < outlets.size(); ++i) {
        result.outlets.push_back({outlets[i].outlet, outlets[i].label, outlets[i].n, before[i], after[i]});
    }
    return result;
}

}  // namespace polscale
