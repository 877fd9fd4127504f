#pragma once

// Outlet-level and tweet-level evaluation of scored corpora.

#include "polscale/core.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polscale {

/// (x - 4) / 3; throws OutOfRange outside [1, 7].
double map_rating_1_7(double x);

struct ScoredRecord {
    ClassifiedRecord record;
    /// Empty when filtered out or unscorable.
    std::optional<Score> score;
};

struct OutletEstimate {
    std::string outlet;
    std::size_t n_total = 0;
    std::size_t n_political = 0;
    /// Empty when no record passed the threshold.
    std::optional<double> mean_score;
    std::optional<double> abs_error;
};

/// One estimate per rating, in rating order. Outlets with no passing record
/// are reported with n_political = 0 and no error value.
std::vector<OutletEstimate> estimate_outlets(std::span<const ScoredRecord> records,
                                             std::span<const OutletRating> ratings, double tau);

struct ErrorSummary {
    double mae = 0.0;
    double mse = 0.0;
    /// MAE as a percentage of the scale width 2.
    double pct = 0.0;
    std::size_t n = 0;
};

/// Over estimates carrying an error value; throws NoEstimates if none do.
ErrorSummary corpus_mae_mse(std::span<const OutletEstimate> estimates);

inline double pct_of_scale(double mae) { return 100.0 * mae / 2.0; }

struct LengthBucket {
    std::uint64_t lo = 0;
    /// Exclusive; max() marks an open-ended bucket.
    std::uint64_t hi = std::numeric_limits<std::uint64_t>::max();

    bool open_ended() const { return hi == std::numeric_limits<std::uint64_t>::max(); }
};

/// Contiguous buckets from ascending edges; the last edge opens an unbounded
/// bucket. Default edges 1, 10, 20, ..., 100.
std::vector<LengthBucket> buckets_from_edges(std::span<const std::uint64_t> edges);
std::vector<LengthBucket> default_length_buckets();
/// "1,10,20,...": comma separated ascending edges.
std::vector<LengthBucket> parse_buckets(const std::string& spec);

struct LengthBucketAccuracy {
    std::uint64_t bucket_lo = 0;
    std::uint64_t bucket_hi = 0;
    double midpoint = 0.0;
    std::size_t n = 0;
    std::size_t correct = 0;
    /// NaN for an empty bucket.
    double accuracy = std::numeric_limits<double>::quiet_NaN();
};

struct TweetAccuracyReport {
    std::vector<LengthBucketAccuracy> buckets;
    /// Pearson of (midpoint, accuracy) over non-empty buckets; NaN if undefined.
    double r = std::numeric_limits<double>::quiet_NaN();
    std::size_t out_of_range = 0;
    std::vector<std::string> warnings;
};

/// Index of the largest probability; the lowest index wins ties.
PartyId argmax_party(std::span<const double> party_probs);

/// A record is correct iff its argmax party equals its author party. The
/// midpoint of an open-ended bucket is lo + half the width of the bucket
/// before it. Throws MissingAuthorParty / MalformedField for records lacking
/// author_party / word_count.
TweetAccuracyReport tweet_accuracy_by_length(std::span<const ClassifiedRecord> records,
                                             std::span<const LengthBucket> buckets);

}  // namespace polscale
