#include "polscale/evaluation.hpp"

#include "polscale/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace polscale {

double map_rating_1_7(double x) {
    if (!(x >= 1.0 && x <= 7.0)) {
        throw Error(ErrorCode::OutOfRange, "rating " + std::to_string(x) + " is outside [1, 7]");
    }
    // scaled by 10 so one-decimal ratings map to the correctly rounded value
    return (10.0 * x - 40.0) / 30.0;
}

std::vector<OutletEstimate> estimate_outlets(std::span<const ScoredRecord> records,
                                             std::span<const OutletRating> ratings, double tau) {
    std::vector<OutletEstimate> out;
    std::vector<double> sums(ratings.size(), 0.0);
    std::map<std::string, std::size_t> index;
    for (const auto& r : ratings) {
        if (!index.emplace(r.outlet, out.size()).second) {
            throw Error(ErrorCode::MalformedField, "outlet '" + r.outlet + "' is rated twice");
        }
        out.push_back({r.outlet, 0, 0, std::nullopt, std::nullopt});
    }
    // Per-outlet scores are collected and summed after sorting so the mean
    // does not depend on record order.
    std::vector<std::vector<double>> scores(ratings.size());
    for (const auto& s : records) {
        if (!s.record.outlet) continue;
        auto it = index.find(*s.record.outlet);
        if (it == index.end()) continue;
        auto& est = out[it->second];
        ++est.n_total;
        if (s.record.politicalness >= tau && s.score) {
            ++est.n_political;
            scores[it->second].push_back(s.score->value);
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& v = scores[i];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        double sum = 0.0;
        for (double x : v) sum += x;
        const double mean = sum / static_cast<double>(v.size());
        out[i].mean_score = mean;
        out[i].abs_error = std::abs(mean - ratings[i].scaled_label);
    }
    return out;
}

ErrorSummary corpus_mae_mse(std::span<const OutletEstimate> estimates) {
    ErrorSummary s;
    for (const auto& e : estimates) {
        if (!e.abs_error) continue;
        s.mae += *e.abs_error;
        s.mse += *e.abs_error * *e.abs_error;
        ++s.n;
    }
    if (s.n == 0) throw Error(ErrorCode::NoEstimates, "no outlet estimate carries an error value");
    s.mae /= static_cast<double>(s.n);
    s.mse /= static_cast<double>(s.n);
    s.pct = pct_of_scale(s.mae);
    return s;
}

std::vector<LengthBucket> buckets_from_edges(std::span<const std::uint64_t> edges) {
    if (edges.empty()) throw Error(ErrorCode::MalformedField, "bucket spec has no edges");
    std::vector<LengthBucket> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i] >= edges[i + 1]) {
            throw Error(ErrorCode::MalformedField, "bucket edges must be strictly ascending");
        }
        out.push_back({edges[i], edges[i + 1]});
    }
    out.push_back({edges.back(), std::numeric_limits<std::uint64_t>::max()});
    return out;
}

std::vector<LengthBucket> default_length_buckets() {
    const std::uint64_t edges[] = {1, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    return buckets_from_edges(edges);
}

std::vector<LengthBucket> parse_buckets(const std::string& spec) {
    std::vector<std::uint64_t> edges;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            edges.push_back(v);
        } catch (const std::exception&) {
            throw Error(ErrorCode::MalformedField, "bucket edge '" + item + "' is not a non-negative integer");
        }
    }
    return buckets_from_edges(edges);
}

PartyId argmax_party(std::span<const double> party_probs) {
    if (party_probs.empty()) throw Error(ErrorCode::MissingParty, "empty probability vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < party_probs.size(); ++i) {
        if (party_probs[i] > party_probs[best]) best = i;
    }
    return PartyId{best};
}

TweetAccuracyReport tweet_accuracy_by_length(std::span<const ClassifiedRecord> records,
                                             std::span<const LengthBucket> buckets) {
    if (buckets.empty()) throw Error(ErrorCode::MalformedField, "no length buckets");
    TweetAccuracyReport rep;
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        const auto& b = buckets[i];
        LengthBucketAccuracy acc;
        acc.bucket_lo = b.lo;
        acc.bucket_hi = b.hi;
        if (!b.open_ended()) {
            acc.midpoint = 0.5 * static_cast<double>(b.lo + b.hi);
        } else if (i > 0) {
            const auto& prev = buckets[i - 1];
            acc.midpoint = static_cast<double>(b.lo) + 0.5 * static_cast<double>(prev.hi - prev.lo);
        } else {
            acc.midpoint = static_cast<double>(b.lo);
        }
        rep.buckets.push_back(acc);
    }

    for (const auto& r : records) {
        if (!r.author_party) {
            throw Error(ErrorCode::MissingAuthorParty, "record '" + r.record_id + "' has no author_party");
        }
        if (!r.word_count) {
            throw Error(ErrorCode::MalformedField, "record '" + r.record_id + "': field 'word_count' is missing");
        }
        const auto wc = *r.word_count;
        auto it = std::find_if(buckets.begin(), buckets.end(),
                               [wc](const LengthBucket& b) { return wc >= b.lo && wc < b.hi; });
        if (it == buckets.end()) {
            ++rep.out_of_range;
            continue;
        }
        auto& acc = rep.buckets[static_cast<std::size_t>(it - buckets.begin())];
        ++acc.n;
        if (argmax_party(r.party_probs) == *r.author_party) ++acc.correct;
    }

    std::vector<double> mids, accs;
    for (auto& acc : rep.buckets) {
        if (acc.n == 0) {
            rep.warnings.push_back(std::string(to_string(ErrorCode::EmptyBucket)) + ": bucket [" +
                                   std::to_string(acc.bucket_lo) + ", " +
                                   (acc.bucket_hi == std::numeric_limits<std::uint64_t>::max()
                                        ? std::string("inf")
                                        : std::to_string(acc.bucket_hi)) +
                                   ") is empty and excluded from the correlation");
            continue;
        }
        acc.accuracy = static_cast<double>(acc.correct) / static_cast<double>(acc.n);
        mids.push_back(acc.midpoint);
        accs.push_back(acc.accuracy);
    }
    if (rep.out_of_range > 0) {
        rep.warnings.push_back(std::to_string(rep.out_of_range) + " record(s) fall outside every bucket");
    }
    try {
        rep.r = pearson(mids, accs).value;
    } catch (const Error& e) {
        rep.warnings.push_back(std::string("length/accuracy correlation undefined: ") + e.what());
    }
    return rep;
}

}  // namespace polscale
