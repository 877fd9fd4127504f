#pragma once

// Batch scoring of record streams and the report builders behind the CLI.

#include "polscale/autolabel.hpp"
#include "polscale/evaluation.hpp"
#include "polscale/io.hpp"
#include "polscale/optimizer.hpp"
#include "polscale/positioning.hpp"
#include "polscale/stats.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace polscale {

struct ScoredLine {
    std::string output;
    /// Sidecar entry when the line could not be scored.
    std::optional<std::string> error;
    bool filtered = false;
};

/// Scores one JSONL line. The output is the input object with score,
/// angle_deg and filtered appended; an invalid line yields an object with
/// an "error" code instead and a sidecar entry with the details.
ScoredLine score_line(const std::string& line, std::size_t line_no, const PartyVectorSet& vectors, double tau);

struct ScoreStreamStats {
    std::size_t lines = 0;
    std::size_t scored = 0;
    std::size_t filtered = 0;
    std::size_t errors = 0;
};

/// One output line per non-blank input line, in input order, regardless of
/// the thread count. Errors are also written to `errors`.
ScoreStreamStats score_stream(std::istream& in, std::ostream& out, std::ostream& errors,
                              const PartyVectorSet& vectors, double tau, std::size_t threads = 1,
                              std::size_t batch_size = 4096);

/// Per-outlet table and summary for a scored corpus.
struct NewsReport {
    std::vector<OutletRating> ratings;
    std::vector<OutletEstimate> estimates;
    std::optional<ErrorSummary> summary;
    double tau = 0.8;
    std::size_t skipped_errors = 0;
};
NewsReport evaluate_news(const io::ScoredCorpus& corpus, const std::vector<OutletRating>& ratings, double tau);
void write_news_csv(std::ostream& out, const NewsReport& report);
io::ordered_json news_json(const NewsReport& report);

void write_tweet_csv(std::ostream& out, const TweetAccuracyReport& report);
io::ordered_json tweet_json(const TweetAccuracyReport& report, const std::vector<LengthBucket>& buckets);

io::ordered_json optimization_json(const OptimizationResult& result, const OptimizationConfig& config,
                                   const PartyRegistry& parties);

/// Labeled interruption rows as a statement x party matrix: a party's stance
/// on a speech is the sign of (agree - disagree) over its rows.
StanceMatrix sentiment_matrix(const std::vector<LabeledStatement>& rows, const PartyRegistry& parties);

/// Full matrix, or with a second matrix the combined layout: first matrix
/// below the diagonal, second above, profile similarity on the diagonal.
/// Undefined cells are written empty.
void write_association_csv(std::ostream& out, const AssociationMatrix& lower,
                           const AssociationMatrix* upper = nullptr);

/// Rank and linear agreement between the three published rating sources.
io::ordered_json validity_json(const io::MediaRatingsTable& table);
/// media, a_x, a_z, b_pc1, c_ord, c_x, c_z, sample.
void write_validity_table(std::ostream& out, const io::MediaRatingsTable& table);

}  // namespace polscale
