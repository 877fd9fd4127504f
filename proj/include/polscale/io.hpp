#pragma once

// File formats: stance CSV, record JSONL, vector-set JSON, ratings CSV and
// the media-ratings table used for validity checks.

#include "polscale/core.hpp"
#include "polscale/evaluation.hpp"
#include "polscale/positioning.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace polscale::io {

using ordered_json = nlohmann::ordered_json;

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

/// Header statement_id,party,stance[,election]; one row per answered cell.
/// Stances -1, 0, 1; empty or NA marks Absent. Statement order follows first
/// appearance. Errors name the offending line.
StanceMatrix read_stance_csv(std::istream& in, const PartyRegistry& parties);
void write_stance_csv(std::ostream& out, const StanceMatrix& matrix);

/// Parses one JSON object into raw fields. Type errors become MalformedField.
RawRecord raw_record_from_json(const ordered_json& j);
ordered_json record_to_json(const ClassifiedRecord& record, const PartyRegistry& parties);

/// Validated records, one JSON object per non-blank line. Throws on the
/// first invalid line with its number.
std::vector<ClassifiedRecord> read_records_jsonl(std::istream& in, const PartyRegistry& parties);

/// Scored JSONL as written by the score command: record fields plus score,
/// angle_deg, filtered. Lines carrying an "error" field are skipped and
/// counted.
struct ScoredCorpus {
    std::vector<ScoredRecord> records;
    std::size_t skipped_errors = 0;
};
ScoredCorpus read_scored_jsonl(std::istream& in, const PartyRegistry& parties);

/// {"<party>": {"theta_deg", "vx", "vy"}, ..., "provenance": "..."}.
ordered_json vectors_to_json(const PartyVectorSet& vectors);
PartyVectorSet vectors_from_json(const ordered_json& j, const PartyRegistry& parties);
PartyVectorSet read_vectors_json(std::istream& in, const PartyRegistry& parties);

/// Header outlet,survey_rating.
std::vector<OutletRating> read_ratings_csv(std::istream& in);

/// Published ratings from three sources, one row per outlet. Missing cells
/// are NaN. Columns: media, a_x, b_x, b_y, c_ord, c_x, sample.
struct MediaRatingsTable {
    std::vector<std::string> media;
    std::vector<double> a_x;
    std::vector<double> b_x;
    std::vector<double> b_y;
    std::vector<double> c_ord;
    std::vector<double> c_x;
    std::vector<bool> in_sample;

    std::size_t size() const { return media.size(); }
    /// Rows with in_sample set.
    MediaRatingsTable sample() const;
};
/// c_ord accepts integers or bias labels ("left-center", ...).
MediaRatingsTable read_media_ratings_csv(std::istream& in);

/// Rounded to 6 decimals for serialization; negative zero becomes zero.
double round6(double x);

}  // namespace polscale::io
