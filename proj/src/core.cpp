#include "polscale/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace polscale {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
        case ErrorCode::MissingParty: return "MissingParty";
        case ErrorCode::MalformedField: return "MalformedField";
        case ErrorCode::NoOverlap: return "NoOverlap";
        case ErrorCode::DegenerateDistances: return "DegenerateDistances";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::EmptyOutlet: return "EmptyOutlet";
        case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NoEstimates: return "NoEstimates";
        case ErrorCode::MissingAuthorParty: return "MissingAuthorParty";
        case ErrorCode::EmptyBucket: return "EmptyBucket";
        case ErrorCode::InsufficientOverlap: return "InsufficientOverlap";
        case ErrorCode::PartyMismatch: return "PartyMismatch";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::TooFewPairs: return "TooFewPairs";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::MalformedProtocol: return "MalformedProtocol";
        case ErrorCode::ZeroNorm: return "ZeroNorm";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
        case ErrorCode::RateLimited: return "RateLimited";
        case ErrorCode::EmptyResponse: return "EmptyResponse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

PartyRegistry::PartyRegistry(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) {
        throw Error(ErrorCode::MalformedField, "party registry is empty");
    }
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw Error(ErrorCode::MalformedField, "party registry contains an empty name");
        if (!seen.insert(n).second) {
            throw Error(ErrorCode::MalformedField, "duplicate party '" + n + "' in registry");
        }
    }
}

PartyRegistry PartyRegistry::german_default() {
    return PartyRegistry({"Linke", "B90", "SPD", "FDP", "CDU", "AfD"});
}

std::optional<PartyId> PartyRegistry::find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return PartyId{static_cast<std::size_t>(it - names_.begin())};
}

PartyId PartyRegistry::at(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw Error(ErrorCode::MalformedField, "unknown party '" + std::string(name) + "'");
}

std::vector<PartyId> PartyRegistry::ids() const {
    std::vector<PartyId> out;
    out.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) out.push_back(PartyId{i});
    return out;
}

std::optional<Stance> parse_stance(std::string_view text) {
    if (text.empty() || text == "NA") return Stance::Absent;
    if (text == "1" || text == "+1") return Stance::Approve;
    if (text == "0") return Stance::Neutral;
    if (text == "-1") return Stance::Reject;
    return std::nullopt;
}

StanceMatrix::StanceMatrix(PartyRegistry parties, std::vector<std::string> statements,
                           std::vector<Stance> cells, std::vector<std::string> groups)
    : parties_(std::move(parties)),
      statements_(std::move(statements)),
      groups_(std::move(groups)),
      cells_(std::move(cells)) {
    if (parties_.size() < 2) {
        throw Error(ErrorCode::MalformedField, "stance matrix needs at least 2 parties");
    }
    if (statements_.empty()) {
        throw Error(ErrorCode::MalformedField, "stance matrix needs at least 1 statement");
    }
    if (cells_.size() != statements_.size() * parties_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "stance matrix cell count does not match shape");
    }
    if (groups_.empty()) groups_.assign(statements_.size(), std::string{});
    if (groups_.size() != statements_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "stance matrix group labels do not match statements");
    }
}

std::vector<std::string> StanceMatrix::group_labels() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& g : groups_) {
        if (seen.insert(g).second) out.push_back(g);
    }
    return out;
}

namespace {

void check_probability(double p, const std::string& record_id, const std::string& field) {
    if (!std::isfinite(p)) {
        throw Error(ErrorCode::MalformedField,
                    "record '" + record_id + "': field '" + field + "' is not a finite number");
    }
    if (p < 0.0 || p > 1.0) {
        throw Error(ErrorCode::ProbabilityOutOfRange,
                    "record '" + record_id + "': field '" + field + "' = " + std::to_string(p) +
                        " is outside [0, 1]");
    }
}

}  // namespace

ClassifiedRecord validate_record(const RawRecord& raw, const PartyRegistry& parties) {
    ClassifiedRecord rec;
    rec.record_id = raw.record_id;
    if (raw.record_id.empty()) {
        throw Error(ErrorCode::MalformedField, "record has an empty 'record_id'");
    }
    if (!raw.politicalness) {
        throw Error(ErrorCode::MalformedField,
                    "record '" + raw.record_id + "': field 'politicalness' is missing");
    }
    check_probability(*raw.politicalness, raw.record_id, "politicalness");
    rec.politicalness = *raw.politicalness;

    for (const auto& [name, p] : raw.party_probs) {
        if (!parties.find(name)) {
            throw Error(ErrorCode::MalformedField, "record '" + raw.record_id +
                                                       "': field 'party_probs." + name +
                                                       "' names an unknown party");
        }
    }
    rec.party_probs.resize(parties.size());
    for (auto id : parties.ids()) {
        const auto& name = parties.name(id);
        auto it = raw.party_probs.find(name);
        if (it == raw.party_probs.end()) {
            throw Error(ErrorCode::MissingParty,
                        "record '" + raw.record_id + "': field 'party_probs." + name + "' is missing");
        }
        check_probability(it->second, raw.record_id, "party_probs." + name);
        rec.party_probs[id.index] = it->second;
    }

    rec.outlet = raw.outlet;
    if (raw.author_party) {
        auto id = parties.find(*raw.author_party);
        if (!id) {
            throw Error(ErrorCode::MalformedField, "record '" + raw.record_id +
                                                       "': field 'author_party' names unknown party '" +
                                                       *raw.author_party + "'");
        }
        rec.author_party = *id;
    }
    if (raw.word_count) {
        if (*raw.word_count < 0) {
            throw Error(ErrorCode::MalformedField,
                        "record '" + raw.record_id + "': field 'word_count' is negative");
        }
        rec.word_count = static_cast<std::uint64_t>(*raw.word_count);
    }
    rec.timestamp = raw.timestamp;
    return rec;
}

RawRecord to_raw(const ClassifiedRecord& record, const PartyRegistry& parties) {
    RawRecord raw;
    raw.record_id = record.record_id;
    raw.politicalness = record.politicalness;
    for (auto id : parties.ids()) raw.party_probs[parties.name(id)] = record.party_probs.at(id.index);
    raw.outlet = record.outlet;
    if (record.author_party) raw.author_party = parties.name(*record.author_party);
    if (record.word_count) raw.word_count = static_cast<std::int64_t>(*record.word_count);
    raw.timestamp = record.timestamp;
    return raw;
}

OutletRating OutletRating::from_survey(std::string outlet, double survey_rating) {
    if (!(survey_rating >= 1.0 && survey_rating <= 7.0)) {
        throw Error(ErrorCode::OutOfRange, "survey rating " + std::to_string(survey_rating) +
                                               " for outlet '" + outlet + "' is outside [1, 7]");
    }
    return OutletRating{std::move(outlet), survey_rating, (survey_rating - 4.0) / 3.0};
}

}  // namespace polscale
