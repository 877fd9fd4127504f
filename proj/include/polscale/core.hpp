#pragma once

// Domain types shared by every polscale module: the party registry, stances,
// classified records, outlet ratings and scores.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polscale {

enum class ErrorCode {
    ProbabilityOutOfRange,
    MissingParty,
    MalformedField,
    NoOverlap,
    DegenerateDistances,
    ZeroVector,
    EmptyOutlet,
    InfeasibleConfig,
    OutOfRange,
    NoEstimates,
    MissingAuthorParty,
    EmptyBucket,
    InsufficientOverlap,
    PartyMismatch,
    ZeroVariance,
    TooFewPairs,
    UnknownLabel,
    MalformedProtocol,
    ZeroNorm,
    DimensionMismatch,
    ProviderUnavailable,
    RateLimited,
    EmptyResponse,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix, for re-wrapping with context.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

/// Index of a party inside a PartyRegistry.
struct PartyId {
    std::size_t index = 0;

    friend bool operator==(PartyId, PartyId) = default;
    friend auto operator<=>(PartyId, PartyId) = default;
};

/// Ordered list of party names. The order is significant: it fixes the layout
/// of probability vectors and the argmax tie-break (lowest index wins).
class PartyRegistry {
public:
    explicit PartyRegistry(std::vector<std::string> names);

    /// Linke, B90, SPD, FDP, CDU, AfD.
    static PartyRegistry german_default();

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(PartyId id) const { return names_.at(id.index); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::optional<PartyId> find(std::string_view name) const;
    /// Throws MalformedField naming the unknown party.
    PartyId at(std::string_view name) const;

    std::vector<PartyId> ids() const;

    friend bool operator==(const PartyRegistry&, const PartyRegistry&) = default;

private:
    std::vector<std::string> names_;
};

enum class Stance : std::int8_t {
    Reject = -1,
    Neutral = 0,
    Approve = 1,
    Absent = 2,
};

inline bool answered(Stance s) { return s != Stance::Absent; }
/// -1, 0 or +1; undefined for Absent.
inline int stance_value(Stance s) { return static_cast<int>(s); }
/// Accepts "-1", "0", "1" and "" / "NA" for Absent.
std::optional<Stance> parse_stance(std::string_view text);

/// Statements x parties. Statements may carry a group label (the election
/// they were surveyed for); an empty label means ungrouped.
class StanceMatrix {
public:
    StanceMatrix(PartyRegistry parties, std::vector<std::string> statements,
                 std::vector<Stance> cells, std::vector<std::string> groups = {});

    const PartyRegistry& parties() const noexcept { return parties_; }
    std::size_t statement_count() const noexcept { return statements_.size(); }
    const std::string& statement(std::size_t row) const { return statements_.at(row); }
    const std::string& group(std::size_t row) const { return groups_.at(row); }

    Stance at(std::size_t row, PartyId party) const {
        return cells_[row * parties_.size() + party.index];
    }

    /// Distinct group labels in order of first appearance.
    std::vector<std::string> group_labels() const;

private:
    PartyRegistry parties_;
    std::vector<std::string> statements_;
    std::vector<std::string> groups_;
    std::vector<Stance> cells_;
};

/// Record fields as parsed from input, before validation.
struct RawRecord {
    std::string record_id;
    std::optional<double> politicalness;
    std::map<std::string, double> party_probs;
    std::optional<std::string> outlet;
    std::optional<std::string> author_party;
    std::optional<std::int64_t> word_count;
    std::optional<std::string> timestamp;
};

struct ClassifiedRecord {
    std::string record_id;
    double politicalness = 0.0;
    /// Indexed by PartyId. Independent multilabel outputs, not normalized.
    std::vector<double> party_probs;
    std::optional<std::string> outlet;
    std::optional<PartyId> author_party;
    std::optional<std::uint64_t> word_count;
    std::optional<std::string> timestamp;

    friend bool operator==(const ClassifiedRecord&, const ClassifiedRecord&) = default;
};

/// Never clamps: out-of-range probabilities, missing parties and malformed
/// fields are reported with the record id and field name.
ClassifiedRecord validate_record(const RawRecord& raw, const PartyRegistry& parties);

RawRecord to_raw(const ClassifiedRecord& record, const PartyRegistry& parties);

struct OutletRating {
    std::string outlet;
    double survey_rating = 4.0;
    double scaled_label = 0.0;

    /// survey_rating on the 1..7 scale; throws OutOfRange outside it.
    static OutletRating from_survey(std::string outlet, double survey_rating);
};

struct Score {
    double value = 0.0;
    double angle_deg = 0.0;

    static Score from_angle(double angle_deg) { return {angle_deg / 90.0, angle_deg}; }
};

}  // namespace polscale
