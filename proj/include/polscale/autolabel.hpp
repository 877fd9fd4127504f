#pragma once

// Auto-labeling of parliamentary speeches from interruption annotations.
//
// Protocol format (UTF-8, line oriented):
//
//   # comment
//   SPEECH <speech_id> | <speaker> | <party or ->
//   body text, any number of lines
//   (<Kind>: <Party>, <Party>, ...)
//   more body text
//
// A speech runs until the next SPEECH header or end of file. Annotation
// lines are wrapped in parentheses; the kind keyword is case-insensitive
// (Applause/Beifall, Heckle/Zuruf, Objection/Widerspruch,
// Laughter/Heiterkeit/Lachen, Question/Zwischenfrage) and any other keyword
// becomes Other(tag). Blank lines are ignored.

#include "polscale/core.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace polscale {

enum class InterruptionKind { Applause, Heckle, Objection, Laughter, Question, Other };

std::string_view to_string(InterruptionKind kind);

struct InterruptionEvent {
    InterruptionKind kind = InterruptionKind::Other;
    /// Original keyword for Other, canonical name otherwise.
    std::string tag;
    std::vector<PartyId> parties;
    std::string raw;
};

struct SpeechRecord {
    std::string speech_id;
    std::string speaker;
    std::optional<PartyId> speaker_party;
    std::string text;
    std::vector<InterruptionEvent> interruptions;
};

enum class LabelStance { Agree, Disagree };

std::string_view to_string(LabelStance stance);
std::optional<LabelStance> parse_label_stance(std::string_view text);

struct LabeledStatement {
    std::string text;
    PartyId party;
    LabelStance stance = LabelStance::Agree;

    friend bool operator==(const LabeledStatement&, const LabeledStatement&) = default;
};

/// Stance assigned per interruption kind; empty means the kind is not used.
struct RuleTable {
    std::array<std::optional<LabelStance>, 6> rules{};

    /// Applause -> Agree; Heckle, Objection -> Disagree; the rest unmapped.
    static RuleTable defaults();

    std::optional<LabelStance> operator[](InterruptionKind k) const {
        return rules[static_cast<std::size_t>(k)];
    }
    void set(InterruptionKind k, std::optional<LabelStance> s) { rules[static_cast<std::size_t>(k)] = s; }
};

struct ExtractOptions {
    /// Drop rows where the interrupting party is the speaker's own party.
    bool exclude_self_party = true;
};

/// Throws MalformedProtocol with the 1-based line number.
std::vector<SpeechRecord> parse_protocol(std::istream& in, const PartyRegistry& parties);

/// One row per (mapped event, interrupting party); speeches without
/// interruptions yield nothing. Order follows speeches, events, parties.
std::vector<LabeledStatement> extract_sentiments(const std::vector<SpeechRecord>& records,
                                                 const RuleTable& rules,
                                                 const ExtractOptions& options = {});

/// Agree rows only, order preserved.
std::vector<LabeledStatement> filter_positive(const std::vector<LabeledStatement>& rows);

/// CSV with header text,party,stance.
void write_labeled_csv(std::ostream& out, const std::vector<LabeledStatement>& rows,
                       const PartyRegistry& parties);
std::vector<LabeledStatement> read_labeled_csv(std::istream& in, const PartyRegistry& parties);

}  // namespace polscale
