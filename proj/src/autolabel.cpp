#include "polscale/autolabel.hpp"

#include "polscale/csv.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

namespace polscale {

std::string_view to_string(InterruptionKind kind) {
    switch (kind) {
        case InterruptionKind::Applause: return "Applause";
        case InterruptionKind::Heckle: return "Heckle";
        case InterruptionKind::Objection: return "Objection";
        case InterruptionKind::Laughter: return "Laughter";
        case InterruptionKind::Question: return "Question";
        case InterruptionKind::Other: return "Other";
    }
    return "Other";
}

std::string_view to_string(LabelStance stance) {
    return stance == LabelStance::Agree ? "agree" : "disagree";
}

std::optional<LabelStance> parse_label_stance(std::string_view text) {
    if (text == "agree") return LabelStance::Agree;
    if (text == "disagree") return LabelStance::Disagree;
    return std::nullopt;
}

RuleTable RuleTable::defaults() {
    RuleTable t;
    t.set(InterruptionKind::Applause, LabelStance::Agree);
    t.set(InterruptionKind::Heckle, LabelStance::Disagree);
    t.set(InterruptionKind::Objection, LabelStance::Disagree);
    return t;
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

InterruptionKind kind_from_keyword(const std::string& keyword) {
    const auto k = lower(keyword);
    if (k == "applause" || k == "beifall") return InterruptionKind::Applause;
    if (k == "heckle" || k == "zuruf") return InterruptionKind::Heckle;
    if (k == "objection" || k == "widerspruch") return InterruptionKind::Objection;
    if (k == "laughter" || k == "heiterkeit" || k == "lachen") return InterruptionKind::Laughter;
    if (k == "question" || k == "zwischenfrage") return InterruptionKind::Question;
    return InterruptionKind::Other;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::MalformedProtocol, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

InterruptionEvent parse_annotation(const std::string& line, std::size_t line_no, const PartyRegistry& parties) {
    const std::string inner = trim(std::string_view(line).substr(1, line.size() - 2));
    const auto colon = inner.find(':');
    if (colon == std::string::npos) malformed(line_no, "annotation lacks ':' between kind and parties");
    InterruptionEvent ev;
    ev.raw = line;
    const std::string keyword = trim(std::string_view(inner).substr(0, colon));
    if (keyword.empty()) malformed(line_no, "annotation has an empty kind");
    ev.kind = kind_from_keyword(keyword);
    ev.tag = ev.kind == InterruptionKind::Other ? keyword : std::string(to_string(ev.kind));
    for (const auto& name : split(std::string_view(inner).substr(colon + 1), ',')) {
        if (name.empty()) continue;
        auto id = parties.find(name);
        if (!id) malformed(line_no, "unknown party '" + name + "' in annotation");
        ev.parties.push_back(*id);
    }
    if (ev.parties.empty()) malformed(line_no, "annotation names no party");
    return ev;
}

}  // namespace

std::vector<SpeechRecord> parse_protocol(std::istream& in, const PartyRegistry& parties) {
    std::vector<SpeechRecord> out;
    std::optional<std::size_t> header_line;
    std::string line;
    std::size_t line_no = 0;

    auto close = [&]() {
        if (out.empty()) return;
        if (out.back().text.empty()) malformed(*header_line, "speech '" + out.back().speech_id + "' has no text");
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;

        if (t.rfind("SPEECH ", 0) == 0 || t == "SPEECH") {
            close();
            const auto fields = split(std::string_view(t).substr(6), '|');
            if (fields.size() != 3) malformed(line_no, "speech header needs 'id | speaker | party'");
            if (fields[0].empty()) malformed(line_no, "speech header has an empty id");
            SpeechRecord rec;
            rec.speech_id = fields[0];
            rec.speaker = fields[1];
            if (fields[2] != "-" && !fields[2].empty()) rec.speaker_party = parties.find(fields[2]);
            out.push_back(std::move(rec));
            header_line = line_no;
            continue;
        }
        if (out.empty()) malformed(line_no, "text before the first SPEECH header");

        if (t.front() == '(' && t.back() == ')') {
            out.back().interruptions.push_back(parse_annotation(t, line_no, parties));
        } else {
            auto& text = out.back().text;
            if (!text.empty()) text.push_back(' ');
            text += t;
        }
    }
    close();
    return out;
}

std::vector<LabeledStatement> extract_sentiments(const std::vector<SpeechRecord>& records,
                                                 const RuleTable& rules, const ExtractOptions& options) {
    std::vector<LabeledStatement> rows;
    for (const auto& speech : records) {
        for (const auto& ev : speech.interruptions) {
            const auto stance = rules[ev.kind];
            if (!stance) continue;
            for (auto party : ev.parties) {
                if (options.exclude_self_party && speech.speaker_party && *speech.speaker_party == party) continue;
                rows.push_back({speech.text, party, *stance});
            }
        }
    }
    return rows;
}

std::vector<LabeledStatement> filter_positive(const std::vector<LabeledStatement>& rows) {
    std::vector<LabeledStatement> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
                 [](const LabeledStatement& r) { return r.stance == LabelStance::Agree; });
    return out;
}

void write_labeled_csv(std::ostream& out, const std::vector<LabeledStatement>& rows,
                       const PartyRegistry& parties) {
    csv::write_row(out, {"text", "party", "stance"});
    for (const auto& r : rows) {
        csv::write_row(out, {r.text, parties.name(r.party), std::string(to_string(r.stance))});
    }
}

std::vector<LabeledStatement> read_labeled_csv(std::istream& in, const PartyRegistry& parties) {
    const auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorCode::MalformedField, "labeled CSV has no header");
    const auto& header = rows.front();
    const auto ct = csv::column(header, "text");
    const auto cp = csv::column(header, "party");
    const auto cs = csv::column(header, "stance");
    std::vector<LabeledStatement> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() != header.fields.size()) {
            throw Error(ErrorCode::MalformedField, "line " + std::to_string(rows[i].line) + ": expected " +
                                                       std::to_string(header.fields.size()) + " fields");
        }
        auto stance = parse_label_stance(f[cs]);
        if (!stance) {
            throw Error(ErrorCode::MalformedField,
                        "line " + std::to_string(rows[i].line) + ": stance '" + f[cs] + "' is not agree/disagree");
        }
        auto party = parties.find(f[cp]);
        if (!party) {
            throw Error(ErrorCode::MalformedField,
                        "line " + std::to_string(rows[i].line) + ": unknown party '" + f[cp] + "'");
        }
        out.push_back({f[ct], *party, *stance});
    }
    return out;
}

}  // namespace polscale
