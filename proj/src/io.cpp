#include "polscale/io.hpp"

#include "polscale/csv.hpp"
#include "polscale/stats.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace polscale::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double parse_double(const std::string& text, std::size_t line, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedField,
                    at_line(line) + "field '" + field + "' value '" + text + "' is not a number");
    }
}

double optional_double(const std::string& text, std::size_t line, const std::string& field) {
    if (text.empty() || text == "NA") return kNaN;
    return parse_double(text, line, field);
}

template <typename T>
T get_field(const ordered_json& j, const char* name, const std::string& record_id) {
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::MalformedField, "record '" + record_id + "': field '" + name + "' has the wrong type");
    }
}

}  // namespace

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    return out;
}

StanceMatrix read_stance_csv(std::istream& in, const PartyRegistry& parties) {
    const auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorCode::MalformedField, "stance CSV is empty");
    const auto& header = rows.front();
    const auto c_stmt = csv::column(header, "statement_id");
    const auto c_party = csv::column(header, "party");
    const auto c_stance = csv::column(header, "stance");
    const auto c_group = csv::find_column(header, "election");

    std::vector<std::string> statements;
    std::vector<std::string> groups;
    std::map<std::string, std::size_t> index;
    std::vector<Stance> cells;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    const std::size_t k = parties.size();

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const auto& f = row.fields;
        if (f.size() != header.fields.size()) {
            throw Error(ErrorCode::MalformedField, at_line(row.line) + "expected " +
                                                       std::to_string(header.fields.size()) + " columns, got " +
                                                       std::to_string(f.size()));
        }
        const auto party = parties.find(f[c_party]);
        if (!party) {
            throw Error(ErrorCode::MalformedField, at_line(row.line) + "column 'party': unknown party '" +
                                                       f[c_party] + "'");
        }
        const auto stance = parse_stance(f[c_stance]);
        if (!stance) {
            throw Error(ErrorCode::MalformedField, at_line(row.line) + "column 'stance': value '" + f[c_stance] +
                                                       "' is not one of -1, 0, 1, NA");
        }
        if (f[c_stmt].empty()) {
            throw Error(ErrorCode::MalformedField, at_line(row.line) + "column 'statement_id' is empty");
        }
        const std::string group = c_group == std::string::npos ? std::string{} : f[c_group];
        auto [it, inserted] = index.emplace(f[c_stmt], statements.size());
        if (inserted) {
            statements.push_back(f[c_stmt]);
            groups.push_back(group);
            cells.resize(cells.size() + k, Stance::Absent);
        } else if (groups[it->second] != group) {
            throw Error(ErrorCode::MalformedField, at_line(row.line) + "statement '" + f[c_stmt] +
                                                       "' appears under two elections");
        }
        if (!seen.emplace(it->second, party->index).second) {
            throw Error(ErrorCode::MalformedField, at_line(row.line) + "duplicate stance for statement '" +
                                                       f[c_stmt] + "' and party '" + f[c_party] + "'");
        }
        cells[it->second * k + party->index] = *stance;
    }
    return StanceMatrix(parties, std::move(statements), std::move(cells), std::move(groups));
}

void write_stance_csv(std::ostream& out, const StanceMatrix& matrix) {
    const bool grouped = [&] {
        for (std::size_t r = 0; r < matrix.statement_count(); ++r) {
            if (!matrix.group(r).empty()) return true;
        }
        return false;
    }();
    std::vector<std::string> header{"statement_id", "party", "stance"};
    if (grouped) header.push_back("election");
    csv::write_row(out, header);
    for (std::size_t r = 0; r < matrix.statement_count(); ++r) {
        for (auto id : matrix.parties().ids()) {
            const Stance s = matrix.at(r, id);
            if (!answered(s)) continue;
            std::vector<std::string> row{matrix.statement(r), matrix.parties().name(id),
                                         std::to_string(stance_value(s))};
            if (grouped) row.push_back(matrix.group(r));
            csv::write_row(out, row);
        }
    }
}

RawRecord raw_record_from_json(const ordered_json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedField, "record is not a JSON object");
    RawRecord raw;
    if (!j.contains("record_id")) throw Error(ErrorCode::MalformedField, "record lacks field 'record_id'");
    const auto& id = j.at("record_id");
    if (id.is_string()) {
        raw.record_id = id.get<std::string>();
    } else if (id.is_number_integer()) {
        raw.record_id = id.dump();
    } else {
        throw Error(ErrorCode::MalformedField, "field 'record_id' must be a string");
    }
    const auto& rid = raw.record_id;
    if (j.contains("politicalness")) {
        if (!j.at("politicalness").is_number()) {
            throw Error(ErrorCode::MalformedField, "record '" + rid + "': field 'politicalness' is not a number");
        }
        raw.politicalness = j.at("politicalness").get<double>();
    }
    if (j.contains("party_probs")) {
        const auto& pp = j.at("party_probs");
        if (!pp.is_object()) {
            throw Error(ErrorCode::MalformedField, "record '" + rid + "': field 'party_probs' is not an object");
        }
        for (const auto& [name, value] : pp.items()) {
            if (!value.is_number()) {
                throw Error(ErrorCode::MalformedField,
                            "record '" + rid + "': field 'party_probs." + name + "' is not a number");
            }
            raw.party_probs[name] = value.get<double>();
        }
    }
    auto optional_string = [&](const char* name) -> std::optional<std::string> {
        if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
        return get_field<std::string>(j, name, rid);
    };
    raw.outlet = optional_string("outlet");
    raw.author_party = optional_string("author_party");
    raw.timestamp = optional_string("timestamp");
    if (j.contains("word_count") && !j.at("word_count").is_null()) {
        if (!j.at("word_count").is_number_integer()) {
            throw Error(ErrorCode::MalformedField, "record '" + rid + "': field 'word_count' is not an integer");
        }
        raw.word_count = j.at("word_count").get<std::int64_t>();
    }
    return raw;
}

ordered_json record_to_json(const ClassifiedRecord& record, const PartyRegistry& parties) {
    ordered_json j;
    j["record_id"] = record.record_id;
    j["politicalness"] = record.politicalness;
    ordered_json probs = ordered_json::object();
    for (auto id : parties.ids()) probs[parties.name(id)] = record.party_probs.at(id.index);
    j["party_probs"] = probs;
    if (record.outlet) j["outlet"] = *record.outlet;
    if (record.author_party) j["author_party"] = parties.name(*record.author_party);
    if (record.word_count) j["word_count"] = *record.word_count;
    if (record.timestamp) j["timestamp"] = *record.timestamp;
    return j;
}

std::vector<ClassifiedRecord> read_records_jsonl(std::istream& in, const PartyRegistry& parties) {
    std::vector<ClassifiedRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(validate_record(raw_record_from_json(ordered_json::parse(line)), parties));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedField, at_line(line_no) + "invalid JSON: " + e.what());
        } catch (const Error& e) {
            throw Error(e.code(), at_line(line_no) + e.message());
        }
    }
    return out;
}

ScoredCorpus read_scored_jsonl(std::istream& in, const PartyRegistry& parties) {
    ScoredCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = ordered_json::parse(line);
            if (j.contains("error")) {
                ++corpus.skipped_errors;
                continue;
            }
            ScoredRecord s{validate_record(raw_record_from_json(j), parties), std::nullopt};
            const bool filtered = j.contains("filtered") && j.at("filtered").is_boolean() && j.at("filtered").get<bool>();
            if (!filtered && j.contains("score") && j.at("score").is_number()) {
                const double angle = j.contains("angle_deg") && j.at("angle_deg").is_number()
                                         ? j.at("angle_deg").get<double>()
                                         : j.at("score").get<double>() * 90.0;
                s.score = Score{j.at("score").get<double>(), angle};
            }
            corpus.records.push_back(std::move(s));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedField, at_line(line_no) + "invalid JSON: " + e.what());
        } catch (const Error& e) {
            throw Error(e.code(), at_line(line_no) + e.message());
        }
    }
    return corpus;
}

ordered_json vectors_to_json(const PartyVectorSet& vectors) {
    ordered_json j = ordered_json::object();
    for (auto id : vectors.parties().ids()) {
        const auto& v = vectors.at(id);
        j[vectors.parties().name(id)] = {{"theta_deg", v.theta_deg}, {"vx", v.vx}, {"vy", v.vy}};
    }
    j["provenance"] = std::string(to_string(vectors.provenance()));
    return j;
}

PartyVectorSet vectors_from_json(const ordered_json& j, const PartyRegistry& parties) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedField, "vector set is not a JSON object");
    Provenance provenance = Provenance::Manual;
    if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        auto parsed = p.is_string() ? parse_provenance(p.get<std::string>()) : std::nullopt;
        if (!parsed) throw Error(ErrorCode::MalformedField, "vector set: unknown provenance " + p.dump());
        provenance = *parsed;
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "provenance" && !parties.find(key)) {
            throw Error(ErrorCode::MalformedField, "vector set names unknown party '" + key + "'");
        }
    }
    std::vector<PartyVector> vs;
    for (auto id : parties.ids()) {
        const auto& name = parties.name(id);
        if (!j.contains(name)) throw Error(ErrorCode::MissingParty, "vector set lacks party '" + name + "'");
        const auto& e = j.at(name);
        try {
            PartyVector pv;
            pv.vx = e.at("vx").get<double>();
            pv.vy = e.at("vy").get<double>();
            pv.theta_deg = e.contains("theta_deg") ? e.at("theta_deg").get<double>()
                                                   : std::atan2(pv.vx, pv.vy) * 180.0 / 3.14159265358979323846;
            vs.push_back(pv);
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::MalformedField, "vector for party '" + name + "' needs numeric vx, vy");
        }
    }
    return PartyVectorSet(parties, std::move(vs), provenance);
}

PartyVectorSet read_vectors_json(std::istream& in, const PartyRegistry& parties) {
    try {
        return vectors_from_json(ordered_json::parse(in), parties);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedField, std::string("vector set is not valid JSON: ") + e.what());
    }
}

std::vector<OutletRating> read_ratings_csv(std::istream& in) {
    const auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorCode::MalformedField, "ratings CSV is empty");
    const auto c_outlet = csv::column(rows[0], "outlet");
    const auto c_rating = csv::column(rows[0], "survey_rating");
    std::vector<OutletRating> out;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() != rows[0].fields.size()) {
            throw Error(ErrorCode::MalformedField, at_line(rows[i].line) + "wrong number of columns");
        }
        if (!seen.insert(f[c_outlet]).second) {
            throw Error(ErrorCode::MalformedField, at_line(rows[i].line) + "outlet '" + f[c_outlet] + "' repeated");
        }
        const double rating = parse_double(f[c_rating], rows[i].line, "survey_rating");
        try {
            out.push_back(OutletRating::from_survey(f[c_outlet], rating));
        } catch (const Error& e) {
            throw Error(e.code(), at_line(rows[i].line) + e.message());
        }
    }
    return out;
}

MediaRatingsTable MediaRatingsTable::sample() const {
    MediaRatingsTable s;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!in_sample[i]) continue;
        s.media.push_back(media[i]);
        s.a_x.push_back(a_x[i]);
        s.b_x.push_back(b_x[i]);
        s.b_y.push_back(b_y[i]);
        s.c_ord.push_back(c_ord[i]);
        s.c_x.push_back(c_x[i]);
        s.in_sample.push_back(true);
    }
    return s;
}

MediaRatingsTable read_media_ratings_csv(std::istream& in) {
    const auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorCode::MalformedField, "media ratings CSV is empty");
    const auto& h = rows[0];
    const auto c_media = csv::column(h, "media");
    const auto c_ax = csv::column(h, "a_x");
    const auto c_bx = csv::column(h, "b_x");
    const auto c_by = csv::column(h, "b_y");
    const auto c_ord = csv::column(h, "c_ord");
    const auto c_cx = csv::column(h, "c_x");
    const auto c_sample = csv::find_column(h, "sample");
    MediaRatingsTable t;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        const auto line = rows[i].line;
        if (f.size() != h.fields.size()) throw Error(ErrorCode::MalformedField, at_line(line) + "wrong number of columns");
        t.media.push_back(f[c_media]);
        t.a_x.push_back(optional_double(f[c_ax], line, "a_x"));
        t.b_x.push_back(optional_double(f[c_bx], line, "b_x"));
        t.b_y.push_back(optional_double(f[c_by], line, "b_y"));
        const auto& ord = f[c_ord];
        if (ord.empty() || ord == "NA") {
            t.c_ord.push_back(kNaN);
        } else if (ord.find_first_not_of("+-0123456789") == std::string::npos) {
            t.c_ord.push_back(parse_double(ord, line, "c_ord"));
        } else {
            try {
                t.c_ord.push_back(ordinal_from_label(ord));
            } catch (const Error& e) {
                throw Error(e.code(), at_line(line) + e.message());
            }
        }
        t.c_x.push_back(optional_double(f[c_cx], line, "c_x"));
        bool sample = false;
        if (c_sample != std::string::npos) {
            const auto& s = f[c_sample];
            if (s == "1" || s == "true" || s == "yes") {
                sample = true;
            } else if (!(s.empty() || s == "0" || s == "false" || s == "no")) {
                throw Error(ErrorCode::MalformedField, at_line(line) + "column 'sample' must be 0/1");
            }
        }
        t.in_sample.push_back(sample);
    }
    return t;
}

double round6(double x) {
    const double r = std::round(x * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

}  // namespace polscale::io
