#include "support.hpp"

#include "polscale/io.hpp"
#include "polscale/pipeline.hpp"
#include "polscale/service.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace polscale;
using io::ordered_json;

namespace {

const PartyRegistry kReg = PartyRegistry::german_default();

std::string worked_line(const std::string& id, double politicalness) {
    ordered_json j;
    j["record_id"] = id;
    j["politicalness"] = politicalness;
    ordered_json p;
    for (std::size_t i = 0; i < 6; ++i) p[kReg.names()[i]] = testing::kWorkedProbs[i];
    j["party_probs"] = p;
    return j.dump();
}

std::string synthetic_corpus(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::ostringstream s;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 97 == 5) {
            s << "{\"record_id\":\"bad" << i << "\",\"politicalness\":1.5,\"party_probs\":{}}\n";
            continue;
        }
        ordered_json j;
        j["record_id"] = "r" + std::to_string(i);
        j["politicalness"] = u(rng);
        ordered_json p;
        for (const auto& name : kReg.names()) p[name] = u(rng);
        j["party_probs"] = p;
        s << j.dump() << '\n';
    }
    return s.str();
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("stance CSV parsing and row-addressed errors") {
    std::istringstream ok("statement_id,party,stance,election\ns1,Linke,1,2021\ns1,AfD,-1,2021\ns2,SPD,0,2017\n");
    const auto m = io::read_stance_csv(ok, kReg);
    CHECK(m.statement_count() == 2);
    CHECK(m.at(0, kReg.at("AfD")) == Stance::Reject);
    CHECK(m.at(0, kReg.at("SPD")) == Stance::Absent);
    CHECK(m.group(1) == "2017");

    std::istringstream bad("statement_id,party,stance\ns1,Linke,1\ns1,SPD,2\n");
    try {
        io::read_stance_csv(bad, kReg);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedField);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("'2'") != std::string::npos);
    }
    std::istringstream dup("statement_id,party,stance\ns1,SPD,1\ns1,SPD,0\n");
    CHECK(code_of([&] { io::read_stance_csv(dup, kReg); }) == ErrorCode::MalformedField);
    std::istringstream unknown("statement_id,party,stance\ns1,Piraten,1\n");
    CHECK(code_of([&] { io::read_stance_csv(unknown, kReg); }) == ErrorCode::MalformedField);
    std::istringstream missing_col("statement,party,stance\ns1,SPD,1\n");
    CHECK(code_of([&] { io::read_stance_csv(missing_col, kReg); }) == ErrorCode::MalformedField);
}

TEST_CASE("stance CSV round trip") {
    std::ifstream in(testing::data("stance_fixture.csv"));
    const auto m = io::read_stance_csv(in, kReg);
    std::stringstream s;
    io::write_stance_csv(s, m);
    const auto back = io::read_stance_csv(s, kReg);
    REQUIRE(back.statement_count() == m.statement_count());
    for (std::size_t r = 0; r < m.statement_count(); r += 97) {
        for (auto id : kReg.ids()) CHECK(back.at(r, id) == m.at(r, id));
    }
}

TEST_CASE("record JSON round trip") {
    RawRecord raw;
    raw.record_id = "x";
    raw.politicalness = 0.9;
    for (std::size_t i = 0; i < 6; ++i) raw.party_probs[kReg.names()[i]] = 0.1 * static_cast<double>(i);
    raw.outlet = "Zeit";
    raw.author_party = "FDP";
    raw.word_count = 17;
    const auto rec = validate_record(raw, kReg);
    const auto j = io::record_to_json(rec, kReg);
    CHECK(validate_record(io::raw_record_from_json(j), kReg) == rec);
}

TEST_CASE("record JSON type errors") {
    CHECK(code_of([] { io::raw_record_from_json(ordered_json::parse(R"({"politicalness":0.9})")); }) ==
          ErrorCode::MalformedField);
    CHECK(code_of([] {
              io::raw_record_from_json(ordered_json::parse(R"({"record_id":"a","politicalness":"high"})"));
          }) == ErrorCode::MalformedField);
    CHECK(code_of([] {
              io::raw_record_from_json(ordered_json::parse(R"({"record_id":"a","party_probs":{"SPD":"x"}})"));
          }) == ErrorCode::MalformedField);
    std::istringstream lines("\n" + worked_line("a", 0.9) + "\n{broken\n");
    try {
        io::read_records_jsonl(lines, kReg);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("vector set JSON round trip is exact") {
    const auto vs = testing::table_vectors();
    const auto text = io::vectors_to_json(vs).dump(2);
    std::istringstream in(text);
    const auto back = io::read_vectors_json(in, kReg);
    CHECK(back == vs);
    CHECK(text.find("\"provenance\": \"WahlomatDerived\"") != std::string::npos);

    auto j = io::vectors_to_json(vs);
    j.erase("CDU");
    CHECK(code_of([&] { io::vectors_from_json(j, kReg); }) == ErrorCode::MissingParty);
    j = io::vectors_to_json(vs);
    j["Piraten"] = {{"vx", 0.0}, {"vy", 1.0}};
    CHECK(code_of([&] { io::vectors_from_json(j, kReg); }) == ErrorCode::MalformedField);
}

TEST_CASE("ratings CSV") {
    std::istringstream in("outlet,survey_rating\nZeit,3.6\nWelt,4.8\n");
    const auto r = io::read_ratings_csv(in);
    REQUIRE(r.size() == 2);
    CHECK(r[1].scaled_label == doctest::Approx(0.8 / 3.0));
    std::istringstream bad("outlet,survey_rating\nZeit,9\n");
    CHECK(code_of([&] { io::read_ratings_csv(bad); }) == ErrorCode::OutOfRange);
    std::istringstream dup("outlet,survey_rating\nZeit,3\nZeit,4\n");
    CHECK(code_of([&] { io::read_ratings_csv(dup); }) == ErrorCode::MalformedField);
}

TEST_CASE("media ratings table") {
    std::ifstream in(testing::data("media_ratings.csv"));
    const auto t = io::read_media_ratings_csv(in);
    CHECK(t.size() == 42);
    CHECK(t.sample().size() == 33);
    CHECK(t.c_ord[0] != t.c_ord[0]);  // NaN for Achgut
    std::istringstream labels("media,a_x,b_x,b_y,c_ord,c_x\nX,1,,,left-center,\nY,2,,,2,\n");
    const auto lt = io::read_media_ratings_csv(labels);
    CHECK(lt.c_ord[0] == -1.0);
    CHECK(lt.c_ord[1] == 2.0);
}

TEST_CASE("score line output") {
    const auto vs = testing::table_vectors();
    const auto scored = score_line(worked_line("w", 0.99), 1, vs, 0.8);
    CHECK_FALSE(scored.error);
    const auto j = ordered_json::parse(scored.output);
    CHECK(j["record_id"] == "w");
    CHECK(j["score"].get<double>() == doctest::Approx(-0.339230).epsilon(1e-5));
    CHECK(j["filtered"] == false);
    CHECK(j.begin().key() == "record_id");

    const auto filtered = score_line(worked_line("f", 0.1), 2, vs, 0.8);
    const auto jf = ordered_json::parse(filtered.output);
    CHECK(jf["filtered"] == true);
    CHECK(jf["score"].is_null());
    CHECK(filtered.filtered);

    const auto bad = score_line("{oops", 3, vs, 0.8);
    REQUIRE(bad.error);
    CHECK(ordered_json::parse(*bad.error)["line"] == 3);
}

TEST_CASE("score stream keeps order and is independent of thread count") {
    const auto vs = testing::table_vectors();
    const auto corpus = synthetic_corpus(3000, 1);
    std::string reference;
    for (std::size_t threads : {1, 2, 3, 8}) {
        for (std::size_t batch : {7, 4096}) {
            std::istringstream in(corpus);
            std::ostringstream out, err;
            const auto stats = score_stream(in, out, err, vs, 0.8, threads, batch);
            CHECK(stats.lines == 3000);
            CHECK(stats.scored + stats.filtered + stats.errors == 3000);
            CHECK(stats.errors == 31);
            if (reference.empty()) reference = out.str();
            CHECK(out.str() == reference);
        }
    }
    std::size_t lines = 0;
    for (char c : reference) lines += c == '\n';
    CHECK(lines == 3000);
}

TEST_CASE("round6 normalizes") {
    CHECK(io::round6(-0.33923049) == -0.33923);
    CHECK(!std::signbit(io::round6(-1e-9)));
}

TEST_CASE("HTTP handler") {
    const auto vs = testing::table_vectors();
    auto reply = handle_score_request(worked_line("w", 0.99), vs, 0.8);
    CHECK(reply.status == 200);
    CHECK(ordered_json::parse(reply.body)["score"].get<double>() == doctest::Approx(-0.33).epsilon(0.03));

    std::string no_id = R"({"politicalness":0.2,"party_probs":{"Linke":0.1,"B90":0.1,"SPD":0.1,"FDP":0.1,"CDU":0.1,"AfD":0.1}})";
    reply = handle_score_request(no_id, vs, 0.8);
    CHECK(reply.status == 200);
    CHECK(ordered_json::parse(reply.body)["filtered"] == true);

    CHECK(handle_score_request("{not json", vs, 0.8).status == 400);
    reply = handle_score_request(R"({"politicalness":0.9,"party_probs":{"Linke":0.1}})", vs, 0.8);
    CHECK(reply.status == 400);
    CHECK(reply.body.find("MissingParty") != std::string::npos);
    std::string zero = R"({"politicalness":0.9,"party_probs":{"Linke":0,"B90":0,"SPD":0,"FDP":0,"CDU":0,"AfD":0}})";
    CHECK(handle_score_request(zero, vs, 0.8).status == 422);
}

TEST_CASE("news report") {
    std::istringstream scored(
        "{\"record_id\":\"1\",\"politicalness\":0.9,\"party_probs\":{\"Linke\":0,\"B90\":0,\"SPD\":0,\"FDP\":1,\"CDU\":0,\"AfD\":0},\"outlet\":\"A\",\"score\":0.2,\"angle_deg\":18,\"filtered\":false}\n"
        "{\"record_id\":\"2\",\"politicalness\":0.9,\"party_probs\":{\"Linke\":0,\"B90\":0,\"SPD\":0,\"FDP\":1,\"CDU\":0,\"AfD\":0},\"outlet\":\"A\",\"score\":0.4,\"angle_deg\":36,\"filtered\":false}\n"
        "{\"record_id\":\"3\",\"error\":\"ZeroVector\"}\n"
        "{\"record_id\":\"4\",\"politicalness\":0.9,\"party_probs\":{\"Linke\":0,\"B90\":0,\"SPD\":0,\"FDP\":1,\"CDU\":0,\"AfD\":0},\"outlet\":\"B\",\"score\":-0.5,\"angle_deg\":-45,\"filtered\":false}\n");
    const auto corpus = io::read_scored_jsonl(scored, kReg);
    CHECK(corpus.skipped_errors == 1);
    const std::vector<OutletRating> ratings{OutletRating::from_survey("A", 5.2), OutletRating::from_survey("B", 2.5),
                                            OutletRating::from_survey("C", 4.0)};
    const auto rep = evaluate_news(corpus, ratings, 0.8);
    REQUIRE(rep.summary);
    // |0.3 - 0.4| = 0.1, |-0.5 - (-0.5)| = 0
    CHECK(rep.summary->mae == doctest::Approx(0.05));
    const auto j = news_json(rep);
    CHECK(j["config"]["tau"] == 0.8);
    CHECK(j["outlets_without_estimate"][0] == "C");
    std::ostringstream csv;
    write_news_csv(csv, rep);
    CHECK(csv.str().find("A,5.200000,0.400000,2,2,0.300000,0.100000") != std::string::npos);
}

TEST_CASE("sentiment matrix from labeled rows") {
    const std::vector<LabeledStatement> rows{{"t1", kReg.at("SPD"), LabelStance::Agree},
                                             {"t1", kReg.at("SPD"), LabelStance::Disagree},
                                             {"t1", kReg.at("AfD"), LabelStance::Disagree},
                                             {"t2", kReg.at("SPD"), LabelStance::Agree}};
    const auto m = sentiment_matrix(rows, kReg);
    CHECK(m.statement_count() == 2);
    CHECK(m.at(0, kReg.at("SPD")) == Stance::Neutral);
    CHECK(m.at(0, kReg.at("AfD")) == Stance::Reject);
    CHECK(m.at(0, kReg.at("FDP")) == Stance::Absent);
    CHECK(m.at(1, kReg.at("SPD")) == Stance::Approve);
}

TEST_CASE("validity report on the media table") {
    std::ifstream in(testing::data("media_ratings.csv"));
    const auto t = io::read_media_ratings_csv(in);
    const auto j = validity_json(t);
    CHECK(j["all_rows"]["a_z_vs_c_ordinal"]["n"] == 18);
    CHECK(j["sample_rows"]["a_z_vs_c_ordinal"]["value"].get<double>() == doctest::Approx(0.96).epsilon(0.01));
    CHECK(j["sample_rows"]["a_x_vs_c_x"]["n"] == 7);
    CHECK(j["sample_rows"]["a_x_vs_c_x"]["value"].get<double>() == doctest::Approx(0.91).epsilon(0.01));
    CHECK(j["all_rows"]["b_x_vs_b_y"]["value"].get<double>() == doctest::Approx(0.64).epsilon(0.01));
    std::ostringstream table;
    write_validity_table(table, t);
    CHECK(table.str().rfind("media,a_x,a_z,b_pc1,c_ord,c_x,c_z,sample\n", 0) == 0);
}
