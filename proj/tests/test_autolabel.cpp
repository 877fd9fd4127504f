#include "support.hpp"

#include "polscale/autolabel.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace polscale;

namespace {

const PartyRegistry kReg = PartyRegistry::german_default();

std::vector<SpeechRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_protocol(in, kReg);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ErrorCode code_of(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("protocol parsing") {
    const auto speeches = parse(
        "# header comment\n"
        "SPEECH 1 | Jane Doe | SPD\n"
        "First line\n"
        "  second line  \n"
        "(Beifall: SPD, B90)\n"
        "(applause: Linke)\n"
        "(Zwischenruf: CDU)\n"
        "\n"
        "SPEECH 2 | Guest | -\n"
        "Greeting.\n");
    REQUIRE(speeches.size() == 2);
    CHECK(speeches[0].speech_id == "1");
    CHECK(speeches[0].speaker == "Jane Doe");
    CHECK(speeches[0].speaker_party == kReg.at("SPD"));
    CHECK(speeches[0].text == "First line second line");
    REQUIRE(speeches[0].interruptions.size() == 3);
    CHECK(speeches[0].interruptions[0].kind == InterruptionKind::Applause);
    CHECK(speeches[0].interruptions[0].parties.size() == 2);
    CHECK(speeches[0].interruptions[1].kind == InterruptionKind::Applause);
    CHECK(speeches[0].interruptions[2].kind == InterruptionKind::Other);
    CHECK(speeches[0].interruptions[2].tag == "Zwischenruf");
    CHECK_FALSE(speeches[1].speaker_party);
    CHECK(speeches[1].interruptions.empty());
}

TEST_CASE("malformed protocols") {
    CHECK(code_of("text before header\n") == ErrorCode::MalformedProtocol);
    CHECK(code_of("SPEECH 1 | a\n") == ErrorCode::MalformedProtocol);
    CHECK(code_of("SPEECH 1 | a | SPD\n(Beifall: SPD)\n") == ErrorCode::MalformedProtocol);
    CHECK(code_of("SPEECH 1 | a | SPD\ntext\n(Beifall: Piraten)\n") == ErrorCode::MalformedProtocol);
    CHECK(code_of("SPEECH 1 | a | SPD\ntext\n(Beifall)\n") == ErrorCode::MalformedProtocol);
    try {
        parse("SPEECH 1 | a | SPD\ntext\n(Beifall: Piraten)\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("default rules and self-party exclusion") {
    const auto speeches = parse(
        "SPEECH 1 | s | CDU\nText.\n(Beifall: CDU, FDP)\n(Zuruf: SPD)\n(Widerspruch: Linke)\n(Lachen: B90)\n");
    const auto rows = extract_sentiments(speeches, RuleTable::defaults());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].party == kReg.at("FDP"));
    CHECK(rows[0].stance == LabelStance::Agree);
    CHECK(rows[1].party == kReg.at("SPD"));
    CHECK(rows[1].stance == LabelStance::Disagree);
    CHECK(rows[2].party == kReg.at("Linke"));

    const auto with_self = extract_sentiments(speeches, RuleTable::defaults(), ExtractOptions{false});
    CHECK(with_self.size() == 4);

    auto rules = RuleTable::defaults();
    rules.set(InterruptionKind::Laughter, LabelStance::Disagree);
    CHECK(extract_sentiments(speeches, rules).size() == 4);

    const auto positive = filter_positive(rows);
    REQUIRE(positive.size() == 1);
    CHECK(positive[0].stance == LabelStance::Agree);
}

TEST_CASE("speeches without interruptions yield no rows") {
    const auto rows = extract_sentiments(parse("SPEECH 1 | s | CDU\nQuiet.\n"), RuleTable::defaults());
    CHECK(rows.empty());
}

TEST_CASE("golden fixture") {
    std::ifstream in(testing::data("protocol_fixture.txt"));
    REQUIRE(in);
    const auto speeches = parse_protocol(in, kReg);
    CHECK(speeches.size() == 3);
    const auto rows = extract_sentiments(speeches, RuleTable::defaults());
    std::ostringstream out;
    write_labeled_csv(out, rows, kReg);
    CHECK(out.str() == slurp(testing::data("protocol_fixture.labeled.csv")));
}

TEST_CASE("labeled CSV round trip") {
    const std::vector<LabeledStatement> rows{{"a, \"quoted\" text", kReg.at("SPD"), LabelStance::Agree},
                                             {"multi\nline", kReg.at("AfD"), LabelStance::Disagree}};
    std::stringstream s;
    write_labeled_csv(s, rows, kReg);
    CHECK(read_labeled_csv(s, kReg) == rows);
    std::istringstream bad("text,party,stance\nx,SPD,maybe\n");
    CHECK_THROWS_AS(read_labeled_csv(bad, kReg), Error);
}
