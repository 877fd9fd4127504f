#include "support.hpp"

#include "polscale/evaluation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace polscale;

namespace {

ScoredRecord scored(std::string outlet, double politicalness, std::optional<double> score) {
    ScoredRecord s{testing::record("r", politicalness, std::vector<double>(6, 0.1), std::move(outlet)), std::nullopt};
    if (score) s.score = Score{*score, *score * 90.0};
    return s;
}

ClassifiedRecord tweet(std::uint64_t words, std::size_t author, std::size_t predicted) {
    std::vector<double> p(6, 0.05);
    p[predicted] = 0.9;
    auto r = testing::record("t", 0.9, p);
    r.author_party = PartyId{author};
    r.word_count = words;
    return r;
}

}  // namespace

TEST_CASE("rating map") {
    CHECK(map_rating_1_7(5.2) == 0.4);
    // one-decimal ratings land on the double nearest to (r - 4) / 3
    for (int tenths = 10; tenths <= 70; ++tenths) {
        CHECK(map_rating_1_7(tenths / 10.0) == static_cast<double>(tenths - 40) / 30.0);
    }
    CHECK(map_rating_1_7(1.0) == -1.0);
    CHECK(map_rating_1_7(4.0) == 0.0);
    CHECK(map_rating_1_7(7.0) == 1.0);
    CHECK_THROWS_AS(map_rating_1_7(0.5), Error);
    CHECK_THROWS_AS(map_rating_1_7(std::nan("")), Error);
}

TEST_CASE("percent of scale") {
    CHECK(pct_of_scale(0.1852) == doctest::Approx(9.26).epsilon(0.005 / 9.26));
    CHECK(pct_of_scale(0.0) == 0.0);
    CHECK(pct_of_scale(2.0) == 100.0);
}

TEST_CASE("outlet estimates on a hand-computed two-outlet fixture") {
    const std::vector<OutletRating> ratings{OutletRating::from_survey("A", 5.2), OutletRating::from_survey("B", 2.5)};
    const std::vector<ScoredRecord> recs{
        scored("A", 0.9, 0.5), scored("A", 0.95, 0.1), scored("A", 0.2, std::nullopt),  // filtered
        scored("B", 0.85, -0.3), scored("C", 0.99, 0.9)};                               // C unrated
    const auto est = estimate_outlets(recs, ratings, 0.8);
    REQUIRE(est.size() == 2);
    CHECK(est[0].outlet == "A");
    CHECK(est[0].n_total == 3);
    CHECK(est[0].n_political == 2);
    CHECK(*est[0].mean_score == doctest::Approx(0.3));
    CHECK(*est[0].abs_error == doctest::Approx(0.1));
    CHECK(*est[1].mean_score == doctest::Approx(-0.3));
    CHECK(*est[1].abs_error == doctest::Approx(0.2));
    const auto s = corpus_mae_mse(est);
    CHECK(s.mae == doctest::Approx(0.15));
    CHECK(s.mse == doctest::Approx((0.01 + 0.04) / 2.0));
    CHECK(s.pct == doctest::Approx(7.5));
    CHECK(s.n == 2);
}

TEST_CASE("MAE and MSE of errors 0.1 and 0.3") {
    std::vector<OutletEstimate> est{{"a", 1, 1, 0.0, 0.1}, {"b", 1, 1, 0.0, 0.3}, {"c", 0, 0, {}, {}}};
    const auto s = corpus_mae_mse(est);
    CHECK(s.mae == doctest::Approx(0.2));
    CHECK(s.mse == doctest::Approx(0.05));
    CHECK(s.pct == doctest::Approx(10.0));
    CHECK(s.n == 2);
}

TEST_CASE("outlets without political records carry no error") {
    const std::vector<OutletRating> ratings{OutletRating::from_survey("A", 4.0)};
    const std::vector<ScoredRecord> recs{scored("A", 0.3, std::nullopt)};
    const auto est = estimate_outlets(recs, ratings, 0.8);
    CHECK(est[0].n_total == 1);
    CHECK(est[0].n_political == 0);
    CHECK_FALSE(est[0].mean_score);
    CHECK_THROWS_AS(corpus_mae_mse(est), Error);
}

TEST_CASE("duplicate ratings are rejected") {
    const std::vector<OutletRating> ratings{OutletRating::from_survey("A", 4.0), OutletRating::from_survey("A", 5.0)};
    CHECK_THROWS_AS(estimate_outlets(std::vector<ScoredRecord>{}, ratings, 0.8), Error);
}

TEST_CASE("estimates are invariant under record permutation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<ScoredRecord> recs;
    for (int i = 0; i < 500; ++i) recs.push_back(scored(i % 3 == 0 ? "A" : "B", 0.9, u(rng)));
    const std::vector<OutletRating> ratings{OutletRating::from_survey("A", 3.3), OutletRating::from_survey("B", 4.7)};
    const auto ref = estimate_outlets(recs, ratings, 0.8);
    for (int k = 0; k < 10; ++k) {
        std::shuffle(recs.begin(), recs.end(), rng);
        const auto est = estimate_outlets(recs, ratings, 0.8);
        CHECK(*est[0].mean_score == *ref[0].mean_score);
        CHECK(*est[1].mean_score == *ref[1].mean_score);
    }
}

TEST_CASE("bucket construction") {
    const auto d = default_length_buckets();
    REQUIRE(d.size() == 11);
    CHECK(d[0].lo == 1);
    CHECK(d[0].hi == 10);
    CHECK(d[1].lo == 10);
    CHECK(d[9].hi == 100);
    CHECK(d[10].open_ended());
    const auto p = parse_buckets("1, 10,20");
    REQUIRE(p.size() == 3);
    CHECK(p[2].lo == 20);
    CHECK_THROWS_AS(parse_buckets("10,5"), Error);
    CHECK_THROWS_AS(parse_buckets("a,b"), Error);
    CHECK_THROWS_AS(parse_buckets(""), Error);
}

TEST_CASE("argmax prefers the lowest index on ties") {
    CHECK(argmax_party(std::vector<double>{0.2, 0.5, 0.5, 0.1}).index == 1);
    CHECK(argmax_party(std::vector<double>{0.3, 0.3}).index == 0);
    CHECK(argmax_party(std::vector<double>{0.0, 0.0, 0.7}).index == 2);
}

TEST_CASE("accuracy by length with a perfectly linear trend") {
    // closed buckets [0,20), [20,40), [40,60): midpoints 10, 30, 50
    const std::vector<std::uint64_t> edges{0, 20, 40, 60};
    auto buckets = buckets_from_edges(edges);
    buckets.pop_back();  // drop the open tail for this case
    std::vector<ClassifiedRecord> recs;
    for (int i = 0; i < 4; ++i) recs.push_back(tweet(5, 1, i < 2 ? 1 : 2));   // 0.5
    for (int i = 0; i < 4; ++i) recs.push_back(tweet(25, 3, i < 3 ? 3 : 0));  // 0.75
    for (int i = 0; i < 4; ++i) recs.push_back(tweet(45, 4, 4));              // 1.0
    const auto rep = tweet_accuracy_by_length(recs, buckets);
    REQUIRE(rep.buckets.size() == 3);
    CHECK(rep.buckets[0].midpoint == 10.0);
    CHECK(rep.buckets[1].midpoint == 30.0);
    CHECK(rep.buckets[2].midpoint == 50.0);
    CHECK(rep.buckets[0].accuracy == 0.5);
    CHECK(rep.buckets[1].accuracy == 0.75);
    CHECK(rep.buckets[2].accuracy == 1.0);
    CHECK(rep.r == doctest::Approx(1.0));
    CHECK(rep.warnings.empty());
}

TEST_CASE("empty buckets warn and are excluded") {
    const std::vector<std::uint64_t> edges{1, 10, 20, 30};
    const auto buckets = buckets_from_edges(edges);
    std::vector<ClassifiedRecord> recs{tweet(3, 0, 0), tweet(15, 0, 1), tweet(35, 0, 0), tweet(0, 0, 0)};
    const auto rep = tweet_accuracy_by_length(recs, buckets);
    CHECK(rep.buckets[2].n == 0);
    CHECK(std::isnan(rep.buckets[2].accuracy));
    CHECK(rep.out_of_range == 1);
    // open tail: lo + half the previous width
    CHECK(rep.buckets[3].midpoint == 35.0);
    const bool warned = std::any_of(rep.warnings.begin(), rep.warnings.end(),
                                    [](const std::string& w) { return w.find("EmptyBucket") != std::string::npos; });
    CHECK(warned);
    CHECK_FALSE(std::isnan(rep.r));
}

TEST_CASE("too few buckets leave r undefined") {
    const std::vector<std::uint64_t> edges{1, 10};
    const auto buckets = buckets_from_edges(edges);
    const auto rep = tweet_accuracy_by_length(std::vector<ClassifiedRecord>{tweet(3, 0, 0)}, buckets);
    CHECK(std::isnan(rep.r));
    CHECK_FALSE(rep.warnings.empty());
}

TEST_CASE("tweet records need author and length") {
    const auto buckets = default_length_buckets();
    auto r = tweet(5, 0, 0);
    r.author_party.reset();
    try {
        tweet_accuracy_by_length(std::vector<ClassifiedRecord>{r}, buckets);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingAuthorParty);
    }
    r = tweet(5, 0, 0);
    r.word_count.reset();
    CHECK_THROWS_AS(tweet_accuracy_by_length(std::vector<ClassifiedRecord>{r}, buckets), Error);
}
