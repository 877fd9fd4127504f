#include "polscale/pipeline.hpp"

#include "polscale/csv.hpp"
#include "polscale/projection.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace polscale {

using io::ordered_json;

namespace {

std::string format_cell(double v) {
    if (std::isnan(v)) return {};
    std::ostringstream s;
    s.precision(6);
    s << std::fixed << io::round6(v);
    return s.str();
}

}  // namespace

ScoredLine score_line(const std::string& line, std::size_t line_no, const PartyVectorSet& vectors, double tau) {
    ordered_json input;
    try {
        input = ordered_json::parse(line);
    } catch (const nlohmann::json::exception&) {
        const ordered_json out = {{"line", line_no}, {"error", "MalformedField"}};
        const ordered_json side = {{"line", line_no}, {"error", "MalformedField"}, {"message", "line is not valid JSON"}};
        return {out.dump(), side.dump(), false};
    }
    try {
        const auto record = validate_record(io::raw_record_from_json(input), vectors.parties());
        const auto score = score_record(record, vectors, tau);
        if (score) {
            input["score"] = io::round6(score->value);
            input["angle_deg"] = io::round6(score->angle_deg);
            input["filtered"] = false;
        } else {
            input["score"] = nullptr;
            input["angle_deg"] = nullptr;
            input["filtered"] = true;
        }
        return {input.dump(), std::nullopt, !score};
    } catch (const Error& e) {
        ordered_json out = input.is_object() ? input : ordered_json::object();
        const std::string code(to_string(e.code()));
        out["error"] = code;
        ordered_json side = {{"line", line_no}};
        if (input.is_object() && input.contains("record_id")) side["record_id"] = input["record_id"];
        side["error"] = code;
        side["message"] = e.message();
        return {out.dump(), side.dump(), false};
    }
}

ScoreStreamStats score_stream(std::istream& in, std::ostream& out, std::ostream& errors,
                              const PartyVectorSet& vectors, double tau, std::size_t threads,
                              std::size_t batch_size) {
    threads = std::max<std::size_t>(threads, 1);
    batch_size = std::max<std::size_t>(batch_size, 1);
    ScoreStreamStats stats;
    std::vector<std::pair<std::size_t, std::string>> batch;
    std::vector<ScoredLine> results;

    auto flush = [&]() {
        results.assign(batch.size(), {});
        const std::size_t n_workers = std::min(threads, batch.size());
        const std::size_t chunk = (batch.size() + n_workers - 1) / n_workers;
        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                results[i] = score_line(batch[i].second, batch[i].first, vectors, tau);
            }
        };
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < n_workers; ++w) {
            pool.emplace_back(work, w * chunk, std::min(batch.size(), (w + 1) * chunk));
        }
        work(0, std::min(batch.size(), chunk));
        pool.clear();
        for (const auto& r : results) {
            out << r.output << '\n';
            if (r.error) {
                errors << *r.error << '\n';
                ++stats.errors;
            } else if (r.filtered) {
                ++stats.filtered;
            } else {
                ++stats.scored;
            }
        }
        batch.clear();
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++stats.lines;
        batch.emplace_back(line_no, std::move(line));
        if (batch.size() >= batch_size) flush();
    }
    if (!batch.empty()) flush();
    if (!out) throw Error(ErrorCode::Io, "failed writing scored output");
    return stats;
}

NewsReport evaluate_news(const io::ScoredCorpus& corpus, const std::vector<OutletRating>& ratings, double tau) {
    NewsReport rep;
    rep.ratings = ratings;
    rep.tau = tau;
    rep.skipped_errors = corpus.skipped_errors;
    rep.estimates = estimate_outlets(corpus.records, ratings, tau);
    try {
        rep.summary = corpus_mae_mse(rep.estimates);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoEstimates) throw;
    }
    return rep;
}

void write_news_csv(std::ostream& out, const NewsReport& report) {
    csv::write_row(out, {"outlet", "survey_rating", "label", "n_total", "n_political", "mean_score", "abs_error"});
    for (std::size_t i = 0; i < report.estimates.size(); ++i) {
        const auto& e = report.estimates[i];
        const auto& r = report.ratings[i];
        csv::write_row(out, {e.outlet, format_cell(r.survey_rating), format_cell(r.scaled_label),
                             std::to_string(e.n_total), std::to_string(e.n_political),
                             e.mean_score ? format_cell(*e.mean_score) : "",
                             e.abs_error ? format_cell(*e.abs_error) : ""});
    }
}

ordered_json news_json(const NewsReport& report) {
    ordered_json j;
    j["config"] = {{"tau", report.tau}};
    if (report.summary) {
        j["mae"] = io::round6(report.summary->mae);
        j["mse"] = io::round6(report.summary->mse);
        j["pct_of_scale"] = io::round6(report.summary->pct);
        j["n_outlets_scored"] = report.summary->n;
    } else {
        j["mae"] = nullptr;
        j["mse"] = nullptr;
        j["pct_of_scale"] = nullptr;
        j["n_outlets_scored"] = 0;
    }
    j["skipped_error_lines"] = report.skipped_errors;
    ordered_json empty = ordered_json::array();
    ordered_json outlets = ordered_json::array();
    for (std::size_t i = 0; i < report.estimates.size(); ++i) {
        const auto& e = report.estimates[i];
        if (!e.mean_score) empty.push_back(e.outlet);
        outlets.push_back({{"outlet", e.outlet},
                           {"label", io::round6(report.ratings[i].scaled_label)},
                           {"n_total", e.n_total},
                           {"n_political", e.n_political},
                           {"mean_score", e.mean_score ? ordered_json(io::round6(*e.mean_score)) : nullptr},
                           {"abs_error", e.abs_error ? ordered_json(io::round6(*e.abs_error)) : nullptr}});
    }
    j["outlets_without_estimate"] = empty;
    j["outlets"] = outlets;
    return j;
}

void write_tweet_csv(std::ostream& out, const TweetAccuracyReport& report) {
    csv::write_row(out, {"bucket_lo", "bucket_hi", "midpoint", "n", "correct", "accuracy"});
    for (const auto& b : report.buckets) {
        const bool open = b.bucket_hi == std::numeric_limits<std::uint64_t>::max();
        csv::write_row(out, {std::to_string(b.bucket_lo), open ? "" : std::to_string(b.bucket_hi),
                             format_cell(b.midpoint), std::to_string(b.n), std::to_string(b.correct),
                             format_cell(b.accuracy)});
    }
}

namespace {
ordered_json nullable(double x) { return std::isnan(x) ? ordered_json(nullptr) : ordered_json(io::round6(x)); }
}  // namespace

ordered_json tweet_json(const TweetAccuracyReport& report, const std::vector<LengthBucket>& buckets) {
    ordered_json edges = ordered_json::array();
    for (const auto& b : buckets) edges.push_back(b.lo);
    ordered_json j;
    j["config"] = {{"bucket_edges", edges}};
    ordered_json rows = ordered_json::array();
    for (const auto& b : report.buckets) {
        const bool open = b.bucket_hi == std::numeric_limits<std::uint64_t>::max();
        rows.push_back({{"bucket_lo", b.bucket_lo},
                        {"bucket_hi", open ? ordered_json(nullptr) : ordered_json(b.bucket_hi)},
                        {"midpoint", b.midpoint},
                        {"n", b.n},
                        {"correct", b.correct},
                        {"accuracy", nullable(b.accuracy)}});
    }
    j["buckets"] = rows;
    j["r_length_accuracy"] = nullable(report.r);
    j["out_of_range"] = report.out_of_range;
    j["warnings"] = report.warnings;
    return j;
}

ordered_json optimization_json(const OptimizationResult& result, const OptimizationConfig& config,
                               const PartyRegistry& parties) {
    ordered_json delta = ordered_json::object();
    for (auto id : parties.ids()) delta[parties.name(id)] = config.delta.at(id.index);
    ordered_json j;
    j["config"] = {{"tau", config.tau},
                   {"delta", delta},
                   {"seed", config.seed},
                   {"initial_step", config.initial_step},
                   {"min_step", config.min_step},
                   {"max_iterations", config.max_iterations}};
    j["mae_before"] = result.mae_before;
    j["mae_after"] = result.mae_after;
    j["evaluations"] = result.evaluations;
    j["final_step"] = result.final_step;
    ordered_json disp = ordered_json::object();
    for (auto id : parties.ids()) {
        const auto& d = result.displacement.at(id.index);
        disp[parties.name(id)] = {{"dx", d.x}, {"dy", d.y}, {"norm", std::hypot(d.x, d.y)}};
    }
    j["displacement"] = disp;
    ordered_json outlets = ordered_json::array();
    for (const auto& o : result.outlets) {
        outlets.push_back({{"outlet", o.outlet},
                           {"label", o.label},
                           {"n_political", o.n_political},
                           {"estimate_before", o.estimate_before},
                           {"estimate_after", o.estimate_after},
                           {"abs_error_before", std::abs(o.estimate_before - o.label)},
                           {"abs_error_after", std::abs(o.estimate_after - o.label)}});
    }
    j["outlets"] = outlets;
    ordered_json trace = ordered_json::array();
    for (const auto& t : result.trace) trace.push_back({{"evaluation", t.iteration}, {"mae", t.mae}});
    j["trace"] = trace;
    return j;
}

StanceMatrix sentiment_matrix(const std::vector<LabeledStatement>& rows, const PartyRegistry& parties) {
    std::vector<std::string> statements;
    std::map<std::string, std::size_t> index;
    std::vector<int> net;
    std::vector<bool> seen;
    const std::size_t k = parties.size();
    for (const auto& r : rows) {
        auto [it, inserted] = index.emplace(r.text, statements.size());
        if (inserted) {
            statements.push_back(r.text);
            net.resize(net.size() + k, 0);
            seen.resize(seen.size() + k, false);
        }
        const std::size_t cell = it->second * k + r.party.index;
        net[cell] += r.stance == LabelStance::Agree ? 1 : -1;
        seen[cell] = true;
    }
    if (statements.empty()) throw Error(ErrorCode::MalformedField, "sentiment file holds no labeled rows");
    std::vector<Stance> cells(net.size(), Stance::Absent);
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (!seen[i]) continue;
        cells[i] = net[i] > 0 ? Stance::Approve : net[i] < 0 ? Stance::Reject : Stance::Neutral;
    }
    return StanceMatrix(parties, std::move(statements), std::move(cells));
}

void write_association_csv(std::ostream& out, const AssociationMatrix& lower, const AssociationMatrix* upper) {
    const auto& parties = lower.parties;
    std::vector<double> diag;
    if (upper) diag = profile_similarity(lower, *upper);
    std::vector<std::string> header{"party"};
    for (const auto& n : parties.names()) header.push_back(n);
    csv::write_row(out, header);
    for (auto a : parties.ids()) {
        std::vector<std::string> row{parties.name(a)};
        for (auto b : parties.ids()) {
            double v = lower.at(a, b);
            if (upper) {
                if (a == b) {
                    v = diag[a.index];
                } else if (b.index > a.index) {
                    v = upper->at(a, b);
                }
            }
            row.push_back(format_cell(v));
        }
        csv::write_row(out, row);
    }
}

namespace {

ordered_json correlation_entry(const char* method, std::span<const double> x, std::span<const double> y) {
    ordered_json j;
    j["method"] = method;
    try {
        const auto c = std::string_view(method) == "spearman" ? spearman(x, y) : pearson(x, y);
        j["value"] = io::round6(c.value);
        j["n"] = c.n;
    } catch (const Error& e) {
        j["value"] = nullptr;
        j["error"] = std::string(to_string(e.code()));
    }
    return j;
}

ordered_json validity_block(const io::MediaRatingsTable& t) {
    const auto a_z = z_transform(t.a_x);
    ordered_json j;
    j["rows"] = t.size();
    j["a_z_vs_c_ordinal"] = correlation_entry("spearman", a_z, t.c_ord);
    j["a_x_vs_c_x"] = correlation_entry("pearson", t.a_x, t.c_x);
    j["b_x_vs_b_y"] = correlation_entry("pearson", t.b_x, t.b_y);
    try {
        const auto pc1 = pc1_two_scales(t.b_x, t.b_y);
        j["a_z_vs_b_pc1"] = correlation_entry("pearson", a_z, pc1);
    } catch (const Error& e) {
        j["a_z_vs_b_pc1"] = {{"method", "pearson"}, {"value", nullptr}, {"error", std::string(to_string(e.code()))}};
    }
    return j;
}

}  // namespace

ordered_json validity_json(const io::MediaRatingsTable& table) {
    ordered_json j;
    j["all_rows"] = validity_block(table);
    const auto sample = table.sample();
    if (sample.size() > 0) j["sample_rows"] = validity_block(sample);
    return j;
}

void write_validity_table(std::ostream& out, const io::MediaRatingsTable& t) {
    const auto a_z = z_transform(t.a_x);
    const auto c_z = z_transform(t.c_x);
    const auto pc1 = pc1_two_scales(t.b_x, t.b_y);
    csv::write_row(out, {"media", "a_x", "a_z", "b_pc1", "c_ord", "c_x", "c_z", "sample"});
    for (std::size_t i = 0; i < t.size(); ++i) {
        csv::write_row(out, {t.media[i], format_cell(t.a_x[i]), format_cell(a_z[i]), format_cell(pc1[i]),
                             std::isnan(t.c_ord[i]) ? "" : std::to_string(static_cast<int>(t.c_ord[i])),
                             format_cell(t.c_x[i]), format_cell(c_z[i]), t.in_sample[i] ? "1" : "0"});
    }
}

}  // namespace polscale
