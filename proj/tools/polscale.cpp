// polscale: command-line front end.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include "polscale/autolabel.hpp"
#include "polscale/csv.hpp"
#include "polscale/enrichment.hpp"
#include "polscale/evaluation.hpp"
#include "polscale/io.hpp"
#include "polscale/optimizer.hpp"
#include "polscale/pipeline.hpp"
#include "polscale/positioning.hpp"
#include "polscale/service.hpp"
#include "polscale/stats.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace polscale;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct Common {
    std::string parties;
    std::string out = ".";
    double tau = 0.8;
};

PartyRegistry registry(const Common& c) {
    if (c.parties.empty()) return PartyRegistry::german_default();
    std::vector<std::string> names;
    std::stringstream ss(c.parties);
    for (std::string n; std::getline(ss, n, ',');) names.push_back(n);
    return PartyRegistry(std::move(names));
}

void require_inputs(std::initializer_list<std::string> paths) {
    for (const auto& p : paths) {
        if (p.empty()) continue;
        if (!fs::is_regular_file(p)) throw Error(ErrorCode::Io, "input file '" + p + "' does not exist");
    }
}

fs::path output_dir(const Common& c) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (!fs::is_directory(c.out)) throw Error(ErrorCode::Io, "output directory '" + c.out + "' is not usable");
    return c.out;
}

void check_tau(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::OutOfRange, "--tau must lie in [0, 1]");
}

void write_json(const fs::path& path, const io::ordered_json& j) {
    auto out = io::open_output(path);
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

template <typename Fn>
auto with_file_context(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.message());
    }
}

template <typename T, typename Reader>
T read_file(const std::string& path, Reader&& reader) {
    auto in = io::open_input(path);
    return with_file_context(path, [&] { return reader(in); });
}

// --- commands ---------------------------------------------------------------

int cmd_positions(const Common& c, const std::string& stance_path, bool per_election) {
    require_inputs({stance_path});
    const auto dir = output_dir(c);
    const auto parties = registry(c);
    const auto matrix = read_file<StanceMatrix>(stance_path, [&](std::istream& in) {
        return io::read_stance_csv(in, parties);
    });
    const auto vectors = build_vector_set(matrix, PositioningPlan::german_default(parties),
                                          per_election ? DistanceMode::PerElection : DistanceMode::Pooled);
    write_json(dir / "vectors.json", io::vectors_to_json(vectors));
    for (auto id : parties.ids()) {
        const auto& v = vectors.at(id);
        std::cout << std::left << std::setw(8) << parties.name(id) << std::right << std::fixed
                  << std::setprecision(1) << std::setw(7) << v.theta_deg << std::setprecision(3) << std::setw(8)
                  << v.vx << std::setw(8) << v.vy << '\n';
    }
    return 0;
}

PartyVectorSet load_vectors(const std::string& path, const PartyRegistry& parties) {
    return read_file<PartyVectorSet>(path, [&](std::istream& in) { return io::read_vectors_json(in, parties); });
}

int cmd_score(const Common& c, const std::string& records_path, const std::string& vectors_path,
              std::size_t threads) {
    require_inputs({records_path, vectors_path});
    check_tau(c.tau);
    const auto dir = output_dir(c);
    const auto parties = registry(c);
    const auto vectors = load_vectors(vectors_path, parties);
    auto in = io::open_input(records_path);
    auto out = io::open_output(dir / "scored.jsonl");
    auto errors = io::open_output(dir / "scored.errors.jsonl");
    const auto stats = score_stream(in, out, errors, vectors, c.tau, threads);
    std::cerr << "scored " << stats.scored << ", filtered " << stats.filtered << ", errors " << stats.errors
              << " of " << stats.lines << " lines\n";
    return stats.errors > 0 ? kExitValidation : 0;
}

int cmd_evaluate_news(const Common& c, const std::string& scored_path, const std::string& ratings_path) {
    require_inputs({scored_path, ratings_path});
    check_tau(c.tau);
    const auto dir = output_dir(c);
    const auto parties = registry(c);
    const auto ratings = read_file<std::vector<OutletRating>>(ratings_path, io::read_ratings_csv);
    const auto corpus = read_file<io::ScoredCorpus>(scored_path, [&](std::istream& in) {
        return io::read_scored_jsonl(in, parties);
    });
    const auto report = evaluate_news(corpus, ratings, c.tau);
    {
        auto out = io::open_output(dir / "report.csv");
        write_news_csv(out, report);
    }
    write_json(dir / "report.json", news_json(report));
    if (report.summary) {
        std::cout << std::fixed << std::setprecision(4) << "MAE " << report.summary->mae << " ("
                  << std::setprecision(2) << report.summary->pct << "%), MSE " << std::setprecision(4)
                  << report.summary->mse << " over " << report.summary->n << " outlets\n";
    } else {
        std::cout << "no outlet has a political record above tau\n";
    }
    return 0;
}

int cmd_evaluate_tweets(const Common& c, const std::string& records_path, const std::string& buckets_spec) {
    require_inputs({records_path});
    const auto dir = output_dir(c);
    const auto parties = registry(c);
    const auto buckets = buckets_spec.empty() ? default_length_buckets() : parse_buckets(buckets_spec);
    const auto records = read_file<std::vector<ClassifiedRecord>>(records_path, [&](std::istream& in) {
        return io::read_records_jsonl(in, parties);
    });
    const auto report = tweet_accuracy_by_length(records, buckets);
    {
        auto out = io::open_output(dir / "tweet_report.csv");
        write_tweet_csv(out, report);
    }
    write_json(dir / "tweet_report.json", tweet_json(report, buckets));
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "r(length, accuracy) = "
              << (std::isnan(report.r) ? std::string("undefined") : std::to_string(report.r)) << '\n';
    return 0;
}

struct OptimizeArgs {
    std::string records, ratings, vectors;
    double delta_default = 0.25;
    std::vector<std::string> delta_overrides;
    std::string pinned = "Linke,AfD";
    std::uint64_t seed = 0;
    double initial_step = 0.1;
    double min_step = 1e-4;
    std::size_t max_iterations = 10000;
};

int cmd_optimize(const Common& c, const OptimizeArgs& a) {
    require_inputs({a.records, a.ratings, a.vectors});
    check_tau(c.tau);
    const auto dir = output_dir(c);
    const auto parties = registry(c);

    std::vector<PartyId> pinned;
    std::stringstream ss(a.pinned);
    for (std::string n; std::getline(ss, n, ',');) {
        if (!n.empty()) pinned.push_back(parties.at(n));
    }
    auto config = OptimizationConfig::with_pinned(parties, pinned, a.delta_default);
    for (const auto& o : a.delta_overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::MalformedField, "--delta expects PARTY=VALUE, got '" + o + "'");
        try {
            config.delta[parties.at(o.substr(0, eq)).index] = std::stod(o.substr(eq + 1));
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::MalformedField, "--delta value in '" + o + "' is not a number");
        }
    }
    config.tau = c.tau;
    config.seed = a.seed;
    config.initial_step = a.initial_step;
    config.min_step = a.min_step;
    config.max_iterations = a.max_iterations;

    const auto baseline = load_vectors(a.vectors, parties);
    const auto ratings = read_file<std::vector<OutletRating>>(a.ratings, io::read_ratings_csv);
    const auto records = read_file<std::vector<ClassifiedRecord>>(a.records, [&](std::istream& in) {
        return io::read_records_jsonl(in, parties);
    });
    const auto result = optimize_vectors(baseline, records, ratings, config);
    write_json(dir / "optimized_vectors.json", io::vectors_to_json(result.vectors));
    write_json(dir / "trace.json", optimization_json(result, config, parties));
    std::cout << std::fixed << std::setprecision(6) << "MAE " << result.mae_before << " -> " << result.mae_after
              << " after " << result.evaluations << " evaluations\n";
    return 0;
}

int cmd_associations(const Common& c, const std::string& stance_path, const std::string& sentiment_path) {
    require_inputs({stance_path, sentiment_path});
    const auto dir = output_dir(c);
    const auto parties = registry(c);
    const auto matrix = read_file<StanceMatrix>(stance_path, [&](std::istream& in) {
        return io::read_stance_csv(in, parties);
    });
    const auto lower = party_association(matrix);
    for (const auto& note : lower.undefined) std::cerr << "note: " << note << '\n';
    auto out = io::open_output(dir / "matrix.csv");
    if (sentiment_path.empty()) {
        write_association_csv(out, lower);
        return 0;
    }
    const auto rows = read_file<std::vector<LabeledStatement>>(sentiment_path, [&](std::istream& in) {
        return read_labeled_csv(in, parties);
    });
    const auto upper = party_association(sentiment_matrix(rows, parties));
    for (const auto& note : upper.undefined) std::cerr << "note (sentiment): " << note << '\n';
    write_association_csv(out, lower, &upper);
    return 0;
}

int cmd_validity(const Common& c, const std::string& table_path) {
    require_inputs({table_path});
    const auto dir = output_dir(c);
    const auto table = read_file<io::MediaRatingsTable>(table_path, io::read_media_ratings_csv);
    const auto j = validity_json(table);
    write_json(dir / "correlations.json", j);
    {
        auto out = io::open_output(dir / "validity_table.csv");
        write_validity_table(out, table);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

struct AutolabelArgs {
    std::vector<std::string> protocols;
    bool positive_only = false;
    bool keep_self_party = false;
    std::vector<std::string> rules;
};

int cmd_autolabel(const Common& c, const AutolabelArgs& a) {
    for (const auto& p : a.protocols) require_inputs({p});
    const auto dir = output_dir(c);
    const auto parties = registry(c);
    auto rules = RuleTable::defaults();
    for (const auto& r : a.rules) {
        const auto eq = r.find('=');
        static const std::map<std::string, InterruptionKind> kinds = {
            {"applause", InterruptionKind::Applause}, {"heckle", InterruptionKind::Heckle},
            {"objection", InterruptionKind::Objection}, {"laughter", InterruptionKind::Laughter},
            {"question", InterruptionKind::Question}};
        const auto kind = eq == std::string::npos ? kinds.end() : kinds.find(r.substr(0, eq));
        if (kind == kinds.end()) throw Error(ErrorCode::MalformedField, "--rule expects KIND=agree|disagree|none, got '" + r + "'");
        const auto value = r.substr(eq + 1);
        if (value == "none") {
            rules.set(kind->second, std::nullopt);
        } else if (auto s = parse_label_stance(value)) {
            rules.set(kind->second, *s);
        } else {
            throw Error(ErrorCode::MalformedField, "--rule value '" + value + "' is not agree, disagree or none");
        }
    }
    std::vector<SpeechRecord> speeches;
    for (const auto& p : a.protocols) {
        auto part = read_file<std::vector<SpeechRecord>>(p, [&](std::istream& in) { return parse_protocol(in, parties); });
        speeches.insert(speeches.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    auto rows = extract_sentiments(speeches, rules, ExtractOptions{!a.keep_self_party});
    if (a.positive_only) rows = filter_positive(rows);
    auto out = io::open_output(dir / "labeled.csv");
    write_labeled_csv(out, rows, parties);
    std::cerr << rows.size() << " labeled rows from " << speeches.size() << " speeches\n";
    return 0;
}

int cmd_gate(const Common& c, const std::string& embeddings_path, double threshold) {
    require_inputs({embeddings_path});
    const auto dir = output_dir(c);
    const auto embeddings = read_file<std::vector<Embedding>>(embeddings_path, read_embeddings_jsonl);
    std::map<std::string, const Embedding*> originals;
    for (const auto& e : embeddings) {
        if (e.source_id.empty()) originals.emplace(e.id, &e);
    }
    std::vector<std::vector<double>> a, b;
    for (const auto& e : embeddings) {
        if (e.source_id.empty()) continue;
        const auto it = originals.find(e.source_id);
        if (it == originals.end()) {
            throw Error(ErrorCode::MalformedField, embeddings_path + ": paraphrase '" + e.id +
                                                       "' refers to unknown original '" + e.source_id + "'");
        }
        a.push_back(it->second->vector);
        b.push_back(e.vector);
    }
    const auto rep = similarity_gate(a, b, threshold);
    io::ordered_json j = {{"config", {{"threshold", threshold}}},
                          {"n", rep.n},
                          {"mean", io::round6(rep.mean)},
                          {"p05", io::round6(rep.p05)},
                          {"pass", rep.pass}};
    write_json(dir / "gate.json", j);
    std::cout << std::fixed << std::setprecision(3) << "mean " << rep.mean << ", p05 " << rep.p05
              << (rep.pass ? " -> pass\n" : " -> FAIL\n");
    return rep.pass ? 0 : kExitValidation;
}

int cmd_paraphrase(const Common& c, const std::string& input_path, const std::string& personas_spec,
                   std::size_t parallel) {
    require_inputs({input_path});
    const auto dir = output_dir(c);
    EnrichOptions options;
    options.max_parallel = parallel;
    if (!personas_spec.empty()) {
        options.personas.clear();
        std::stringstream ss(personas_spec);
        for (std::string n; std::getline(ss, n, ',');) {
            auto p = parse_persona(n);
            if (!p) throw Error(ErrorCode::MalformedField, "unknown persona '" + n + "'");
            options.personas.push_back(*p);
        }
    }
    auto in = io::open_input(input_path);
    const auto rows = with_file_context(input_path, [&] { return csv::read(in); });
    if (rows.empty()) throw Error(ErrorCode::MalformedField, input_path + ": empty file");
    const auto& header = rows[0].fields;
    const auto c_id = csv::column(rows[0], "id");
    const auto c_text = csv::column(rows[0], "text");
    std::vector<LabeledText> items;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() != header.size()) {
            throw Error(ErrorCode::MalformedField, input_path + ": line " + std::to_string(rows[i].line) +
                                                       ": wrong number of columns");
        }
        LabeledText t{f[c_id], f[c_text], {}};
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (k != c_id && k != c_text) t.labels.emplace_back(header[k], f[k]);
        }
        items.push_back(std::move(t));
    }
    auto provider = HttpParaphraseProvider::from_environment();
    const auto enriched = enrich(provider, items, options);
    auto out = io::open_output(dir / "enriched.csv");
    std::vector<std::string> out_header{"source_id", "persona", "text"};
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (k != c_id && k != c_text) out_header.push_back(header[k]);
    }
    csv::write_row(out, out_header);
    for (const auto& e : enriched) {
        std::vector<std::string> row{e.source_id, std::string(to_string(e.persona)), e.text};
        for (const auto& [name, value] : e.labels) row.push_back(value);
        csv::write_row(out, row);
    }
    return 0;
}

int cmd_serve(const Common& c, const std::string& vectors_path, const std::string& host, int port) {
    require_inputs({vectors_path});
    check_tau(c.tau);
    const auto parties = registry(c);
    const auto vectors = load_vectors(vectors_path, parties);
    std::cerr << "listening on " << host << ":" << port << '\n';
    if (!serve(host, port, vectors, c.tau)) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous left-right scoring of texts from party classifier probabilities"};
    app.require_subcommand(1);
    Common common;

    auto add_common = [&](CLI::App* sub, bool with_tau) {
        sub->add_option("--parties", common.parties, "Comma-separated party registry (default: German six)");
        sub->add_option("--out", common.out, "Output directory")->capture_default_str();
        if (with_tau) sub->add_option("--tau", common.tau, "Politicalness threshold")->capture_default_str();
    };

    std::function<int()> run;

    std::string stance_path;
    bool per_election = false;
    auto* positions = app.add_subcommand("positions", "Derive party vectors from a stance matrix");
    positions->add_option("stance", stance_path, "Stance CSV (statement_id,party,stance[,election])")->required();
    positions->add_flag("--per-election", per_election, "Average distances over elections instead of pooling");
    add_common(positions, false);
    positions->callback([&] { run = [&] { return cmd_positions(common, stance_path, per_election); }; });

    std::string records_path, vectors_path;
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    auto* score = app.add_subcommand("score", "Score a JSONL record stream");
    score->add_option("records", records_path, "Records JSONL")->required();
    score->add_option("--vectors", vectors_path, "Party vector set JSON")->required();
    score->add_option("--threads", threads, "Worker threads");
    add_common(score, true);
    score->callback([&] { run = [&] { return cmd_score(common, records_path, vectors_path, threads); }; });

    std::string ratings_path;
    auto* news = app.add_subcommand("evaluate-news", "Outlet-level MAE/MSE against survey ratings");
    news->add_option("scored", records_path, "Scored JSONL")->required();
    news->add_option("--ratings", ratings_path, "Ratings CSV (outlet,survey_rating)")->required();
    add_common(news, true);
    news->callback([&] { run = [&] { return cmd_evaluate_news(common, records_path, ratings_path); }; });

    std::string buckets;
    auto* tweets = app.add_subcommand("evaluate-tweets", "Argmax accuracy by text length");
    tweets->add_option("records", records_path, "Records JSONL with author_party and word_count")->required();
    tweets->add_option("--buckets", buckets, "Ascending bucket edges, e.g. 1,10,20,30");
    add_common(tweets, false);
    tweets->callback([&] { run = [&] { return cmd_evaluate_tweets(common, records_path, buckets); }; });

    OptimizeArgs opt;
    auto* optimize = app.add_subcommand("optimize", "Refine party vectors against outlet ratings");
    optimize->add_option("records", opt.records, "Records JSONL with outlet")->required();
    optimize->add_option("--ratings", opt.ratings, "Ratings CSV")->required();
    optimize->add_option("--vectors", opt.vectors, "Baseline vector set JSON")->required();
    optimize->add_option("--delta-default", opt.delta_default, "Ball radius for free parties")->capture_default_str();
    optimize->add_option("--delta", opt.delta_overrides, "Per-party radius PARTY=VALUE (repeatable)");
    optimize->add_option("--pin", opt.pinned, "Comma-separated pinned parties")->capture_default_str();
    optimize->add_option("--seed", opt.seed, "Polling-order seed")->capture_default_str();
    optimize->add_option("--initial-step", opt.initial_step)->capture_default_str();
    optimize->add_option("--min-step", opt.min_step)->capture_default_str();
    optimize->add_option("--max-iterations", opt.max_iterations, "Objective evaluation budget")->capture_default_str();
    add_common(optimize, true);
    optimize->callback([&] { run = [&] { return cmd_optimize(common, opt); }; });

    std::string sentiment_path;
    auto* assoc = app.add_subcommand("associations", "Party association matrix");
    assoc->add_option("stance", stance_path, "Stance CSV")->required();
    assoc->add_option("--sentiment", sentiment_path, "Labeled interruption CSV for the upper triangle");
    add_common(assoc, false);
    assoc->callback([&] { run = [&] { return cmd_associations(common, stance_path, sentiment_path); }; });

    std::string table_path;
    auto* validity = app.add_subcommand("validity", "Agreement between published outlet rating sources");
    validity->add_option("table", table_path, "Media ratings CSV")->required();
    add_common(validity, false);
    validity->callback([&] { run = [&] { return cmd_validity(common, table_path); }; });

    AutolabelArgs al;
    auto* autolabel = app.add_subcommand("autolabel", "Label speeches from interruption annotations");
    autolabel->add_option("protocols", al.protocols, "Protocol files")->required();
    autolabel->add_flag("--positive-only", al.positive_only, "Keep agree rows only");
    autolabel->add_flag("--keep-self-party", al.keep_self_party, "Keep reactions of the speaker's own party");
    autolabel->add_option("--rule", al.rules, "Override a mapping KIND=agree|disagree|none (repeatable)");
    add_common(autolabel, false);
    autolabel->callback([&] { run = [&] { return cmd_autolabel(common, al); }; });

    std::string embeddings_path;
    double threshold = 0.5;
    auto* gate = app.add_subcommand("gate", "Embedding similarity gate for paraphrases");
    gate->add_option("embeddings", embeddings_path, "Embeddings JSONL {id, vector, source_id?}")->required();
    gate->add_option("--threshold", threshold, "Minimum 5th percentile")->capture_default_str();
    add_common(gate, false);
    gate->callback([&] { run = [&] { return cmd_gate(common, embeddings_path, threshold); }; });

    std::string input_path, personas;
    std::size_t parallel = 4;
    auto* para = app.add_subcommand("paraphrase", "Persona paraphrases via PARAPHRASE_ENDPOINT");
    para->add_option("input", input_path, "CSV with id,text and label columns")->required();
    para->add_option("--personas", personas, "Comma-separated personas (default: all)");
    para->add_option("--parallel", parallel, "Concurrent requests")->capture_default_str();
    add_common(para, false);
    para->callback([&] { run = [&] { return cmd_paraphrase(common, input_path, personas, parallel); }; });

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* srv = app.add_subcommand("serve", "HTTP scoring endpoint");
    srv->add_option("--vectors", vectors_path, "Party vector set JSON")->required();
    srv->add_option("--host", host)->capture_default_str();
    srv->add_option("--port", port)->capture_default_str();
    add_common(srv, true);
    srv->callback([&] { run = [&] { return cmd_serve(common, vectors_path, host, port); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        return run();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::Io || e.code() == ErrorCode::ProviderUnavailable ? kExitIo
                                                                                          : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
