#include "polscale/enrichment.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <thread>

namespace polscale {

using nlohmann::json;

std::string_view to_string(Persona p) {
    switch (p) {
        case Persona::Child: return "child";
        case Persona::Teenager: return "teenager";
        case Persona::Adult: return "adult";
        case Persona::Eloquent: return "eloquent";
        case Persona::Tweet: return "tweet";
    }
    return "adult";
}

std::optional<Persona> parse_persona(std::string_view text) {
    for (auto p : kAllPersonas) {
        if (to_string(p) == text) return p;
    }
    return std::nullopt;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "embedding dimensions differ (" + std::to_string(u.size()) +
                                                      " vs " + std::to_string(v.size()) + ")");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw Error(ErrorCode::ZeroNorm, "embedding has zero norm");
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double quantile_linear(std::vector<double> sample, double q) {
    if (sample.empty()) throw Error(ErrorCode::TooFewPairs, "quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::OutOfRange, "quantile level outside [0, 1]");
    std::sort(sample.begin(), sample.end());
    const double h = static_cast<double>(sample.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sample.size()) return sample.back();
    return sample[lo] + (h - static_cast<double>(lo)) * (sample[lo + 1] - sample[lo]);
}

SimilarityReport similarity_gate(const std::vector<std::vector<double>>& originals,
                                 const std::vector<std::vector<double>>& paraphrases, double threshold) {
    if (originals.size() != paraphrases.size()) {
        throw Error(ErrorCode::DimensionMismatch, "originals and paraphrases are not aligned");
    }
    if (originals.empty()) throw Error(ErrorCode::TooFewPairs, "similarity gate needs at least one pair");
    std::vector<double> sims;
    sims.reserve(originals.size());
    for (std::size_t i = 0; i < originals.size(); ++i) {
        sims.push_back(cosine_similarity(originals[i], paraphrases[i]));
    }
    SimilarityReport rep;
    rep.n = sims.size();
    rep.threshold = threshold;
    // Summed in sorted order so the mean is permutation-invariant bit for bit.
    std::vector<double> sorted = sims;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double s : sorted) sum += s;
    rep.mean = sum / static_cast<double>(sorted.size());
    rep.p05 = quantile_linear(std::move(sorted), 0.05);
    rep.pass = rep.p05 >= threshold;
    return rep;
}

std::vector<Embedding> read_embeddings_jsonl(std::istream& in) {
    std::vector<Embedding> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = json::parse(line);
            Embedding e;
            e.id = j.at("id").get<std::string>();
            if (j.contains("source_id")) e.source_id = j.at("source_id").get<std::string>();
            e.vector = j.at("vector").get<std::vector<double>>();
            out.push_back(std::move(e));
        } catch (const json::exception& ex) {
            throw Error(ErrorCode::MalformedField, "embeddings line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return out;
}

RateLimitedError::RateLimitedError(const std::string& message, std::chrono::milliseconds retry_after)
    : Error(ErrorCode::RateLimited, message), retry_after_(retry_after) {}

std::string paraphrase(ParaphraseProvider& provider, const std::string& text, Persona persona,
                       const std::string& language) {
    auto out = provider.complete({text, persona, language});
    if (out.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::EmptyResponse, "provider returned an empty paraphrase");
    }
    return out;
}

std::string EchoProvider::complete(const ParaphraseRequest& request) {
    return "[" + std::string(to_string(request.persona)) + "] " + request.text;
}

HttpParaphraseProvider::HttpParaphraseProvider(std::string endpoint, std::string api_key,
                                               std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)), timeout_(timeout) {}

HttpParaphraseProvider HttpParaphraseProvider::from_environment() {
    const char* endpoint = std::getenv("PARAPHRASE_ENDPOINT");
    if (!endpoint || !*endpoint) {
        throw Error(ErrorCode::ProviderUnavailable, "PARAPHRASE_ENDPOINT is not set");
    }
    const char* key = std::getenv("PARAPHRASE_KEY");
    return HttpParaphraseProvider(endpoint, key ? key : "");
}

std::string HttpParaphraseProvider::complete(const ParaphraseRequest& request) {
    // endpoint = scheme://host[:port][/path]
    const auto scheme_end = endpoint_.find("://");
    const auto path_start = endpoint_.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string base = endpoint_.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

    httplib::Client client(base);
    if (!client.is_valid()) throw Error(ErrorCode::ProviderUnavailable, "invalid endpoint '" + endpoint_ + "'");
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    const json body = {{"text", request.text},
                       {"persona", std::string(to_string(request.persona))},
                       {"language", request.language}};
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        throw Error(ErrorCode::ProviderUnavailable,
                    "request to '" + endpoint_ + "' failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 429) {
        std::chrono::milliseconds retry{1000};
        if (res->has_header("Retry-After")) {
            try {
                retry = std::chrono::seconds(std::stoll(res->get_header_value("Retry-After")));
            } catch (const std::exception&) {
                // HTTP-date form is not supported; keep the default
            }
        }
        throw RateLimitedError("provider is rate limiting requests", retry);
    }
    if (res->status >= 500 || res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::ProviderUnavailable, "provider answered HTTP " + std::to_string(res->status));
    }
    try {
        const auto j = json::parse(res->body);
        if (!j.contains("paraphrase") || !j["paraphrase"].is_string()) {
            throw Error(ErrorCode::EmptyResponse, "provider response lacks a 'paraphrase' string");
        }
        return j["paraphrase"].get<std::string>();
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::EmptyResponse, std::string("provider response is not JSON: ") + ex.what());
    }
}

std::vector<EnrichedText> enrich(ParaphraseProvider& provider, const std::vector<LabeledText>& rows,
                                 const EnrichOptions& options) {
    const std::size_t per_row = options.personas.size();
    const std::size_t total = rows.size() * per_row;
    std::vector<EnrichedText> out(total);
    if (total == 0) return out;

    auto sleep = options.sleep ? options.sleep
                               : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            if (failed.load()) return;
            const std::size_t job = next.fetch_add(1);
            if (job >= total) return;
            const auto& row = rows[job / per_row];
            const Persona persona = options.personas[job % per_row];
            try {
                for (std::size_t attempt = 0;; ++attempt) {
                    try {
                        out[job] = {row.id, persona, paraphrase(provider, row.text, persona, options.language),
                                    row.labels};
                        break;
                    } catch (const RateLimitedError& e) {
                        if (attempt >= options.max_retries) throw;
                        sleep(e.retry_after());
                    }
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    const std::size_t n_threads = std::clamp<std::size_t>(options.max_parallel, 1, total);
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace polscale
