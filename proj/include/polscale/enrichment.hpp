#pragma once

// Paraphrase providers and the embedding similarity gate applied to
// enriched statements.

#include "polscale/core.hpp"

#include <array>
#include <chrono>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polscale {

enum class Persona { Child, Teenager, Adult, Eloquent, Tweet };

inline constexpr std::array<Persona, 5> kAllPersonas = {Persona::Child, Persona::Teenager, Persona::Adult,
                                                        Persona::Eloquent, Persona::Tweet};

std::string_view to_string(Persona p);
std::optional<Persona> parse_persona(std::string_view text);

/// Throws DimensionMismatch or ZeroNorm.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

/// Linear interpolation between closest ranks: with the sample sorted
/// ascending, h = (n - 1) * q, result = x[floor h] + (h - floor h) *
/// (x[floor h + 1] - x[floor h]). q in [0, 1].
double quantile_linear(std::vector<double> sample, double q);

struct SimilarityReport {
    std::size_t n = 0;
    double mean = 0.0;
    double p05 = 0.0;
    double threshold = 0.5;
    bool pass = false;
};

/// Cosine similarity per aligned (original, paraphrase) pair; passes iff
/// the 5th percentile reaches the threshold.
SimilarityReport similarity_gate(const std::vector<std::vector<double>>& originals,
                                 const std::vector<std::vector<double>>& paraphrases, double threshold = 0.5);

struct Embedding {
    std::string id;
    /// Id of the original statement this paraphrase was derived from; empty
    /// for originals.
    std::string source_id;
    std::vector<double> vector;
};

/// JSONL, one {"id": ..., "vector": [...], "source_id"?: ...} per line.
std::vector<Embedding> read_embeddings_jsonl(std::istream& in);

struct ParaphraseRequest {
    std::string text;
    Persona persona = Persona::Adult;
    std::string language = "de";
};

/// Text-generation backend. Implementations report failures by throwing
/// ProviderUnavailable, RateLimitedError or EmptyResponse.
class ParaphraseProvider {
public:
    virtual ~ParaphraseProvider() = default;
    virtual std::string complete(const ParaphraseRequest& request) = 0;
};

class RateLimitedError : public Error {
public:
    RateLimitedError(const std::string& message, std::chrono::milliseconds retry_after);
    std::chrono::milliseconds retry_after() const noexcept { return retry_after_; }

private:
    std::chrono::milliseconds retry_after_;
};

/// Non-empty paraphrase or an error; never returns an empty string.
std::string paraphrase(ParaphraseProvider& provider, const std::string& text, Persona persona,
                       const std::string& language = "de");

/// Deterministic stand-in: "[<persona>] " + text.
class EchoProvider : public ParaphraseProvider {
public:
    std::string complete(const ParaphraseRequest& request) override;
};

/// POSTs {"text", "persona", "language"} as JSON to the endpoint and reads
/// {"paraphrase"}. 429 becomes RateLimited (Retry-After honoured), transport
/// failures and 5xx become ProviderUnavailable.
class HttpParaphraseProvider : public ParaphraseProvider {
public:
    HttpParaphraseProvider(std::string endpoint, std::string api_key,
                           std::chrono::milliseconds timeout = std::chrono::seconds(30));

    /// PARAPHRASE_ENDPOINT and PARAPHRASE_KEY; ProviderUnavailable if the
    /// endpoint is unset.
    static HttpParaphraseProvider from_environment();

    std::string complete(const ParaphraseRequest& request) override;

private:
    std::string endpoint_;
    std::string api_key_;
    std::chrono::milliseconds timeout_;
};

/// A statement with its labels; labels are opaque to enrichment.
struct LabeledText {
    std::string id;
    std::string text;
    std::vector<std::pair<std::string, std::string>> labels;
};

struct EnrichedText {
    std::string source_id;
    Persona persona = Persona::Adult;
    std::string text;
    std::vector<std::pair<std::string, std::string>> labels;
};

struct EnrichOptions {
    std::vector<Persona> personas{kAllPersonas.begin(), kAllPersonas.end()};
    std::size_t max_parallel = 4;
    std::size_t max_retries = 3;
    std::string language = "de";
    /// Injected for tests; defaults to std::this_thread::sleep_for.
    std::function<void(std::chrono::milliseconds)> sleep;
};

/// One paraphrase per (statement, persona), in input order. Each output row
/// carries its source row's labels verbatim. Rate-limited calls are retried
/// after the provider's retry-after up to max_retries times; other failures
/// propagate. The provider must be safe to call concurrently.
std::vector<EnrichedText> enrich(ParaphraseProvider& provider, const std::vector<LabeledText>& rows,
                                 const EnrichOptions& options = {});

}  // namespace polscale
