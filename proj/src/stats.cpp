#include "polscale/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

namespace polscale {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_length(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "series lengths differ (" + std::to_string(x.size()) +
                                                      " vs " + std::to_string(y.size()) + ")");
    }
}

bool constant(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo == *hi;
}

Correlation pearson_complete(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3) {
        throw Error(ErrorCode::TooFewPairs, "need at least 3 complete pairs, got " + std::to_string(n));
    }
    if (constant(x) || constant(y)) throw Error(ErrorCode::ZeroVariance, "a series is constant");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const double r = sxy / std::sqrt(sxx * syy);
    return {std::clamp(r, -1.0, 1.0), n};
}

void complete_pairs(std::span<const double> x, std::span<const double> y, std::vector<double>& cx,
                    std::vector<double>& cy) {
    require_same_length(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) continue;
        cx.push_back(x[i]);
        cy.push_back(y[i]);
    }
}

}  // namespace

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    std::vector<double> cx, cy;
    complete_pairs(x, y, cx, cy);
    return pearson_complete(cx, cy);
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isnan(values[i])) idx.push_back(i);
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size(), kNaN);
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
        // positions i..j (0-based) share ranks i+1..j+1
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
    std::vector<double> cx, cy;
    complete_pairs(x, y, cx, cy);
    if (cx.size() < 3) {
        throw Error(ErrorCode::TooFewPairs, "need at least 3 complete pairs, got " + std::to_string(cx.size()));
    }
    return pearson_complete(average_ranks(cx), average_ranks(cy));
}

double mean(std::span<const double> values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
    }
    return n == 0 ? kNaN : sum / static_cast<double>(n);
}

double sample_sd(std::span<const double> values) {
    const double m = mean(values);
    double ss = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        ss += (v - m) * (v - m);
        ++n;
    }
    return n < 2 ? kNaN : std::sqrt(ss / static_cast<double>(n - 1));
}

std::vector<double> z_transform(std::span<const double> values) {
    std::vector<double> present;
    for (double v : values) {
        if (!std::isnan(v)) present.push_back(v);
    }
    if (present.size() < 2) {
        throw Error(ErrorCode::TooFewPairs, "z-transform needs at least 2 values");
    }
    if (constant(present)) throw Error(ErrorCode::ZeroVariance, "cannot standardize a constant series");
    const double m = mean(values);
    const double sd = sample_sd(values);
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [&](double v) { return std::isnan(v) ? kNaN : (v - m) / sd; });
    return out;
}

int ordinal_from_label(std::string_view label) {
    std::string norm;
    bool pending_space = false;
    for (char ch : label) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c) || ch == '-' || ch == '_') {
            pending_space = !norm.empty();
            continue;
        }
        if (pending_space) norm.push_back(' ');
        pending_space = false;
        norm.push_back(static_cast<char>(std::tolower(c)));
    }
    if (norm == "left") return -2;
    if (norm == "left center") return -1;
    if (norm == "least biased") return 0;
    if (norm == "right center") return 1;
    if (norm == "right") return 2;
    throw Error(ErrorCode::UnknownLabel, "unknown bias label '" + std::string(label) + "'");
}

std::vector<double> pc1_two_scales(std::span<const double> x, std::span<const double> y) {
    require_same_length(x, y);
    std::vector<double> cx(x.size(), kNaN), cy(y.size(), kNaN);
    std::size_t complete = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) continue;
        cx[i] = x[i];
        cy[i] = y[i];
        ++complete;
    }
    if (complete < 3) {
        throw Error(ErrorCode::TooFewPairs, "PCA needs at least 3 complete rows");
    }
    const auto zx = z_transform(cx);
    const auto zy = z_transform(cy);
    const double r = pearson(cx, cy).value;
    // Eigenvectors of [[1, r], [r, 1]] are (1, 1) and (1, -1) with eigenvalues
    // 1 + r and 1 - r; the larger one wins, (1, 1) on a tie.
    const double sign = r >= 0.0 ? 1.0 : -1.0;
    const double norm = std::sqrt(2.0 * (1.0 + sign * r));
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(zx[i])) continue;
        out[i] = (zx[i] + sign * zy[i]) / norm;
    }
    return out;
}

AssociationMatrix party_association(const StanceMatrix& matrix) {
    const auto& parties = matrix.parties();
    const std::size_t k = parties.size();
    AssociationMatrix out{parties, std::vector<double>(k * k, kNaN), {}};

    auto column_pair = [&](PartyId a, PartyId b, std::vector<double>& xa, std::vector<double>& xb) {
        for (std::size_t row = 0; row < matrix.statement_count(); ++row) {
            const Stance sa = matrix.at(row, a);
            const Stance sb = matrix.at(row, b);
            if (!answered(sa) || !answered(sb)) continue;
            xa.push_back(stance_value(sa));
            xb.push_back(stance_value(sb));
        }
    };

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            std::vector<double> xa, xb;
            column_pair(PartyId{i}, PartyId{j}, xa, xb);
            double value = kNaN;
            if (xa.size() >= 3 && !constant(xa) && !constant(xb)) {
                value = i == j ? 1.0 : pearson_complete(xa, xb).value;
            } else if (i != j) {
                const std::string pair = parties.names()[i] + "/" + parties.names()[j];
                out.undefined.push_back(xa.size() < 3
                                            ? std::string(to_string(ErrorCode::InsufficientOverlap)) + ": " +
                                                  pair + " share " + std::to_string(xa.size()) +
                                                  " statement(s)"
                                            : std::string(to_string(ErrorCode::ZeroVariance)) + ": " + pair);
            }
            out.values[i * k + j] = value;
            out.values[j * k + i] = value;
        }
    }
    return out;
}

std::vector<double> profile_similarity(const AssociationMatrix& a, const AssociationMatrix& b) {
    if (!(a.parties == b.parties)) {
        throw Error(ErrorCode::PartyMismatch, "association matrices cover different party lists");
    }
    const std::size_t k = a.parties.size();
    std::vector<double> out(k, kNaN);
    for (std::size_t p = 0; p < k; ++p) {
        std::vector<double> ra, rb;
        for (std::size_t q = 0; q < k; ++q) {
            if (q == p) continue;
            const double va = a.values[p * k + q];
            const double vb = b.values[p * k + q];
            if (std::isnan(va) || std::isnan(vb)) continue;
            ra.push_back(va);
            rb.push_back(vb);
        }
        if (ra.size() < 3 || constant(ra) || constant(rb)) continue;
        out[p] = pearson_complete(ra, rb).value;
    }
    return out;
}

EffectSize effect_size_dav(std::span<const double> pre, std::span<const double> post) {
    require_same_length(pre, post);
    const std::size_t n = pre.size();
    if (n < 3) throw Error(ErrorCode::TooFewPairs, "effect size needs at least 3 pairs");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(pre[i]) || std::isnan(post[i])) {
            throw Error(ErrorCode::MalformedField, "effect size requires complete pairs");
        }
    }
    const double sd_avg = 0.5 * (sample_sd(pre) + sample_sd(post));
    if (!(sd_avg > 0.0)) throw Error(ErrorCode::ZeroVariance, "both samples are constant");
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += pre[i] - post[i];
    diff /= static_cast<double>(n);

    EffectSize es;
    es.n = n;
    es.d_av = diff / sd_avg;
    es.r = pearson(pre, post).value;
    const double dn = static_cast<double>(n);
    const double var = 2.0 * (1.0 - es.r) / dn + es.d_av * es.d_av / (2.0 * (dn - 1.0));
    const double half = 1.959963984540054 * std::sqrt(var);
    es.ci_lo = es.d_av - half;
    es.ci_hi = es.d_av + half;
    return es;
}

}  // namespace polscale
