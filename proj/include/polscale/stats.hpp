#pragma once

// Correlations, standardization, the two-scale principal component, party
// association matrices and the paired d_av effect size.
//
// Missing observations are encoded as NaN; pairwise statistics use the
// complete cases only. Standard deviations use the n - 1 denominator.

#include "polscale/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polscale {

struct Correlation {
    double value = 0.0;
    /// Complete pairs used.
    std::size_t n = 0;
};

/// Throws DimensionMismatch, TooFewPairs (< 3 complete pairs), ZeroVariance.
Correlation pearson(std::span<const double> x, std::span<const double> y);
/// Pearson on average ranks (ties share the mean rank).
Correlation spearman(std::span<const double> x, std::span<const double> y);

/// Average ranks, 1-based. NaN entries stay NaN and are not ranked.
std::vector<double> average_ranks(std::span<const double> values);

double mean(std::span<const double> values);
/// Sample standard deviation over non-NaN entries.
double sample_sd(std::span<const double> values);

/// (x - mean) / sd over non-NaN entries; NaN passes through. Throws
/// TooFewPairs for fewer than 2 values and ZeroVariance for constant input.
std::vector<double> z_transform(std::span<const double> values);

/// left -2, left-center -1, least biased 0, right-center +1, right +2.
/// Case, surrounding blanks and '-'/'_'/' ' separators are normalized.
int ordinal_from_label(std::string_view label);

/// First principal component scores of two standardized columns, scaled to
/// unit variance and signed to correlate positively with x. Rows with a
/// missing value yield NaN and are excluded from the fit.
std::vector<double> pc1_two_scales(std::span<const double> x, std::span<const double> y);

/// Symmetric party x party correlation matrix. Undefined cells are NaN.
struct AssociationMatrix {
    PartyRegistry parties;
    std::vector<double> values;  // row-major
    /// Human-readable notes for each undefined off-diagonal cell.
    std::vector<std::string> undefined;

    double at(PartyId a, PartyId b) const { return values[a.index * parties.size() + b.index]; }
};

/// Pearson between party stance columns over statements both answered.
/// Pairs with fewer than 3 shared statements (InsufficientOverlap) or no
/// variance are left undefined and listed.
AssociationMatrix party_association(const StanceMatrix& matrix);

/// Per-party Pearson between the party's off-diagonal rows in a and b, over
/// entries defined in both. NaN when fewer than 3 such entries remain or a
/// row is constant. Throws PartyMismatch when the registries differ.
std::vector<double> profile_similarity(const AssociationMatrix& a, const AssociationMatrix& b);

struct EffectSize {
    double d_av = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    /// Pre/post correlation entering the interval.
    double r = 0.0;
    std::size_t n = 0;
};

/// d_av = mean(pre - post) / ((sd_pre + sd_post) / 2).
///
/// 95% interval from the large-sample variance of a standardized mean change
/// in a paired design,
///     var(d) = 2 (1 - r) / n + d^2 / (2 (n - 1)),
/// with r the pre/post Pearson correlation: d -/+ 1.959964 * sqrt(var(d)).
EffectSize effect_size_dav(std::span<const double> pre, std::span<const double> post);

}  // namespace polscale
