#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dfbench {

/// accuracy[a][b][fold]: factor A (e.g. network) x factor B (e.g.
/// classifier) x replicate.
using AccuracyTable = std::vector<std::vector<std::vector<double>>>;

struct AnovaTerm {
    double df = 0.0;
    double sum_sq = 0.0;
    double mean_sq = 0.0;
    double f = 0.0;  // unused for the residual row
    double p = 1.0;
};

struct PairwiseTTest {
    std::size_t level_a = 0;
    std::size_t level_b = 0;
    double mean_difference = 0.0;  // level_a minus level_b
    double t = 0.0;
    double df = 0.0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;  // Bonferroni: min(1, p_raw * m)
};

struct AnovaResult {
    AnovaTerm factor_a;
    AnovaTerm factor_b;
    AnovaTerm residual;
    std::vector<PairwiseTTest> factor_b_pairs;
    std::size_t bonferroni_m = 0;
};

/// Fixed-effects two-factor ANOVA without interaction on the cell means,
/// followed by paired t-tests between every pair of factor-B levels (paired
/// over factor-A levels) with Bonferroni correction for the number of pairs.
///
/// A zero residual variance yields F = 0, p = 1 when the factor's own mean
/// square is also zero, and F = +inf, p = 0 otherwise; p is never NaN.
/// Requires at least two levels per factor and a complete, rectangular table.
AnovaResult two_factor_anova(const AccuracyTable& table);

}  // namespace dfbench
