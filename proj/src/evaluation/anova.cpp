#include "dfbench/evaluation/anova.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "dfbench/error.hpp"

namespace dfbench {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void finish_f_test(AnovaTerm& term, double residual_ms, double residual_df) {
    term.mean_sq = term.sum_sq / term.df;
    if (residual_ms > 0.0) {
        term.f = term.mean_sq / residual_ms;
        const boost::math::fisher_f dist(term.df, residual_df);
        term.p = boost::math::cdf(boost::math::complement(dist, term.f));
    } else if (term.mean_sq > 0.0) {
        term.f = std::numeric_limits<double>::infinity();
        term.p = 0.0;
    } else {
        term.f = 0.0;
        term.p = 1.0;
    }
}

}  // namespace

AnovaResult two_factor_anova(const AccuracyTable& table) {
    const std::size_t levels_a = table.size();
    if (levels_a < 2) throw DataError("ANOVA needs at least two levels of factor A");
    const std::size_t levels_b = table.front().size();
    if (levels_b < 2) throw DataError("ANOVA needs at least two levels of factor B");

    std::vector<std::vector<double>> cell(levels_a, std::vector<double>(levels_b));
    for (std::size_t a = 0; a < levels_a; ++a) {
        if (table[a].size() != levels_b) throw DataError("ANOVA table is not rectangular");
        for (std::size_t b = 0; b < levels_b; ++b) {
            if (table[a][b].empty()) throw DataError("ANOVA table has an empty cell");
            for (const double v : table[a][b]) {
                if (!std::isfinite(v)) throw DataError("ANOVA table has a non-finite entry");
            }
            cell[a][b] = mean_of(table[a][b]);
        }
    }
    // Sums of squares are shift invariant; centering on one cell makes an
    // all-equal table come out exactly zero.
    const double origin = cell[0][0];
    for (auto& row : cell) {
        for (double& v : row) v -= origin;
    }

    const double na = static_cast<double>(levels_a);
    const double nb = static_cast<double>(levels_b);
    std::vector<double> mean_a(levels_a, 0.0);
    std::vector<double> mean_b(levels_b, 0.0);
    double grand = 0.0;
    for (std::size_t a = 0; a < levels_a; ++a) {
        for (std::size_t b = 0; b < levels_b; ++b) {
            mean_a[a] += cell[a][b] / nb;
            mean_b[b] += cell[a][b] / na;
            grand += cell[a][b];
        }
    }
    grand /= na * nb;

    AnovaResult result;
    for (std::size_t a = 0; a < levels_a; ++a) result.factor_a.sum_sq += nb * (mean_a[a] - grand) * (mean_a[a] - grand);
    for (std::size_t b = 0; b < levels_b; ++b) result.factor_b.sum_sq += na * (mean_b[b] - grand) * (mean_b[b] - grand);
    for (std::size_t a = 0; a < levels_a; ++a) {
        for (std::size_t b = 0; b < levels_b; ++b) {
            const double r = cell[a][b] - mean_a[a] - mean_b[b] + grand;
            result.residual.sum_sq += r * r;
        }
    }
    result.factor_a.df = na - 1.0;
    result.factor_b.df = nb - 1.0;
    result.residual.df = (na - 1.0) * (nb - 1.0);
    result.residual.mean_sq = result.residual.sum_sq / result.residual.df;
    result.residual.f = 0.0;
    result.residual.p = 1.0;
    finish_f_test(result.factor_a, result.residual.mean_sq, result.residual.df);
    finish_f_test(result.factor_b, result.residual.mean_sq, result.residual.df);

    result.bonferroni_m = levels_b * (levels_b - 1) / 2;
    const double m = static_cast<double>(result.bonferroni_m);
    for (std::size_t i = 0; i < levels_b; ++i) {
        for (std::size_t j = i + 1; j < levels_b; ++j) {
            PairwiseTTest test;
            test.level_a = i;
            test.level_b = j;
            test.df = na - 1.0;
            std::vector<double> diff(levels_a);
            for (std::size_t a = 0; a < levels_a; ++a) diff[a] = cell[a][i] - cell[a][j];
            const double mean = mean_of(diff);
            double ss = 0.0;
            for (const double d : diff) ss += (d - mean) * (d - mean);
            const double se = std::sqrt(ss / (na - 1.0)) / std::sqrt(na);
            test.mean_difference = mean;
            if (se > 0.0) {
                test.t = mean / se;
                const boost::math::students_t dist(test.df);
                test.p_raw = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(test.t)));
            } else if (mean != 0.0) {
                test.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
                test.p_raw = 0.0;
            } else {
                test.t = 0.0;
                test.p_raw = 1.0;
            }
            test.p_raw = std::clamp(test.p_raw, 0.0, 1.0);
            test.p_adjusted = std::min(1.0, test.p_raw * m);
            result.factor_b_pairs.push_back(test);
        }
    }
    return result;
}

}  // namespace dfbench
