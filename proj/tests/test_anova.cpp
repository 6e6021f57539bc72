#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dfbench/error.hpp"
#include "dfbench/evaluation/anova.hpp"
#include "dfbench/evaluation/report.hpp"

using namespace dfbench;

namespace {

// Each cell holds three folds averaging to the given cell mean.
AccuracyTable table_from_means(const std::vector<std::vector<double>>& means) {
    AccuracyTable t;
    for (const auto& row : means) {
        t.emplace_back();
        for (double m : row) t.back().push_back({m - 0.01, m + 0.01, m});
    }
    return t;
}

const std::vector<std::vector<double>> kTextbook{{0.80, 0.84, 0.88}, {0.82, 0.90, 0.92}};

}  // namespace

TEST_CASE("2x3 table matches the hand-computed ANOVA") {
    // Hand table: grand mean 0.86; SS_A = 0.0024, SS_B = 0.0084, SS_E = 0.0004,
    // F_A = 12 on (1, 2), F_B = 21 on (2, 2). With 2 residual df the F tails
    // are closed-form: F(1,2) -> 1 - sqrt(F / (F + 2)), F(2,2) -> 1 / (1 + F).
    const auto r = two_factor_anova(table_from_means(kTextbook));
    CHECK(r.factor_a.df == 1.0);
    CHECK(r.factor_b.df == 2.0);
    CHECK(r.residual.df == 2.0);
    CHECK(std::abs(r.factor_a.sum_sq - 0.0024) < 1e-6);
    CHECK(std::abs(r.factor_b.sum_sq - 0.0084) < 1e-6);
    CHECK(std::abs(r.residual.sum_sq - 0.0004) < 1e-6);
    CHECK(std::abs(r.factor_a.f - 12.0) < 1e-6);
    CHECK(std::abs(r.factor_b.f - 21.0) < 1e-6);
    CHECK(std::abs(r.factor_a.p - (1.0 - std::sqrt(12.0 / 14.0))) < 1e-6);
    CHECK(std::abs(r.factor_b.p - 1.0 / 22.0) < 1e-6);

    // Paired t over the two factor-A levels (1 df): two-sided tail
    // 1 - (2/pi) atan|t|, Bonferroni over 3 pairs.
    REQUIRE(r.factor_b_pairs.size() == 3);
    CHECK(r.bonferroni_m == 3);
    const double expected_t[3] = {-3.0, -9.0, -3.0};
    for (int i = 0; i < 3; ++i) {
        const auto& t = r.factor_b_pairs[static_cast<std::size_t>(i)];
        const double p = 1.0 - 2.0 / M_PI * std::atan(std::abs(expected_t[i]));
        CHECK(std::abs(t.t - expected_t[i]) < 1e-6);
        CHECK(std::abs(t.p_raw - p) < 1e-6);
        CHECK(std::abs(t.p_adjusted - std::min(1.0, 3.0 * p)) < 1e-6);
        CHECK(t.df == 1.0);
    }
    CHECK(r.factor_b_pairs[1].level_a == 0);
    CHECK(r.factor_b_pairs[1].level_b == 2);
    CHECK(std::abs(r.factor_b_pairs[1].mean_difference + 0.09) < 1e-12);
}

TEST_CASE("all-equal table gives F = 0 and p = 1") {
    AccuracyTable t(14, std::vector<std::vector<double>>(3, std::vector<double>(5, 0.87)));
    const auto r = two_factor_anova(t);
    CHECK(r.factor_a.f == 0.0);
    CHECK(r.factor_b.f == 0.0);
    CHECK(r.factor_a.p == 1.0);
    CHECK(r.factor_b.p == 1.0);
    for (const auto& pair : r.factor_b_pairs) {
        CHECK(pair.p_raw == 1.0);
        CHECK(pair.p_adjusted == 1.0);
    }
}

TEST_CASE("zero residual with a real effect gives boundary p-values") {
    // Purely additive cell means: residual is exactly zero.
    const auto r = two_factor_anova(table_from_means({{0.5, 0.75, 0.625}, {0.75, 1.0, 0.875}}));
    CHECK(r.residual.sum_sq == 0.0);
    CHECK(std::isinf(r.factor_a.f));
    CHECK(r.factor_a.p == 0.0);
    CHECK(std::isinf(r.factor_b.f));
    CHECK(r.factor_b.p == 0.0);
    for (const auto& pair : r.factor_b_pairs) {
        CHECK(pair.p_raw >= 0.0);
        CHECK(pair.p_raw <= 1.0);
        CHECK_FALSE(std::isnan(pair.p_adjusted));
    }
}

TEST_CASE("adding a constant leaves both F statistics unchanged") {
    auto shifted = kTextbook;
    for (auto& row : shifted)
        for (double& v : row) v += 0.0625;
    const auto a = two_factor_anova(table_from_means(kTextbook));
    const auto b = two_factor_anova(table_from_means(shifted));
    CHECK(b.factor_a.f == doctest::Approx(a.factor_a.f).epsilon(1e-9));
    CHECK(b.factor_b.f == doctest::Approx(a.factor_b.f).epsilon(1e-9));
}

TEST_CASE("p-values stay in range on a 14 x 3 grid") {
    AccuracyTable t(14, std::vector<std::vector<double>>(3));
    for (std::size_t a = 0; a < 14; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (int f = 0; f < 5; ++f) t[a][b].push_back(0.7 + 0.01 * double((a * 7 + b * 3 + f * 5) % 11));
    const auto r = two_factor_anova(t);
    CHECK(r.factor_a.df == 13.0);
    CHECK(r.residual.df == 26.0);
    for (double p : {r.factor_a.p, r.factor_b.p}) CHECK((p >= 0.0 && p <= 1.0));
    for (const auto& pair : r.factor_b_pairs) {
        CHECK(pair.p_adjusted == doctest::Approx(std::min(1.0, 3.0 * pair.p_raw)));
        CHECK(pair.df == 13.0);
    }
}

TEST_CASE("malformed tables are rejected") {
    CHECK_THROWS_AS((void)two_factor_anova({{{0.5}, {0.6}}}), DataError);
    CHECK_THROWS_AS((void)two_factor_anova({{{0.5}, {0.6}}, {{0.5}}}), DataError);
    CHECK_THROWS_AS((void)two_factor_anova({{{0.5}, {}}, {{0.5}, {0.4}}}), DataError);
}

TEST_CASE("ANOVA CSV rows") {
    const auto r = two_factor_anova(table_from_means(kTextbook));
    std::ostringstream out;
    write_anova_csv(r, "network", "classifier", {"svm_quadratic", "svm_gaussian", "ensemble"}, out);
    std::istringstream lines(out.str());
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) rows.push_back(line);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "test,term,df,sum_sq,mean_sq,statistic,p,p_bonferroni");
    CHECK(rows[1].rfind("anova,network,1,", 0) == 0);
    CHECK(rows[2].rfind("anova,classifier,2,", 0) == 0);
    CHECK(rows[3].rfind("anova,residual,2,", 0) == 0);
    CHECK(rows[5].rfind("paired_t,svm_quadratic vs ensemble,1,,,-9,", 0) == 0);
}
