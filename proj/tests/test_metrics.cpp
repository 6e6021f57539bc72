#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dfbench/core/rng.hpp"
#include "dfbench/error.hpp"
#include "dfbench/evaluation/cross_validation.hpp"
#include "dfbench/evaluation/metrics.hpp"
#include "dfbench/evaluation/report.hpp"

using namespace dfbench;

namespace {

ConfusionMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    ConfusionMatrix cm(static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) cm.add(static_cast<int>(i), static_cast<int>(j), rows[i][j]);
    return cm;
}

double auc_by_pairs(const std::vector<double>& s, const std::vector<std::uint8_t>& pos) {
    double wins = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!pos[i]) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (pos[j]) continue;
            pairs += 1.0;
            wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
    }
    return wins / pairs;
}

}  // namespace

TEST_CASE("two-class confusion matrix arithmetic") {
    const auto table = metrics_from_cm(from_rows({{8, 2}, {1, 9}}));
    const auto& c0 = table.per_class[0];
    CHECK(c0.tp == 8);
    CHECK(c0.fn == 2);
    CHECK(c0.fp == 1);
    CHECK(c0.tn == 9);
    CHECK(*c0.precision == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK(*c0.recall == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(*c0.specificity == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(*c0.f_score == doctest::Approx(16.0 / 19.0).epsilon(1e-15));
    CHECK(*c0.f_score == doctest::Approx(0.8421).epsilon(1e-4));
    CHECK(table.accuracy == doctest::Approx(0.85).epsilon(1e-15));
}

TEST_CASE("F-score from published precision and recall") {
    auto round_to = [](double v, int decimals) {
        const double scale = std::pow(10.0, decimals);
        return std::round(v * scale) / scale;
    };
    const double f1 = *f_score(99.0, 98.6);
    CHECK(std::abs(round_to(f1, 1) - 98.8) < 0.05);
    CHECK(std::abs(f1 - 98.8) < 0.05);
    const double f2 = *f_score(100.0, 98.86);
    CHECK(std::abs(round_to(f2, 2) - 99.43) < 0.05);
    CHECK(std::abs(f2 - 99.43) < 0.05);
}

TEST_CASE("undefined metrics are explicit") {
    // Class 1 is never predicted and class 2 never occurs.
    const auto table = metrics_from_cm(from_rows({{5, 0, 0}, {3, 0, 0}, {0, 0, 0}}));
    CHECK_FALSE(table.per_class[1].precision.has_value());
    CHECK(*table.per_class[1].recall == 0.0);
    CHECK_FALSE(table.per_class[1].f_score.has_value());
    CHECK_FALSE(table.per_class[2].recall.has_value());
    CHECK(*table.per_class[2].specificity == 1.0);
    CHECK(format_fixed(table.per_class[1].precision, 1) == "NA");
    CHECK_THROWS_AS((void)metrics_from_cm(ConfusionMatrix(3)), DataError);
}

TEST_CASE("per-class counts match a per-sample counter on random matrices") {
    SeededRng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(5));
        const std::size_t n = 1 + rng.below(300);
        std::vector<std::pair<int, int>> samples;
        ConfusionMatrix cm(k);
        for (std::size_t i = 0; i < n; ++i) {
            const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
            const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
            samples.emplace_back(t, p);
            cm.add(t, p);
        }
        const auto table = metrics_from_cm(cm);
        std::int64_t tp_sum = 0;
        for (int c = 0; c < k; ++c) {
            std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
            for (auto [t, p] : samples) {
                if (t == c && p == c) ++tp;
                else if (t != c && p == c) ++fp;
                else if (t == c && p != c) ++fn;
                else ++tn;
            }
            const auto& m = table.per_class[static_cast<std::size_t>(c)];
            CHECK(m.tp == tp);
            CHECK(m.fp == fp);
            CHECK(m.fn == fn);
            CHECK(m.tn == tn);
            tp_sum += tp;
        }
        CHECK(tp_sum == cm.trace());
        CHECK(cm.total() == static_cast<std::int64_t>(n));
        CHECK(table.accuracy == static_cast<double>(cm.trace()) / static_cast<double>(n));
    }
}

TEST_CASE("micro-averaged recall equals accuracy") {
    const auto cm = from_rows({{30, 5, 5}, {2, 35, 3}, {6, 4, 30}});
    const auto table = metrics_from_cm(cm);
    double tp = 0, fn = 0;
    for (const auto& m : table.per_class) {
        tp += static_cast<double>(m.tp);
        fn += static_cast<double>(m.fn);
    }
    CHECK(tp / (tp + fn) == doctest::Approx(table.accuracy).epsilon(1e-15));
}

TEST_CASE("t-interval over fold accuracies") {
    const std::vector<double> equal(5, 0.93);
    CHECK(accuracy_ci(equal) == 0.0);

    const std::vector<double> folds{0.90, 0.92, 0.94, 0.90, 0.92};
    // sd = 0.0167332..., t(4, 0.975) = 2.7764451...
    const double hw = accuracy_ci(folds);
    CHECK(hw == doctest::Approx(0.02077701267367136).epsilon(1e-9));
    CHECK(std::abs(hw - 0.0208) < 5e-5);

    std::vector<double> scaled;
    for (double f : folds) scaled.push_back(100.0 * f);
    CHECK(accuracy_ci(scaled) == doctest::Approx(100.0 * hw).epsilon(1e-12));

    const std::vector<double> one{0.9};
    CHECK_THROWS_AS((void)accuracy_ci(one), DataError);
}

TEST_CASE("rank AUC") {
    const std::vector<double> separating{0.1, 0.2, 0.8, 0.9};
    const std::vector<std::uint8_t> pos{0, 0, 1, 1};
    CHECK(roc_auc(separating, pos) == 1.0);
    const std::vector<double> flat(4, 0.3);
    CHECK(roc_auc(flat, pos) == 0.5);
    const std::vector<double> mixed{0.1, 0.4, 0.35, 0.8};
    CHECK(auc_by_pairs(mixed, pos) == 0.75);
    CHECK(roc_auc(mixed, pos) == 0.75);

    const std::vector<std::uint8_t> all_pos{1, 1};
    const std::vector<double> two{0.1, 0.2};
    CHECK_THROWS_AS((void)roc_auc(two, all_pos), DataError);
}

TEST_CASE("AUC matches pair counting and ignores monotone transforms") {
    SeededRng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(60);
        std::vector<double> s(n);
        std::vector<std::uint8_t> pos(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng.below(12)) / 4.0;  // coarse grid forces ties
            pos[i] = rng.below(2) == 1;
        }
        pos[0] = 1;
        pos[1] = 0;
        const double auc = roc_auc(s, pos);
        CHECK(auc == doctest::Approx(auc_by_pairs(s, pos)).epsilon(1e-12));
        std::vector<double> t(n);
        std::transform(s.begin(), s.end(), t.begin(), [](double v) { return std::exp(3.0 * v) - 7.0; });
        CHECK(roc_auc(t, pos) == auc);
    }
}

TEST_CASE("report CSV layout") {
    EvaluationReport report;
    report.class_names = {"A", "B"};
    report.confusion = from_rows({{8, 2}, {1, 9}});
    const auto table = metrics_from_cm(report.confusion);
    report.per_class = table.per_class;
    report.per_class[0].auc = 0.934;
    report.per_class[1].auc = 0.934;
    report.accuracy = table.accuracy;
    report.fold_accuracies = {0.8, 0.9};
    report.fold_sizes = {10, 10};

    std::ostringstream metrics, confusion, folds;
    write_metrics_csv(report, metrics);
    write_confusion_csv(report, confusion);
    write_folds_csv(report, folds);
    CHECK(metrics.str() ==
          "class,precision,recall,specificity,f_score,auc\n"
          "A,88.9,80.0,90.0,84.2,0.93\n"
          "B,81.8,90.0,80.0,85.7,0.93\n");
    CHECK(confusion.str() == "true\\predicted,A,B\nA,8,2\nB,1,9\n");
    CHECK(folds.str() == "fold,n_test,accuracy\n1,10,0.800000\n2,10,0.900000\n");

    const std::string text = format_report_text(report, false);
    CHECK(text.find("accuracy: 85.0%") != std::string::npos);
    CHECK(text.find("train_seconds") == std::string::npos);
}
