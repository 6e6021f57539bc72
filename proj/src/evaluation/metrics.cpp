#include "dfbench/evaluation/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "dfbench/error.hpp"

namespace dfbench {

ConfusionMatrix::ConfusionMatrix(int n_classes) : k_(n_classes) {
    if (n_classes < 1) throw DataError("confusion matrix needs at least one class");
    counts_.assign(static_cast<std::size_t>(k_) * static_cast<std::size_t>(k_), 0);
}

void ConfusionMatrix::add(int truth, int predicted, std::int64_t count) {
    if (truth < 0 || truth >= k_ || predicted < 0 || predicted >= k_) {
        throw DataError("confusion matrix index out of range");
    }
    if (count < 0) throw DataError("confusion matrix counts must be non-negative");
    counts_[static_cast<std::size_t>(truth * k_ + predicted)] += count;
}

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t t = 0;
    for (int i = 0; i < k_; ++i) t += at(i, i);
    return t;
}

std::int64_t ConfusionMatrix::row_sum(int truth) const {
    std::int64_t s = 0;
    for (int j = 0; j < k_; ++j) s += at(truth, j);
    return s;
}

std::int64_t ConfusionMatrix::col_sum(int predicted) const {
    std::int64_t s = 0;
    for (int i = 0; i < k_; ++i) s += at(i, predicted);
    return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.k_ != k_) throw DataError("confusion matrix size mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
}

namespace {
std::optional<double> ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

std::optional<double> f_score(std::optional<double> precision, std::optional<double> recall) {
    if (!precision || !recall || *precision + *recall == 0.0) return std::nullopt;
    return 2.0 * *precision * *recall / (*precision + *recall);
}

MetricTable metrics_from_cm(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total <= 0) throw DataError("metrics need a non-empty confusion matrix");
    MetricTable table;
    table.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    for (int k = 0; k < cm.n_classes(); ++k) {
        ClassMetrics m;
        m.tp = cm.at(k, k);
        m.fn = cm.row_sum(k) - m.tp;
        m.fp = cm.col_sum(k) - m.tp;
        m.tn = total - m.tp - m.fn - m.fp;
        m.precision = ratio(m.tp, m.tp + m.fp);
        m.recall = ratio(m.tp, m.tp + m.fn);
        m.specificity = ratio(m.tn, m.tn + m.fp);
        m.f_score = f_score(m.precision, m.recall);
        table.per_class.push_back(m);
    }
    return table;
}

double accuracy_ci(std::span<const double> fold_accuracies, double level) {
    const std::size_t k = fold_accuracies.size();
    if (k < 2) {
        throw DataError("confidence interval needs at least 2 folds, got " + std::to_string(k));
    }
    if (!(level > 0.0 && level < 1.0)) throw UsageError("confidence level must lie in (0, 1)");
    const double n = static_cast<double>(k);
    const double mean = std::accumulate(fold_accuracies.begin(), fold_accuracies.end(), 0.0) / n;
    double ss = 0.0;
    for (const double a : fold_accuracies) ss += (a - mean) * (a - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
    return t * sd / std::sqrt(n);
}

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> positives) {
    if (scores.size() != positives.size()) throw DataError("AUC: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (const auto p : positives) n_pos += p != 0 ? 1 : 0;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DataError("AUC needs both positive and negative samples");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // Sum of mid-ranks of the positives.
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            if (positives[order[t]] != 0) rank_sum += mid_rank;
        }
        i = j + 1;
    }
    const double p = static_cast<double>(n_pos);
    const double u = rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(n_neg));
}

}  // namespace dfbench
