#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dfbench {

/// K x K counts, rows = true class, columns = predicted class.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int n_classes);

    int n_classes() const noexcept { return k_; }
    void add(int truth, int predicted, std::int64_t count = 1);
    std::int64_t at(int truth, int predicted) const {
        return counts_[static_cast<std::size_t>(truth * k_ + predicted)];
    }
    std::int64_t total() const;
    std::int64_t trace() const;
    std::int64_t row_sum(int truth) const;
    std::int64_t col_sum(int predicted) const;

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    int k_;
    std::vector<std::int64_t> counts_;
};

/// One-vs-rest reduction of class k. Empty optionals mark zero denominators.
struct ClassMetrics {
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> specificity;
    std::optional<double> f_score;
    std::optional<double> auc;
};

struct MetricTable {
    std::vector<ClassMetrics> per_class;
    double accuracy = 0.0;
};

/// Precision, recall, specificity and F-score per class plus overall
/// accuracy (trace / total). Requires total > 0.
MetricTable metrics_from_cm(const ConfusionMatrix& cm);

/// Harmonic mean 2PR / (P + R); undefined when either input is or P + R = 0.
/// Unit-agnostic (fractions or percent).
std::optional<double> f_score(std::optional<double> precision, std::optional<double> recall);

/// Half-width of the t-interval on the mean fold accuracy:
/// t_{k-1, (1+level)/2} * sd / sqrt(k). Requires at least two folds.
double accuracy_ci(std::span<const double> fold_accuracies, double level = 0.95);

/// Mann-Whitney AUC with mid-ranks, so tied pairs count one half.
/// `positives` flags are 0 / non-zero. Requires both kinds of sample.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> positives);

}  // namespace dfbench
