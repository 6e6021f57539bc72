#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfbench/classifiers/classifier.hpp"
#include "dfbench/core/dataset.hpp"
#include "dfbench/evaluation/folds.hpp"
#include "dfbench/evaluation/metrics.hpp"

namespace dfbench {

struct EvaluationReport {
    std::vector<std::string> class_names;
    ConfusionMatrix confusion{1};  // pooled over folds
    std::vector<double> fold_accuracies;
    std::vector<std::size_t> fold_sizes;
    double accuracy = 0.0;
    double ci_halfwidth = 0.0;  // 95% t-interval over folds
    std::vector<ClassMetrics> per_class;
    double train_seconds = 0.0;
    double predict_seconds = 0.0;

    // Out-of-fold outputs, row-aligned with the evaluated dataset.
    Eigen::MatrixXd scores;
    std::vector<int> predictions;
};

/// Maps feature rows to N x K class scores.
using ScoreFn = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;
/// Fits on a training fold and returns its scorer.
using Trainer = std::function<ScoreFn(const LabeledDataset& train)>;

/// k-fold evaluation: for every fold, fit on the other folds and score the
/// held-out rows. Folds run on up to `jobs` threads; the report does not
/// depend on `jobs` apart from timings. A training failure is rethrown with
/// the fold index prepended.
EvaluationReport run_cv(const LabeledDataset& data, const Trainer& trainer, const FoldPlan& plan, unsigned jobs = 1);
EvaluationReport run_cv(const LabeledDataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                        unsigned jobs = 1);

/// The model run_cv fits for `fold`. Only training rows reach the fit,
/// standardization statistics included.
TrainedClassifier train_fold(const LabeledDataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                             std::size_t fold, unsigned jobs = 1);

}  // namespace dfbench
