#include "dfbench/evaluation/cross_validation.hpp"

#include <chrono>
#include <memory>

#include "dfbench/core/parallel.hpp"
#include "dfbench/error.hpp"

namespace dfbench {

namespace {

struct FoldOutcome {
    std::vector<std::size_t> rows;
    Eigen::MatrixXd scores;
    double train_seconds = 0.0;
    double predict_seconds = 0.0;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

EvaluationReport run_cv(const LabeledDataset& data, const Trainer& trainer, const FoldPlan& plan, unsigned jobs) {
    if (plan.fold_of.size() != data.n_samples()) {
        throw DataError("fold plan covers " + std::to_string(plan.fold_of.size()) + " samples, dataset has " +
                        std::to_string(data.n_samples()));
    }
    const int k_classes = data.n_classes();
    std::vector<FoldOutcome> outcomes(plan.k);
    parallel_for(plan.k, jobs, [&](std::size_t fold) {
        try {
            auto& out = outcomes[fold];
            out.rows = plan.test_rows(fold);
            if (out.rows.empty()) throw DataError("fold is empty");
            const auto train_rows = plan.train_rows(fold);
            const LabeledDataset train = data.subset(train_rows);
            const auto t0 = Clock::now();
            const ScoreFn scorer = trainer(train);
            out.train_seconds = seconds_since(t0);
            const Eigen::MatrixXd test_x = data.features()(out.rows, Eigen::all);
            const auto t1 = Clock::now();
            out.scores = scorer(test_x);
            out.predict_seconds = seconds_since(t1);
            if (out.scores.rows() != test_x.rows() || out.scores.cols() != k_classes) {
                throw DataError("scorer returned a " + std::to_string(out.scores.rows()) + "x" +
                                std::to_string(out.scores.cols()) + " score matrix");
            }
        } catch (const Error& e) {
            throw Error(e.code(), "fold " + std::to_string(fold + 1) + ": " + e.what());
        }
    });

    EvaluationReport report;
    report.class_names = data.class_names();
    report.confusion = ConfusionMatrix(k_classes);
    report.scores = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.n_samples()), k_classes);
    report.predictions.assign(data.n_samples(), 0);
    for (const auto& out : outcomes) {
        const auto predicted = argmax_rows(out.scores);
        std::int64_t correct = 0;
        for (std::size_t r = 0; r < out.rows.size(); ++r) {
            const std::size_t row = out.rows[r];
            const int truth = data.labels()[row];
            report.confusion.add(truth, predicted[r]);
            report.predictions[row] = predicted[r];
            report.scores.row(static_cast<Eigen::Index>(row)) = out.scores.row(static_cast<Eigen::Index>(r));
            correct += truth == predicted[r] ? 1 : 0;
        }
        report.fold_sizes.push_back(out.rows.size());
        report.fold_accuracies.push_back(static_cast<double>(correct) / static_cast<double>(out.rows.size()));
        report.train_seconds += out.train_seconds;
        report.predict_seconds += out.predict_seconds;
    }
    const MetricTable table = metrics_from_cm(report.confusion);
    report.accuracy = table.accuracy;
    report.per_class = table.per_class;
    report.ci_halfwidth = accuracy_ci(report.fold_accuracies, 0.95);
    if (k_classes >= 2) {
        std::vector<double> column(data.n_samples());
        std::vector<std::uint8_t> positive(data.n_samples());
        for (int c = 0; c < k_classes; ++c) {
            for (std::size_t i = 0; i < data.n_samples(); ++i) {
                column[i] = report.scores(static_cast<Eigen::Index>(i), c);
                positive[i] = data.labels()[i] == c ? 1 : 0;
            }
            report.per_class[static_cast<std::size_t>(c)].auc = roc_auc(column, positive);
        }
    }
    return report;
}

EvaluationReport run_cv(const LabeledDataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                        unsigned jobs) {
    // Parallelism goes to folds when there is more than one worker; each
    // fit is then single-threaded.
    const Trainer trainer = [&spec](const LabeledDataset& train) -> ScoreFn {
        auto model = std::make_shared<const TrainedClassifier>(train_classifier(spec, train, 1));
        return [model](const Eigen::MatrixXd& x) { return class_scores(*model, x); };
    };
    return run_cv(data, trainer, plan, jobs);
}

TrainedClassifier train_fold(const LabeledDataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                             std::size_t fold, unsigned jobs) {
    if (fold >= plan.k) throw UsageError("fold index out of range");
    const auto rows = plan.train_rows(fold);
    return train_classifier(spec, data.subset(rows), jobs);
}

}  // namespace dfbench
