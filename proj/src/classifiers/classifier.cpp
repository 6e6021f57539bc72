#include "dfbench/classifiers/classifier.hpp"

#include <cmath>

namespace dfbench {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

std::string classifier_name(const ClassifierSpec& spec) {
    return std::visit(overloaded{
                          [](const LdaSpec&) { return std::string("lda"); },
                          [](const SubspaceEnsembleSpec&) { return std::string("ensemble"); },
                          [](const SvmSpec& s) {
                              return std::string(s.kernel == KernelType::quadratic ? "svm_quadratic"
                                                                                   : "svm_gaussian");
                          },
                      },
                      spec);
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
    Standardizer s;
    const auto n = static_cast<double>(x.rows());
    s.mean = x.colwise().mean();
    s.scale.resize(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double var = n > 1 ? (x.col(j).array() - s.mean(j)).square().sum() / (n - 1.0) : 0.0;
        const double sd = std::sqrt(var);
        s.scale(j) = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
    return ((x.rowwise() - mean).array().rowwise() / scale.array()).matrix();
}

TrainedClassifier train_classifier(const ClassifierSpec& spec, const LabeledDataset& train, unsigned jobs) {
    return std::visit(overloaded{
                          [&](const LdaSpec& s) -> TrainedClassifier { return fit_lda(train, s.gamma); },
                          [&](const SubspaceEnsembleSpec& s) -> TrainedClassifier {
                              return fit_subspace_ensemble(train, s, jobs);
                          },
                          [&](const SvmSpec& s) -> TrainedClassifier {
                              SvmClassifier out;
                              out.standardizer = Standardizer::fit(train.features());
                              out.ovo = fit_ovo_svm(out.standardizer.apply(train.features()), train.labels(),
                                                    train.n_classes(), s, jobs);
                              return out;
                          },
                      },
                      spec);
}

Eigen::MatrixXd class_scores(const TrainedClassifier& model, const Eigen::MatrixXd& x) {
    return std::visit(overloaded{
                          [&](const LdaModel& m) { return lda_scores(m, x); },
                          [&](const SubspaceEnsembleModel& m) { return ensemble_scores(m, x); },
                          [&](const SvmClassifier& m) { return ovo_scores(m.ovo, m.standardizer.apply(x)); },
                      },
                      model);
}

int n_classes(const TrainedClassifier& model) {
    return std::visit(overloaded{
                          [](const LdaModel& m) { return m.n_classes(); },
                          [](const SubspaceEnsembleModel& m) { return m.n_classes; },
                          [](const SvmClassifier& m) { return m.ovo.n_classes; },
                      },
                      model);
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& scores) {
    std::vector<int> out(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < scores.cols(); ++k) {
            if (scores(i, k) > scores(i, best)) best = k;
        }
        out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return out;
}

std::vector<int> predict(const TrainedClassifier& model, const Eigen::MatrixXd& x) {
    return argmax_rows(class_scores(model, x));
}

}  // namespace dfbench
