#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dfbench/classifiers/lda.hpp"
#include "dfbench/classifiers/subspace_ensemble.hpp"
#include "dfbench/classifiers/svm.hpp"
#include "dfbench/core/dataset.hpp"

namespace dfbench {

struct LdaSpec {
    double gamma = 0.0;
};

using ClassifierSpec = std::variant<LdaSpec, SubspaceEnsembleSpec, SvmSpec>;

/// Short stable identifier: "lda", "ensemble", "svm_quadratic", "svm_gaussian".
std::string classifier_name(const ClassifierSpec& spec);

/// Per-feature z-scoring with statistics from the training rows only.
/// Constant features keep scale 1.
struct Standardizer {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& x);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

/// SVMs see standardized features; the statistics travel with the model.
struct SvmClassifier {
    Standardizer standardizer;
    OvoSvmModel ovo;
};

using TrainedClassifier = std::variant<LdaModel, SubspaceEnsembleModel, SvmClassifier>;

/// LDA and the ensemble are fit on raw features (their predictions are
/// affine invariant); SVMs on standardized ones.
TrainedClassifier train_classifier(const ClassifierSpec& spec, const LabeledDataset& train, unsigned jobs = 1);

/// N x K per-class scores; larger is more likely.
Eigen::MatrixXd class_scores(const TrainedClassifier& model, const Eigen::MatrixXd& x);

int n_classes(const TrainedClassifier& model);

/// Row-wise argmax, lowest index on ties.
std::vector<int> argmax_rows(const Eigen::MatrixXd& scores);

std::vector<int> predict(const TrainedClassifier& model, const Eigen::MatrixXd& x);

}  // namespace dfbench
