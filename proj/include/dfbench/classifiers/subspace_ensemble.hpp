#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dfbench/classifiers/lda.hpp"
#include "dfbench/core/dataset.hpp"

namespace dfbench {

/// Random-subspace committee of LDA learners.
struct SubspaceEnsembleSpec {
    std::size_t n_learners = 30;
    std::size_t subspace_dim = 500;
    std::uint64_t seed = 0;
    double gamma = 0.0;  // regularization passed to every member
};

struct SubspaceMember {
    std::vector<Eigen::Index> features;  // ascending, distinct
    LdaModel model;
};

struct SubspaceEnsembleModel {
    std::vector<SubspaceMember> members;
    Eigen::Index n_features = 0;
    int n_classes = 0;
};

/// Feature subset of member `member`: subspace_dim indices drawn without
/// replacement from substream `member` of the spec seed, then sorted.
std::vector<Eigen::Index> subspace_features(const SubspaceEnsembleSpec& spec, std::size_t member,
                                            Eigen::Index n_features);

/// Members are fit in parallel on up to `jobs` threads; the result does not
/// depend on `jobs`.
SubspaceEnsembleModel fit_subspace_ensemble(const LabeledDataset& data, const SubspaceEnsembleSpec& spec,
                                            unsigned jobs = 1);
SubspaceEnsembleModel fit_subspace_ensemble(const Eigen::MatrixXd& x, std::span<const int> labels,
                                            int n_classes, const SubspaceEnsembleSpec& spec, unsigned jobs = 1);

/// Arithmetic mean of member posteriors.
Eigen::VectorXd ensemble_scores(const SubspaceEnsembleModel& model, const Eigen::VectorXd& x);
Eigen::MatrixXd ensemble_scores(const SubspaceEnsembleModel& model, const Eigen::MatrixXd& x);

}  // namespace dfbench
