#include "dfbench/classifiers/subspace_ensemble.hpp"

#include <algorithm>
#include <string>

#include "dfbench/core/parallel.hpp"
#include "dfbench/core/rng.hpp"
#include "dfbench/error.hpp"

namespace dfbench {

namespace {

void check_spec(const SubspaceEnsembleSpec& spec, Eigen::Index n_features) {
    if (spec.n_learners < 1) {
        throw UsageError("subspace ensemble needs at least one learner");
    }
    if (spec.subspace_dim < 1 || spec.subspace_dim > static_cast<std::size_t>(n_features)) {
        throw UsageError("subspace dimension " + std::to_string(spec.subspace_dim) + " outside [1, " +
                         std::to_string(n_features) + "]");
    }
}

}  // namespace

std::vector<Eigen::Index> subspace_features(const SubspaceEnsembleSpec& spec, std::size_t member,
                                            Eigen::Index n_features) {
    check_spec(spec, n_features);
    SeededRng rng = SeededRng(spec.seed).substream(member);
    const auto drawn = rng.sample_without_replacement(static_cast<std::size_t>(n_features), spec.subspace_dim);
    std::vector<Eigen::Index> out(drawn.begin(), drawn.end());
    std::sort(out.begin(), out.end());
    return out;
}

SubspaceEnsembleModel fit_subspace_ensemble(const Eigen::MatrixXd& x, std::span<const int> labels, int n_classes,
                                            const SubspaceEnsembleSpec& spec, unsigned jobs) {
    check_spec(spec, x.cols());
    // Member covariances are principal submatrices of the full pooled
    // covariance, so the moments are computed once.
    const ClassMoments moments = class_moments(x, labels, n_classes);

    SubspaceEnsembleModel model;
    model.n_features = x.cols();
    model.n_classes = n_classes;
    model.members.resize(spec.n_learners);
    parallel_for(spec.n_learners, jobs, [&](std::size_t i) {
        auto features = subspace_features(spec, i, x.cols());
        Eigen::MatrixXd means = moments.means(Eigen::all, features);
        const Eigen::MatrixXd cov = moments.pooled_covariance(features, features);
        model.members[i] = SubspaceMember{std::move(features),
                                          lda_from_moments(std::move(means), cov, moments.priors, spec.gamma)};
    });
    return model;
}

SubspaceEnsembleModel fit_subspace_ensemble(const LabeledDataset& data, const SubspaceEnsembleSpec& spec,
                                            unsigned jobs) {
    return fit_subspace_ensemble(data.features(), data.labels(), data.n_classes(), spec, jobs);
}

Eigen::MatrixXd ensemble_scores(const SubspaceEnsembleModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.n_features) {
        throw DataError("ensemble: input has " + std::to_string(x.cols()) + " features, model expects " +
                        std::to_string(model.n_features));
    }
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(x.rows(), model.n_classes);
    for (const auto& member : model.members) {
        sum += lda_scores(member.model, Eigen::MatrixXd(x(Eigen::all, member.features)));
    }
    return sum / static_cast<double>(model.members.size());
}

Eigen::VectorXd ensemble_scores(const SubspaceEnsembleModel& model, const Eigen::VectorXd& x) {
    return ensemble_scores(model, Eigen::MatrixXd(x.transpose())).row(0).transpose();
}

}  // namespace dfbench
