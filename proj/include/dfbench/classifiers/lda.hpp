#pragma once

#include <span>

#include <Eigen/Dense>

#include "dfbench/core/dataset.hpp"

namespace dfbench {

/// Linear discriminant analysis with a shared (pooled) covariance.
///
/// The pooled covariance is regularized as (1 - gamma) * S + gamma * diag(S)
/// and inverted through its eigendecomposition; eigenvalues below
/// 1e-10 * lambda_max are treated as zero (pseudo-inverse).
struct LdaModel {
    Eigen::MatrixXd means;       // K x D, one row per class
    Eigen::MatrixXd sigma_pinv;  // D x D
    Eigen::VectorXd log_priors;  // K, empirical class frequencies
    double gamma = 0.0;

    // Linear discriminant delta_k(x) = x' * coefficients.col(k) + offsets(k).
    Eigen::MatrixXd coefficients;  // D x K
    Eigen::VectorXd offsets;       // K

    int n_classes() const noexcept { return static_cast<int>(means.rows()); }
    Eigen::Index n_features() const noexcept { return means.cols(); }
};

/// Class means, pooled within-class covariance (divisor N - K) and class priors.
struct ClassMoments {
    Eigen::MatrixXd means;
    Eigen::MatrixXd pooled_covariance;
    Eigen::VectorXd priors;
};

ClassMoments class_moments(const Eigen::MatrixXd& x, std::span<const int> labels, int n_classes);

/// Builds a model from precomputed moments; `means` and `covariance` may be
/// restricted to any feature subset.
LdaModel lda_from_moments(Eigen::MatrixXd means, const Eigen::MatrixXd& covariance,
                          const Eigen::VectorXd& priors, double gamma);

/// Requires at least two classes and at least two samples per class.
LdaModel fit_lda(const Eigen::MatrixXd& x, std::span<const int> labels, int n_classes, double gamma = 0.0);
LdaModel fit_lda(const LabeledDataset& data, double gamma = 0.0);

/// Class posteriors (softmax of the discriminants) for one sample.
Eigen::VectorXd lda_scores(const LdaModel& model, const Eigen::VectorXd& x);
/// Row-wise posteriors, N x K.
Eigen::MatrixXd lda_scores(const LdaModel& model, const Eigen::MatrixXd& x);

/// Softmax over each row, max-shifted.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

}  // namespace dfbench
