#include "dfbench/classifiers/lda.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dfbench/error.hpp"

namespace dfbench {

ClassMoments class_moments(const Eigen::MatrixXd& x, std::span<const int> labels, int n_classes) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    if (static_cast<std::size_t>(n) != labels.size()) {
        throw DataError("LDA: label count does not match row count");
    }
    if (n_classes < 2) {
        throw DataError("LDA needs at least two classes, got " + std::to_string(n_classes));
    }
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(n_classes), 0);
    ClassMoments m;
    m.means = Eigen::MatrixXd::Zero(n_classes, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int y = labels[static_cast<std::size_t>(i)];
        if (y < 0 || y >= n_classes) {
            throw DataError("LDA: label " + std::to_string(y) + " out of range");
        }
        m.means.row(y) += x.row(i);
        ++counts[static_cast<std::size_t>(y)];
    }
    for (int k = 0; k < n_classes; ++k) {
        const auto c = counts[static_cast<std::size_t>(k)];
        if (c < 2) {
            throw DataError("LDA: class " + std::to_string(k) + " has " + std::to_string(c) +
                            " samples, at least 2 required");
        }
        m.means.row(k) /= static_cast<double>(c);
    }
    Eigen::MatrixXd centered(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        centered.row(i) = x.row(i) - m.means.row(labels[static_cast<std::size_t>(i)]);
    }
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    m.pooled_covariance = scatter.selfadjointView<Eigen::Lower>();
    m.pooled_covariance /= static_cast<double>(n - n_classes);

    m.priors.resize(n_classes);
    for (int k = 0; k < n_classes; ++k) {
        m.priors(k) = static_cast<double>(counts[static_cast<std::size_t>(k)]) / static_cast<double>(n);
    }
    return m;
}

LdaModel lda_from_moments(Eigen::MatrixXd means, const Eigen::MatrixXd& covariance, const Eigen::VectorXd& priors,
                          double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw UsageError("LDA regularization gamma must lie in [0, 1]");
    }
    Eigen::MatrixXd sigma = (1.0 - gamma) * covariance;
    sigma.diagonal() += gamma * covariance.diagonal();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("LDA: eigendecomposition of the pooled covariance failed");
    }
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double lambda_max = lambda.size() > 0 ? lambda.maxCoeff() : 0.0;
    const double cutoff = 1e-10 * lambda_max;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda_max > 0.0 && lambda(i) >= cutoff) inv(i) = 1.0 / lambda(i);
    }
    const Eigen::MatrixXd& v = eig.eigenvectors();
    Eigen::MatrixXd pinv = v * inv.asDiagonal() * v.transpose();
    pinv = 0.5 * (pinv + pinv.transpose()).eval();

    LdaModel model;
    model.gamma = gamma;
    model.log_priors = priors.array().log().matrix();
    model.coefficients = pinv * means.transpose();
    model.offsets.resize(means.rows());
    for (Eigen::Index k = 0; k < means.rows(); ++k) {
        model.offsets(k) = -0.5 * means.row(k).dot(model.coefficients.col(k)) + model.log_priors(k);
    }
    model.means = std::move(means);
    model.sigma_pinv = std::move(pinv);
    return model;
}

LdaModel fit_lda(const Eigen::MatrixXd& x, std::span<const int> labels, int n_classes, double gamma) {
    const ClassMoments m = class_moments(x, labels, n_classes);
    return lda_from_moments(m.means, m.pooled_covariance, m.priors, gamma);
}

LdaModel fit_lda(const LabeledDataset& data, double gamma) {
    return fit_lda(data.features(), data.labels(), data.n_classes(), gamma);
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd out(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double top = logits.row(i).maxCoeff();
        const Eigen::RowVectorXd e = (logits.row(i).array() - top).exp().matrix();
        out.row(i) = e / e.sum();
    }
    return out;
}

Eigen::MatrixXd lda_scores(const LdaModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.n_features()) {
        throw DataError("LDA: input has " + std::to_string(x.cols()) + " features, model expects " +
                        std::to_string(model.n_features()));
    }
    Eigen::MatrixXd logits = x * model.coefficients;
    logits.rowwise() += model.offsets.transpose();
    return softmax_rows(logits);
}

Eigen::VectorXd lda_scores(const LdaModel& model, const Eigen::VectorXd& x) {
    return lda_scores(model, Eigen::MatrixXd(x.transpose())).row(0).transpose();
}

}  // namespace dfbench
