#include "dfbench/separability/tsne.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dfbench/core/rng.hpp"
#include "dfbench/error.hpp"

namespace dfbench {

namespace {

constexpr double kEntropyTolerance = 1e-5;
constexpr int kMaxBisectionSteps = 64;

// Entropy in bits of p_j ~ exp(-shifted_j * beta); fills `p` normalized.
double entropy_bits(std::span<const double> shifted, double beta, Eigen::VectorXd& p) {
    double z = 0.0;
    double weighted = 0.0;
    for (std::size_t j = 0; j < shifted.size(); ++j) {
        const double e = std::exp(-beta * shifted[j]);
        p(static_cast<Eigen::Index>(j)) = e;
        z += e;
        weighted += e * shifted[j];
    }
    p /= z;
    return (std::log(z) + beta * weighted / z) / std::numbers::ln2;
}

// Fills num(i,j) = 1 / (1 + |y_i - y_j|^2) (zero diagonal) and returns its sum.
double student_kernel(const Eigen::MatrixXd& y, Eigen::MatrixXd& num) {
    const Eigen::VectorXd sq = y.rowwise().squaredNorm();
    num.noalias() = -2.0 * y * y.transpose();
    num.colwise() += sq;
    num.rowwise() += sq.transpose();
    num = (1.0 + num.array().max(0.0)).inverse().matrix();
    num.diagonal().setZero();
    return num.sum();
}

void gradient_into(const Eigen::MatrixXd& p, double exaggeration, const Eigen::MatrixXd& y, Eigen::MatrixXd& num,
                   Eigen::MatrixXd& weights, Eigen::MatrixXd& grad) {
    const double z = student_kernel(y, num);
    // W_ij = (e * p_ij - q_ij) * num_ij, q_ij = num_ij / z.
    weights = ((exaggeration * p.array() - num.array() / z) * num.array()).matrix();
    const Eigen::VectorXd row_sums = weights.rowwise().sum();
    grad.noalias() = 4.0 * (row_sums.asDiagonal() * y - weights * y);
}

}  // namespace

PerplexityFit perplexity_search(std::span<const double> squared_distances, double target_perplexity) {
    const std::size_t m = squared_distances.size();
    if (m == 0) throw DataError("perplexity search needs at least one neighbour");
    if (!(target_perplexity >= 1.0) || target_perplexity > static_cast<double>(m)) {
        std::ostringstream msg;
        msg << "target perplexity " << target_perplexity << " outside [1, " << m << "]";
        throw UsageError(msg.str());
    }
    double d_min = std::numeric_limits<double>::infinity();
    double d_sum = 0.0;
    for (const double d : squared_distances) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw DataError("perplexity search: invalid squared distance");
        d_min = std::min(d_min, d);
        d_sum += d;
    }
    std::vector<double> shifted(m);
    for (std::size_t j = 0; j < m; ++j) shifted[j] = squared_distances[j] - d_min;
    const double spread = d_sum / static_cast<double>(m) - d_min;

    const double goal = std::log2(target_perplexity);
    PerplexityFit fit;
    fit.conditional.resize(static_cast<Eigen::Index>(m));
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double sigma = spread > 0.0 ? std::sqrt(spread) : 1.0;
    double residual = 0.0;
    for (int step = 1; step <= kMaxBisectionSteps; ++step) {
        const double beta = 1.0 / (2.0 * sigma * sigma);
        fit.entropy_bits = entropy_bits(shifted, beta, fit.conditional);
        residual = fit.entropy_bits - goal;
        if (std::abs(residual) < kEntropyTolerance) {
            fit.sigma = sigma;
            fit.iterations = static_cast<std::size_t>(step);
            return fit;
        }
        if (residual > 0.0) {
            hi = sigma;
            sigma = 0.5 * (lo + hi);
        } else {
            lo = sigma;
            sigma = std::isinf(hi) ? 2.0 * sigma : 0.5 * (lo + hi);
        }
    }
    std::ostringstream msg;
    msg << "perplexity search did not converge; entropy residual " << residual << " bits";
    throw NumericalError(msg.str());
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
    const Eigen::VectorXd sq = x.rowwise().squaredNorm();
    Eigen::MatrixXd d = -2.0 * x * x.transpose();
    d.colwise() += sq;
    d.rowwise() += sq.transpose();
    d = d.array().max(0.0).matrix();
    d.diagonal().setZero();
    return d;
}

Eigen::MatrixXd joint_probabilities(const Eigen::MatrixXd& x, double perplexity) {
    const Eigen::Index n = x.rows();
    if (n < 2) throw DataError("t-SNE needs at least two samples");
    const Eigen::MatrixXd d = squared_distances(x);
    Eigen::MatrixXd cond = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> others(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t t = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) others[t++] = d(i, j);
        }
        PerplexityFit fit;
        try {
            fit = perplexity_search(others, perplexity);
        } catch (const NumericalError& e) {
            throw NumericalError("sample " + std::to_string(i + 1) + ": " + e.what());
        }
        t = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) cond(i, j) = fit.conditional(static_cast<Eigen::Index>(t++));
        }
    }
    Eigen::MatrixXd p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
    return p;
}

double kl_divergence(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y) {
    Eigen::MatrixXd num(y.rows(), y.rows());
    const double z = student_kernel(y, num);
    double kl = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            if (i != j && p(i, j) > 0.0) kl += p(i, j) * std::log(p(i, j) * z / num(i, j));
        }
    }
    return kl;
}

Eigen::MatrixXd kl_gradient(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y) {
    Eigen::MatrixXd num(y.rows(), y.rows());
    Eigen::MatrixXd weights(y.rows(), y.rows());
    Eigen::MatrixXd grad(y.rows(), y.cols());
    gradient_into(p, 1.0, y, num, weights, grad);
    return grad;
}

Embedding tsne(const Eigen::MatrixXd& x, const TsneSpec& spec, std::vector<std::string> sample_ids) {
    const Eigen::Index n = x.rows();
    if (spec.output_dims != 2 && spec.output_dims != 3) throw UsageError("t-SNE output must be 2-D or 3-D");
    if (n < 2) throw DataError("t-SNE needs at least two samples");
    if (!(spec.perplexity < static_cast<double>(n))) {
        throw UsageError("t-SNE perplexity must be below the sample count");
    }
    if (spec.iterations < 0 || !(spec.learning_rate > 0.0)) throw UsageError("invalid t-SNE schedule");
    if (!sample_ids.empty() && sample_ids.size() != static_cast<std::size_t>(n)) {
        throw DataError("t-SNE: sample id count does not match row count");
    }

    const Eigen::MatrixXd p = joint_probabilities(x, spec.perplexity);

    SeededRng rng(spec.seed);
    Eigen::MatrixXd y(n, spec.output_dims);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index d = 0; d < y.cols(); ++d) y(i, d) = spec.init_stddev * rng.normal();
    }

    Embedding out;
    out.initial_kl_divergence = kl_divergence(p, y);

    Eigen::MatrixXd num(n, n);
    Eigen::MatrixXd weights(n, n);
    Eigen::MatrixXd grad(n, spec.output_dims);
    Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, spec.output_dims);
    Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, spec.output_dims);
    for (int iter = 0; iter < spec.iterations; ++iter) {
        const double exaggeration = iter < spec.exaggeration_iterations ? spec.early_exaggeration : 1.0;
        const double momentum = iter < spec.momentum_switch_iteration ? spec.initial_momentum : spec.final_momentum;
        gradient_into(p, exaggeration, y, num, weights, grad);
        if (!grad.allFinite()) {
            throw NumericalError("t-SNE gradient became non-finite at iteration " + std::to_string(iter));
        }
        if (spec.adaptive_gains) {
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index d = 0; d < y.cols(); ++d) {
                    const bool same_sign = (grad(i, d) > 0.0) == (update(i, d) > 0.0);
                    gains(i, d) = same_sign ? std::max(gains(i, d) * 0.8, 0.01) : gains(i, d) + 0.2;
                }
            }
        }
        update = momentum * update - spec.learning_rate * gains.cwiseProduct(grad);
        y += update;
        y.rowwise() -= y.colwise().mean();
    }
    out.coordinates = std::move(y);
    out.kl_divergence = kl_divergence(p, out.coordinates);
    out.sample_ids = std::move(sample_ids);
    return out;
}

}  // namespace dfbench
