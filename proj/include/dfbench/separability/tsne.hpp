#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dfbench {

/// Exact (O(N^2) per iteration) t-SNE settings.
struct TsneSpec {
    int output_dims = 2;
    double perplexity = 30.0;
    int iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    int exaggeration_iterations = 250;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    int momentum_switch_iteration = 250;
    bool adaptive_gains = true;  // per-coordinate step gains (+0.2 / x0.8, floor 0.01)
    double init_stddev = 1e-4;
    std::uint64_t seed = 0;
};

struct Embedding {
    Eigen::MatrixXd coordinates;  // N x output_dims
    double kl_divergence = 0.0;
    double initial_kl_divergence = 0.0;  // at the random initialization
    std::vector<std::string> sample_ids;
};

struct PerplexityFit {
    double sigma = 0.0;
    double entropy_bits = 0.0;
    std::size_t iterations = 0;
    Eigen::VectorXd conditional;  // p_{j|i} over the given neighbours
};

/// Bisection on the Gaussian bandwidth sigma so that the conditional
/// distribution p_j ~ exp(-d_j / (2 sigma^2)) over the given squared
/// distances has entropy log2(target) to within 1e-5 bits, in at most 64
/// steps. Throws NumericalError with the residual otherwise.
PerplexityFit perplexity_search(std::span<const double> squared_distances, double target_perplexity);

/// Pairwise squared Euclidean distances between rows.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x);

/// Symmetrized joint affinities P = (P_cond + P_cond') / (2N).
Eigen::MatrixXd joint_probabilities(const Eigen::MatrixXd& x, double perplexity);

/// KL(P || Q) with Student-t (one degree of freedom) affinities Q of the
/// embedding y.
double kl_divergence(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y);

/// Analytic gradient of kl_divergence with respect to y.
Eigen::MatrixXd kl_gradient(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y);

/// Gradient descent on KL(P || Q) from a seeded Gaussian start. Throws
/// NumericalError naming the iteration if the gradient goes non-finite.
Embedding tsne(const Eigen::MatrixXd& x, const TsneSpec& spec, std::vector<std::string> sample_ids = {});

}  // namespace dfbench
