#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dfbench/core/dataset.hpp"

namespace dfbench {

enum class KernelType { quadratic, gaussian };

/// Kernel machine settings.
///
///   quadratic: k(x, z) = (1 + x.z / s^2)^2
///   gaussian:  k(x, z) = exp(-|x - z|^2 / s^2)
struct SvmSpec {
    KernelType kernel = KernelType::gaussian;
    double kernel_scale = 32.0;
    double box_constraint = 1.0;
    double tolerance = 1e-3;
    std::size_t max_iterations = 10'000'000;  // SMO pair updates before giving up

    static SvmSpec quadratic() { return {KernelType::quadratic, 1.0, 1.0}; }
    static SvmSpec medium_gaussian() { return {KernelType::gaussian, 32.0, 1.0}; }
};

void validate(const SvmSpec& spec);

double kernel(const SvmSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& z);
/// Gram matrix between the rows of a and the rows of b.
Eigen::MatrixXd kernel_matrix(const SvmSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Two-class kernel machine, f(x) = sum_i alpha_i y_i k(sv_i, x) + bias.
struct BinarySvm {
    SvmSpec spec;
    Eigen::MatrixXd support_vectors;             // rows
    Eigen::VectorXd alphas;                      // in (0, C]
    Eigen::VectorXd sv_labels;                   // +1 / -1
    std::vector<std::size_t> support_indices;    // rows of the training matrix
    double bias = 0.0;
    std::size_t iterations = 0;
    double kkt_gap = 0.0;  // max violating-pair gap at termination
};

/// SMO on the dual with first-order (maximal violating pair) working-set
/// selection. `y` holds +1 / -1. Terminates when the violating-pair gap
/// falls to spec.tolerance; the bias is the midpoint of the final gap, which
/// bounds every KKT residual by tolerance / 2. Throws NumericalError carrying
/// the remaining gap if spec.max_iterations is exhausted.
BinarySvm fit_binary_svm(const Eigen::MatrixXd& x, std::span<const int> y, const SvmSpec& spec);
BinarySvm fit_binary_svm(const Eigen::MatrixXd& x_pos, const Eigen::MatrixXd& x_neg, const SvmSpec& spec);

Eigen::VectorXd decision_values(const BinarySvm& svm, const Eigen::MatrixXd& x);

/// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j k(x_i, x_j)
double dual_objective(const BinarySvm& svm);

/// Largest KKT residual over the training set:
///   alpha = 0     -> max(0, 1 - y f)
///   0 < alpha < C -> |y f - 1|
///   alpha = C     -> max(0, y f - 1)
double max_kkt_violation(const BinarySvm& svm, const Eigen::MatrixXd& x, std::span<const int> y);

struct OvoMachine {
    int positive_class = 0;  // receives the vote when f(x) > 0
    int negative_class = 0;
    BinarySvm svm;
};

/// One machine per class pair (a < b), in lexicographic pair order.
struct OvoSvmModel {
    std::vector<OvoMachine> machines;
    int n_classes = 0;
};

OvoSvmModel fit_ovo_svm(const Eigen::MatrixXd& x, std::span<const int> labels, int n_classes, const SvmSpec& spec,
                        unsigned jobs = 1);
OvoSvmModel fit_ovo_svm(const LabeledDataset& data, const SvmSpec& spec, unsigned jobs = 1);

/// Per-class score = votes + logistic(sum of signed decision values) / (K + 1).
/// The fractional term is below 1, so it only breaks ties between equal vote
/// counts. N x K.
Eigen::MatrixXd ovo_scores(const OvoSvmModel& model, const Eigen::MatrixXd& x);
Eigen::VectorXd ovo_scores(const OvoSvmModel& model, const Eigen::VectorXd& x);

/// Raw aggregation, exposed for testing: votes and decision sums per class.
Eigen::VectorXd aggregate_ovo(const Eigen::VectorXd& votes, const Eigen::VectorXd& decision_sums);

}  // namespace dfbench
