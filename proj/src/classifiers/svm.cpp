#include "dfbench/classifiers/svm.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "dfbench/core/parallel.hpp"
#include "dfbench/error.hpp"

namespace dfbench {

void validate(const SvmSpec& spec) {
    if (!(spec.kernel_scale > 0.0) || !std::isfinite(spec.kernel_scale)) {
        throw UsageError("SVM kernel scale must be positive");
    }
    if (!(spec.box_constraint > 0.0) || !std::isfinite(spec.box_constraint)) {
        throw UsageError("SVM box constraint must be positive");
    }
    if (!(spec.tolerance > 0.0)) {
        throw UsageError("SVM tolerance must be positive");
    }
}

double kernel(const SvmSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
    const double s2 = spec.kernel_scale * spec.kernel_scale;
    if (spec.kernel == KernelType::quadratic) {
        const double t = 1.0 + x.dot(z) / s2;
        return t * t;
    }
    return std::exp(-(x - z).squaredNorm() / s2);
}

Eigen::MatrixXd kernel_matrix(const SvmSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double s2 = spec.kernel_scale * spec.kernel_scale;
    Eigen::MatrixXd gram = a * b.transpose();
    if (spec.kernel == KernelType::quadratic) {
        return (1.0 + gram.array() / s2).square().matrix();
    }
    const Eigen::VectorXd na = a.rowwise().squaredNorm();
    const Eigen::VectorXd nb = b.rowwise().squaredNorm();
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const double d2 = std::max(0.0, na(i) + nb(j) - 2.0 * gram(i, j));
            k(i, j) = std::exp(-d2 / s2);
        }
    }
    return k;
}

namespace {

constexpr double kTau = 1e-12;

struct SmoResult {
    Eigen::VectorXd alpha;
    double bias = 0.0;
    double gap = 0.0;
    std::size_t iterations = 0;
};

SmoResult solve_smo(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, const SvmSpec& spec) {
    const Eigen::Index n = y.size();
    const double c = spec.box_constraint;
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);  // Q alpha - e

    auto in_up = [&](Eigen::Index t) { return y(t) > 0 ? alpha(t) < c : alpha(t) > 0.0; };
    auto in_low = [&](Eigen::Index t) { return y(t) > 0 ? alpha(t) > 0.0 : alpha(t) < c; };

    SmoResult result;
    double g_max = 0.0;
    double g_min = 0.0;
    for (std::size_t iter = 0;; ++iter) {
        g_max = -std::numeric_limits<double>::infinity();
        g_min = std::numeric_limits<double>::infinity();
        Eigen::Index i = -1;
        Eigen::Index j = -1;
        for (Eigen::Index t = 0; t < n; ++t) {
            const double v = -y(t) * grad(t);
            if (in_up(t) && v > g_max) {
                g_max = v;
                i = t;
            }
            if (in_low(t) && v < g_min) {
                g_min = v;
                j = t;
            }
        }
        if (i < 0 || j < 0 || g_max - g_min <= spec.tolerance) {
            result.iterations = iter;
            break;
        }
        if (iter >= spec.max_iterations) {
            std::ostringstream msg;
            msg << "SMO did not converge after " << spec.max_iterations << " iterations; worst KKT violation "
                << (g_max - g_min);
            throw NumericalError(msg.str());
        }

        const double old_ai = alpha(i);
        const double old_aj = alpha(j);
        const double quad_raw = k(i, i) + k(j, j) - 2.0 * k(i, j);
        const double quad = quad_raw > 0.0 ? quad_raw : kTau;
        if (y(i) != y(j)) {
            const double delta = (-grad(i) - grad(j)) / quad;
            const double diff = alpha(i) - alpha(j);
            alpha(i) += delta;
            alpha(j) += delta;
            if (diff > 0.0) {
                if (alpha(j) < 0.0) {
                    alpha(j) = 0.0;
                    alpha(i) = diff;
                }
            } else if (alpha(i) < 0.0) {
                alpha(i) = 0.0;
                alpha(j) = -diff;
            }
            if (diff > 0.0) {
                if (alpha(i) > c) {
                    alpha(i) = c;
                    alpha(j) = c - diff;
                }
            } else if (alpha(j) > c) {
                alpha(j) = c;
                alpha(i) = c + diff;
            }
        } else {
            const double delta = (grad(i) - grad(j)) / quad;
            const double sum = alpha(i) + alpha(j);
            alpha(i) -= delta;
            alpha(j) += delta;
            if (sum > c) {
                if (alpha(i) > c) {
                    alpha(i) = c;
                    alpha(j) = sum - c;
                }
            } else if (alpha(j) < 0.0) {
                alpha(j) = 0.0;
                alpha(i) = sum;
            }
            if (sum > c) {
                if (alpha(j) > c) {
                    alpha(j) = c;
                    alpha(i) = sum - c;
                }
            } else if (alpha(i) < 0.0) {
                alpha(i) = 0.0;
                alpha(j) = sum;
            }
        }
        const double di = (alpha(i) - old_ai) * y(i);
        const double dj = (alpha(j) - old_aj) * y(j);
        grad.array() += y.array() * (k.col(i).array() * di + k.col(j).array() * dj);
    }
    result.alpha = std::move(alpha);
    result.gap = std::isfinite(g_max - g_min) ? std::max(0.0, g_max - g_min) : 0.0;
    if (std::isfinite(g_max) && std::isfinite(g_min)) {
        result.bias = 0.5 * (g_max + g_min);
    } else {
        result.bias = std::isfinite(g_max) ? g_max : (std::isfinite(g_min) ? g_min : 0.0);
    }
    return result;
}

}  // namespace

BinarySvm fit_binary_svm(const Eigen::MatrixXd& x, std::span<const int> y, const SvmSpec& spec) {
    validate(spec);
    const Eigen::Index n = x.rows();
    if (static_cast<std::size_t>(n) != y.size()) {
        throw DataError("SVM: label count does not match row count");
    }
    Eigen::VectorXd yd(n);
    bool has_pos = false;
    bool has_neg = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int v = y[static_cast<std::size_t>(i)];
        if (v != 1 && v != -1) throw DataError("SVM labels must be +1 or -1");
        yd(i) = v;
        has_pos = has_pos || v == 1;
        has_neg = has_neg || v == -1;
    }
    if (!has_pos || !has_neg) {
        throw DataError("SVM needs samples from both classes");
    }
    const Eigen::MatrixXd k = kernel_matrix(spec, x, x);
    SmoResult smo = solve_smo(k, yd, spec);

    BinarySvm svm;
    svm.spec = spec;
    svm.bias = smo.bias;
    svm.iterations = smo.iterations;
    svm.kkt_gap = smo.gap;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (smo.alpha(i) > 0.0) svm.support_indices.push_back(static_cast<std::size_t>(i));
    }
    const auto n_sv = static_cast<Eigen::Index>(svm.support_indices.size());
    svm.support_vectors.resize(n_sv, x.cols());
    svm.alphas.resize(n_sv);
    svm.sv_labels.resize(n_sv);
    for (Eigen::Index s = 0; s < n_sv; ++s) {
        const auto row = static_cast<Eigen::Index>(svm.support_indices[static_cast<std::size_t>(s)]);
        svm.support_vectors.row(s) = x.row(row);
        svm.alphas(s) = smo.alpha(row);
        svm.sv_labels(s) = yd(row);
    }
    return svm;
}

BinarySvm fit_binary_svm(const Eigen::MatrixXd& x_pos, const Eigen::MatrixXd& x_neg, const SvmSpec& spec) {
    if (x_pos.rows() == 0 || x_neg.rows() == 0) {
        throw DataError("SVM needs samples from both classes");
    }
    if (x_pos.cols() != x_neg.cols()) {
        throw DataError("SVM: positive and negative samples differ in dimension");
    }
    Eigen::MatrixXd x(x_pos.rows() + x_neg.rows(), x_pos.cols());
    x << x_pos, x_neg;
    std::vector<int> y(static_cast<std::size_t>(x.rows()), -1);
    std::fill_n(y.begin(), x_pos.rows(), 1);
    return fit_binary_svm(x, y, spec);
}

Eigen::VectorXd decision_values(const BinarySvm& svm, const Eigen::MatrixXd& x) {
    if (svm.support_vectors.rows() == 0) {
        return Eigen::VectorXd::Constant(x.rows(), svm.bias);
    }
    if (x.cols() != svm.support_vectors.cols()) {
        throw DataError("SVM: input dimension does not match the model");
    }
    const Eigen::VectorXd coef = svm.alphas.cwiseProduct(svm.sv_labels);
    Eigen::VectorXd f = kernel_matrix(svm.spec, x, svm.support_vectors) * coef;
    f.array() += svm.bias;
    return f;
}

double dual_objective(const BinarySvm& svm) {
    if (svm.alphas.size() == 0) return 0.0;
    const Eigen::VectorXd coef = svm.alphas.cwiseProduct(svm.sv_labels);
    const Eigen::MatrixXd k = kernel_matrix(svm.spec, svm.support_vectors, svm.support_vectors);
    return svm.alphas.sum() - 0.5 * coef.dot(k * coef);
}

double max_kkt_violation(const BinarySvm& svm, const Eigen::MatrixXd& x, std::span<const int> y) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(x.rows());
    for (std::size_t s = 0; s < svm.support_indices.size(); ++s) {
        alpha(static_cast<Eigen::Index>(svm.support_indices[s])) = svm.alphas(static_cast<Eigen::Index>(s));
    }
    const Eigen::VectorXd f = decision_values(svm, x);
    const double c = svm.spec.box_constraint;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double margin = y[static_cast<std::size_t>(i)] * f(i);
        double v = 0.0;
        if (alpha(i) <= 0.0) {
            v = std::max(0.0, 1.0 - margin);
        } else if (alpha(i) >= c) {
            v = std::max(0.0, margin - 1.0);
        } else {
            v = std::abs(margin - 1.0);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

OvoSvmModel fit_ovo_svm(const Eigen::MatrixXd& x, std::span<const int> labels, int n_classes, const SvmSpec& spec,
                        unsigned jobs) {
    validate(spec);
    if (n_classes < 2) {
        throw DataError("one-vs-one SVM needs at least two classes");
    }
    OvoSvmModel model;
    model.n_classes = n_classes;
    for (int a = 0; a < n_classes; ++a) {
        for (int b = a + 1; b < n_classes; ++b) {
            model.machines.push_back({a, b, {}});
        }
    }
    parallel_for(model.machines.size(), jobs, [&](std::size_t m) {
        auto& machine = model.machines[m];
        std::vector<Eigen::Index> rows;
        std::vector<int> y;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == machine.positive_class || labels[i] == machine.negative_class) {
                rows.push_back(static_cast<Eigen::Index>(i));
                y.push_back(labels[i] == machine.positive_class ? 1 : -1);
            }
        }
        try {
            machine.svm = fit_binary_svm(x(rows, Eigen::all), y, spec);
        } catch (const NumericalError& e) {
            throw NumericalError("machine (" + std::to_string(machine.positive_class) + "," +
                                 std::to_string(machine.negative_class) + "): " + e.what());
        }
    });
    return model;
}

OvoSvmModel fit_ovo_svm(const LabeledDataset& data, const SvmSpec& spec, unsigned jobs) {
    return fit_ovo_svm(data.features(), data.labels(), data.n_classes(), spec, jobs);
}

Eigen::VectorXd aggregate_ovo(const Eigen::VectorXd& votes, const Eigen::VectorXd& decision_sums) {
    const double k = static_cast<double>(votes.size());
    Eigen::VectorXd scores(votes.size());
    for (Eigen::Index c = 0; c < votes.size(); ++c) {
        const double squashed = 1.0 / (1.0 + std::exp(-decision_sums(c)));
        scores(c) = votes(c) + squashed / (k + 1.0);
    }
    return scores;
}

Eigen::MatrixXd ovo_scores(const OvoSvmModel& model, const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd votes = Eigen::MatrixXd::Zero(n, model.n_classes);
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n, model.n_classes);
    for (const auto& machine : model.machines) {
        const Eigen::VectorXd f = decision_values(machine.svm, x);
        for (Eigen::Index i = 0; i < n; ++i) {
            votes(i, f(i) > 0.0 ? machine.positive_class : machine.negative_class) += 1.0;
            sums(i, machine.positive_class) += f(i);
            sums(i, machine.negative_class) -= f(i);
        }
    }
    Eigen::MatrixXd scores(n, model.n_classes);
    for (Eigen::Index i = 0; i < n; ++i) {
        scores.row(i) = aggregate_ovo(votes.row(i).transpose(), sums.row(i).transpose()).transpose();
    }
    return scores;
}

Eigen::VectorXd ovo_scores(const OvoSvmModel& model, const Eigen::VectorXd& x) {
    return ovo_scores(model, Eigen::MatrixXd(x.transpose())).row(0).transpose();
}

}  // namespace dfbench
