#include "dfbench/separability/silhouette.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "dfbench/error.hpp"

namespace dfbench {

Eigen::MatrixXd euclidean_distances(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = (x.row(i) - x.row(j)).norm();
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

SilhouetteReport silhouette_from_distances(const Eigen::MatrixXd& distances, std::span<const int> labels,
                                           int n_classes) {
    const auto n = static_cast<std::size_t>(distances.rows());
    if (distances.rows() != distances.cols() || labels.size() != n) {
        throw DataError("silhouette: distance matrix and labels disagree in size");
    }
    if (n_classes < 2) {
        throw DataError("silhouette needs at least two classes");
    }
    std::vector<std::size_t> class_size(static_cast<std::size_t>(n_classes), 0);
    for (const int y : labels) {
        if (y < 0 || y >= n_classes) throw DataError("silhouette: label " + std::to_string(y) + " out of range");
        ++class_size[static_cast<std::size_t>(y)];
    }
    const auto populated = std::count_if(class_size.begin(), class_size.end(), [](std::size_t c) { return c > 0; });
    if (populated < 2) {
        throw DataError("silhouette needs samples from at least two classes");
    }

    SilhouetteReport report;
    report.values.assign(n, 0.0);
    report.intra.assign(n, 0.0);
    report.nearest.assign(n, 0.0);
    std::vector<double> sums(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                sums[static_cast<std::size_t>(labels[j])] +=
                    distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
        const auto own = static_cast<std::size_t>(labels[i]);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sums.size(); ++c) {
            if (c != own && class_size[c] > 0) b = std::min(b, sums[c] / static_cast<double>(class_size[c]));
        }
        report.nearest[i] = b;
        if (class_size[own] < 2) continue;
        const double a = sums[own] / static_cast<double>(class_size[own] - 1);
        report.intra[i] = a;
        const double denom = std::max(a, b);
        report.values[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }

    report.class_means.assign(static_cast<std::size_t>(n_classes), 0.0);
    for (std::size_t i = 0; i < n; ++i) report.class_means[static_cast<std::size_t>(labels[i])] += report.values[i];
    for (std::size_t c = 0; c < class_size.size(); ++c) {
        if (class_size[c] > 0) report.class_means[c] /= static_cast<double>(class_size[c]);
    }
    double total = 0.0;
    for (const double s : report.values) total += s;
    report.mean = total / static_cast<double>(n);
    return report;
}

SilhouetteReport silhouette(const Eigen::MatrixXd& features, std::span<const int> labels, int n_classes) {
    return silhouette_from_distances(euclidean_distances(features), labels, n_classes);
}

}  // namespace dfbench
