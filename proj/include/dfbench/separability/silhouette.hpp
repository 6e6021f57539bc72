#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dfbench {

/// Per-sample silhouette values s(i) = (b - a) / max(a, b), where a(i) is
/// the mean distance to the rest of i's class and b(i) the smallest mean
/// distance to another class. Members of singleton classes get s = 0 (and
/// a = 0), as does any sample with a = b = 0.
struct SilhouetteReport {
    std::vector<double> values;
    std::vector<double> intra;    // a(i)
    std::vector<double> nearest;  // b(i)
    std::vector<double> class_means;
    double mean = 0.0;
};

/// Pairwise Euclidean distances between rows.
Eigen::MatrixXd euclidean_distances(const Eigen::MatrixXd& x);

/// Euclidean silhouette of feature rows. Requires at least two classes.
SilhouetteReport silhouette(const Eigen::MatrixXd& features, std::span<const int> labels, int n_classes);

/// Silhouette from a precomputed symmetric distance matrix.
SilhouetteReport silhouette_from_distances(const Eigen::MatrixXd& distances, std::span<const int> labels,
                                           int n_classes);

}  // namespace dfbench
