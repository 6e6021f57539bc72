#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfbench/core/feature_matrix.hpp"
#include "dfbench/core/manifest.hpp"

namespace dfbench {

/// Feature rows joined with class labels, held in double precision.
///
/// Every label lies in [0, K) and every class occurs at least once.
class LabeledDataset {
public:
    LabeledDataset(Eigen::MatrixXd features, std::vector<int> labels, std::vector<std::string> class_names,
                   std::vector<std::string> sample_ids = {});

    const Eigen::MatrixXd& features() const noexcept { return features_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }
    const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }

    std::size_t n_samples() const noexcept { return labels_.size(); }
    std::size_t n_features() const noexcept { return static_cast<std::size_t>(features_.cols()); }
    int n_classes() const noexcept { return static_cast<int>(class_names_.size()); }

    std::vector<std::size_t> class_counts() const;

    /// Rows in the given order; the class vocabulary is kept.
    LabeledDataset subset(std::span<const std::size_t> rows) const;

private:
    Eigen::MatrixXd features_;
    std::vector<int> labels_;
    std::vector<std::string> class_names_;
    std::vector<std::string> sample_ids_;
};

/// Joins feature rows to manifest classes by sample id.
///
/// With an empty filter every manifest class is used; otherwise only rows
/// of the listed classes are kept. Classes are ordered as in the manifest
/// vocabulary. Feature rows absent from the manifest are a DataError.
LabeledDataset join_manifest(const FeatureMatrix& features, const DatasetManifest& manifest,
                             std::span<const std::string> class_filter = {});

}  // namespace dfbench
