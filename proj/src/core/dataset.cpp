#include "dfbench/core/dataset.hpp"

#include <algorithm>
#include <unordered_map>

#include "dfbench/error.hpp"

namespace dfbench {

LabeledDataset::LabeledDataset(Eigen::MatrixXd features, std::vector<int> labels,
                               std::vector<std::string> class_names, std::vector<std::string> sample_ids)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)),
      sample_ids_(std::move(sample_ids)) {
    if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
        throw DataError("dataset has " + std::to_string(features_.rows()) + " feature rows but " +
                        std::to_string(labels_.size()) + " labels");
    }
    if (class_names_.empty()) {
        throw DataError("dataset has an empty class vocabulary");
    }
    if (sample_ids_.empty()) {
        sample_ids_.reserve(labels_.size());
        for (std::size_t i = 0; i < labels_.size(); ++i) sample_ids_.push_back("s" + std::to_string(i));
    } else if (sample_ids_.size() != labels_.size()) {
        throw DataError("dataset sample id count does not match row count");
    }
    if (!features_.allFinite()) {
        throw DataError("dataset contains non-finite feature values");
    }
    const int k = n_classes();
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] < 0 || labels_[i] >= k) {
            throw DataError("label " + std::to_string(labels_[i]) + " at row " + std::to_string(i + 1) +
                            " outside [0, " + std::to_string(k) + ")");
        }
        ++counts[static_cast<std::size_t>(labels_[i])];
    }
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            throw DataError("class '" + class_names_[static_cast<std::size_t>(c)] + "' has no samples");
        }
    }
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
    std::vector<std::size_t> counts(class_names_.size(), 0);
    for (const int y : labels_) ++counts[static_cast<std::size_t>(y)];
    return counts;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), features_.cols());
    std::vector<int> y;
    std::vector<std::string> ids;
    y.reserve(rows.size());
    ids.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        x.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(rows[r]));
        y.push_back(labels_[rows[r]]);
        ids.push_back(sample_ids_[rows[r]]);
    }
    return LabeledDataset(std::move(x), std::move(y), class_names_, std::move(ids));
}

LabeledDataset join_manifest(const FeatureMatrix& features, const DatasetManifest& manifest,
                             std::span<const std::string> class_filter) {
    const auto vocabulary = manifest.class_names();
    for (const auto& name : class_filter) {
        if (std::find(vocabulary.begin(), vocabulary.end(), name) == vocabulary.end()) {
            throw UsageError("class '" + name + "' is not present in the manifest");
        }
    }
    std::vector<std::string> classes;
    for (const auto& name : vocabulary) {
        if (class_filter.empty() ||
            std::find(class_filter.begin(), class_filter.end(), name) != class_filter.end()) {
            classes.push_back(name);
        }
    }
    std::unordered_map<std::string, int> class_index;
    for (std::size_t k = 0; k < classes.size(); ++k) class_index.emplace(classes[k], static_cast<int>(k));

    std::unordered_map<std::string, const ManifestEntry*> by_id;
    for (const auto& e : manifest.entries) {
        const auto [it, inserted] = by_id.emplace(e.sample_id, &e);
        if (!inserted) {
            throw DataError("duplicate sample_id '" + e.sample_id + "' at manifest lines " +
                            std::to_string(it->second->line) + " and " + std::to_string(e.line));
        }
    }

    std::vector<std::size_t> rows;
    std::vector<int> labels;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < features.n_samples(); ++i) {
        const auto& id = features.sample_ids()[i];
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw DataError("sample '" + id + "' (feature row " + std::to_string(i + 1) +
                            ") is absent from the manifest");
        }
        const auto cls = class_index.find(it->second->class_name);
        if (cls == class_index.end()) continue;
        rows.push_back(i);
        labels.push_back(cls->second);
        ids.push_back(id);
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(features.n_features()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto src = features.row(rows[r]);
        for (std::size_t c = 0; c < src.size(); ++c) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = src[c];
        }
    }
    return LabeledDataset(std::move(x), std::move(labels), std::move(classes), std::move(ids));
}

}  // namespace dfbench
