#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dfbench {

/// Dense N x D matrix of deep-feature activations with row-aligned sample ids.
///
/// Values are held at the 32-bit precision of the on-disk formats so that
/// load(write(m)) == m holds exactly; consumers widen to double through
/// to_eigen(). Construction enforces the invariants: both dimensions
/// positive, every value finite, ids unique, non-empty and free of
/// separators (',' or line breaks).
class FeatureMatrix {
public:
    FeatureMatrix(std::size_t n_samples, std::size_t n_features, std::vector<float> values,
                  std::vector<std::string> sample_ids);

    std::size_t n_samples() const noexcept { return n_samples_; }
    std::size_t n_features() const noexcept { return n_features_; }
    std::span<const float> values() const noexcept { return values_; }
    std::span<const float> row(std::size_t i) const {
        return std::span<const float>(values_).subspan(i * n_features_, n_features_);
    }
    float at(std::size_t row, std::size_t col) const { return values_[row * n_features_ + col]; }
    const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }

    Eigen::MatrixXd to_eigen() const;

    friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

private:
    std::size_t n_samples_;
    std::size_t n_features_;
    std::vector<float> values_;
    std::vector<std::string> sample_ids_;
};

/// Narrows a double matrix to feature-file precision.
FeatureMatrix make_feature_matrix(const Eigen::MatrixXd& values, std::vector<std::string> sample_ids);

enum class FeatureFileFormat { binary, csv };

/// Reads either form; the binary form is recognised by its "DFB1" magic.
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

/// Writes CSV when the extension is ".csv", the binary form otherwise.
void write_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path);
void write_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path,
                          FeatureFileFormat format);

}  // namespace dfbench
