#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfbench/core/dataset.hpp"
#include "dfbench/core/rng.hpp"

namespace dfbench::test {

// Isotropic Gaussian blobs; class k is centred on separation * e_(k mod D)
// (shifted to the negative axis for k >= D) with unit variance.
inline LabeledDataset gaussian_blobs(std::size_t per_class, int n_classes, Eigen::Index dims, double separation,
                                     std::uint64_t seed) {
    SeededRng rng(seed);
    const auto n = per_class * static_cast<std::size_t>(n_classes);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), dims);
    std::vector<int> labels(n);
    std::vector<std::string> names;
    for (int k = 0; k < n_classes; ++k) names.push_back("class" + std::to_string(k));
    for (std::size_t i = 0; i < n; ++i) {
        const int k = static_cast<int>(i % static_cast<std::size_t>(n_classes));
        labels[i] = k;
        for (Eigen::Index d = 0; d < dims; ++d) x(static_cast<Eigen::Index>(i), d) = rng.normal();
        const Eigen::Index axis = k % dims;
        x(static_cast<Eigen::Index>(i), axis) += (k / dims) % 2 == 0 ? separation : -separation;
    }
    return LabeledDataset(std::move(x), std::move(labels), std::move(names));
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    SeededRng rng(seed);
    Eigen::MatrixXd x(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = rng.normal();
    return x;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("dfbench-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace dfbench::test

#include "dfbench/classifiers/svm.hpp"

namespace dfbench::test {

struct ThreePointProblem {
    SvmSpec spec;
    Eigen::MatrixXd x;  // 3 x 2
    std::vector<int> y;
};

// Random 3-point binary problems over both kernels, several box constraints
// and every mixed label pattern.
inline std::vector<ThreePointProblem> three_point_problems() {
    const std::vector<std::vector<int>> patterns{{1, 1, -1}, {1, -1, -1}, {-1, 1, 1}, {1, -1, 1}, {-1, -1, 1}};
    const std::vector<SvmSpec> specs{
        {KernelType::gaussian, 1.0, 1.0},  {KernelType::gaussian, 2.0, 0.5}, {KernelType::gaussian, 0.7, 2.0},
        {KernelType::quadratic, 1.0, 1.0}, {KernelType::quadratic, 2.0, 0.3}};
    std::vector<ThreePointProblem> out;
    std::uint64_t seed = 900;
    for (const auto& spec : specs) {
        for (const auto& y : patterns) {
            out.push_back({spec, random_matrix(3, 2, seed++) * 1.5, y});
        }
    }
    return out;
}

}  // namespace dfbench::test
