#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dfbench/classifiers/classifier.hpp"
#include "dfbench/separability/tsne.hpp"

namespace dfbench::cli {

struct NamedFeatureFile {
    std::string network;
    std::filesystem::path path;
};

/// Everything a command needs. Loaded from a JSON run file, then overridden
/// by command-line flags.
///
///     {
///       "manifest": "manifest.csv",
///       "features": {"ResNet-50": "resnet50.dfb", "AlexNet": "alexnet.dfb"},
///       "classifiers": ["ensemble", "svm_quadratic",
///                       {"type": "svm", "kernel": "gaussian", "kernel_scale": 32}],
///       "classes": ["COVID-19", "Normal"],
///       "folds": 5, "seed": 7, "out": "results", "jobs": 4,
///       "tsne": {"dims": 2, "perplexity": 30, "iterations": 1000}
///     }
///
/// Relative paths resolve against the run file's directory. Feature files
/// and classifiers keep their listed order, which is the output order.
struct RunConfig {
    std::optional<std::filesystem::path> manifest;
    std::vector<NamedFeatureFile> features;
    std::vector<ClassifierSpec> classifiers;
    std::optional<std::vector<std::string>> classes;  // empty optional = all manifest classes
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "dfbench-out";
    unsigned jobs = 0;  // 0 = hardware concurrency
    TsneSpec tsne;
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir);

/// Parses a classifier shorthand: "lda", "ensemble", "svm_quadratic" or
/// "svm_gaussian".
ClassifierSpec parse_classifier(const std::string& name);

/// The three-classifier grid of the benchmark: quadratic SVM, medium
/// Gaussian SVM (scale 32) and the 30 x 500 subspace ensemble.
std::vector<ClassifierSpec> default_classifiers();

/// Propagates the run seed into seeded components (ensemble subsets, t-SNE).
void apply_seed(RunConfig& config, std::uint64_t seed);

/// Splits "a,b,c" on commas, trimming blanks and dropping empty items.
std::vector<std::string> split_list(const std::string& text);

}  // namespace dfbench::cli
