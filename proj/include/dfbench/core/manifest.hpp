#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dfbench/core/feature_matrix.hpp"

namespace dfbench {

struct ManifestEntry {
    std::string sample_id;
    std::string source_file;
    std::string class_name;
    bool augmented = false;
    std::size_t line = 0;  // 1-based line in the source file, 0 if built in memory
};

struct ClassDeclaration {
    std::string class_name;
    std::size_t count = 0;
    std::optional<std::size_t> augmented;
};

/// Sample-to-class assignment for a dataset.
///
/// Text form, one record per line:
///
///     sample_id,source_file,class_name,augmented(0|1)
///
/// Lines starting with '#' are header lines. Two of them carry data:
///
///     #count,<class_name>,<total>[,<augmented>]
///     #note,<class_name>,<free text>
///
/// Any other '#' line is a comment. Declared classes define the class
/// vocabulary order; undeclared classes follow in order of first appearance.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::vector<ClassDeclaration> declarations;
    std::map<std::string, std::vector<std::string>> notes;

    std::vector<std::string> class_names() const;
};

DatasetManifest parse_manifest(std::istream& in, const std::string& source_name = "<manifest>");
DatasetManifest load_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, std::ostream& out);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct ClassCount {
    std::string class_name;
    std::size_t total = 0;
    std::size_t augmented = 0;
};

struct CountMismatch {
    std::string class_name;
    std::size_t declared = 0;
    std::size_t actual = 0;
};

struct DuplicateId {
    std::string sample_id;
    std::size_t first_line = 0;
    std::size_t second_line = 0;
};

struct ManifestValidation {
    std::vector<ClassCount> class_counts;
    std::size_t total = 0;
    std::vector<DuplicateId> duplicate_ids;
    std::vector<CountMismatch> count_mismatches;
    std::vector<CountMismatch> augmented_mismatches;
    std::vector<std::string> missing_from_features;  // in the manifest, absent from the feature file
    std::vector<std::string> missing_from_manifest;  // in the feature file, absent from the manifest

    bool ok() const noexcept {
        return duplicate_ids.empty() && count_mismatches.empty() && augmented_mismatches.empty() &&
               missing_from_features.empty() && missing_from_manifest.empty();
    }
};

/// Header and uniqueness checks only.
ManifestValidation validate_manifest(const DatasetManifest& manifest);
/// Adds the cross-check of sample ids against a feature file.
ManifestValidation validate_manifest(const DatasetManifest& manifest, const FeatureMatrix& features);

/// Class-count table, one "name: count" line per class followed by the
/// "All N-class dataset: total" line.
std::string format_class_table(const ManifestValidation& report);

/// One line per finding; empty when the report is clean.
std::string format_findings(const ManifestValidation& report, const std::string& feature_name = {});

}  // namespace dfbench
