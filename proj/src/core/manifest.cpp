#include "dfbench/core/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dfbench/error.hpp"

namespace dfbench {

namespace {

std::vector<std::string> split(const std::string& line, char sep, std::size_t max_fields) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (out.size() + 1 < max_fields) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) break;
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    out.push_back(line.substr(start));
    return out;
}

std::size_t parse_count(const std::string& text, const std::string& where) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size() || text.front() == '-') {
        throw DataError(where + ": expected a non-negative count, got '" + text + "'");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<std::string> DatasetManifest::class_names() const {
    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    for (const auto& d : declarations) {
        if (seen.insert(d.class_name).second) names.push_back(d.class_name);
    }
    for (const auto& e : entries) {
        if (seen.insert(e.class_name).second) names.push_back(e.class_name);
    }
    return names;
}

DatasetManifest parse_manifest(std::istream& in, const std::string& source_name) {
    DatasetManifest manifest;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = source_name + ":" + std::to_string(line_no);
        if (line.front() == '#') {
            const auto fields = split(line.substr(1), ',', 4);
            if (fields[0] == "count") {
                if (fields.size() < 3) {
                    throw DataError(where + ": #count needs a class name and a total");
                }
                ClassDeclaration decl{fields[1], parse_count(fields[2], where), std::nullopt};
                if (fields.size() == 4) decl.augmented = parse_count(fields[3], where);
                for (const auto& other : manifest.declarations) {
                    if (other.class_name == decl.class_name) {
                        throw DataError(where + ": class '" + decl.class_name + "' declared twice");
                    }
                }
                manifest.declarations.push_back(std::move(decl));
            } else if (fields[0] == "note" && fields.size() >= 3) {
                const auto rest = split(line.substr(1), ',', 3);
                manifest.notes[rest[1]].push_back(rest[2]);
            }
            continue;
        }
        const auto fields = split(line, ',', 5);
        if (fields.size() != 4) {
            throw DataError(where + ": expected sample_id,source_file,class_name,augmented");
        }
        if (fields[0].empty() || fields[2].empty()) {
            throw DataError(where + ": empty sample_id or class_name");
        }
        if (fields[3] != "0" && fields[3] != "1") {
            throw DataError(where + ": augmented flag must be 0 or 1, got '" + fields[3] + "'");
        }
        manifest.entries.push_back({fields[0], fields[1], fields[2], fields[3] == "1", line_no});
    }
    return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open manifest " + path.string());
    }
    return parse_manifest(in, path.string());
}

void write_manifest(const DatasetManifest& manifest, std::ostream& out) {
    out << "#dfbench-manifest,1\n";
    for (const auto& d : manifest.declarations) {
        out << "#count," << d.class_name << ',' << d.count;
        if (d.augmented) out << ',' << *d.augmented;
        out << '\n';
    }
    for (const auto& [cls, lines] : manifest.notes) {
        for (const auto& note : lines) out << "#note," << cls << ',' << note << '\n';
    }
    for (const auto& e : manifest.entries) {
        out << e.sample_id << ',' << e.source_file << ',' << e.class_name << ',' << (e.augmented ? '1' : '0')
            << '\n';
    }
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DataError("cannot open " + path.string() + " for writing");
    }
    write_manifest(manifest, out);
}

ManifestValidation validate_manifest(const DatasetManifest& manifest) {
    ManifestValidation report;
    const auto names = manifest.class_names();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < names.size(); ++k) {
        index.emplace(names[k], k);
        report.class_counts.push_back({names[k], 0, 0});
    }
    std::unordered_map<std::string, std::size_t> first_line;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& e = manifest.entries[i];
        const std::size_t line = e.line != 0 ? e.line : i + 1;
        const auto [it, inserted] = first_line.emplace(e.sample_id, line);
        if (!inserted) {
            report.duplicate_ids.push_back({e.sample_id, it->second, line});
            continue;
        }
        auto& cc = report.class_counts[index.at(e.class_name)];
        ++cc.total;
        if (e.augmented) ++cc.augmented;
        ++report.total;
    }
    for (const auto& d : manifest.declarations) {
        const auto& cc = report.class_counts[index.at(d.class_name)];
        if (cc.total != d.count) {
            report.count_mismatches.push_back({d.class_name, d.count, cc.total});
        }
        if (d.augmented && cc.augmented != *d.augmented) {
            report.augmented_mismatches.push_back({d.class_name, *d.augmented, cc.augmented});
        }
    }
    return report;
}

ManifestValidation validate_manifest(const DatasetManifest& manifest, const FeatureMatrix& features) {
    ManifestValidation report = validate_manifest(manifest);
    const std::unordered_set<std::string> in_features(features.sample_ids().begin(), features.sample_ids().end());
    std::unordered_set<std::string> in_manifest;
    for (const auto& e : manifest.entries) {
        if (in_manifest.insert(e.sample_id).second && !in_features.contains(e.sample_id)) {
            report.missing_from_features.push_back(e.sample_id);
        }
    }
    for (const auto& id : features.sample_ids()) {
        if (!in_manifest.contains(id)) report.missing_from_manifest.push_back(id);
    }
    return report;
}

std::string format_class_table(const ManifestValidation& report) {
    std::ostringstream out;
    for (const auto& cc : report.class_counts) {
        out << cc.class_name << ": " << cc.total;
        if (cc.augmented > 0) {
            out << " (" << cc.total - cc.augmented << '+' << cc.augmented << " augmented)";
        }
        out << '\n';
    }
    out << "All " << report.class_counts.size() << "-class dataset: " << report.total << '\n';
    return out.str();
}

std::string format_findings(const ManifestValidation& report, const std::string& feature_name) {
    std::ostringstream out;
    const std::string suffix = feature_name.empty() ? std::string() : " (" + feature_name + ")";
    for (const auto& d : report.duplicate_ids) {
        out << "duplicate sample_id '" << d.sample_id << "' at lines " << d.first_line << " and " << d.second_line
            << '\n';
    }
    for (const auto& m : report.count_mismatches) {
        out << "class '" << m.class_name << "' declares " << m.declared << " samples, manifest lists " << m.actual
            << '\n';
    }
    for (const auto& m : report.augmented_mismatches) {
        out << "class '" << m.class_name << "' declares " << m.declared << " augmented samples, manifest flags "
            << m.actual << '\n';
    }
    for (const auto& id : report.missing_from_features) {
        out << "sample '" << id << "' listed in manifest but absent from features" << suffix << '\n';
    }
    for (const auto& id : report.missing_from_manifest) {
        out << "sample '" << id << "' present in features" << suffix << " but absent from manifest\n";
    }
    return out.str();
}

}  // namespace dfbench
