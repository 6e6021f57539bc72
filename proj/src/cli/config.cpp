#include "dfbench/cli/config.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "dfbench/error.hpp"

namespace dfbench::cli {

using Json = nlohmann::ordered_json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    const std::filesystem::path p(value);
    return p.is_absolute() || base.empty() ? p : base / p;
}

template <typename T>
T get_or(const Json& obj, const char* key, T fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const Json::exception& e) {
        throw UsageError(std::string("config key '") + key + "': " + e.what());
    }
}

ClassifierSpec classifier_from_json(const Json& j) {
    if (j.is_string()) return parse_classifier(j.get<std::string>());
    if (!j.is_object()) throw UsageError("classifier entries must be strings or objects");
    const auto type = get_or<std::string>(j, "type", "");
    if (type == "lda") {
        return LdaSpec{get_or<double>(j, "gamma", 0.0)};
    }
    if (type == "ensemble") {
        SubspaceEnsembleSpec s;
        s.n_learners = get_or<std::size_t>(j, "learners", s.n_learners);
        s.subspace_dim = get_or<std::size_t>(j, "subspace_dim", s.subspace_dim);
        s.gamma = get_or<double>(j, "gamma", s.gamma);
        s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
        return s;
    }
    if (type == "svm") {
        const auto kernel = get_or<std::string>(j, "kernel", "gaussian");
        SvmSpec s;
        if (kernel == "quadratic") {
            s = SvmSpec::quadratic();
        } else if (kernel == "gaussian") {
            s = SvmSpec::medium_gaussian();
        } else {
            throw UsageError("unknown SVM kernel '" + kernel + "'");
        }
        s.kernel_scale = get_or<double>(j, "kernel_scale", s.kernel_scale);
        s.box_constraint = get_or<double>(j, "box_constraint", s.box_constraint);
        s.tolerance = get_or<double>(j, "tolerance", s.tolerance);
        s.max_iterations = get_or<std::size_t>(j, "max_iterations", s.max_iterations);
        validate(s);
        return s;
    }
    throw UsageError("unknown classifier type '" + type + "'");
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = item.find_last_not_of(" \t");
        out.push_back(item.substr(first, last - first + 1));
    }
    return out;
}

ClassifierSpec parse_classifier(const std::string& name) {
    if (name == "lda") return LdaSpec{};
    if (name == "ensemble") return SubspaceEnsembleSpec{};
    if (name == "svm_quadratic") return SvmSpec::quadratic();
    if (name == "svm_gaussian") return SvmSpec::medium_gaussian();
    throw UsageError("unknown classifier '" + name + "' (expected lda, ensemble, svm_quadratic or svm_gaussian)");
}

std::vector<ClassifierSpec> default_classifiers() {
    return {SvmSpec::quadratic(), SvmSpec::medium_gaussian(), SubspaceEnsembleSpec{}};
}

void apply_seed(RunConfig& config, std::uint64_t seed) {
    config.seed = seed;
    config.tsne.seed = seed;
    for (auto& spec : config.classifiers) {
        if (auto* ens = std::get_if<SubspaceEnsembleSpec>(&spec)) ens->seed = seed;
    }
}

namespace {

RunConfig parse_checked(const std::string& json_text, const std::filesystem::path& base_dir) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw UsageError(std::string("run config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("run config must be a JSON object");

    RunConfig config;
    if (j.contains("manifest")) config.manifest = resolve(base_dir, j["manifest"].get<std::string>());
    if (j.contains("features")) {
        const auto& f = j["features"];
        if (!f.is_object()) throw UsageError("'features' must map network names to files");
        for (const auto& [name, path] : f.items()) {
            config.features.push_back({name, resolve(base_dir, path.get<std::string>())});
        }
    }
    if (j.contains("classifiers")) {
        for (const auto& c : j["classifiers"]) config.classifiers.push_back(classifier_from_json(c));
    }
    if (j.contains("classes")) config.classes = j["classes"].get<std::vector<std::string>>();
    config.folds = get_or<std::size_t>(j, "folds", config.folds);
    config.jobs = get_or<unsigned>(j, "jobs", config.jobs);
    if (j.contains("out")) config.out_dir = resolve(base_dir, j["out"].get<std::string>());
    if (j.contains("tsne")) {
        const auto& t = j["tsne"];
        config.tsne.output_dims = get_or<int>(t, "dims", config.tsne.output_dims);
        config.tsne.perplexity = get_or<double>(t, "perplexity", config.tsne.perplexity);
        config.tsne.iterations = get_or<int>(t, "iterations", config.tsne.iterations);
        config.tsne.learning_rate = get_or<double>(t, "learning_rate", config.tsne.learning_rate);
        config.tsne.early_exaggeration = get_or<double>(t, "early_exaggeration", config.tsne.early_exaggeration);
    }
    apply_seed(config, get_or<std::uint64_t>(j, "seed", 0));
    // An explicit per-classifier seed wins over the run seed.
    if (j.contains("classifiers")) {
        std::size_t i = 0;
        for (const auto& c : j["classifiers"]) {
            if (c.is_object() && c.contains("seed")) {
                if (auto* ens = std::get_if<SubspaceEnsembleSpec>(&config.classifiers[i])) {
                    ens->seed = c["seed"].get<std::uint64_t>();
                }
            }
            ++i;
        }
    }
    return config;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    try {
        return parse_checked(json_text, base_dir);
    } catch (const Json::exception& e) {
        throw UsageError(std::string("run config: ") + e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open run config " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_run_config(text, path.parent_path());
}

}  // namespace dfbench::cli
