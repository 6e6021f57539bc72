#include "dfbench/cli/commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "dfbench/classifiers/model_io.hpp"
#include "dfbench/cli/svg_plot.hpp"
#include "dfbench/core/dataset.hpp"
#include "dfbench/core/feature_matrix.hpp"
#include "dfbench/core/manifest.hpp"
#include "dfbench/core/network_registry.hpp"
#include "dfbench/core/parallel.hpp"
#include "dfbench/error.hpp"
#include "dfbench/evaluation/anova.hpp"
#include "dfbench/evaluation/cross_validation.hpp"
#include "dfbench/evaluation/report.hpp"
#include "dfbench/separability/silhouette.hpp"
#include "dfbench/separability/tsne.hpp"

namespace dfbench::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Timestamped run.log; warnings are echoed to the error stream.
class RunLog {
public:
    RunLog(const std::filesystem::path& dir, std::ostream& err) : err_(err) {
        std::filesystem::create_directories(dir);
        file_.open(dir / "run.log", std::ios::trunc);
        if (!file_) throw DataError("cannot write " + (dir / "run.log").string());
    }
    void info(const std::string& message) { line("INFO", message); }
    void warn(const std::string& message) {
        line("WARN", message);
        err_ << "warning: " << message << '\n';
    }

private:
    void line(const char* level, const std::string& message) {
        const std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        file_ << '[' << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << "] " << level << ' ' << message << '\n';
        file_.flush();
    }
    std::ofstream file_;
    std::ostream& err_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

template <typename Fn>
void write_with(const std::filesystem::path& path, Fn&& fn) {
    std::ostringstream s;
    fn(s);
    write_text(path, s.str());
}

const DatasetManifest load_required_manifest(const RunConfig& config) {
    if (!config.manifest) throw UsageError("a manifest is required (--manifest or \"manifest\" in the run config)");
    return load_manifest(*config.manifest);
}

std::vector<std::string> class_filter(const RunConfig& config) {
    if (!config.classes) return {};
    if (config.classes->empty()) throw UsageError("class filter is empty");
    return *config.classes;
}

const NamedFeatureFile& single_feature_file(const RunConfig& config) {
    if (config.features.size() != 1) {
        throw UsageError("this command takes exactly one feature file, got " + std::to_string(config.features.size()));
    }
    return config.features.front();
}

LabeledDataset load_dataset(const NamedFeatureFile& file, const DatasetManifest& manifest,
                            const std::vector<std::string>& classes) {
    const FeatureMatrix features = load_feature_matrix(file.path);
    return join_manifest(features, manifest, classes);
}

std::string real(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

std::string classifier_list(const RunConfig& config) {
    std::string out;
    for (const auto& c : config.classifiers) out += (out.empty() ? "" : ",") + classifier_name(c);
    return out;
}

}  // namespace

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.features.empty()) throw UsageError("bench needs at least one feature file");
    if (config.classifiers.empty()) throw UsageError("bench needs at least one classifier");
    const auto classes = class_filter(config);
    const DatasetManifest manifest = load_required_manifest(config);
    RunLog log(config.out_dir, err);
    log.info("bench: " + std::to_string(config.features.size()) + " feature files x " +
             std::to_string(config.classifiers.size()) + " classifiers (" + classifier_list(config) + "), " +
             std::to_string(config.folds) + "-fold CV, seed " + std::to_string(config.seed));

    struct NetworkData {
        std::optional<LabeledDataset> data;
        std::optional<FoldPlan> plan;
        std::string error;
        ExitCode code = ExitCode::ok;
    };
    std::vector<NetworkData> networks(config.features.size());
    for (std::size_t n = 0; n < config.features.size(); ++n) {
        const auto& file = config.features[n];
        const auto t0 = Clock::now();
        try {
            networks[n].data = load_dataset(file, manifest, classes);
            networks[n].plan = stratified_folds(networks[n].data->labels(), config.folds, config.seed);
            log.info("loaded " + file.network + " from " + file.path.string() + " (" +
                     std::to_string(networks[n].data->n_samples()) + "x" +
                     std::to_string(networks[n].data->n_features()) + ") in " + real(seconds_since(t0)) + " s");
        } catch (const Error& e) {
            networks[n].error = e.what();
            networks[n].code = e.code();
            log.warn("skipping " + file.network + ": " + e.what());
        }
    }

    struct Cell {
        std::optional<EvaluationReport> report;
        std::string error;
        ExitCode code = ExitCode::ok;
    };
    const std::size_t n_cls = config.classifiers.size();
    std::vector<Cell> cells(config.features.size() * n_cls);
    parallel_for(cells.size(), config.jobs, [&](std::size_t c) {
        const auto& net = networks[c / n_cls];
        auto& cell = cells[c];
        if (!net.data) {
            cell.error = net.error;
            cell.code = net.code;
            return;
        }
        try {
            cell.report = run_cv(*net.data, config.classifiers[c % n_cls], *net.plan, 1);
        } catch (const Error& e) {
            cell.error = e.what();
            cell.code = e.code();
        }
    });

    std::size_t ok_cells = 0;
    ExitCode first_failure = ExitCode::ok;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& cell = cells[c];
        const std::string label = config.features[c / n_cls].network + " / " + classifier_name(config.classifiers[c % n_cls]);
        if (cell.report) {
            ++ok_cells;
            log.info(label + ": accuracy " + format_fixed(cell.report->accuracy * 100.0, 2) + "% +/- " +
                     format_fixed(cell.report->ci_halfwidth * 100.0, 2) + ", train " +
                     format_fixed(cell.report->train_seconds, 3) + " s, predict " +
                     format_fixed(cell.report->predict_seconds, 3) + " s");
        } else {
            if (first_failure == ExitCode::ok) first_failure = cell.code;
            if (!networks[c / n_cls].error.empty()) continue;  // already warned at load time
            log.warn(label + " failed: " + cell.error);
        }
    }

    write_with(config.out_dir / "report.csv", [&](std::ostream& s) {
        s << "network,classifier,accuracy_pct,ci95_pct,status\n";
        for (std::size_t c = 0; c < cells.size(); ++c) {
            s << config.features[c / n_cls].network << ',' << classifier_name(config.classifiers[c % n_cls]) << ',';
            if (cells[c].report) {
                s << format_fixed(cells[c].report->accuracy * 100.0, 2) << ','
                  << format_fixed(cells[c].report->ci_halfwidth * 100.0, 2) << ",ok\n";
            } else {
                s << "NA,NA," << (networks[c / n_cls].data ? "failed" : "skipped") << '\n';
            }
        }
    });
    write_with(config.out_dir / "folds.csv", [&](std::ostream& s) {
        s << "network,classifier,fold,n_test,accuracy\n";
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!cells[c].report) continue;
            const auto& r = *cells[c].report;
            for (std::size_t f = 0; f < r.fold_accuracies.size(); ++f) {
                s << config.features[c / n_cls].network << ',' << classifier_name(config.classifiers[c % n_cls]) << ','
                  << f + 1 << ',' << r.fold_sizes[f] << ',' << format_fixed(r.fold_accuracies[f], 6) << '\n';
            }
        }
    });

    out << std::left << std::setw(22) << "network" << std::setw(16) << "classifier" << "accuracy (95% CI)\n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
        out << std::left << std::setw(22) << config.features[c / n_cls].network << std::setw(16)
            << classifier_name(config.classifiers[c % n_cls]);
        if (cells[c].report) {
            out << format_fixed(cells[c].report->accuracy * 100.0, 1) << " +/- "
                << format_fixed(cells[c].report->ci_halfwidth * 100.0, 1) << "%\n";
        } else {
            out << (networks[c / n_cls].data ? "failed" : "skipped") << '\n';
        }
    }
    out << std::right;

    if (ok_cells == 0) {
        log.warn("every cell failed");
        return static_cast<int>(first_failure == ExitCode::ok ? ExitCode::data_validation : first_failure);
    }
    std::filesystem::remove(config.out_dir / "anova.csv");
    if (ok_cells != cells.size()) {
        log.warn("ANOVA skipped: grid is incomplete");
    } else if (config.features.size() < 2 || n_cls < 2) {
        log.warn("ANOVA skipped: needs at least 2 feature files and 2 classifiers");
    } else {
        AccuracyTable table(config.features.size(), std::vector<std::vector<double>>(n_cls));
        for (std::size_t c = 0; c < cells.size(); ++c) table[c / n_cls][c % n_cls] = cells[c].report->fold_accuracies;
        const AnovaResult anova = two_factor_anova(table);
        std::vector<std::string> levels;
        for (const auto& spec : config.classifiers) levels.push_back(classifier_name(spec));
        write_with(config.out_dir / "anova.csv",
                   [&](std::ostream& s) { write_anova_csv(anova, "network", "classifier", levels, s); });
        out << "ANOVA: network F=" << real(anova.factor_a.f) << " p=" << real(anova.factor_a.p)
            << "; classifier F=" << real(anova.factor_b.f) << " p=" << real(anova.factor_b.p) << '\n';
        for (const auto& t : anova.factor_b_pairs) {
            out << "  " << levels[t.level_a] << " vs " << levels[t.level_b] << ": Bonferroni p=" << real(t.p_adjusted)
                << '\n';
        }
        log.info("ANOVA written to anova.csv");
    }
    return 0;
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto& file = single_feature_file(config);
    if (config.classifiers.size() != 1) {
        throw UsageError("eval takes exactly one classifier, got " + std::to_string(config.classifiers.size()));
    }
    const auto classes = class_filter(config);
    const DatasetManifest manifest = load_required_manifest(config);
    RunLog log(config.out_dir, err);
    const auto t0 = Clock::now();
    const LabeledDataset data = load_dataset(file, manifest, classes);
    log.info("loaded " + file.network + " (" + std::to_string(data.n_samples()) + "x" +
             std::to_string(data.n_features()) + ", " + std::to_string(data.n_classes()) + " classes) in " +
             real(seconds_since(t0)) + " s");
    const auto& spec = config.classifiers.front();
    const FoldPlan plan = stratified_folds(data.labels(), config.folds, config.seed);
    const EvaluationReport report = run_cv(data, spec, plan, config.jobs);

    write_with(config.out_dir / "report.csv", [&](std::ostream& s) { write_metrics_csv(report, s); });
    write_with(config.out_dir / "confusion.csv", [&](std::ostream& s) { write_confusion_csv(report, s); });
    write_with(config.out_dir / "folds.csv", [&](std::ostream& s) { write_folds_csv(report, s); });

    const auto t1 = Clock::now();
    const TrainedClassifier model = train_classifier(spec, data, config.jobs);
    save_model(model, config.out_dir / "model.bin");
    log.info("final " + classifier_name(spec) + " model trained on all samples in " + real(seconds_since(t1)) +
             " s, saved to model.bin");

    const std::string summary = format_report_text(report, true);
    std::istringstream lines(summary);
    for (std::string line; std::getline(lines, line);) log.info(line);
    out << file.network << " / " << classifier_name(spec) << '\n' << summary;
    return 0;
}

int cmd_embed(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto& file = single_feature_file(config);
    const auto classes = class_filter(config);
    const DatasetManifest manifest = load_required_manifest(config);
    RunLog log(config.out_dir, err);
    const LabeledDataset data = load_dataset(file, manifest, classes);
    const auto t0 = Clock::now();
    const Embedding emb = tsne(data.features(), config.tsne, data.sample_ids());
    log.info("t-SNE (" + std::to_string(config.tsne.output_dims) + "-D, perplexity " + real(config.tsne.perplexity) +
             ", " + std::to_string(config.tsne.iterations) + " iterations) in " + real(seconds_since(t0)) +
             " s; KL " + real(emb.initial_kl_divergence) + " -> " + real(emb.kl_divergence));

    write_with(config.out_dir / "embedding.csv", [&](std::ostream& s) {
        s << "sample_id,class_name,x,y";
        if (config.tsne.output_dims == 3) s << ",z";
        s << '\n';
        for (Eigen::Index i = 0; i < emb.coordinates.rows(); ++i) {
            const auto row = static_cast<std::size_t>(i);
            s << data.sample_ids()[row] << ',' << data.class_names()[static_cast<std::size_t>(data.labels()[row])];
            for (Eigen::Index d = 0; d < emb.coordinates.cols(); ++d) s << ',' << real(emb.coordinates(i, d));
            s << '\n';
        }
    });
    write_text(config.out_dir / "plot.svg",
               render_scatter_svg(emb.coordinates, data.labels(), data.class_names(),
                                  "t-SNE of " + file.network + " features"));
    out << "embedded " << data.n_samples() << " samples into " << config.tsne.output_dims
        << "-D; KL divergence " << real(emb.kl_divergence) << '\n';
    return 0;
}

int cmd_silhouette(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto& file = single_feature_file(config);
    const auto classes = class_filter(config);
    const DatasetManifest manifest = load_required_manifest(config);
    RunLog log(config.out_dir, err);
    const LabeledDataset data = load_dataset(file, manifest, classes);
    const SilhouetteReport sil = silhouette(data.features(), data.labels(), data.n_classes());
    log.info("silhouette over " + std::to_string(data.n_samples()) + " samples, mean " + real(sil.mean));

    write_with(config.out_dir / "silhouette.csv", [&](std::ostream& s) {
        s << "class,silhouette\n";
        for (std::size_t k = 0; k < sil.class_means.size(); ++k) {
            s << data.class_names()[k] << ',' << format_fixed(sil.class_means[k], 4) << '\n';
        }
    });
    write_with(config.out_dir / "silhouette_samples.csv", [&](std::ostream& s) {
        s << "sample_id,class_name,a,b,s\n";
        for (std::size_t i = 0; i < data.n_samples(); ++i) {
            s << data.sample_ids()[i] << ',' << data.class_names()[static_cast<std::size_t>(data.labels()[i])] << ','
              << real(sil.intra[i]) << ',' << real(sil.nearest[i]) << ',' << real(sil.values[i]) << '\n';
        }
    });
    out << "Class silhouette values\n";
    for (std::size_t k = 0; k < sil.class_means.size(); ++k) {
        out << std::left << std::setw(24) << data.class_names()[k] << std::right << format_fixed(sil.class_means[k], 4)
            << '\n';
    }
    return 0;
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const DatasetManifest manifest = load_required_manifest(config);
    bool clean = true;
    const ManifestValidation base = validate_manifest(manifest);
    out << format_class_table(base);
    const std::string base_findings = format_findings(base);
    if (!base_findings.empty()) {
        clean = false;
        err << base_findings;
    }
    for (const auto& file : config.features) {
        FeatureMatrix features = [&] {
            try {
                return load_feature_matrix(file.path);
            } catch (const Error& e) {
                throw DataError(file.network + ": " + e.what());
            }
        }();
        const ManifestValidation report = validate_manifest(manifest, features);
        std::string findings;
        for (const auto& id : report.missing_from_features) {
            findings += "sample '" + id + "' listed in manifest but absent from " + file.network + '\n';
        }
        for (const auto& id : report.missing_from_manifest) {
            findings += "sample '" + id + "' present in " + file.network + " but absent from manifest\n";
        }
        out << file.network << ": " << features.n_samples() << " x " << features.n_features()
            << (findings.empty() ? " ok" : " MISMATCH") << '\n';
        try {
            const auto& net = find_network(file.network);
            if (static_cast<int>(features.n_features()) != net.feature_dim) {
                err << "note: " << file.network << " features have " << features.n_features() << " columns, the "
                    << net.fc_layer_name << " layer has " << net.feature_dim << '\n';
            }
        } catch (const UsageError&) {
            // Not a registry network; no dimension expectation.
        }
        if (!findings.empty()) {
            clean = false;
            err << findings;
        }
    }
    return clean ? 0 : static_cast<int>(ExitCode::data_validation);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"dfbench: deep-feature classification benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    std::string manifest_path;
    std::vector<std::string> feature_args;
    std::vector<std::string> classifier_args;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> folds;
    std::optional<std::string> classes;
    std::optional<std::string> out_dir;
    std::optional<unsigned> jobs;
    std::optional<int> dims;
    std::optional<double> perplexity;
    std::optional<int> iterations;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run config");
        sub->add_option("--manifest", manifest_path, "dataset manifest");
        sub->add_option("--features", feature_args, "feature file as NAME=PATH (or PATH); repeatable");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--classes", classes, "comma-separated class filter");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    };
    auto* bench = app.add_subcommand("bench", "benchmark grid of feature files x classifiers");
    auto* eval = app.add_subcommand("eval", "cross-validated evaluation of one pipeline");
    auto* embed = app.add_subcommand("embed", "t-SNE embedding with CSV and SVG output");
    auto* sil = app.add_subcommand("silhouette", "per-class silhouette values");
    auto* check = app.add_subcommand("check", "validate a manifest against feature files");
    for (auto* sub : {bench, eval, embed, sil, check}) add_common(sub);
    for (auto* sub : {bench, eval}) {
        sub->add_option("--folds", folds, "number of CV folds");
        sub->add_option("--classifier", classifier_args, "lda | ensemble | svm_quadratic | svm_gaussian; repeatable");
    }
    embed->add_option("--dims", dims, "embedding dimension (2 or 3)");
    embed->add_option("--perplexity", perplexity, "t-SNE perplexity");
    embed->add_option("--iterations", iterations, "t-SNE iterations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return static_cast<int>(ExitCode::usage);
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (!manifest_path.empty()) config.manifest = manifest_path;
        if (!feature_args.empty()) {
            config.features.clear();
            for (const auto& arg : feature_args) {
                const auto eq = arg.find('=');
                if (eq == std::string::npos) {
                    config.features.push_back({std::filesystem::path(arg).stem().string(), arg});
                } else {
                    config.features.push_back({arg.substr(0, eq), arg.substr(eq + 1)});
                }
            }
        }
        const bool fresh_classifiers = !classifier_args.empty() || config.classifiers.empty();
        if (!classifier_args.empty()) {
            config.classifiers.clear();
            for (const auto& name : classifier_args) config.classifiers.push_back(parse_classifier(name));
        }
        // A bare eval defaults to the ensemble; a bare bench to the full grid.
        if (config.classifiers.empty()) {
            if (bench->parsed()) config.classifiers = default_classifiers();
            if (eval->parsed()) config.classifiers = {SubspaceEnsembleSpec{}};
        }
        if (folds) config.folds = *folds;
        if (classes) config.classes = split_list(*classes);
        if (out_dir) config.out_dir = *out_dir;
        if (jobs) config.jobs = *jobs;
        if (dims) config.tsne.output_dims = *dims;
        if (perplexity) config.tsne.perplexity = *perplexity;
        if (iterations) config.tsne.iterations = *iterations;
        // --seed overrides everything; classifiers named on the command line
        // or defaulted take the run seed. Config-file seeds are already applied.
        if (seed) {
            apply_seed(config, *seed);
        } else if (fresh_classifiers) {
            apply_seed(config, config.seed);
        }

        if (bench->parsed()) return cmd_bench(config, out, err);
        if (eval->parsed()) return cmd_eval(config, out, err);
        if (embed->parsed()) return cmd_embed(config, out, err);
        if (sil->parsed()) return cmd_silhouette(config, out, err);
        return cmd_check(config, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::data_validation);
    }
}

}  // namespace dfbench::cli
