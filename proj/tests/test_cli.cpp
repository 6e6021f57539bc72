#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dfbench/classifiers/model_io.hpp"
#include "dfbench/cli/commands.hpp"
#include "dfbench/cli/config.hpp"
#include "dfbench/core/feature_matrix.hpp"
#include "dfbench/core/manifest.hpp"
#include "dfbench/error.hpp"
#include "support.hpp"

using namespace dfbench;
using dfbench::test::TempDir;

namespace {

const std::vector<std::string> kClasses{"COVID-19", "Normal", "Pneumonia-bacterial", "Pneumonia-viral",
                                        "Tuberculosis"};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult dfbench_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dfbench");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

// Five blob classes of `per_class` samples in `dims` dimensions, written as a
// manifest plus one feature file per network name.
struct Study {
    TempDir dir{"cli"};
    std::filesystem::path manifest;
    std::vector<std::string> networks;

    Study(std::size_t per_class, Eigen::Index dims, std::vector<std::string> nets) : networks(std::move(nets)) {
        manifest = dir / "manifest.txt";
        DatasetManifest m;
        std::vector<std::string> ids;
        for (std::size_t c = 0; c < kClasses.size(); ++c) {
            m.declarations.push_back({kClasses[c], per_class, std::nullopt});
        }
        for (std::size_t i = 0; i < per_class * kClasses.size(); ++i) {
            const auto& cls = kClasses[i % kClasses.size()];
            ids.push_back("img" + std::to_string(i));
            m.entries.push_back({ids.back(), cls + "/" + ids.back() + ".png", cls, false, 0});
        }
        write_manifest(m, manifest);
        std::uint64_t seed = 1;
        for (const auto& net : networks) {
            const auto data = test::gaussian_blobs(per_class, 5, dims, 4.0, seed++);
            write_feature_matrix(make_feature_matrix(data.features(), ids), feature_path(net));
        }
    }

    std::filesystem::path feature_path(const std::string& net) const { return dir / (net + ".dfb"); }

    std::filesystem::path write_config(const std::string& name, const std::string& body) const {
        const auto p = dir / name;
        std::ofstream(p) << body;
        return p;
    }

    std::string features_json() const {
        std::string out = "{";
        for (std::size_t i = 0; i < networks.size(); ++i) {
            out += (i ? ", \"" : "\"") + networks[i] + "\": \"" + networks[i] + ".dfb\"";
        }
        return out + "}";
    }
};

const char* kSmallClassifiers =
    R"([{"type": "ensemble", "learners": 5, "subspace_dim": 4}, "lda", {"type": "svm", "kernel": "quadratic"}])";

}  // namespace

TEST_CASE("bench runs the grid, writes ANOVA and is byte-identical on rerun") {
    Study study(20, 8, {"ResNet-50", "AlexNet"});
    const auto config = study.write_config(
        "run.json", std::string(R"({"manifest": "manifest.txt", "features": )") + study.features_json() +
                        R"(, "classifiers": )" + kSmallClassifiers + R"(, "folds": 4, "seed": 11})");
    const auto a = dfbench_cli({"bench", "--config", config.string(), "--out", (study.dir / "a").string()});
    REQUIRE(a.code == 0);
    const auto b = dfbench_cli(
        {"bench", "--config", config.string(), "--out", (study.dir / "b").string(), "--jobs", "3"});
    REQUIRE(b.code == 0);
    for (const char* f : {"report.csv", "folds.csv", "anova.csv"}) {
        CAPTURE(f);
        CHECK(slurp(study.dir / "a" / f) == slurp(study.dir / "b" / f));
    }
    const auto report = lines_of(slurp(study.dir / "a" / "report.csv"));
    REQUIRE(report.size() == 7);
    CHECK(report[0] == "network,classifier,accuracy_pct,ci95_pct,status");
    CHECK(report[1].rfind("ResNet-50,ensemble,", 0) == 0);
    CHECK(report[6].rfind("AlexNet,svm_quadratic,", 0) == 0);
    for (std::size_t i = 1; i < report.size(); ++i) CHECK(report[i].substr(report[i].size() - 3) == ",ok");
    CHECK(lines_of(slurp(study.dir / "a" / "folds.csv")).size() == 1 + 6 * 4);
    const auto anova = lines_of(slurp(study.dir / "a" / "anova.csv"));
    REQUIRE(anova.size() == 1 + 3 + 3);
    CHECK(anova[1].rfind("anova,network,1,", 0) == 0);
    CHECK(anova[2].rfind("anova,classifier,2,", 0) == 0);
    CHECK(std::filesystem::exists(study.dir / "a" / "run.log"));
    CHECK(slurp(study.dir / "a" / "run.log").find("train") != std::string::npos);

    const auto c = dfbench_cli({"bench", "--config", config.string(), "--out", (study.dir / "c").string(),
                                "--seed", "12"});
    REQUIRE(c.code == 0);
    CHECK(slurp(study.dir / "a" / "folds.csv") != slurp(study.dir / "c" / "folds.csv"));
}

TEST_CASE("single-cell bench has one row and no ANOVA") {
    Study study(10, 4, {"ResNet-50"});
    const auto r = dfbench_cli({"bench", "--manifest", study.manifest.string(), "--features",
                                "ResNet-50=" + study.feature_path("ResNet-50").string(), "--classifier", "lda",
                                "--out", (study.dir / "o").string()});
    REQUIRE(r.code == 0);
    CHECK(lines_of(slurp(study.dir / "o" / "report.csv")).size() == 2);
    CHECK_FALSE(std::filesystem::exists(study.dir / "o" / "anova.csv"));
    CHECK(r.err.find("ANOVA skipped") != std::string::npos);
}

TEST_CASE("bench skips missing feature files and fails only when nothing ran") {
    Study study(10, 4, {"ResNet-50"});
    const auto partial = dfbench_cli({"bench", "--manifest", study.manifest.string(), "--features",
                                      "ResNet-50=" + study.feature_path("ResNet-50").string(), "--features",
                                      "AlexNet=" + (study.dir / "absent.dfb").string(), "--classifier", "lda",
                                      "--classifier", "svm_quadratic", "--out", (study.dir / "o").string()});
    CHECK(partial.code == 0);
    CHECK(partial.err.find("skipping AlexNet") != std::string::npos);
    const auto report = slurp(study.dir / "o" / "report.csv");
    CHECK(report.find("AlexNet,lda,NA,NA,skipped") != std::string::npos);
    CHECK(report.find("ResNet-50,lda,") != std::string::npos);
    CHECK(partial.err.find("incomplete") != std::string::npos);

    const auto none = dfbench_cli({"bench", "--manifest", study.manifest.string(), "--features",
                                   "AlexNet=" + (study.dir / "absent.dfb").string(), "--classifier", "lda", "--out",
                                   (study.dir / "p").string()});
    CHECK(none.code != 0);
}

TEST_CASE("eval writes reports for class subsets") {
    Study study(15, 6, {"ResNet-50"});
    const std::vector<std::string> base{"eval", "--manifest", study.manifest.string(), "--features",
                                        "ResNet-50=" + study.feature_path("ResNet-50").string(), "--classifier",
                                        "lda"};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return dfbench_cli(args);
    };

    const auto three = with({"--classes", "COVID-19,Normal,Tuberculosis", "--out", (study.dir / "three").string()});
    REQUIRE(three.code == 0);
    const auto cm = lines_of(slurp(study.dir / "three" / "confusion.csv"));
    REQUIRE(cm.size() == 4);
    CHECK(cm[0] == "true\\predicted,COVID-19,Normal,Tuberculosis");
    CHECK(lines_of(slurp(study.dir / "three" / "report.csv")).size() == 4);
    CHECK(lines_of(slurp(study.dir / "three" / "folds.csv")).size() == 6);
    const auto model = load_model(study.dir / "three" / "model.bin");
    CHECK(n_classes(model) == 3);
    CHECK(three.out.find("accuracy:") != std::string::npos);

    const auto two = with({"--classes", "COVID-19,Normal", "--out", (study.dir / "two").string()});
    REQUIRE(two.code == 0);
    CHECK(lines_of(slurp(study.dir / "two" / "confusion.csv")).size() == 3);

    const auto empty = with({"--classes", "", "--out", (study.dir / "empty").string()});
    CHECK(empty.code == 1);
    const auto unknown = with({"--classes", "Influenza", "--out", (study.dir / "unknown").string()});
    CHECK(unknown.code == 1);
}

TEST_CASE("embed writes coordinates and a legend per class") {
    Study study(12, 6, {"ResNet-50"});
    const std::vector<std::string> base{"embed", "--manifest", study.manifest.string(), "--features",
                                        "ResNet-50=" + study.feature_path("ResNet-50").string(), "--perplexity",
                                        "10", "--iterations", "300", "--seed", "3"};
    auto run_into = [&](const std::string& out, std::vector<std::string> extra = {}) {
        auto args = base;
        args.push_back("--out");
        args.push_back((study.dir / out).string());
        args.insert(args.end(), extra.begin(), extra.end());
        return dfbench_cli(args);
    };
    REQUIRE(run_into("e1").code == 0);
    REQUIRE(run_into("e2").code == 0);
    const auto csv = slurp(study.dir / "e1" / "embedding.csv");
    CHECK(csv == slurp(study.dir / "e2" / "embedding.csv"));
    const auto rows = lines_of(csv);
    REQUIRE(rows.size() == 61);
    CHECK(rows[0] == "sample_id,class_name,x,y");
    const auto svg = slurp(study.dir / "e1" / "plot.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count_of(svg, "class=\"legend-entry\"") == 5);
    for (const auto& name : kClasses) CHECK(svg.find(">" + name + "<") != std::string::npos);

    REQUIRE(run_into("e3", {"--dims", "3"}).code == 0);
    const auto rows3 = lines_of(slurp(study.dir / "e3" / "embedding.csv"));
    CHECK(rows3[0] == "sample_id,class_name,x,y,z");
    CHECK(count_of(rows3[1], ",") == 4);

    CHECK(run_into("bad", {"--perplexity", "100"}).code == 1);
}

TEST_CASE("silhouette writes per-class and per-sample tables") {
    Study study(10, 5, {"ResNet-50"});
    const auto r = dfbench_cli({"silhouette", "--manifest", study.manifest.string(), "--features",
                                "ResNet-50=" + study.feature_path("ResNet-50").string(), "--out",
                                (study.dir / "s").string()});
    REQUIRE(r.code == 0);
    const auto per_class = lines_of(slurp(study.dir / "s" / "silhouette.csv"));
    REQUIRE(per_class.size() == 6);
    CHECK(per_class[0] == "class,silhouette");
    CHECK(per_class[1].rfind("COVID-19,", 0) == 0);
    const auto samples = lines_of(slurp(study.dir / "s" / "silhouette_samples.csv"));
    CHECK(samples.size() == 51);
    CHECK(samples[0] == "sample_id,class_name,a,b,s");
}

TEST_CASE("check prints the class table and flags mismatches") {
    TempDir dir("check");
    const std::vector<std::pair<std::string, std::size_t>> counts{
        {"COVID-19", 435}, {"Normal", 439}, {"Pneumonia-bacterial", 439}, {"Pneumonia-viral", 439},
        {"Tuberculosis", 434}};
    std::ofstream m(dir / "manifest.txt");
    std::vector<std::string> ids;
    for (const auto& [cls, n] : counts) m << "#count," << cls << ',' << n << (cls == "Tuberculosis" ? ",40" : "") << '\n';
    for (const auto& [cls, n] : counts) {
        for (std::size_t i = 0; i < n; ++i) {
            ids.push_back(cls + "_" + std::to_string(i));
            m << ids.back() << ',' << ids.back() << ".png," << cls << ','
              << (cls == "Tuberculosis" && i >= 394 ? 1 : 0) << '\n';
        }
    }
    m.close();
    const Eigen::MatrixXd x = test::random_matrix(static_cast<Eigen::Index>(ids.size()), 2, 1);
    write_feature_matrix(make_feature_matrix(x, ids), dir / "resnet.dfb");

    const auto ok = dfbench_cli({"check", "--manifest", (dir / "manifest.txt").string(), "--features",
                                 "ResNet-50=" + (dir / "resnet.dfb").string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("All 5-class dataset: 2186") != std::string::npos);
    CHECK(ok.out.find("Tuberculosis: 434 (394+40 augmented)") != std::string::npos);

    auto extra_ids = ids;
    extra_ids.back() = "stray_sample";
    write_feature_matrix(make_feature_matrix(x, extra_ids), dir / "stray.dfb");
    const auto bad = dfbench_cli({"check", "--manifest", (dir / "manifest.txt").string(), "--features",
                                  "ResNet-50=" + (dir / "stray.dfb").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("stray_sample") != std::string::npos);

    std::ofstream(dir / "dup.txt") << "a,a.png,X,0\nb,b.png,Y,0\na,a2.png,X,0\nc,c.png,Y,0\n";
    const auto dup = dfbench_cli({"check", "--manifest", (dir / "dup.txt").string()});
    CHECK(dup.code == 2);
    CHECK(dup.err.find("'a'") != std::string::npos);
    CHECK(dup.err.find("lines 1 and 3") != std::string::npos);
}

TEST_CASE("exit codes") {
    Study study(10, 4, {"ResNet-50"});
    CHECK(dfbench_cli({}).code == 1);
    CHECK(dfbench_cli({"frobnicate"}).code == 1);
    CHECK(dfbench_cli({"bench", "--help"}).code == 0);
    CHECK(dfbench_cli({"eval", "--folds", "many"}).code == 1);
    CHECK(dfbench_cli({"eval", "--classifier", "knn", "--manifest", study.manifest.string()}).code == 1);
    CHECK(dfbench_cli({"check"}).code == 1);  // no manifest
    CHECK(dfbench_cli({"check", "--manifest", (study.dir / "missing.txt").string()}).code == 2);

    std::ofstream(study.dir / "nan.csv") << "sample_id,f0\nimg0,nan\n";
    const auto nan = dfbench_cli({"eval", "--manifest", study.manifest.string(), "--features",
                                  "X=" + (study.dir / "nan.csv").string(), "--classifier", "lda", "--out",
                                  (study.dir / "n").string()});
    CHECK(nan.code == 2);
    CHECK(nan.err.find("row 1, column 1") != std::string::npos);

    const auto cfg = study.write_config(
        "stuck.json", R"({"classifiers": [{"type": "svm", "kernel": "quadratic", "max_iterations": 1}]})");
    const auto stuck = dfbench_cli({"eval", "--config", cfg.string(), "--manifest", study.manifest.string(),
                                    "--features", "R=" + study.feature_path("ResNet-50").string(), "--out",
                                    (study.dir / "s").string()});
    CHECK(stuck.code == 3);
    CHECK(stuck.err.find("fold") != std::string::npos);

    const auto bad_json = study.write_config("bad.json", R"({"folds": "five"})");
    CHECK(dfbench_cli({"eval", "--config", bad_json.string()}).code == 1);
}

TEST_CASE("run config parsing") {
    const auto cfg = cli::parse_run_config(
        R"({"manifest": "m.txt", "features": {"B": "b.dfb", "A": "/abs/a.dfb"},
            "classifiers": ["svm_gaussian", {"type": "ensemble", "learners": 3, "subspace_dim": 2, "seed": 9}],
            "classes": ["x", "y"], "folds": 3, "seed": 4, "tsne": {"dims": 3, "perplexity": 5}})",
        "/base");
    CHECK(cfg.manifest == std::filesystem::path("/base/m.txt"));
    REQUIRE(cfg.features.size() == 2);
    CHECK(cfg.features[0].network == "B");
    CHECK(cfg.features[0].path == std::filesystem::path("/base/b.dfb"));
    CHECK(cfg.features[1].path == std::filesystem::path("/abs/a.dfb"));
    CHECK(classifier_name(cfg.classifiers[0]) == "svm_gaussian");
    CHECK(std::get<SubspaceEnsembleSpec>(cfg.classifiers[1]).seed == 9);
    CHECK(std::get<SubspaceEnsembleSpec>(cfg.classifiers[1]).n_learners == 3);
    CHECK(cfg.folds == 3);
    CHECK(cfg.tsne.seed == 4);
    CHECK(cfg.tsne.output_dims == 3);
    CHECK(*cfg.classes == std::vector<std::string>{"x", "y"});
    CHECK_THROWS_AS((void)cli::parse_run_config("{", ""), UsageError);
    CHECK_THROWS_AS((void)cli::parse_run_config(R"({"classifiers": [{"type": "knn"}]})", ""), UsageError);
}
