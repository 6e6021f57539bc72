#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "dfbench/classifiers/classifier.hpp"
#include "dfbench/classifiers/subspace_ensemble.hpp"
#include "dfbench/error.hpp"
#include "support.hpp"

using namespace dfbench;

TEST_CASE("one learner over every feature reproduces plain LDA") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int k = 2 + static_cast<int>(seed % 4);
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(seed % 7);
        const auto data = test::gaussian_blobs(12 + seed, k, d, 1.0, seed);
        const SubspaceEnsembleSpec spec{1, static_cast<std::size_t>(d), seed, 0.0};
        const auto ensemble = fit_subspace_ensemble(data, spec);
        const auto lda = fit_lda(data);
        const Eigen::MatrixXd probes = test::random_matrix(50, d, seed + 7) * 3.0;
        CHECK(argmax_rows(ensemble_scores(ensemble, probes)) == argmax_rows(lda_scores(lda, probes)));
        CHECK(argmax_rows(ensemble_scores(ensemble, data.features())) ==
              argmax_rows(lda_scores(lda, data.features())));
    }
}

TEST_CASE("same seed gives identical subsets and predictions") {
    const auto data = test::gaussian_blobs(20, 3, 30, 1.0, 5);
    const SubspaceEnsembleSpec spec{8, 10, 77, 0.0};
    const auto a = fit_subspace_ensemble(data, spec, 1);
    const auto b = fit_subspace_ensemble(data, spec, 4);
    REQUIRE(a.members.size() == 8);
    for (std::size_t m = 0; m < 8; ++m) CHECK(a.members[m].features == b.members[m].features);
    const Eigen::MatrixXd probes = test::random_matrix(40, 30, 1);
    CHECK(ensemble_scores(a, probes) == ensemble_scores(b, probes));

    SubspaceEnsembleSpec other = spec;
    other.seed = 78;
    const auto c = fit_subspace_ensemble(data, other);
    bool any_differs = false;
    for (std::size_t m = 0; m < 8; ++m) any_differs = any_differs || a.members[m].features != c.members[m].features;
    CHECK(any_differs);
}

TEST_CASE("thirty 500-of-1000 subsets cover the feature space") {
    // Simulation oracle, with its own generator: fraction of ensembles whose
    // union covers more than 99% of the features.
    std::mt19937_64 gen(12345);
    std::vector<int> idx(1000);
    int covering = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        std::vector<bool> hit(1000, false);
        for (int l = 0; l < 30; ++l) {
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), gen);
            for (int j = 0; j < 500; ++j) hit[idx[j]] = true;
        }
        covering += std::count(hit.begin(), hit.end(), true) > 990;
    }
    CHECK(covering == trials);
    // Each feature is missed by one learner with probability 1/2.
    CHECK(1000.0 * std::pow(0.5, 30) < 1e-6);

    const SubspaceEnsembleSpec spec{30, 500, 2024, 0.0};
    const auto data = test::gaussian_blobs(30, 2, 1000, 2.0, 3);
    const auto model = fit_subspace_ensemble(data, spec);
    REQUIRE(model.members.size() == 30);
    std::set<Eigen::Index> covered;
    for (const auto& m : model.members) {
        CHECK(m.features.size() == 500);
        CHECK(std::set<Eigen::Index>(m.features.begin(), m.features.end()).size() == 500);
        CHECK(std::is_sorted(m.features.begin(), m.features.end()));
        CHECK(m.features.front() >= 0);
        CHECK(m.features.back() < 1000);
        covered.insert(m.features.begin(), m.features.end());
        CHECK(m.features == subspace_features(spec, static_cast<std::size_t>(&m - model.members.data()), 1000));
    }
    CHECK(covered.size() > 990);
}

TEST_CASE("ensemble score is the member-by-member average") {
    const auto data = test::gaussian_blobs(25, 4, 12, 1.5, 8);
    const SubspaceEnsembleSpec spec{7, 5, 3, 0.05};
    const auto model = fit_subspace_ensemble(data, spec);
    const Eigen::MatrixXd probes = test::random_matrix(30, 12, 4) * 2.0;
    const Eigen::MatrixXd got = ensemble_scores(model, probes);

    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(30, 4);
    for (const auto& m : model.members) {
        // Refit on the sliced columns: independent of the moment-slicing path.
        const Eigen::MatrixXd xs = data.features()(Eigen::all, m.features);
        const LdaModel member = fit_lda(xs, data.labels(), 4, spec.gamma);
        want += lda_scores(member, Eigen::MatrixXd(probes(Eigen::all, m.features)));
    }
    want /= 7.0;
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-9);
    for (Eigen::Index i = 0; i < got.rows(); ++i) CHECK(std::abs(got.row(i).sum() - 1.0) < 1e-9);
}

TEST_CASE("averaging of agreeing and opposing members") {
    // Hand-built members: means far apart so each member is certain.
    auto member = [](double sign) {
        LdaModel m;
        m.means.resize(2, 1);
        m.means << -sign * 100.0, sign * 100.0;
        m.sigma_pinv = Eigen::MatrixXd::Identity(1, 1);
        m.log_priors = Eigen::VectorXd::Constant(2, std::log(0.5));
        m.coefficients = m.sigma_pinv * m.means.transpose();
        m.offsets.resize(2);
        for (int k = 0; k < 2; ++k) m.offsets(k) = -0.5 * m.means(k, 0) * m.means(k, 0) + m.log_priors(k);
        return m;
    };
    SubspaceEnsembleModel model;
    model.n_features = 1;
    model.n_classes = 2;
    model.members.push_back({{0}, member(1.0)});
    model.members.push_back({{0}, member(-1.0)});
    Eigen::VectorXd x(1);
    x << 5.0;
    const Eigen::VectorXd split = ensemble_scores(model, x);
    CHECK(split(0) == doctest::Approx(0.5));
    CHECK(split(1) == doctest::Approx(0.5));

    model.members[1] = {{0}, member(1.0)};
    const Eigen::VectorXd agree = ensemble_scores(model, x);
    CHECK(agree(1) == doctest::Approx(1.0));
    CHECK(agree(0) == doctest::Approx(0.0));
}

TEST_CASE("subspace dimension must fit the data") {
    const auto data = test::gaussian_blobs(10, 2, 4, 1.0, 1);
    CHECK_THROWS_AS((void)fit_subspace_ensemble(data, {3, 5, 0, 0.0}), UsageError);
    CHECK_THROWS_AS((void)fit_subspace_ensemble(data, {0, 2, 0, 0.0}), UsageError);
    CHECK_THROWS_AS((void)fit_subspace_ensemble(data, {3, 0, 0, 0.0}), UsageError);
    const auto model = fit_subspace_ensemble(data, {3, 2, 0, 0.0});
    CHECK_THROWS_AS((void)ensemble_scores(model, Eigen::VectorXd(Eigen::VectorXd::Zero(5))), DataError);
}
