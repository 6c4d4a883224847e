#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "tmvksc/data.hpp"
#include "tmvksc/errors.hpp"
#include "tmvksc/metrics.hpp"
#include "tmvksc/model.hpp"

using namespace tmvksc;

namespace {

std::vector<KernelSpec> rbf_specs(std::size_t views, double sigma2) {
    return std::vector<KernelSpec>(views, KernelSpec::rbf(sigma2));
}

FitOptions default_opts(double rho = 0.5) {
    FitOptions opts;
    opts.k = 2;
    opts.fusion.rho = rho;
    return opts;
}

double elapsed_ms(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

TEST_CASE("single-view fit equals the pipeline assembled from primitives") {
    const ViewDataset full = generate_synth({SynthKind::Synth1, 80, 3});
    ViewDataset data;
    data.views = {full.views[0]};
    data.view_names = {"view1"};

    FitOptions opts = default_opts(1.0);
    const Model model = fit(data, rbf_specs(1, 0.1), opts);

    // Same steps by hand: gram -> degrees -> center -> solve -> scores -> codebook.
    const KernelMatrix k = gram_matrix(KernelSpec::rbf(0.1), data.views[0]);
    const DegreeMatrix deg = degree_matrix(k);
    const auto [centered, stats] = center_gram(k, Centering::DegreeWeighted, &deg);
    const EigenSolution sol = solve_latent(centered, deg.d, 1);
    const Eigen::MatrixXd oc_test = center_gram_test(k.omega, stats);
    const ScoreBlock block = scores({oc_test}, sol.h, Eigen::VectorXd::Ones(1));
    const Codebook book = build_codebook(sign_encode(block.e_mean), 2);
    const ClusterAssignment expected = assign(sign_encode(block.e_mean), book);

    const ClusterAssignment got = predict(model, data);
    CHECK(got.labels == expected.labels);
    CHECK((model.h - sol.h).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("duplicated views leave the eigenvectors and labels untouched") {
    const ViewDataset full = generate_synth({SynthKind::Synth1, 70, 8});
    ViewDataset one;
    one.views = {full.views[0]};
    one.view_names = {"view1"};
    ViewDataset two;
    two.views = {full.views[0], full.views[0]};
    two.view_names = {"view1", "view1b"};

    const Model m1 = fit(one, rbf_specs(1, 0.1), default_opts(1.0));
    const Model m2 = fit(two, rbf_specs(2, 0.1), default_opts(1.0));

    CHECK(m2.lambdas.isApprox(m1.lambdas, 1e-10));
    // Doubling sum_v D doubles the normalizer, so H shrinks by 1/sqrt(2).
    CHECK((m2.h * std::sqrt(2.0)).isApprox(m1.h, 1e-8));
    const auto l1 = predict(m1, one);
    const auto l2 = predict(m2, two);
    CHECK(ari(l1.labels, l2.labels) == doctest::Approx(1.0));
}

TEST_CASE("self-prediction reproduces training labels exactly") {
    for (const auto rho : {0.0, 0.5, 1.0}) {
        const ViewDataset data = generate_synth({SynthKind::Synth1, 90, 21});
        const Model model = fit(data, rbf_specs(3, 0.1), default_opts(rho));
        const ClusterAssignment train = predict(model, data);
        const ClusterAssignment again = predict(model, data);
        CHECK(train.labels == again.labels);

        // The fitted solution is stationary.
        CHECK(objective_residual(model) <= 1e-8);

        // Scores through the spec's direct route agree to 1e-10.
        std::vector<Eigen::MatrixXd> omega_c;
        for (std::size_t v = 0; v < data.views.size(); ++v) {
            const KernelMatrix k = gram_matrix(model.specs[v], data.views[v]);
            const DegreeMatrix deg = degree_matrix(k);
            omega_c.push_back(center_gram(k, model.centering, &deg).first);
        }
        const ScoreBlock direct = scores(omega_c, model.h.leftCols(model.k - 1), model.beta);
        const ScoreBlock via_predict = predict_scores(model, data);
        CHECK((direct.e_mean - via_predict.e_mean).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("a duplicated test point gets its training label") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 60, 31});
    const Model model = fit(data, rbf_specs(3, 0.1), default_opts());
    const ClusterAssignment train = predict(model, data);

    ViewDataset probe;
    probe.view_names = data.view_names;
    for (const auto& x : data.views) probe.views.push_back(x.row(17));
    const ClusterAssignment out = predict(model, probe);
    CHECK(out.labels[0] == train.labels[17]);
}

TEST_CASE("predict validates shapes") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 40, 2});
    const Model model = fit(data, rbf_specs(3, 0.1), default_opts());
    ViewDataset bad;
    bad.views = {data.views[0], data.views[1]};
    bad.view_names = {"a", "b"};
    CHECK_THROWS_AS(predict(model, bad), DimensionError);

    ViewDataset wrong_dim = data;
    wrong_dim.views[1] = Eigen::MatrixXd::Ones(40, 5);
    CHECK_THROWS_AS(predict(model, wrong_dim), DimensionError);
}

TEST_CASE("per-view assignment stays close to the ensemble on easy data") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 120, 13});
    const Model model = fit(data, rbf_specs(3, 0.1), default_opts());
    const auto ensemble = predict(model, data);
    const auto per_view = predict_per_view(model, data);
    REQUIRE(per_view.size() == 3);
    for (const auto& view_labels : per_view) {
        CHECK(ari(ensemble.labels, view_labels.labels) > 0.5);
    }
}

TEST_CASE("fit_fixed_size") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 120, 19});

    SUBCASE("m = n matches fit plus self-predict") {
        const Model direct = fit(data, rbf_specs(3, 0.1), default_opts());
        const auto direct_labels = predict(direct, data);
        const auto [model, labels] = fit_fixed_size(data, rbf_specs(3, 0.1), default_opts(),
                                                    data.n(), 123);
        CHECK(labels.labels == direct_labels.labels);
        CHECK(model.subset_indices.size() == static_cast<std::size_t>(data.n()));
    }
    SUBCASE("same seed gives identical subsets and labels") {
        const auto [m1, l1] = fit_fixed_size(data, rbf_specs(3, 0.1), default_opts(), 50, 7);
        const auto [m2, l2] = fit_fixed_size(data, rbf_specs(3, 0.1), default_opts(), 50, 7);
        CHECK(m1.subset_indices == m2.subset_indices);
        CHECK(l1.labels == l2.labels);
        CHECK(m1.train_n() == 50);
    }
    SUBCASE("m below k is rejected") {
        CHECK_THROWS_AS(fit_fixed_size(data, rbf_specs(3, 0.1), default_opts(), 1, 7),
                        ConfigError);
        CHECK_THROWS_AS(fit_fixed_size(data, rbf_specs(3, 0.1), default_opts(), 500, 7),
                        ConfigError);
    }
}

TEST_CASE("explained variance shares") {
    Eigen::VectorXd lambdas(3);
    lambdas << 2.0, 1.0, 1.0;
    const ExplainedVariance ev = explained_variance_shares(lambdas);
    CHECK(ev.share(0) == doctest::Approx(0.5));
    CHECK(ev.share(1) == doctest::Approx(0.25));
    CHECK(ev.share(2) == doctest::Approx(0.25));
    CHECK(ev.cumulative(2) == doctest::Approx(1.0));
    CHECK(ev.negative_count == 0);

    Eigen::VectorXd single(1);
    single << 0.3;
    CHECK(explained_variance_shares(single).share(0) == doctest::Approx(1.0));

    Eigen::VectorXd with_negative(3);
    with_negative << 3.0, 1.0, -0.5;
    const ExplainedVariance ev2 = explained_variance_shares(with_negative);
    CHECK(ev2.negative_count == 1);
    CHECK(ev2.share(2) == 0.0);
    CHECK(ev2.share(0) == doctest::Approx(0.75));
}

TEST_CASE("synth1 spectrum decays sharply") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 300, 11});
    FitOptions opts = default_opts();
    opts.q = 5;
    const Model model = fit(data, rbf_specs(3, 0.1), opts);
    const ExplainedVariance ev = explained_variance(model);
    CHECK(ev.share(0) > ev.share(1));
}

TEST_CASE("view permutation leaves the partition unchanged") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 100, 23});
    ViewDataset permuted;
    permuted.views = {data.views[2], data.views[0], data.views[1]};
    permuted.view_names = {"view3", "view1", "view2"};

    FitOptions opts = default_opts(0.5);
    opts.fusion.kappa = Eigen::Vector3d(1.0, 2.0, 3.0);
    opts.beta = Eigen::Vector3d(0.5, 0.25, 0.25);
    FitOptions opts_perm = opts;
    opts_perm.fusion.kappa = Eigen::Vector3d(3.0, 1.0, 2.0);
    opts_perm.beta = Eigen::Vector3d(0.25, 0.5, 0.25);

    const std::vector<KernelSpec> specs = {KernelSpec::rbf(0.1), KernelSpec::rbf(0.2),
                                           KernelSpec::rbf(0.3)};
    const std::vector<KernelSpec> specs_perm = {KernelSpec::rbf(0.3), KernelSpec::rbf(0.1),
                                                KernelSpec::rbf(0.2)};
    const auto l1 = predict(fit(data, specs, opts), data);
    const auto l2 = predict(fit(permuted, specs_perm, opts_perm), permuted);
    CHECK(ari(l1.labels, l2.labels) == doctest::Approx(1.0));
}

TEST_CASE("sample permutation permutes the labels with the samples") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 90, 29});
    std::vector<int> perm(static_cast<std::size_t>(data.n()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(99));

    ViewDataset shuffled;
    shuffled.view_names = data.view_names;
    for (const auto& x : data.views) {
        Eigen::MatrixXd p(x.rows(), x.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            p.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
        }
        shuffled.views.push_back(std::move(p));
    }

    const auto base = predict(fit(data, rbf_specs(3, 0.1), default_opts()), data);
    const auto moved = predict(fit(shuffled, rbf_specs(3, 0.1), default_opts()), shuffled);
    std::vector<int> realigned(base.labels.size());
    for (std::size_t i = 0; i < realigned.size(); ++i) {
        realigned[i] = base.labels[static_cast<std::size_t>(perm[i])];
    }
    CHECK(ari(realigned, moved.labels) == doctest::Approx(1.0));
}

TEST_CASE("eta only rescales reported eigenvalues") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 60, 37});
    FitOptions opts = default_opts(1.0);
    const Model base = fit(data, rbf_specs(3, 0.1), opts);
    opts.fusion.eta = 2.5;
    const Model scaled = fit(data, rbf_specs(3, 0.1), opts);
    CHECK((scaled.h - base.h).cwiseAbs().maxCoeff() == 0.0);
    CHECK(scaled.lambdas.isApprox(base.lambdas / 2.5, 1e-14));
    CHECK(predict(scaled, data).labels == predict(base, data).labels);
    CHECK(objective_residual(scaled) <= 1e-8);
}

TEST_CASE("fit rejects inconsistent configurations") {
    const ViewDataset data = generate_synth({SynthKind::Synth1, 30, 41});
    CHECK_THROWS_AS(fit(data, rbf_specs(2, 0.1), default_opts()), ConfigError);
    FitOptions opts = default_opts();
    opts.k = 1;
    CHECK_THROWS_AS(fit(data, rbf_specs(3, 0.1), opts), ConfigError);
    opts = default_opts();
    opts.q = 0;
    opts.k = 40;
    CHECK_THROWS_AS(fit(data, rbf_specs(3, 0.1), opts), ConfigError);
    opts = default_opts(1.5);
    CHECK_THROWS_AS(fit(data, rbf_specs(3, 0.1), opts), ConfigError);
}

TEST_CASE("synth1 with the reference rbf bandwidth clusters near-perfectly") {
    const ViewDataset train = generate_synth({SynthKind::Synth1, 1000, 61});
    const Model model = fit(train, rbf_specs(3, 0.05), default_opts(0.5));
    const ClusterAssignment fitted = predict(model, train);
    CHECK(ari(train.labels, fitted.labels) >= 0.98);

    // Fresh sample from the same mixture through the out-of-sample path.
    const ViewDataset fresh = generate_synth({SynthKind::Synth1, 500, 62});
    const ClusterAssignment extended = predict(model, fresh);
    CHECK(ari(fresh.labels, extended.labels) >= 0.95);
}

TEST_CASE("fit wall time grows no worse than the cubic envelope") {
    const auto run_fit_ms = [](Eigen::Index n) {
        const ViewDataset data = generate_synth({SynthKind::Synth1, n, 55});
        double best = 1e18;
        for (int rep = 0; rep < 3; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const Model model = fit(data, rbf_specs(3, 0.1), default_opts());
            best = std::min(best, elapsed_ms(start));
            (void)model;
        }
        return best;
    };
    const double t_small = run_fit_ms(300);
    const double t_large = run_fit_ms(600);
    CHECK(t_large <= 8.0 * std::max(t_small, 1.0));
}
