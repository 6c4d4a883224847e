#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "tmvksc/errors.hpp"
#include "tmvksc/kernels.hpp"

using namespace tmvksc;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index d, unsigned seed, double shift = 0.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = dist(gen) + shift;
    }
    return x;
}

}  // namespace

TEST_CASE("eval_kernel matches the closed forms") {
    CHECK(eval_kernel(KernelSpec::rbf(1.0), vec2(0, 0), vec2(0, 0)) == doctest::Approx(1.0));
    CHECK(eval_kernel(KernelSpec::rbf(1.0), vec2(0, 0), vec2(1, 0)) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(eval_kernel(KernelSpec::normalized_poly(2, 1.0), vec2(3, 4), vec2(3, 4)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eval_kernel(KernelSpec::linear(), vec2(1, 2), vec2(3, -1)) == doctest::Approx(1.0));
}

TEST_CASE("eval_kernel rejects bad input") {
    Eigen::VectorXd x(3);
    x << 1, 2, 3;
    CHECK_THROWS_AS(eval_kernel(KernelSpec::linear(), x, vec2(1, 2)), DimensionError);
    CHECK_THROWS_AS(eval_kernel(KernelSpec::normalized_poly(2, 0.0), vec2(0, 0), vec2(1, 1)),
                    DegenerateKernelError);
    CHECK_THROWS_AS(KernelSpec::rbf(0.0), ConfigError);
    CHECK_THROWS_AS(KernelSpec::rbf(-1.0), ConfigError);
    CHECK_THROWS_AS(KernelSpec::normalized_poly(0, 1.0), ConfigError);
    CHECK_THROWS_AS(KernelSpec::normalized_poly(2, -0.5), ConfigError);
}

TEST_CASE("kernel spec round-trips through its text form") {
    for (const auto* text : {"rbf:0.05", "linear", "normpoly:2:1.5"}) {
        CHECK(KernelSpec::parse(text).to_string() == text);
    }
    CHECK_THROWS_AS(KernelSpec::parse("rbf"), ConfigError);
    CHECK_THROWS_AS(KernelSpec::parse("normpoly:2"), ConfigError);
    CHECK_THROWS_AS(KernelSpec::parse("cosine:1"), ConfigError);
}

TEST_CASE("gram_matrix on small hand cases") {
    SUBCASE("linear kernel on the identity") {
        const KernelMatrix k = gram_matrix(KernelSpec::linear(), Eigen::MatrixXd::Identity(2, 2));
        CHECK(k.omega.isApprox(Eigen::MatrixXd::Identity(2, 2)));
    }
    SUBCASE("rbf on coincident points") {
        Eigen::MatrixXd x(2, 2);
        x << 0.3, -0.7, 0.3, -0.7;
        const KernelMatrix k = gram_matrix(KernelSpec::rbf(0.05), x);
        CHECK(k.omega.isApprox(Eigen::MatrixXd::Ones(2, 2)));
    }
    SUBCASE("rbf three-point case") {
        Eigen::MatrixXd x(3, 2);
        x << 0, 0, 1, 0, 0, 1;
        const KernelMatrix k = gram_matrix(KernelSpec::rbf(1.0), x);
        const double e1 = std::exp(-1.0);
        const double e2 = std::exp(-2.0);
        CHECK(k.omega(0, 0) == 1.0);
        CHECK(k.omega(0, 1) == doctest::Approx(e1).epsilon(1e-14));
        CHECK(k.omega(0, 2) == doctest::Approx(e1).epsilon(1e-14));
        CHECK(k.omega(1, 2) == doctest::Approx(e2).epsilon(1e-14));
    }
}

TEST_CASE("gram_matrix symmetry is exact and the rbf diagonal is one") {
    const Eigen::MatrixXd x = random_matrix(23, 4, 11);
    for (const auto& spec :
         {KernelSpec::rbf(0.7), KernelSpec::linear(), KernelSpec::normalized_poly(2, 1.0)}) {
        const KernelMatrix k = gram_matrix(spec, x);
        CHECK((k.omega - k.omega.transpose()).cwiseAbs().maxCoeff() == 0.0);
        if (spec.kind == KernelKind::Rbf) {
            CHECK(k.omega.diagonal().isApprox(Eigen::VectorXd::Ones(23)));
        }
    }
}

TEST_CASE("row-block parallel gram equals the sequential result bitwise") {
    const Eigen::MatrixXd x = random_matrix(400, 3, 77);
    const KernelSpec spec = KernelSpec::rbf(0.6);
    setenv("TMVKSC_THREADS", "1", 1);
    const KernelMatrix sequential = gram_matrix(spec, x);
    setenv("TMVKSC_THREADS", "7", 1);
    const KernelMatrix parallel = gram_matrix(spec, x);
    unsetenv("TMVKSC_THREADS");
    CHECK((sequential.omega - parallel.omega).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cross_gram of a set against itself equals its gram matrix bitwise") {
    const Eigen::MatrixXd x = random_matrix(17, 3, 5);
    for (const auto& spec :
         {KernelSpec::rbf(0.4), KernelSpec::linear(), KernelSpec::normalized_poly(2, 0.5)}) {
        const KernelMatrix k = gram_matrix(spec, x);
        const Eigen::MatrixXd cross = cross_gram(spec, x, x);
        CHECK((k.omega - cross).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("degree_matrix") {
    SUBCASE("all-ones and identity") {
        KernelMatrix ones{Eigen::MatrixXd::Ones(3, 3)};
        CHECK(degree_matrix(ones).d.isApprox(Eigen::VectorXd::Constant(3, 3.0)));
        KernelMatrix eye{Eigen::MatrixXd::Identity(4, 4)};
        CHECK(degree_matrix(eye).d.isApprox(Eigen::VectorXd::Ones(4)));
    }
    SUBCASE("three-point rbf column sums") {
        Eigen::MatrixXd x(3, 2);
        x << 0, 0, 1, 0, 0, 1;
        const DegreeMatrix deg = degree_matrix(gram_matrix(KernelSpec::rbf(1.0), x));
        const double e1 = std::exp(-1.0);
        const double e2 = std::exp(-2.0);
        CHECK(deg.d(0) == doctest::Approx(1.0 + 2.0 * e1).epsilon(1e-14));
        CHECK(deg.d(1) == doctest::Approx(1.0 + e1 + e2).epsilon(1e-14));
        CHECK(deg.d(2) == doctest::Approx(1.0 + e1 + e2).epsilon(1e-14));
    }
    SUBCASE("nonpositive column sum is rejected") {
        Eigen::MatrixXd bad(2, 2);
        bad << 1.0, -2.0, -2.0, 1.0;
        CHECK_THROWS_AS(degree_matrix(KernelMatrix{bad}), NonPositiveDegreeError);
    }
}

TEST_CASE("center_gram hand cases") {
    SUBCASE("constant kernel centers to exactly zero") {
        KernelMatrix ones{Eigen::MatrixXd::Ones(5, 5)};
        const auto [centered, stats] = center_gram(ones, Centering::Plain);
        CHECK(centered.cwiseAbs().maxCoeff() == 0.0);
        CHECK(stats.k_scalar == doctest::Approx(1.0));
    }
    SUBCASE("identity double-centers to +-0.5") {
        KernelMatrix eye{Eigen::MatrixXd::Identity(2, 2)};
        const auto [centered, stats] = center_gram(eye, Centering::Plain);
        Eigen::MatrixXd expected(2, 2);
        expected << 0.5, -0.5, -0.5, 0.5;
        CHECK(centered.isApprox(expected, 1e-14));
    }
    SUBCASE("degree-weighted mode requires degrees") {
        KernelMatrix eye{Eigen::MatrixXd::Identity(2, 2)};
        CHECK_THROWS_AS(center_gram(eye, Centering::DegreeWeighted), ConfigError);
    }
}

TEST_CASE("centering annihilates the weight direction in both modes") {
    Eigen::MatrixXd x(3, 2);
    x << 0, 0, 1, 0, 0, 1;
    const KernelMatrix k = gram_matrix(KernelSpec::rbf(1.0), x);
    const DegreeMatrix deg = degree_matrix(k);
    for (const auto mode : {Centering::Plain, Centering::DegreeWeighted}) {
        const auto [centered, stats] = center_gram(k, mode, &deg);
        CHECK(stats.s.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((centered * stats.s).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((stats.s.transpose() * centered).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("centered grams stay positive semidefinite") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const Eigen::MatrixXd x = random_matrix(12, 3, seed, 1.5);
        for (const auto& spec :
             {KernelSpec::rbf(0.8), KernelSpec::linear(), KernelSpec::normalized_poly(2, 1.0)}) {
            const KernelMatrix k = gram_matrix(spec, x);
            const DegreeMatrix deg = degree_matrix(k);
            for (const auto mode : {Centering::Plain, Centering::DegreeWeighted}) {
                const auto [centered, stats] = center_gram(k, mode, &deg);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered,
                                                                   Eigen::EigenvaluesOnly);
                const double floor = -1e-8 * eig.eigenvalues().cwiseAbs().maxCoeff();
                CHECK(eig.eigenvalues().minCoeff() >= floor);
            }
        }
    }
}

TEST_CASE("center_gram_test") {
    Eigen::MatrixXd x(4, 3);
    x << 0.2, -0.4, 1.0, 0.9, 0.1, -0.3, -0.5, 0.7, 0.2, 0.3, 0.3, 0.8;
    const KernelSpec spec = KernelSpec::rbf(0.9);
    const KernelMatrix k = gram_matrix(spec, x);
    const DegreeMatrix deg = degree_matrix(k);

    SUBCASE("training rows reproduce the centered gram") {
        for (const auto mode : {Centering::Plain, Centering::DegreeWeighted}) {
            const auto [centered, stats] = center_gram(k, mode, &deg);
            const Eigen::MatrixXd test_centered = center_gram_test(k.omega, stats);
            CHECK((test_centered - centered).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("constant test block against a constant gram is zero") {
        KernelMatrix ones{Eigen::MatrixXd::Ones(4, 4)};
        const auto [centered, stats] = center_gram(ones, Centering::Plain);
        const Eigen::MatrixXd out = center_gram_test(Eigen::MatrixXd::Ones(2, 4), stats);
        CHECK(out.cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("shape mismatch is rejected") {
        const auto [centered, stats] = center_gram(k, Centering::Plain);
        CHECK_THROWS_AS(center_gram_test(Eigen::MatrixXd::Ones(2, 5), stats), DimensionError);
    }
}

// Oracle: with a linear kernel the centered gram must equal the gram of the
// explicitly centered features X - 1 (s^T X).
TEST_CASE("linear-kernel centering matches the explicit feature-space oracle") {
    const Eigen::MatrixXd x_train = random_matrix(6, 4, 21);
    const Eigen::MatrixXd x_test = random_matrix(2, 4, 22);
    const KernelSpec spec = KernelSpec::linear();
    const KernelMatrix k = gram_matrix(spec, x_train);
    Eigen::MatrixXd shifted = x_train;
    shifted.array() += 2.0;  // keep degrees positive for the weighted mode
    const KernelMatrix k_pos = gram_matrix(spec, shifted);
    const DegreeMatrix deg = degree_matrix(k_pos);

    for (const auto mode : {Centering::Plain, Centering::DegreeWeighted}) {
        const Eigen::MatrixXd& base = mode == Centering::Plain ? x_train : shifted;
        const KernelMatrix& gram = mode == Centering::Plain ? k : k_pos;
        const auto [centered, stats] = center_gram(gram, mode, &deg);

        const Eigen::RowVectorXd mean = stats.s.transpose() * base;
        const Eigen::MatrixXd feats = base.rowwise() - mean;
        CHECK((centered - feats * feats.transpose()).cwiseAbs().maxCoeff() < 1e-12);

        const Eigen::MatrixXd test_block = cross_gram(spec, x_test, base);
        const Eigen::MatrixXd test_centered = center_gram_test(test_block, stats);
        const Eigen::MatrixXd test_feats = x_test.rowwise() - mean;
        CHECK((test_centered - test_feats * feats.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}
