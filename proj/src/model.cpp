#include "tmvksc/model.hpp"

#include <cmath>
#include <string>

#include "tmvksc/errors.hpp"
#include "tmvksc/rng.hpp"

namespace tmvksc {

namespace {

Eigen::VectorXd beta_or_uniform(const Eigen::VectorXd& beta, Eigen::Index views) {
    if (beta.size() == 0) {
        return Eigen::VectorXd::Constant(views, 1.0 / static_cast<double>(views));
    }
    if (beta.size() != views) {
        throw ConfigError("beta has " + std::to_string(beta.size()) + " entries for " +
                          std::to_string(views) + " views");
    }
    return beta;
}

// Raw test-kernel blocks against the retained training rows, centered with
// the training statistics. Shared by predict and the training-label path.
std::vector<Eigen::MatrixXd> centered_test_kernels(const Model& model, const ViewDataset& data) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(model.train_x.size());
    for (std::size_t v = 0; v < model.train_x.size(); ++v) {
        const Eigen::MatrixXd raw = cross_gram(model.specs[v], data.views[v], model.train_x[v]);
        out.push_back(center_gram_test(raw, model.stats[v]));
    }
    return out;
}

void check_test_shape(const Model& model, const ViewDataset& data) {
    data.validate();
    if (data.view_count() != model.view_count()) {
        throw DimensionError("predict: model has " + std::to_string(model.view_count()) +
                             " views, data has " + std::to_string(data.view_count()));
    }
    for (Eigen::Index v = 0; v < model.view_count(); ++v) {
        if (data.views[static_cast<std::size_t>(v)].cols() !=
            model.train_x[static_cast<std::size_t>(v)].cols()) {
            throw DimensionError("predict: view " + std::to_string(v + 1) + " has dimension " +
                                 std::to_string(data.views[static_cast<std::size_t>(v)].cols()) +
                                 ", model expects " +
                                 std::to_string(model.train_x[static_cast<std::size_t>(v)].cols()));
        }
    }
}

}  // namespace

Model fit(const ViewDataset& data, const std::vector<KernelSpec>& specs, const FitOptions& opts) {
    data.validate();
    const Eigen::Index views = data.view_count();
    if (static_cast<Eigen::Index>(specs.size()) != views) {
        throw ConfigError("fit: " + std::to_string(specs.size()) + " kernel specs for " +
                          std::to_string(views) + " views");
    }
    if (opts.k < 2) throw ConfigError("fit: k must be >= 2");
    const Eigen::Index n = data.n();
    if (n < opts.k) throw ConfigError("fit: fewer samples than clusters");
    const int q = opts.q > 0 ? opts.q : opts.k - 1;
    if (q < opts.k - 1) throw ConfigError("fit: q must be at least k-1");
    opts.fusion.validate(views);

    Model model;
    model.specs = specs;
    model.centering = opts.centering;
    model.fusion = opts.fusion;
    model.fusion.kappa = opts.fusion.kappa_or_ones(views);
    model.beta = beta_or_uniform(opts.beta, views);
    model.k = opts.k;
    model.q = q;

    std::vector<Eigen::MatrixXd> raw;
    std::vector<Eigen::MatrixXd> omega_c;
    Eigen::VectorXd dsum = Eigen::VectorXd::Zero(n);
    raw.reserve(static_cast<std::size_t>(views));
    omega_c.reserve(static_cast<std::size_t>(views));
    for (Eigen::Index v = 0; v < views; ++v) {
        const auto& x = data.views[static_cast<std::size_t>(v)];
        KernelMatrix k = gram_matrix(specs[static_cast<std::size_t>(v)], x);
        DegreeMatrix deg = degree_matrix(k);
        auto [centered, stats] = center_gram(k, opts.centering, &deg);
        dsum += deg.d;
        model.train_x.push_back(x);
        model.stats.push_back(std::move(stats));
        model.degrees.push_back(std::move(deg.d));
        omega_c.push_back(std::move(centered));
        raw.push_back(std::move(k.omega));
    }

    const Eigen::MatrixXd a = fuse_kernels(omega_c, model.fusion);
    EigenSolution sol = solve_latent(a, dsum, q);
    model.h = sol.h;
    model.lambdas = sol.lambdas / model.fusion.eta;

    // Training scores go through the same centered-test-kernel path predict
    // uses, so self-prediction is bit-identical.
    std::vector<Eigen::MatrixXd> train_oc;
    train_oc.reserve(raw.size());
    for (std::size_t v = 0; v < raw.size(); ++v) {
        train_oc.push_back(center_gram_test(raw[v], model.stats[v]));
    }
    const Eigen::MatrixXd h_cluster = model.h.leftCols(model.k - 1);
    const ScoreBlock block = scores(train_oc, h_cluster, model.beta);
    model.codebook = build_codebook(sign_encode(block.e_mean), model.k);
    model.per_view_codebooks.reserve(block.e.size());
    for (const auto& e_view : block.e) {
        model.per_view_codebooks.push_back(build_codebook(sign_encode(e_view), model.k));
    }
    return model;
}

ClusterAssignment predict(const Model& model, const ViewDataset& data) {
    check_test_shape(model, data);
    const auto oc = centered_test_kernels(model, data);
    const ScoreBlock block = scores(oc, model.h.leftCols(model.k - 1), model.beta);
    return assign(sign_encode(block.e_mean), model.codebook);
}

ScoreBlock predict_scores(const Model& model, const ViewDataset& data) {
    check_test_shape(model, data);
    const auto oc = centered_test_kernels(model, data);
    return scores(oc, model.h.leftCols(model.k - 1), model.beta);
}

std::vector<ClusterAssignment> predict_per_view(const Model& model, const ViewDataset& data) {
    check_test_shape(model, data);
    const auto oc = centered_test_kernels(model, data);
    const ScoreBlock block = scores(oc, model.h.leftCols(model.k - 1), model.beta);
    std::vector<ClusterAssignment> out;
    out.reserve(block.e.size());
    for (std::size_t v = 0; v < block.e.size(); ++v) {
        out.push_back(assign(sign_encode(block.e[v]), model.per_view_codebooks[v]));
    }
    return out;
}

std::pair<Model, ClusterAssignment> fit_fixed_size(const ViewDataset& data,
                                                   const std::vector<KernelSpec>& specs,
                                                   const FitOptions& opts, std::int64_t m,
                                                   std::uint64_t seed) {
    data.validate();
    const Eigen::Index n = data.n();
    if (m < opts.k) throw ConfigError("fit_fixed_size: m must be >= k");
    if (m > n) throw ConfigError("fit_fixed_size: m exceeds sample count");

    RandomStream rng(seed);
    const auto indices = rng.sample_without_replacement(n, m);

    ViewDataset subset;
    subset.view_names = data.view_names;
    for (const auto& x : data.views) {
        Eigen::MatrixXd sub(m, x.cols());
        for (std::int64_t i = 0; i < m; ++i) {
            sub.row(i) = x.row(indices[static_cast<std::size_t>(i)]);
        }
        subset.views.push_back(std::move(sub));
    }

    Model model = fit(subset, specs, opts);
    model.subset_indices = indices;
    ClusterAssignment all = predict(model, data);
    return {std::move(model), std::move(all)};
}

ExplainedVariance explained_variance_shares(const Eigen::VectorXd& lambdas) {
    ExplainedVariance ev;
    double total = 0.0;
    for (Eigen::Index l = 0; l < lambdas.size(); ++l) {
        if (lambdas(l) > 0.0) {
            total += lambdas(l);
        } else {
            ++ev.negative_count;
        }
    }
    ev.share = Eigen::VectorXd::Zero(lambdas.size());
    ev.cumulative = Eigen::VectorXd::Zero(lambdas.size());
    double running = 0.0;
    for (Eigen::Index l = 0; l < lambdas.size(); ++l) {
        if (lambdas(l) > 0.0 && total > 0.0) ev.share(l) = lambdas(l) / total;
        running += ev.share(l);
        ev.cumulative(l) = running;
    }
    return ev;
}

ExplainedVariance explained_variance(const Model& model) {
    return explained_variance_shares(model.lambdas);
}

double objective_residual(const Model& model) {
    std::vector<Eigen::MatrixXd> omega_c;
    std::vector<Eigen::VectorXd> degrees;
    omega_c.reserve(model.train_x.size());
    for (std::size_t v = 0; v < model.train_x.size(); ++v) {
        KernelMatrix k = gram_matrix(model.specs[v], model.train_x[v]);
        DegreeMatrix deg = degree_matrix(k);
        auto [centered, stats] = center_gram(k, model.centering, &deg);
        omega_c.push_back(std::move(centered));
        degrees.push_back(std::move(deg.d));
    }
    EigenSolution sol;
    sol.h = model.h;
    sol.lambdas = model.lambdas;
    const double j = objective_value(sol, omega_c, degrees, model.fusion);
    const double norm = sym_spectral_norm(fuse_kernels(omega_c, model.fusion));
    return std::abs(j) / std::max(norm, 1e-300);
}

}  // namespace tmvksc
