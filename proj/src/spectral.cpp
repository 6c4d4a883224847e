#include "tmvksc/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "tmvksc/errors.hpp"

namespace tmvksc {

void FusionConfig::validate(Eigen::Index views) const {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw ConfigError("rho must lie in [0, 1], got " + std::to_string(rho));
    }
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
    if (kappa.size() != 0) {
        if (kappa.size() != views) {
            throw ConfigError("kappa has " + std::to_string(kappa.size()) + " entries for " +
                              std::to_string(views) + " views");
        }
        for (Eigen::Index v = 0; v < kappa.size(); ++v) {
            if (!(kappa(v) > 0.0)) throw ConfigError("kappa entries must be positive");
        }
    }
}

Eigen::VectorXd FusionConfig::kappa_or_ones(Eigen::Index views) const {
    if (kappa.size() == 0) return Eigen::VectorXd::Ones(views);
    return kappa;
}

Eigen::MatrixXd fuse_kernels(const std::vector<Eigen::MatrixXd>& omega_c, const FusionConfig& cfg) {
    const auto views = static_cast<Eigen::Index>(omega_c.size());
    if (views == 0) throw ConfigError("fuse_kernels: no views");
    cfg.validate(views);
    const Eigen::Index n = omega_c.front().rows();
    for (const auto& m : omega_c) {
        if (m.rows() != n || m.cols() != n) {
            throw DimensionError("fuse_kernels: all centered kernels must be N x N");
        }
    }
    const Eigen::VectorXd kappa = cfg.kappa_or_ones(views);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    if (cfg.rho > 0.0) {
        Eigen::MatrixXd sum = kappa(0) * omega_c[0];
        for (Eigen::Index v = 1; v < views; ++v) sum += kappa(v) * omega_c[v];
        a = cfg.rho * sum;
    }
    if (cfg.rho < 1.0) {
        Eigen::MatrixXd had = omega_c[0];
        for (Eigen::Index v = 1; v < views; ++v) had = had.cwiseProduct(omega_c[v]);
        a += (1.0 - cfg.rho) * had;
    }
    return a;
}

EigenSolution solve_latent(const Eigen::MatrixXd& a, const Eigen::VectorXd& dsum, int q) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw DimensionError("solve_latent: A must be square");
    if (dsum.size() != n) throw DimensionError("solve_latent: dsum length mismatch");
    if (q < 1 || q > n) {
        throw ConfigError("solve_latent: q = " + std::to_string(q) + " with N = " +
                          std::to_string(n));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(dsum(i) > 0.0)) {
            throw NonPositiveDegreeError("solve_latent: dsum must be strictly positive");
        }
    }

    const Eigen::VectorXd dinv_sqrt = dsum.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd s = dinv_sqrt.asDiagonal() * a * dinv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success) {
        throw InternalError("solve_latent: eigendecomposition failed");
    }

    const double amax = solver.eigenvalues().cwiseAbs().maxCoeff();
    const double ascale = a.cwiseAbs().maxCoeff();
    if (amax <= 1e-12 * std::max(1.0, ascale)) {
        throw DegenerateSpectrumError("solve_latent: fused operator is numerically zero");
    }

    EigenSolution sol;
    sol.dsum = dsum;
    sol.lambdas.resize(q);
    sol.h.resize(n, q);
    // Eigen returns ascending order; take from the back for descending.
    for (int l = 0; l < q; ++l) {
        const Eigen::Index src = n - 1 - l;
        sol.lambdas(l) = solver.eigenvalues()(src);
        Eigen::VectorXd h = dinv_sqrt.cwiseProduct(solver.eigenvectors().col(src));
        // Largest-magnitude entry positive; first index wins magnitude ties.
        Eigen::Index arg = 0;
        h.cwiseAbs().maxCoeff(&arg);
        if (h(arg) < 0.0) h = -h;
        sol.h.col(l) = h;
    }
    return sol;
}

double objective_value(const EigenSolution& sol, const std::vector<Eigen::MatrixXd>& omega_c,
                       const std::vector<Eigen::VectorXd>& degrees_per_view,
                       const FusionConfig& cfg) {
    if (omega_c.size() != degrees_per_view.size()) {
        throw DimensionError("objective_value: views mismatch between kernels and degrees");
    }
    const Eigen::MatrixXd a = fuse_kernels(omega_c, cfg);
    Eigen::VectorXd dsum = degrees_per_view.front();
    for (std::size_t v = 1; v < degrees_per_view.size(); ++v) dsum += degrees_per_view[v];
    if (a.rows() != sol.h.rows()) throw DimensionError("objective_value: H row mismatch");

    double j = 0.0;
    for (Eigen::Index l = 0; l < sol.h.cols(); ++l) {
        const Eigen::VectorXd h = sol.h.col(l);
        j += -0.5 / cfg.eta * h.dot(a * h);
        j += 0.5 * sol.lambdas(l) * h.dot(dsum.cwiseProduct(h));
    }
    return j;
}

bool hadamard_equals_tensor_oracle(const std::vector<Eigen::MatrixXd>& feature_maps, double tol) {
    if (feature_maps.empty()) throw ConfigError("tensor oracle: no views");
    const Eigen::Index n = feature_maps.front().rows();
    std::size_t tensor_size = 1;
    for (const auto& phi : feature_maps) {
        if (phi.rows() != n) throw DimensionError("tensor oracle: sample count mismatch");
        tensor_size *= static_cast<std::size_t>(phi.cols());
        if (tensor_size > 1000000) {
            throw ResourceError("tensor oracle: materialized tensor would exceed 10^6 entries");
        }
    }
    const auto views = feature_maps.size();

    // Rank-1 tensor per sample: iterated Kronecker product of its per-view rows.
    auto materialize = [&](Eigen::Index i) {
        Eigen::VectorXd t = feature_maps[0].row(i).transpose();
        for (std::size_t v = 1; v < views; ++v) {
            const Eigen::VectorXd next = feature_maps[v].row(i).transpose();
            Eigen::VectorXd out(t.size() * next.size());
            for (Eigen::Index p = 0; p < t.size(); ++p) {
                out.segment(p * next.size(), next.size()) = t(p) * next;
            }
            t = std::move(out);
        }
        return t;
    };

    std::vector<Eigen::VectorXd> tensors;
    tensors.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) tensors.push_back(materialize(i));

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double lhs = tensors[static_cast<std::size_t>(i)].dot(
                tensors[static_cast<std::size_t>(j)]);
            double rhs = 1.0;
            for (std::size_t v = 0; v < views; ++v) {
                rhs *= feature_maps[v].row(i).dot(feature_maps[v].row(j));
            }
            if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(rhs))) return false;
        }
    }
    return true;
}

double sym_spectral_norm(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    if (n <= 256) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    // Power iteration on a symmetric matrix converges to |lambda|_max; a fixed
    // deterministic start and iteration count can only underestimate slightly.
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) += 1e-3 * static_cast<double>(i % 17);
    v.normalize();
    double norm = 0.0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd w = a * v;
        norm = w.norm();
        if (norm == 0.0) return 0.0;
        v = w / norm;
    }
    return norm;
}

}  // namespace tmvksc
