#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tmvksc {

// How the per-view centered kernels are combined into one operator:
//   A = rho * sum_v kappa_v * Omega_c[v]  +  (1 - rho) * hadamard_v Omega_c[v]
// rho = 1 is the pure matrix (sum) model, rho = 0 the pure tensor (elementwise
// product) model. eta rescales the eigenvalues only and never enters A.
struct FusionConfig {
    double rho = 1.0;
    Eigen::VectorXd kappa;  // empty -> all ones
    double eta = 1.0;

    void validate(Eigen::Index views) const;
    Eigen::VectorXd kappa_or_ones(Eigen::Index views) const;
};

// Top eigenpairs of diag(dsum)^-1 A.
//   h columns satisfy h^T diag(dsum) h = 1
//   lambdas descending
struct EigenSolution {
    Eigen::MatrixXd h;
    Eigen::VectorXd lambdas;
    Eigen::VectorXd dsum;
};

Eigen::MatrixXd fuse_kernels(const std::vector<Eigen::MatrixXd>& omega_c, const FusionConfig& cfg);

// Solves via the symmetric reduction S = diag(dsum)^-1/2 A diag(dsum)^-1/2,
// keeping the top q eigenpairs. Sign convention: the largest-magnitude entry
// of each column of h is positive (first index on magnitude ties). Eigenvalue
// ties keep the order produced by the symmetric solve. Throws
// DegenerateSpectrumError when A is numerically zero.
EigenSolution solve_latent(const Eigen::MatrixXd& a, const Eigen::VectorXd& dsum, int q);

// Dual-substituted objective
//   J = -(1/(2 eta)) sum_l h_l^T A h_l + (1/2) sum_l lambda_l h_l^T diag(dsum) h_l
// which vanishes at exact eigenpairs of the eta-scaled problem. The solution's
// lambdas must correspond to (1/eta) diag(dsum)^-1 A (solve_latent output is
// the eta = 1 case).
double objective_value(const EigenSolution& sol, const std::vector<Eigen::MatrixXd>& omega_c,
                       const std::vector<Eigen::VectorXd>& degrees_per_view,
                       const FusionConfig& cfg);

// Test oracle: materializes the rank-1 outer-product tensors of the given
// feature maps and checks <Psi_i, Psi_j> against prod_v (phi_v(x_i) . phi_v(x_j))
// entry by entry. Throws ResourceError when prod_v d_v exceeds 10^6.
bool hadamard_equals_tensor_oracle(const std::vector<Eigen::MatrixXd>& feature_maps,
                                   double tol = 1e-12);

// Spectral norm of a symmetric matrix: exact for small matrices, power
// iteration (a slight underestimate at worst) for large ones.
double sym_spectral_norm(const Eigen::MatrixXd& a);

}  // namespace tmvksc
