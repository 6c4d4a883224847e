#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

namespace tmvksc {

enum class KernelKind { Rbf, Linear, NormalizedPoly };

// Kernel function configuration for one view.
//   Rbf             K(x,y) = exp(-||x - y||^2 / sigma2)
//   Linear          K(x,y) = x . y
//   NormalizedPoly  K(x,y) = (x.y + t)^degree / sqrt((x.x + t)^degree (y.y + t)^degree)
struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    double sigma2 = 1.0;  // RBF bandwidth, units of squared input distance
    int degree = 2;       // NormalizedPoly exponent, >= 1
    double t = 1.0;       // NormalizedPoly offset, >= 0

    // Throws ConfigError on out-of-range parameters.
    void validate() const;

    static KernelSpec rbf(double sigma2);
    static KernelSpec linear();
    static KernelSpec normalized_poly(int degree, double t);

    // "rbf:<sigma2>" | "linear" | "normpoly:<degree>:<t>"
    static KernelSpec parse(const std::string& text);
    std::string to_string() const;
};

// Dense Gram matrix; symmetric by construction (each unordered pair is
// evaluated once and mirrored).
struct KernelMatrix {
    Eigen::MatrixXd omega;

    Eigen::Index n() const { return omega.rows(); }
};

enum class Centering { Plain, DegreeWeighted };

// Weighted-mean centering cache: weight vector s (sum 1), the row s^T Omega
// and the scalar s^T Omega s. Enough to center any test kernel block against
// the same training mean.
struct CenteringStats {
    Eigen::VectorXd s;
    Eigen::VectorXd k_row;
    double k_scalar = 0.0;
};

// Diagonal of the degree matrix, d_i = sum_j Omega_ji.
struct DegreeMatrix {
    Eigen::VectorXd d;
};

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

// Omega_ij = K(x_i, x_j) over the rows of X. Row blocks may be computed in
// parallel; entries are independent so the result matches the sequential
// order bit for bit.
KernelMatrix gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& x);

// Rectangular block K(x_test_i, x_train_j); used by the out-of-sample path.
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& x_test,
                           const Eigen::MatrixXd& x_train);

// Throws NonPositiveDegreeError if any column sum is <= 0.
DegreeMatrix degree_matrix(const KernelMatrix& k);

// Double centering Omega_c = (I - 1 s^T) Omega (I - s 1^T) with
//   Plain           s = 1/N
//   DegreeWeighted  s = D^-1 1 / (1^T D^-1 1)
std::pair<Eigen::MatrixXd, CenteringStats> center_gram(const KernelMatrix& k, Centering mode,
                                                       const DegreeMatrix* degrees = nullptr);

// Centers a test block against the training mean:
//   Omega_c,test = (Omega_test - 1 (s^T Omega)) (I - s 1^T)
Eigen::MatrixXd center_gram_test(const Eigen::MatrixXd& k_test, const CenteringStats& stats);

}  // namespace tmvksc
