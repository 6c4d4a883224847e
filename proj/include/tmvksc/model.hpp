#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "tmvksc/data.hpp"
#include "tmvksc/encoding.hpp"
#include "tmvksc/kernels.hpp"
#include "tmvksc/spectral.hpp"

namespace tmvksc {

struct FitOptions {
    int k = 2;
    int q = 0;  // extra latent components for reporting; 0 -> k-1
    Centering centering = Centering::DegreeWeighted;
    FusionConfig fusion;
    Eigen::VectorXd beta;  // empty -> 1/V
};

// Fitted state. Training inputs are retained per view to form test kernels;
// in fixed-size mode only the m subset rows are kept.
struct Model {
    std::vector<KernelSpec> specs;
    Centering centering = Centering::DegreeWeighted;
    FusionConfig fusion;
    Eigen::VectorXd beta;
    int k = 2;
    int q = 1;

    std::vector<Eigen::MatrixXd> train_x;
    std::vector<CenteringStats> stats;
    std::vector<Eigen::VectorXd> degrees;  // per-view degree diagonals
    Eigen::MatrixXd h;                     // N x q
    Eigen::VectorXd lambdas;               // length q, eigenvalues of the eta-scaled problem
    Codebook codebook;
    std::vector<Codebook> per_view_codebooks;  // diagnostic, individual assignment
    std::vector<std::int64_t> subset_indices;  // empty unless fixed-size

    Eigen::Index train_n() const { return h.rows(); }
    Eigen::Index view_count() const { return static_cast<Eigen::Index>(specs.size()); }
};

Model fit(const ViewDataset& data, const std::vector<KernelSpec>& specs, const FitOptions& opts);

// Out-of-sample assignment with the training codebook. On the training data
// this reproduces the training labels exactly (same computation path).
ClusterAssignment predict(const Model& model, const ViewDataset& data);

// Mean score variables for the given samples (N_te x (k-1)).
ScoreBlock predict_scores(const Model& model, const ViewDataset& data);

// Diagnostic: individual per-view assignment with per-view codebooks.
std::vector<ClusterAssignment> predict_per_view(const Model& model, const ViewDataset& data);

// Trains on m uniformly drawn samples (without replacement, seeded) and
// infers all N through the out-of-sample path.
std::pair<Model, ClusterAssignment> fit_fixed_size(const ViewDataset& data,
                                                   const std::vector<KernelSpec>& specs,
                                                   const FitOptions& opts, std::int64_t m,
                                                   std::uint64_t seed);

struct ExplainedVariance {
    Eigen::VectorXd share;       // lambda_l / sum of positive lambdas; 0 for negative ones
    Eigen::VectorXd cumulative;
    int negative_count = 0;      // eigenvalues excluded from the shares
};

ExplainedVariance explained_variance_shares(const Eigen::VectorXd& lambdas);
ExplainedVariance explained_variance(const Model& model);

// Stationarity diagnostic: |J| of the fitted solution relative to ||A||_2.
double objective_residual(const Model& model);

}  // namespace tmvksc
