#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace tmvksc {

// Per-view score variables e[v] = Omega_c[v] * H and their beta-weighted mean.
struct ScoreBlock {
    std::vector<Eigen::MatrixXd> e;
    Eigen::MatrixXd e_mean;
    Eigen::VectorXd beta;
};

// The k most frequent sign patterns of the training scores, ordered by
// descending count; count ties break lexicographically with +1 before -1.
struct Codebook {
    std::vector<std::vector<std::int8_t>> codewords;
    std::vector<int> counts;

    int k() const { return static_cast<int>(codewords.size()); }
};

struct ClusterAssignment {
    std::vector<int> labels;   // in [0, k)
    std::vector<int> hamming;  // distance to the chosen codeword
};

// beta must be nonnegative and sum to 1 (within 1e-9).
ScoreBlock scores(const std::vector<Eigen::MatrixXd>& omega_c, const Eigen::MatrixXd& h,
                  const Eigen::VectorXd& beta);

// Entrywise sign with sign(0) := +1.
Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> sign_encode(const Eigen::MatrixXd& e);

// Throws InsufficientCodewordsError when there are fewer than k distinct rows.
Codebook build_codebook(const Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>& signs,
                        int k);

// Nearest codeword by Hamming distance; ties go to the lower codeword index.
ClusterAssignment assign(const Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>& signs,
                         const Codebook& codebook);

}  // namespace tmvksc
