#include "tmvksc/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "tmvksc/errors.hpp"

namespace tmvksc {

namespace {

// Lexicographic order with +1 ranking before -1.
bool codeword_less(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i];  // +1 > -1 numerically, +1 sorts first
    }
    return false;
}

}  // namespace

ScoreBlock scores(const std::vector<Eigen::MatrixXd>& omega_c, const Eigen::MatrixXd& h,
                  const Eigen::VectorXd& beta) {
    const auto views = static_cast<Eigen::Index>(omega_c.size());
    if (views == 0) throw ConfigError("scores: no views");
    if (beta.size() != views) {
        throw DimensionError("scores: beta has " + std::to_string(beta.size()) + " entries for " +
                             std::to_string(views) + " views");
    }
    if (beta.minCoeff() < 0.0 || std::abs(beta.sum() - 1.0) > 1e-9) {
        throw ConfigError("scores: beta must be nonnegative and sum to 1");
    }
    for (const auto& m : omega_c) {
        if (m.cols() != h.rows()) {
            throw DimensionError("scores: kernel columns " + std::to_string(m.cols()) +
                                 " vs H rows " + std::to_string(h.rows()));
        }
    }

    ScoreBlock block;
    block.beta = beta;
    block.e.reserve(static_cast<std::size_t>(views));
    for (Eigen::Index v = 0; v < views; ++v) {
        block.e.push_back(omega_c[static_cast<std::size_t>(v)] * h);
    }
    block.e_mean = beta(0) * block.e[0];
    for (Eigen::Index v = 1; v < views; ++v) {
        block.e_mean += beta(v) * block.e[static_cast<std::size_t>(v)];
    }
    return block;
}

Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> sign_encode(const Eigen::MatrixXd& e) {
    Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> signs(e.rows(), e.cols());
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
        for (Eigen::Index i = 0; i < e.rows(); ++i) {
            signs(i, j) = e(i, j) >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
        }
    }
    return signs;
}

Codebook build_codebook(const Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>& signs,
                        int k) {
    if (k < 2) throw ConfigError("build_codebook: k must be >= 2");
    if (signs.rows() < k) {
        throw ConfigError("build_codebook: fewer rows than clusters");
    }
    std::map<std::vector<std::int8_t>, int, decltype(&codeword_less)> counts(&codeword_less);
    std::vector<std::int8_t> row(static_cast<std::size_t>(signs.cols()));
    for (Eigen::Index i = 0; i < signs.rows(); ++i) {
        for (Eigen::Index j = 0; j < signs.cols(); ++j) {
            row[static_cast<std::size_t>(j)] = signs(i, j);
        }
        ++counts[row];
    }
    if (static_cast<int>(counts.size()) < k) {
        throw InsufficientCodewordsError("only " + std::to_string(counts.size()) +
                                         " distinct sign patterns for k = " + std::to_string(k));
    }

    std::vector<std::pair<std::vector<std::int8_t>, int>> ranked(counts.begin(), counts.end());
    // Map iteration is already in the lexicographic tie order; stable sort by
    // count keeps it for equal counts.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    Codebook book;
    book.codewords.reserve(static_cast<std::size_t>(k));
    book.counts.reserve(static_cast<std::size_t>(k));
    for (int p = 0; p < k; ++p) {
        book.codewords.push_back(ranked[static_cast<std::size_t>(p)].first);
        book.counts.push_back(ranked[static_cast<std::size_t>(p)].second);
    }
    return book;
}

ClusterAssignment assign(const Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>& signs,
                         const Codebook& codebook) {
    if (codebook.codewords.empty()) throw ConfigError("assign: empty codebook");
    const auto width = codebook.codewords.front().size();
    if (static_cast<std::size_t>(signs.cols()) != width) {
        throw DimensionError("assign: sign width " + std::to_string(signs.cols()) +
                             " vs codeword width " + std::to_string(width));
    }

    ClusterAssignment out;
    out.labels.resize(static_cast<std::size_t>(signs.rows()));
    out.hamming.resize(static_cast<std::size_t>(signs.rows()));
    for (Eigen::Index i = 0; i < signs.rows(); ++i) {
        int best = 0;
        int best_dist = static_cast<int>(width) + 1;
        for (std::size_t p = 0; p < codebook.codewords.size(); ++p) {
            int dist = 0;
            const auto& cw = codebook.codewords[p];
            for (std::size_t j = 0; j < width; ++j) {
                dist += signs(i, static_cast<Eigen::Index>(j)) != cw[j];
            }
            if (dist < best_dist) {
                best_dist = dist;
                best = static_cast<int>(p);
            }
        }
        out.labels[static_cast<std::size_t>(i)] = best;
        out.hamming[static_cast<std::size_t>(i)] = best_dist;
    }
    return out;
}

}  // namespace tmvksc
