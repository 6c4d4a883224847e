#include "tmvksc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "tmvksc/errors.hpp"

namespace tmvksc {

namespace {

std::vector<int> dense_index(std::span<const int> labels, int& k) {
    std::unordered_map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(labels[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    k = static_cast<int>(remap.size());
    return out;
}

double comb2(std::int64_t n) {
    return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

}  // namespace

Contingency Contingency::from_labels(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) {
        throw DimensionError("contingency: labelings of length " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()));
    }
    if (a.size() < 2) throw DimensionError("contingency: need at least 2 samples");

    Contingency c;
    const std::vector<int> ia = dense_index(a, c.rows);
    const std::vector<int> ib = dense_index(b, c.cols);
    c.n = static_cast<std::int64_t>(a.size());
    c.table.assign(static_cast<std::size_t>(c.rows) * c.cols, 0);
    c.row_sums.assign(static_cast<std::size_t>(c.rows), 0);
    c.col_sums.assign(static_cast<std::size_t>(c.cols), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++c.table[static_cast<std::size_t>(ia[i]) * c.cols + ib[i]];
        ++c.row_sums[static_cast<std::size_t>(ia[i])];
        ++c.col_sums[static_cast<std::size_t>(ib[i])];
    }
    return c;
}

double ari(std::span<const int> a, std::span<const int> b) {
    const Contingency c = Contingency::from_labels(a, b);

    double sum_cells = 0.0;
    for (const auto v : c.table) sum_cells += comb2(v);
    double sum_rows = 0.0;
    for (const auto v : c.row_sums) sum_rows += comb2(v);
    double sum_cols = 0.0;
    for (const auto v : c.col_sums) sum_cols += comb2(v);

    const double expected = sum_rows * sum_cols / comb2(c.n);
    const double maximum = 0.5 * (sum_rows + sum_cols);
    const double denom = maximum - expected;
    // denom == 0 only when both partitions are trivial (both single-cluster or
    // both all-singletons), i.e. identical.
    if (denom == 0.0) return 1.0;
    return (sum_cells - expected) / denom;
}

double nmi(std::span<const int> a, std::span<const int> b) {
    const Contingency c = Contingency::from_labels(a, b);
    const auto n = static_cast<double>(c.n);

    double ha = 0.0;
    for (const auto v : c.row_sums) {
        if (v > 0) {
            const double p = static_cast<double>(v) / n;
            ha -= p * std::log(p);
        }
    }
    double hb = 0.0;
    for (const auto v : c.col_sums) {
        if (v > 0) {
            const double p = static_cast<double>(v) / n;
            hb -= p * std::log(p);
        }
    }
    if (ha <= 0.0 || hb <= 0.0) {
        // A zero-entropy side is a single cluster; identical up to relabeling
        // iff the other side is too.
        return (ha <= 0.0 && hb <= 0.0) ? 1.0 : 0.0;
    }

    // Identical up to relabeling: the contingency is a (padded) permutation
    // matrix. Return exactly 1 rather than within an ulp of it.
    if (c.rows == c.cols) {
        bool permutation = true;
        for (int i = 0; i < c.rows && permutation; ++i) {
            int nonzero = 0;
            for (int j = 0; j < c.cols; ++j) nonzero += c.at(i, j) > 0;
            permutation = nonzero == 1;
        }
        for (int j = 0; j < c.cols && permutation; ++j) {
            int nonzero = 0;
            for (int i = 0; i < c.rows; ++i) nonzero += c.at(i, j) > 0;
            permutation = nonzero == 1;
        }
        if (permutation) return 1.0;
    }

    double mi = 0.0;
    for (int i = 0; i < c.rows; ++i) {
        for (int j = 0; j < c.cols; ++j) {
            const auto nij = c.at(i, j);
            if (nij > 0) {
                const double pij = static_cast<double>(nij) / n;
                mi += pij * std::log(static_cast<double>(nij) * n /
                                     (static_cast<double>(c.row_sums[static_cast<std::size_t>(i)]) *
                                      static_cast<double>(c.col_sums[static_cast<std::size_t>(j)])));
            }
        }
    }
    const double value = mi / std::sqrt(ha * hb);
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace tmvksc
