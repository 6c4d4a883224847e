#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tmvksc {

// Cross-tabulation of two labelings over the same samples.
struct Contingency {
    std::vector<std::int64_t> table;  // row-major, r x c
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t n = 0;
    int rows = 0;
    int cols = 0;

    std::int64_t at(int i, int j) const { return table[static_cast<std::size_t>(i) * cols + j]; }

    static Contingency from_labels(std::span<const int> a, std::span<const int> b);
};

// Hubert-Arabie adjusted Rand index in [-1, 1]; 1 iff the partitions are
// identical up to relabeling.
double ari(std::span<const int> a, std::span<const int> b);

// Mutual information normalized by sqrt(H(a) H(b)) (entropies in nats),
// in [0, 1]. When either entropy is zero: 1 if the partitions are identical
// up to relabeling, else 0.
double nmi(std::span<const int> a, std::span<const int> b);

}  // namespace tmvksc
