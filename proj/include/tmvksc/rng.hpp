#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace tmvksc {

// Deterministic random stream used by the synthetic generators and the
// fixed-size subset sampler. The exact algorithm is part of the data
// reproducibility contract (see README):
//   engine      mt19937_64 seeded directly with the user seed
//   uniform01   (next() >> 11) * 2^-53, in [0, 1)
//   gauss_pair  basic Box-Muller on (1 - u1, u2)
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // One Box-Muller draw: z0 = r*cos(theta), z1 = r*sin(theta) with
    // r = sqrt(-2 ln(1 - u1)) and theta = 2*pi*u2.
    std::pair<double, double> gauss_pair() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    // Index in [0, bound), bound >= 1.
    std::uint64_t index_below(std::uint64_t bound) {
        auto idx = static_cast<std::uint64_t>(uniform01() * static_cast<double>(bound));
        return idx >= bound ? bound - 1 : idx;
    }

    // Partial Fisher-Yates: m distinct indices drawn uniformly from [0, n).
    // m == n short-circuits to the identity selection.
    std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t m) {
        std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
        if (m >= n) return pool;
        for (std::int64_t i = 0; i < m; ++i) {
            const auto j = i + static_cast<std::int64_t>(index_below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        pool.resize(static_cast<std::size_t>(m));
        return pool;
    }

private:
    std::mt19937_64 engine_;
};

// FNV-1a 64-bit checksum; used for the golden dataset files.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace tmvksc
