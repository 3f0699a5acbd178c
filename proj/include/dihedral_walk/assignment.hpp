// assignment.hpp
// Minimum-cost perfect matching (Hungarian method, O(n^3)) and its use for
// pairing two eigenvalue multisets.

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"

namespace dihedral_walk {

// cost is n x n row-major. Returns assignment[row] = column.
[[nodiscard]] inline std::vector<std::size_t> min_cost_assignment(std::span<const double> cost, std::size_t n) {
    if (cost.size() != n * n) throw dimension_error("cost matrix must be n x n");
    if (n == 0) return {};
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; p[j] = row matched to column j, column 0 is virtual.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
    return assignment;
}

struct EigenvaluePairing {
    std::vector<std::size_t> partner;  // partner[i] indexes the second multiset
    double max_distance = 0.0;
    double total_distance = 0.0;
};

[[nodiscard]] inline EigenvaluePairing pair_eigenvalues(std::span<const std::complex<double>> a,
                                                        std::span<const std::complex<double>> b) {
    if (a.size() != b.size()) throw dimension_error("eigenvalue multisets differ in size");
    const std::size_t n = a.size();
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::abs(a[i] - b[j]);
    EigenvaluePairing r;
    r.partner = min_cost_assignment(cost, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = cost[i * n + r.partner[i]];
        r.max_distance = std::max(r.max_distance, d);
        r.total_distance += d;
    }
    return r;
}

}  // namespace dihedral_walk
