// state.hpp
// Walker state vectors. Both the dihedral walk and the memory walk live in a
// 4N-dimensional space indexed by (coin, register bit, position):
//
//   dihedral: |c, s, j>   c = coin (0 = R, 1 = F), s = flip bit, j in Z_N
//   memory:   |c, m, v>   m = previous move direction, v = cycle edge {v, v+1}
//
// with flat index c*2N + bit*N + position. The basis tag keeps the two spaces
// apart at compile time.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace dihedral_walk {

using cplx = std::complex<double>;

struct DihedralBasis {
    static constexpr const char* name = "dihedral";
};

struct MemoryBasis {
    static constexpr const char* name = "memory";
};

[[nodiscard]] constexpr std::size_t basis_index(int c, int bit, int pos, std::size_t n) noexcept {
    return static_cast<std::size_t>(c) * 2 * n + static_cast<std::size_t>(bit) * n + static_cast<std::size_t>(pos);
}

struct BasisLabel {
    int c;
    int bit;
    int pos;
};

[[nodiscard]] constexpr BasisLabel basis_label(std::size_t idx, std::size_t n) noexcept {
    return {static_cast<int>(idx / (2 * n)), static_cast<int>((idx / n) % 2), static_cast<int>(idx % n)};
}

[[nodiscard]] inline double norm_squared(std::span<const cplx> v) noexcept {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

template <class Basis>
class BasicState {
public:
    static constexpr double norm_tolerance = 1e-12;

    // Takes ownership of already-normalized amplitudes.
    BasicState(GroupOrder n, std::vector<cplx> amplitudes) : order_(n), amp_(std::move(amplitudes)) {
        check_length();
        const double ns = dihedral_walk::norm_squared(amp_);
        if (std::abs(ns - 1.0) > norm_tolerance) {
            throw normalization_error("state has squared norm " + std::to_string(ns));
        }
    }

    // Rescales any nonzero vector to unit norm.
    [[nodiscard]] static BasicState normalized(GroupOrder n, std::vector<cplx> amplitudes) {
        const double ns = dihedral_walk::norm_squared(amplitudes);
        if (!(ns > 0.0) || !std::isfinite(ns)) throw normalization_error("cannot normalize a zero vector");
        const double inv = 1.0 / std::sqrt(ns);
        for (auto& a : amplitudes) a *= inv;
        return BasicState(n, std::move(amplitudes), unchecked{});
    }

    [[nodiscard]] static BasicState basis_state(GroupOrder n, int c, int bit, int pos) {
        std::vector<cplx> a(4 * n.size());
        a.at(basis_index(c, bit, mod(pos, n.value()), n.size())) = 1.0;
        return BasicState(n, std::move(a), unchecked{});
    }

    // Gaussian amplitudes, normalized. Deterministic for a given engine state.
    template <class Rng>
    [[nodiscard]] static BasicState random(GroupOrder n, Rng& rng) {
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<cplx> a(4 * n.size());
        for (auto& x : a) {
            const double re = g(rng);
            const double im = g(rng);
            x = {re, im};
        }
        return normalized(n, std::move(a));
    }

    [[nodiscard]] GroupOrder order() const noexcept { return order_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amp_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept { return amp_; }
    [[nodiscard]] const std::vector<cplx>& vector() const noexcept { return amp_; }
    [[nodiscard]] cplx amplitude(int c, int bit, int pos) const {
        return amp_.at(basis_index(c, bit, pos, order_.size()));
    }
    [[nodiscard]] cplx operator[](std::size_t i) const { return amp_.at(i); }
    [[nodiscard]] double norm_squared() const noexcept { return dihedral_walk::norm_squared(amp_); }

    // Unitary maps call this; the norm is not re-validated.
    struct unchecked {};
    BasicState(GroupOrder n, std::vector<cplx> amplitudes, unchecked) : order_(n), amp_(std::move(amplitudes)) {
        check_length();
    }

private:
    void check_length() const {
        if (amp_.size() != 4 * order_.size()) {
            throw dimension_error("state for N=" + std::to_string(order_.value()) + " needs " +
                                  std::to_string(4 * order_.size()) + " amplitudes, got " +
                                  std::to_string(amp_.size()));
        }
    }

    GroupOrder order_;
    std::vector<cplx> amp_;
};

using WalkState = BasicState<DihedralBasis>;
using MemoryWalkState = BasicState<MemoryBasis>;

// Sum of |amplitude|^2 over the coin, indexed bit*N + position.
template <class Basis>
[[nodiscard]] std::vector<double> vertex_probabilities(const BasicState<Basis>& psi) {
    const std::size_t nn = psi.order().size();
    std::vector<double> p(2 * nn, 0.0);
    const auto a = psi.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) p[i % (2 * nn)] += std::norm(a[i]);
    return p;
}

[[nodiscard]] inline double max_abs_difference(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw dimension_error("vectors differ in length");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace dihedral_walk
