// walk.hpp
// Coined quantum walk on Cayley(D_N): coin, shift, step operator U = S (C (x) I)
// and direct evolution by repeated sparse application.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "group.hpp"
#include "state.hpp"

namespace dihedral_walk {

class CoinOperator {
public:
    static constexpr double unitarity_tolerance = 1e-12;

    explicit CoinOperator(const Eigen::Matrix2cd& m) : m_(m) {
        const double dev = (m_.adjoint() * m_ - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
        if (!(dev < unitarity_tolerance)) {
            throw validation_error("coin is not unitary (max |C^dag C - I| = " + std::to_string(dev) + ")");
        }
    }

    [[nodiscard]] const Eigen::Matrix2cd& matrix() const noexcept { return m_; }
    [[nodiscard]] cplx operator()(int row, int col) const { return m_(row, col); }

    [[nodiscard]] std::array<cplx, 2> apply(std::array<cplx, 2> v) const noexcept {
        return {m_(0, 0) * v[0] + m_(0, 1) * v[1], m_(1, 0) * v[0] + m_(1, 1) * v[1]};
    }

private:
    Eigen::Matrix2cd m_;
};

[[nodiscard]] inline CoinOperator hadamard_coin() {
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd m;
    m << h, h, h, -h;
    return CoinOperator{m};
}

[[nodiscard]] inline bool is_hadamard(const CoinOperator& c) {
    return (c.matrix() - hadamard_coin().matrix()).cwiseAbs().maxCoeff() < 1e-15;
}

// Haar-ish random U(2) coin from a QR of a Gaussian matrix; for fixtures.
template <class Rng>
[[nodiscard]] CoinOperator random_coin(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Matrix2cd z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double re = g(rng);
            const double im = g(rng);
            z(i, j) = {re, im};
        }
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
    Eigen::Matrix2cd q = qr.householderQ();
    return CoinOperator{q};
}

// Permutation of the 4N basis indices: image[i] is where basis vector i goes.
template <class Basis>
class BasicShift {
public:
    BasicShift(GroupOrder n, std::vector<std::size_t> image) : order_(n), image_(std::move(image)) {
        if (image_.size() != 4 * n.size()) throw dimension_error("shift table has wrong length");
        std::vector<bool> hit(image_.size(), false);
        for (auto t : image_) {
            if (t >= image_.size() || hit[t]) throw validation_error("shift table is not a permutation");
            hit[t] = true;
        }
    }

    [[nodiscard]] GroupOrder order() const noexcept { return order_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return image_.size(); }
    [[nodiscard]] std::size_t image(std::size_t i) const { return image_.at(i); }
    [[nodiscard]] const std::vector<std::size_t>& table() const noexcept { return image_; }

    [[nodiscard]] BasicState<Basis> apply(const BasicState<Basis>& psi) const {
        if (psi.order() != order_) throw order_mismatch_error("shift and state built for different N");
        std::vector<cplx> out(image_.size());
        const auto in = psi.amplitudes();
        for (std::size_t i = 0; i < image_.size(); ++i) out[image_[i]] = in[i];
        return {order_, std::move(out), typename BasicState<Basis>::unchecked{}};
    }

    [[nodiscard]] Eigen::MatrixXcd dense() const {
        const auto d = static_cast<Eigen::Index>(image_.size());
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
        for (std::size_t i = 0; i < image_.size(); ++i)
            m(static_cast<Eigen::Index>(image_[i]), static_cast<Eigen::Index>(i)) = 1.0;
        return m;
    }

    friend bool operator==(const BasicShift& a, const BasicShift& b) {
        return a.order_ == b.order_ && a.image_ == b.image_;
    }

private:
    GroupOrder order_;
    std::vector<std::size_t> image_;
};

using ShiftOperator = BasicShift<DihedralBasis>;

// |0,s,j> -> |0,s,j+(-1)^s>,  |1,s,j> -> |1,1-s,j>.
[[nodiscard]] inline ShiftOperator build_shift_operator(GroupOrder n) {
    const std::size_t nn = n.size();
    std::vector<std::size_t> image(4 * nn);
    for (std::size_t i = 0; i < image.size(); ++i) {
        const auto [c, s, j] = basis_label(i, nn);
        if (c == 0) {
            image[i] = basis_index(0, s, mod(j + (s == 0 ? 1 : -1), n.value()), nn);
        } else {
            image[i] = basis_index(1, 1 - s, j, nn);
        }
    }
    return {n, std::move(image)};
}

[[nodiscard]] inline WalkState apply_shift(const WalkState& psi) {
    return build_shift_operator(psi.order()).apply(psi);
}

// Index in the (s, j, c) ordering used by the block description of S.
[[nodiscard]] constexpr std::size_t block_index(int s, int j, int c, std::size_t n) noexcept {
    return static_cast<std::size_t>(s) * 2 * n + 2 * static_cast<std::size_t>(j) + static_cast<std::size_t>(c);
}

// Shift in (s, j, c) ordering assembled block by block, S = [A B; B C] with
// 2N x 2N blocks. Within a block, even local columns carry coin R and odd
// ones coin F:
//   A: R column 2j   -> row 2j+2 (mod 2N)   rotate forward on the s = 0 layer
//   B: F column 2j+1 -> same local row       flip to the other layer
//   C: R column 2j   -> row 2j-2 (mod 2N)   rotate backward on the s = 1 layer
[[nodiscard]] inline std::vector<std::size_t> block_shift_table(GroupOrder n) {
    const std::size_t nn = n.size();
    const std::size_t bw = 2 * nn;
    std::vector<std::size_t> image(4 * nn);
    for (std::size_t layer = 0; layer < 2; ++layer) {
        for (std::size_t local = 0; local < bw; ++local) {
            const std::size_t col = layer * bw + local;
            if (local % 2 == 0) {
                const std::size_t row = layer == 0 ? (local + 2) % bw : (local + bw - 2) % bw;
                image[col] = layer * bw + row;  // A or C, diagonal blocks
            } else {
                image[col] = (1 - layer) * bw + local;  // B, off-diagonal
            }
        }
    }
    return image;
}

// The block-built shift re-permuted into canonical (c, s, j) order.
[[nodiscard]] inline ShiftOperator build_block_shift_matrix(GroupOrder n) {
    const std::size_t nn = n.size();
    const auto block = block_shift_table(n);
    std::vector<std::size_t> to_canonical(4 * nn);
    for (int s = 0; s < 2; ++s)
        for (int j = 0; j < n.value(); ++j)
            for (int c = 0; c < 2; ++c) to_canonical[block_index(s, j, c, nn)] = basis_index(c, s, j, nn);

    std::vector<std::size_t> image(4 * nn);
    for (std::size_t b = 0; b < block.size(); ++b) image[to_canonical[b]] = to_canonical[block[b]];
    return {n, std::move(image)};
}

// Column-sparse 4N x 4N unitary: column i has exactly two entries, one per
// coin value, because the coin mixes c and the shift permutes.
template <class Basis>
class BasicStepOperator {
public:
    struct Entry {
        std::size_t row;
        cplx value;
    };

    BasicStepOperator(const BasicShift<Basis>& shift, const CoinOperator& coin)
        : order_(shift.order()), coin_(coin), columns_(shift.dimension()) {
        const std::size_t nn = order_.size();
        for (std::size_t col = 0; col < columns_.size(); ++col) {
            const auto [c, bit, pos] = basis_label(col, nn);
            for (int cp = 0; cp < 2; ++cp) {
                columns_[col][static_cast<std::size_t>(cp)] = {shift.image(basis_index(cp, bit, pos, nn)),
                                                              coin(cp, c)};
            }
        }
    }

    [[nodiscard]] GroupOrder order() const noexcept { return order_; }
    [[nodiscard]] const CoinOperator& coin() const noexcept { return coin_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return columns_.size(); }
    [[nodiscard]] const std::array<Entry, 2>& column(std::size_t i) const { return columns_.at(i); }

    // out = U in, for arbitrary (not necessarily normalized) vectors.
    void apply(std::span<const cplx> in, std::span<cplx> out) const {
        if (in.size() != columns_.size() || out.size() != columns_.size()) {
            throw dimension_error("vector length does not match operator dimension");
        }
        std::fill(out.begin(), out.end(), cplx{});
        for (std::size_t col = 0; col < columns_.size(); ++col) {
            const cplx x = in[col];
            if (x == cplx{}) continue;
            for (const auto& e : columns_[col]) out[e.row] += e.value * x;
        }
    }

    [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> in) const {
        std::vector<cplx> out(in.size());
        apply(in, out);
        return out;
    }

    [[nodiscard]] BasicState<Basis> apply(const BasicState<Basis>& psi) const {
        if (psi.order() != order_) throw order_mismatch_error("operator and state built for different N");
        return {order_, apply(psi.amplitudes()), typename BasicState<Basis>::unchecked{}};
    }

    [[nodiscard]] Eigen::MatrixXcd dense() const {
        const auto d = static_cast<Eigen::Index>(columns_.size());
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
        for (std::size_t col = 0; col < columns_.size(); ++col)
            for (const auto& e : columns_[col])
                m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(col)) += e.value;
        return m;
    }

    [[nodiscard]] double unitarity_deviation() const {
        const Eigen::MatrixXcd u = dense();
        return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    }

private:
    GroupOrder order_;
    CoinOperator coin_;
    std::vector<std::array<Entry, 2>> columns_;
};

using StepOperator = BasicStepOperator<DihedralBasis>;

[[nodiscard]] inline StepOperator build_step_operator(GroupOrder n, const CoinOperator& coin) {
    return {build_shift_operator(n), coin};
}

[[nodiscard]] inline StepOperator build_step_operator(GroupOrder n, const Eigen::Matrix2cd& coin) {
    return build_step_operator(n, CoinOperator{coin});
}

// psi_t = U^t psi_0 by t sparse applications.
template <class Basis>
[[nodiscard]] BasicState<Basis> evolve(const BasicState<Basis>& psi, const BasicStepOperator<Basis>& u, int steps) {
    if (steps < 0) throw validation_error("steps must be >= 0");
    if (psi.order() != u.order()) throw order_mismatch_error("operator and state built for different N");
    std::vector<cplx> cur(psi.amplitudes().begin(), psi.amplitudes().end());
    std::vector<cplx> next(cur.size());
    for (int t = 0; t < steps; ++t) {
        u.apply(cur, next);
        cur.swap(next);
    }
    return {psi.order(), std::move(cur), typename BasicState<Basis>::unchecked{}};
}

// Trajectory psi_0 .. psi_steps, calling f(step, state) for each.
template <class Basis, class F>
void for_each_step(const BasicState<Basis>& psi, const BasicStepOperator<Basis>& u, int steps, F&& f) {
    if (steps < 0) throw validation_error("steps must be >= 0");
    BasicState<Basis> cur = psi;
    f(0, cur);
    for (int t = 1; t <= steps; ++t) {
        cur = u.apply(cur);
        f(t, cur);
    }
}

// Initial condition families: a coin state times either a single vertex or
// the displaced vertex pair (|0, j> + |1, j+d>).
struct InitialSpec {
    enum class Vertex { single, pair };

    std::array<cplx, 2> coin{cplx{1.0}, cplx{0.0}};
    Vertex vertex = Vertex::single;
    int s = 0;  // for Vertex::single
    int j = 0;
    int d = 0;  // for Vertex::pair
};

[[nodiscard]] inline WalkState initial_state(GroupOrder n, const InitialSpec& spec) {
    if (spec.vertex == InitialSpec::Vertex::single && spec.s != 0 && spec.s != 1) {
        throw validation_error("flip bit must be 0 or 1");
    }
    const std::size_t nn = n.size();
    std::vector<cplx> a(4 * nn);
    for (int c = 0; c < 2; ++c) {
        const cplx cc = spec.coin[static_cast<std::size_t>(c)];
        if (spec.vertex == InitialSpec::Vertex::single) {
            a[basis_index(c, spec.s, mod(spec.j, n.value()), nn)] += cc;
        } else {
            a[basis_index(c, 0, mod(spec.j, n.value()), nn)] += cc;
            a[basis_index(c, 1, mod(static_cast<long long>(spec.j) + spec.d, n.value()), nn)] += cc;
        }
    }
    return WalkState::normalized(n, std::move(a));
}

}  // namespace dihedral_walk
