// spectral.hpp
// Momentum-space analysis of the dihedral walk.
//
// Group the four amplitudes at position n into
//   Phi(n) = (<0,0,n|psi>, <0,1,n|psi>, <1,0,n|psi>, <1,1,n|psi>)
// so that one step reads
//   Phi'(n) = M1 Phi(n-1) + M2 Phi(n+1) + M3 Phi(n).
// With the transform Phi~(k) = sum_n e^{-2 pi i k n / N} Phi(n) each mode
// evolves independently under
//   M_k = A M1 + conj(A) M2 + M3,   A = e^{-2 pi i k / N},
// and the inverse (1/N) sum_k e^{+2 pi i k n / N} puts mode k on the spatial
// vector kappa_k = N^{-1/2} sum_j w^{jk} |j>, w = e^{2 pi i / N}.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "assignment.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "parallel.hpp"
#include "state.hpp"
#include "walk.hpp"

namespace dihedral_walk {

using AmplitudeQuadruple = Eigen::Vector4cd;

// e^{sign * 2 pi i (num mod N) / N}, reduced first so large k*n stays exact.
[[nodiscard]] inline cplx root_of_unity(long long num, int n, int sign = 1) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod(num, n)) / n;
    return std::polar(1.0, sign * angle);
}

[[nodiscard]] inline std::vector<AmplitudeQuadruple> quadruples(std::span<const cplx> amplitudes, GroupOrder n) {
    const std::size_t nn = n.size();
    if (amplitudes.size() != 4 * nn) throw dimension_error("expected 4N amplitudes");
    std::vector<AmplitudeQuadruple> out(nn);
    for (std::size_t pos = 0; pos < nn; ++pos)
        for (std::size_t a = 0; a < 4; ++a) out[pos](static_cast<Eigen::Index>(a)) = amplitudes[a * nn + pos];
    return out;
}

[[nodiscard]] inline std::vector<cplx> flatten(std::span<const AmplitudeQuadruple> q) {
    const std::size_t nn = q.size();
    std::vector<cplx> out(4 * nn);
    for (std::size_t pos = 0; pos < nn; ++pos)
        for (std::size_t a = 0; a < 4; ++a) out[a * nn + pos] = q[pos](static_cast<Eigen::Index>(a));
    return out;
}

struct LocalUpdateMatrices {
    Eigen::Matrix4cd m1;  // acts on Phi(n-1)
    Eigen::Matrix4cd m2;  // acts on Phi(n+1)
    Eigen::Matrix4cd m3;  // acts on Phi(n)
};

// For the Hadamard coin these are the three sparse 1/sqrt(2) matrices; other
// coins fill the same pattern with their entries.
[[nodiscard]] inline LocalUpdateMatrices local_update_matrices(const CoinOperator& coin = hadamard_coin()) {
    LocalUpdateMatrices m{Eigen::Matrix4cd::Zero(), Eigen::Matrix4cd::Zero(), Eigen::Matrix4cd::Zero()};
    // components: 0 = (c0,s0), 1 = (c0,s1), 2 = (c1,s0), 3 = (c1,s1)
    m.m1(0, 0) = coin(0, 0);
    m.m1(0, 2) = coin(0, 1);
    m.m2(1, 1) = coin(0, 0);
    m.m2(1, 3) = coin(0, 1);
    m.m3(2, 1) = coin(1, 0);
    m.m3(2, 3) = coin(1, 1);
    m.m3(3, 0) = coin(1, 0);
    m.m3(3, 2) = coin(1, 1);
    return m;
}

// One walk step computed position by position from the local recursion.
[[nodiscard]] inline std::vector<cplx> apply_local_update(const LocalUpdateMatrices& m, std::span<const cplx> amplitudes,
                                                          GroupOrder n) {
    const auto phi = quadruples(amplitudes, n);
    const int nn = n.value();
    std::vector<AmplitudeQuadruple> next(phi.size());
    for (int pos = 0; pos < nn; ++pos) {
        next[static_cast<std::size_t>(pos)] = m.m1 * phi[static_cast<std::size_t>(mod(pos - 1, nn))] +
                                              m.m2 * phi[static_cast<std::size_t>(mod(pos + 1, nn))] +
                                              m.m3 * phi[static_cast<std::size_t>(pos)];
    }
    return flatten(next);
}

[[nodiscard]] inline std::vector<AmplitudeQuadruple> fourier_forward(std::span<const cplx> amplitudes, GroupOrder n) {
    const auto phi = quadruples(amplitudes, n);
    const int nn = n.value();
    std::vector<AmplitudeQuadruple> modes(phi.size(), AmplitudeQuadruple::Zero());
    for (int k = 0; k < nn; ++k)
        for (int pos = 0; pos < nn; ++pos)
            modes[static_cast<std::size_t>(k)] += root_of_unity(static_cast<long long>(k) * pos, nn, -1) *
                                                  phi[static_cast<std::size_t>(pos)];
    return modes;
}

[[nodiscard]] inline std::vector<AmplitudeQuadruple> fourier_forward(const WalkState& psi) {
    return fourier_forward(psi.amplitudes(), psi.order());
}

// Exact inverse of fourier_forward. Returns raw amplitudes (not normalized).
[[nodiscard]] inline std::vector<cplx> fourier_inverse(std::span<const AmplitudeQuadruple> modes, GroupOrder n) {
    const int nn = n.value();
    if (modes.size() != n.size()) {
        throw dimension_error("expected " + std::to_string(nn) + " Fourier modes, got " +
                              std::to_string(modes.size()));
    }
    std::vector<AmplitudeQuadruple> phi(modes.size(), AmplitudeQuadruple::Zero());
    for (int pos = 0; pos < nn; ++pos) {
        for (int k = 0; k < nn; ++k)
            phi[static_cast<std::size_t>(pos)] +=
                root_of_unity(static_cast<long long>(k) * pos, nn, +1) * modes[static_cast<std::size_t>(k)];
        phi[static_cast<std::size_t>(pos)] /= static_cast<double>(nn);
    }
    return flatten(phi);
}

[[nodiscard]] inline WalkState fourier_inverse_state(std::span<const AmplitudeQuadruple> modes, GroupOrder n) {
    return WalkState{n, fourier_inverse(modes, n)};
}

struct ReducedMatrix {
    int k = 0;
    cplx a;  // e^{-2 pi i k / N}
    Eigen::Matrix4cd matrix;
};

[[nodiscard]] inline ReducedMatrix reduced_matrix(int k, GroupOrder n, const CoinOperator& coin = hadamard_coin()) {
    if (k < 0 || k >= n.value()) throw validation_error("momentum index out of range");
    const auto m = local_update_matrices(coin);
    const cplx a = root_of_unity(k, n.value(), -1);
    return {k, a, a * m.m1 + std::conj(a) * m.m2 + m.m3};
}

struct EigenSystem {
    int k = 0;
    std::array<cplx, 4> eigenvalues{};
    std::array<AmplitudeQuadruple, 4> eigenvectors{};
    std::array<double, 4> residuals{};  // |M v - lambda v|
};

// Unit length, last nonzero component real and positive.
[[nodiscard]] inline AmplitudeQuadruple normalize_eigenvector(AmplitudeQuadruple v) {
    const double nrm = v.norm();
    if (!(nrm > 0.0)) throw numeric_error("zero eigenvector");
    v /= nrm;
    for (Eigen::Index i = 3; i >= 0; --i) {
        if (std::abs(v(i)) > 1e-12) {
            v *= std::conj(v(i)) / std::abs(v(i));
            break;
        }
    }
    return v;
}

inline void fill_residuals(EigenSystem& es, const Eigen::Matrix4cd& m) {
    for (std::size_t i = 0; i < 4; ++i)
        es.residuals[i] = (m * es.eigenvectors[i] - es.eigenvalues[i] * es.eigenvectors[i]).norm();
}

// Closed-form eigensystem of M_k for the Hadamard coin, with
// r = principal sqrt(A^4 - 6A^2 + 1):
//   l1 = -1, l2 = 1, l3,4 = (1 + A^2 +- r) / (2 sqrt2 A).
[[nodiscard]] inline EigenSystem analytic_eigensystem(int k, GroupOrder n) {
    const ReducedMatrix rm = reduced_matrix(k, n);
    const cplx a = rm.a;
    const cplx a2 = a * a;
    const double r2 = std::numbers::sqrt2;
    const cplx r = std::sqrt(a2 * a2 - 6.0 * a2 + 1.0);

    EigenSystem es;
    es.k = k;
    es.eigenvalues = {cplx{-1.0}, cplx{1.0}, (1.0 + a2 + r) / (2.0 * r2 * a), (1.0 + a2 - r) / (2.0 * r2 * a)};

    AmplitudeQuadruple v1, v2, v3, v4;
    v1 << -a / (r2 * a + 1.0), -1.0 / (r2 * a + 1.0), (r2 * a + 2.0) / (2.0 * a + r2), 1.0;
    v2 << a / (r2 * a - 1.0), 1.0 / (r2 * a - 1.0), -(a - r2) / (r2 * a - 1.0), 1.0;
    v3 << (r + a2 - 1.0) / (2.0 * a), (a2 - r - 1.0) / (2.0 * a2), -1.0 / a, 1.0;
    v4 << (a2 - r - 1.0) / (2.0 * a), (a2 + r - 1.0) / (2.0 * a2), -1.0 / a, 1.0;
    es.eigenvectors = {normalize_eigenvector(v1), normalize_eigenvector(v2), normalize_eigenvector(v3),
                       normalize_eigenvector(v4)};
    fill_residuals(es, rm.matrix);
    return es;
}

[[nodiscard]] inline EigenSystem numeric_eigensystem(const Eigen::Matrix4cd& m, int k = 0) {
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m, true);
    if (solver.info() != Eigen::Success) throw numeric_error("4x4 eigensolver did not converge");
    EigenSystem es;
    es.k = k;
    for (Eigen::Index i = 0; i < 4; ++i) {
        es.eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
        es.eigenvectors[static_cast<std::size_t>(i)] = normalize_eigenvector(solver.eigenvectors().col(i));
    }
    fill_residuals(es, m);
    return es;
}

[[nodiscard]] inline EigenSystem numeric_eigensystem(const ReducedMatrix& m) { return numeric_eigensystem(m.matrix, m.k); }

// det(lambda I - M_k) predicted by the closed forms.
[[nodiscard]] inline cplx characteristic_polynomial(cplx lambda, cplx a) {
    return (lambda * lambda - 1.0) * (lambda * lambda - ((1.0 + a * a) / (std::numbers::sqrt2 * a)) * lambda + 1.0);
}

// Eigensystems for every mode: closed forms for the Hadamard coin, the dense
// solver otherwise.
[[nodiscard]] inline std::vector<EigenSystem> mode_eigensystems(GroupOrder n, const CoinOperator& coin) {
    std::vector<EigenSystem> out(n.size());
    const bool analytic = is_hadamard(coin);
    parallel_for(n.size(), [&](std::size_t k) {
        const int kk = static_cast<int>(k);
        out[k] = analytic ? analytic_eigensystem(kk, n) : numeric_eigensystem(reduced_matrix(kk, n, coin));
    });
    return out;
}

// Evolution by eigen-decomposition of each Fourier mode:
//   Phi~(k, t) = sum_i alpha_i(k) lambda_i(k)^t v_i(k).
// Hadamard modes have orthonormal closed-form eigenvectors, so
// alpha_i = <v_i, Phi~(k,0)>; other coins solve V alpha = Phi~ instead.
class SpectralPropagator {
public:
    SpectralPropagator(const WalkState& psi0, const CoinOperator& coin = hadamard_coin())
        : order_(psi0.order()), systems_(mode_eigensystems(psi0.order(), coin)), alpha_(order_.size()) {
        const auto modes = fourier_forward(psi0);
        const bool orthonormal = is_hadamard(coin);
        parallel_for(order_.size(), [&](std::size_t k) {
            const auto& es = systems_[k];
            if (orthonormal) {
                for (std::size_t i = 0; i < 4; ++i) alpha_[k][i] = es.eigenvectors[i].dot(modes[k]);
            } else {
                Eigen::Matrix4cd v;
                for (Eigen::Index i = 0; i < 4; ++i) v.col(i) = es.eigenvectors[static_cast<std::size_t>(i)];
                const Eigen::Vector4cd x = v.fullPivLu().solve(modes[k]);
                for (std::size_t i = 0; i < 4; ++i) alpha_[k][i] = x(static_cast<Eigen::Index>(i));
            }
        });
    }

    [[nodiscard]] GroupOrder order() const noexcept { return order_; }
    [[nodiscard]] const std::vector<EigenSystem>& eigensystems() const noexcept { return systems_; }
    [[nodiscard]] const std::vector<std::array<cplx, 4>>& coefficients() const noexcept { return alpha_; }

    [[nodiscard]] std::vector<cplx> amplitudes_at(int steps) const {
        if (steps < 0) throw validation_error("steps must be >= 0");
        std::vector<AmplitudeQuadruple> modes(order_.size());
        for (std::size_t k = 0; k < order_.size(); ++k) {
            const auto& es = systems_[k];
            AmplitudeQuadruple m = AmplitudeQuadruple::Zero();
            for (std::size_t i = 0; i < 4; ++i) {
                const cplx lam = es.eigenvalues[i];
                const cplx lt = std::polar(std::pow(std::abs(lam), steps), steps * std::arg(lam));
                m += alpha_[k][i] * lt * es.eigenvectors[i];
            }
            modes[k] = m;
        }
        return fourier_inverse(modes, order_);
    }

    [[nodiscard]] WalkState state_at(int steps) const {
        return {order_, amplitudes_at(steps), WalkState::unchecked{}};
    }

private:
    GroupOrder order_;
    std::vector<EigenSystem> systems_;
    std::vector<std::array<cplx, 4>> alpha_;
};

[[nodiscard]] inline WalkState spectral_evolve(const WalkState& psi, int steps,
                                               const CoinOperator& coin = hadamard_coin()) {
    if (steps < 0) throw validation_error("steps must be >= 0");
    return SpectralPropagator(psi, coin).state_at(steps);
}

// |v (x) kappa_k> in canonical flat ordering.
[[nodiscard]] inline Eigen::VectorXcd mode_vector(const AmplitudeQuadruple& v, int k, GroupOrder n) {
    const int nn = n.value();
    const double scale = 1.0 / std::sqrt(static_cast<double>(nn));
    Eigen::VectorXcd out(4 * nn);
    for (int a = 0; a < 4; ++a)
        for (int j = 0; j < nn; ++j)
            out(a * nn + j) = v(a) * root_of_unity(static_cast<long long>(j) * k, nn, +1) * scale;
    return out;
}

struct SpectralReconstruction {
    Eigen::MatrixXcd u_spectral;
    Eigen::MatrixXcd projector_sum;
    double max_deviation = 0.0;           // |U_spectral - U_direct|_max
    double completeness_deviation = 0.0;  // |sum of projectors - I|_max
};

// U = sum_k sum_i lambda_i(k) |v_i(k), kappa_k><v_i(k), kappa_k|, compared
// entrywise with the directly built Hadamard step operator.
[[nodiscard]] inline SpectralReconstruction reconstruct_step_operator(GroupOrder n) {
    const Eigen::Index d = 4 * n.value();
    SpectralReconstruction r;
    r.u_spectral = Eigen::MatrixXcd::Zero(d, d);
    r.projector_sum = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < n.value(); ++k) {
        const EigenSystem es = analytic_eigensystem(k, n);
        for (std::size_t i = 0; i < 4; ++i) {
            const Eigen::VectorXcd x = mode_vector(es.eigenvectors[i], k, n);
            const Eigen::MatrixXcd proj = x * x.adjoint();
            r.u_spectral += es.eigenvalues[i] * proj;
            r.projector_sum += proj;
        }
    }
    const Eigen::MatrixXcd u_direct = build_step_operator(n, hadamard_coin()).dense();
    r.max_deviation = (r.u_spectral - u_direct).cwiseAbs().maxCoeff();
    r.completeness_deviation = (r.projector_sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    return r;
}

struct ModeComparison {
    int k = 0;
    EigenSystem analytic;
    EigenSystem numeric;
    double pairing_distance = 0.0;  // max distance after optimal pairing
};

[[nodiscard]] inline std::vector<ModeComparison> compare_spectra(GroupOrder n) {
    std::vector<ModeComparison> out(n.size());
    parallel_for(n.size(), [&](std::size_t k) {
        const int kk = static_cast<int>(k);
        ModeComparison mc{kk, analytic_eigensystem(kk, n), numeric_eigensystem(reduced_matrix(kk, n)), 0.0};
        mc.pairing_distance = pair_eigenvalues(mc.analytic.eigenvalues, mc.numeric.eigenvalues).max_distance;
        out[k] = std::move(mc);
    });
    return out;
}

}  // namespace dihedral_walk
