#include "dihedral_walk/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "gtest/gtest.h"

using namespace dihedral_walk;

namespace {

double max_diff(std::span<const cplx> a, std::span<const cplx> b) { return max_abs_difference(a, b); }

}  // namespace

TEST(LocalUpdate, MatchesStepOperator) {
    std::mt19937_64 rng(21);
    for (int nv : {3, 4, 5, 9, 16}) {
        const GroupOrder n{nv};
        const auto psi = WalkState::random(n, rng);
        const auto direct = build_step_operator(n, hadamard_coin()).apply(psi);
        EXPECT_LT(max_diff(apply_local_update(local_update_matrices(), psi.amplitudes(), n), direct.amplitudes()),
                  1e-15);

        const auto coin = random_coin(rng);
        const auto direct_c = build_step_operator(n, coin).apply(psi);
        EXPECT_LT(max_diff(apply_local_update(local_update_matrices(coin), psi.amplitudes(), n), direct_c.amplitudes()),
                  1e-15);
    }
}

TEST(LocalUpdate, HadamardMatricesHaveThreeSparseShapes) {
    const auto m = local_update_matrices();
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_EQ((m.m1.array() != cplx{}).count(), 2);
    EXPECT_EQ((m.m2.array() != cplx{}).count(), 2);
    EXPECT_EQ((m.m3.array() != cplx{}).count(), 4);
    EXPECT_NEAR(std::abs(m.m3(3, 2) + h), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(m.m1(0, 0) - h), 0.0, 1e-16);
}

TEST(Fourier, RoundTripAndParseval) {
    std::mt19937_64 rng(8);
    for (int nv : {3, 4, 7, 32}) {
        const GroupOrder n{nv};
        const auto psi = WalkState::random(n, rng);
        const auto modes = fourier_forward(psi);
        EXPECT_LT(max_diff(fourier_inverse(modes, n), psi.amplitudes()), 1e-14);
        double energy = 0.0;
        for (const auto& m : modes) energy += m.squaredNorm();
        EXPECT_NEAR(energy, nv * 1.0, 1e-12);
    }
    EXPECT_THROW((void)fourier_inverse(std::vector<AmplitudeQuadruple>(3), GroupOrder{4}), dimension_error);
}

TEST(ReducedMatrix, DiagonalizesTheStep) {
    std::mt19937_64 rng(99);
    for (int nv : {3, 5, 8}) {
        const GroupOrder n{nv};
        const auto coin = random_coin(rng);
        const auto psi = WalkState::random(n, rng);
        const auto before = fourier_forward(psi);
        const auto after = fourier_forward(build_step_operator(n, coin).apply(psi));
        for (int k = 0; k < nv; ++k) {
            const auto mk = reduced_matrix(k, n, coin).matrix;
            EXPECT_LT((mk * before[static_cast<std::size_t>(k)] - after[static_cast<std::size_t>(k)]).norm(), 1e-13);
        }
    }
    EXPECT_THROW((void)reduced_matrix(4, GroupOrder{4}), validation_error);
}

TEST(ReducedMatrix, IsUnitary) {
    for (int k = 0; k < 12; ++k) {
        const auto m = reduced_matrix(k, GroupOrder{12}).matrix;
        EXPECT_LT((m.adjoint() * m - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(AnalyticEigensystem, ResidualsAndOrthonormality) {
    for (int nv : {3, 4, 5, 6, 7, 8, 16, 100}) {
        const GroupOrder n{nv};
        for (int k = 0; k < nv; ++k) {
            const auto es = analytic_eigensystem(k, n);
            for (std::size_t i = 0; i < 4; ++i) {
                EXPECT_LT(es.residuals[i], 1e-12) << "N=" << nv << " k=" << k << " i=" << i;
                EXPECT_NEAR(std::abs(es.eigenvalues[i]), 1.0, 1e-12);
                for (std::size_t j = 0; j < 4; ++j) {
                    const cplx ip = es.eigenvectors[i].dot(es.eigenvectors[j]);
                    EXPECT_NEAR(std::abs(ip - (i == j ? 1.0 : 0.0)), 0.0, 1e-12);
                }
            }
            EXPECT_EQ(es.eigenvalues[0], cplx(-1.0));
            EXPECT_EQ(es.eigenvalues[1], cplx(1.0));
        }
    }
}

TEST(AnalyticEigensystem, AgreesWithDenseSolver) {
    for (int nv : {3, 4, 5, 6, 7, 8, 16, 100}) {
        for (const auto& mc : compare_spectra(GroupOrder{nv})) {
            EXPECT_LT(mc.pairing_distance, 1e-10) << "N=" << nv << " k=" << mc.k;
            for (double r : mc.numeric.residuals) EXPECT_LT(r, 1e-12);
        }
    }
}

TEST(AnalyticEigensystem, CharacteristicPolynomial) {
    const GroupOrder n{9};
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int k = 0; k < 9; ++k) {
        const auto rm = reduced_matrix(k, n);
        const auto es = analytic_eigensystem(k, n);
        for (const auto& lam : es.eigenvalues) EXPECT_LT(std::abs(characteristic_polynomial(lam, rm.a)), 1e-13);
        for (int trial = 0; trial < 5; ++trial) {
            const cplx lam{g(rng), g(rng)};
            const cplx det = (lam * Eigen::Matrix4cd::Identity() - rm.matrix).determinant();
            EXPECT_LT(std::abs(det - characteristic_polynomial(lam, rm.a)), 1e-12 * (1.0 + std::abs(det)));
        }
    }
}

TEST(AnalyticEigensystem, ConjugateModesHaveConjugateSpectra) {
    const int nv = 10;
    const GroupOrder n{nv};
    for (int k = 1; k < nv; ++k) {
        const auto a = analytic_eigensystem(k, n).eigenvalues;
        auto b = analytic_eigensystem(nv - k, n).eigenvalues;
        for (auto& x : b) x = std::conj(x);
        EXPECT_LT(pair_eigenvalues(a, b).max_distance, 1e-13);
    }
}

TEST(Reconstruction, RebuildsStepOperator) {
    for (int nv = 3; nv <= 10; ++nv) {
        const auto r = reconstruct_step_operator(GroupOrder{nv});
        EXPECT_LT(r.max_deviation, 1e-12) << nv;
        EXPECT_LT(r.completeness_deviation, 1e-12) << nv;
    }
}

TEST(SpectralEvolve, AgreesWithDirect) {
    std::mt19937_64 rng(17);
    for (int nv : {3, 4, 8, 16, 33}) {
        const GroupOrder n{nv};
        const auto psi0 = WalkState::random(n, rng);
        const auto u = build_step_operator(n, hadamard_coin());
        const SpectralPropagator prop(psi0);
        auto cur = psi0;
        for (int t = 0; t <= 200; ++t) {
            ASSERT_LT(max_diff(prop.amplitudes_at(t), cur.amplitudes()), 1e-9) << "N=" << nv << " t=" << t;
            cur = u.apply(cur);
        }
    }
}

TEST(SpectralEvolve, RandomCoinAgreesWithDirect) {
    std::mt19937_64 rng(23);
    for (int nv : {4, 7, 12}) {
        const GroupOrder n{nv};
        const auto coin = random_coin(rng);
        const auto psi0 = WalkState::random(n, rng);
        const auto direct = evolve(psi0, build_step_operator(n, coin), 150);
        EXPECT_LT(max_diff(spectral_evolve(psi0, 150, coin).amplitudes(), direct.amplitudes()), 1e-9);
    }
}

TEST(Assignment, MatchesBruteForce) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> cost(n * n);
            for (auto& c : cost) c = u(rng);
            const auto got = min_cost_assignment(cost, n);
            double got_cost = 0.0;
            for (std::size_t i = 0; i < n; ++i) got_cost += cost[i * n + got[i]];

            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            double best = 1e300;
            do {
                double c = 0.0;
                for (std::size_t i = 0; i < n; ++i) c += cost[i * n + perm[i]];
                best = std::min(best, c);
            } while (std::next_permutation(perm.begin(), perm.end()));
            EXPECT_NEAR(got_cost, best, 1e-12);
        }
    }
}

TEST(Assignment, PairsPermutedEigenvalues) {
    const std::vector<cplx> a{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    const std::vector<cplx> b{{0, -1}, {1, 1e-13}, {0, 1}, {-1, 0}};
    const auto p = pair_eigenvalues(a, b);
    EXPECT_EQ(p.partner, (std::vector<std::size_t>{1, 3, 2, 0}));
    EXPECT_LT(p.max_distance, 1e-12);
}
