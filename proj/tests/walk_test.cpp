#include "dihedral_walk/walk.hpp"

#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "gtest/gtest.h"

using namespace dihedral_walk;

namespace {

// Dense reference: S written from its action on basis kets, then U = S (C kron I_2N).
Eigen::MatrixXcd reference_shift(int n) {
    const int d = 4 * n;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d, d);
    auto idx = [n](int c, int bit, int j) { return c * 2 * n + bit * n + ((j % n) + n) % n; };
    for (int bit = 0; bit < 2; ++bit)
        for (int j = 0; j < n; ++j) {
            s(idx(0, bit, j + (bit == 0 ? 1 : -1)), idx(0, bit, j)) = 1.0;
            s(idx(1, 1 - bit, j), idx(1, bit, j)) = 1.0;
        }
    return s;
}

Eigen::MatrixXcd reference_step(int n, const Eigen::Matrix2cd& coin) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
    return reference_shift(n) * Eigen::kroneckerProduct(coin, id).eval();
}

Eigen::VectorXcd as_eigen(const WalkState& psi) {
    return Eigen::Map<const Eigen::VectorXcd>(psi.vector().data(), static_cast<Eigen::Index>(psi.dimension()));
}

}  // namespace

TEST(Coin, RejectsNonUnitary) {
    Eigen::Matrix2cd m;
    m << 1.0, 1.0, 0.0, 1.0;
    EXPECT_THROW(CoinOperator{m}, validation_error);
    EXPECT_NO_THROW(CoinOperator{Eigen::Matrix2cd::Identity()});
}

TEST(Coin, RandomCoinsAreUnitary) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) EXPECT_NO_THROW((void)random_coin(rng));
}

TEST(Shift, ActionOnBasisKets) {
    const GroupOrder n{5};
    const auto s = build_shift_operator(n);
    EXPECT_EQ(s.image(basis_index(0, 0, 4, 5)), basis_index(0, 0, 0, 5));
    EXPECT_EQ(s.image(basis_index(0, 1, 0, 5)), basis_index(0, 1, 4, 5));
    EXPECT_EQ(s.image(basis_index(1, 0, 2, 5)), basis_index(1, 1, 2, 5));
    EXPECT_EQ(s.image(basis_index(1, 1, 3, 5)), basis_index(1, 0, 3, 5));
}

TEST(Shift, MatchesDenseReference) {
    for (int nv : {3, 4, 5, 8}) {
        const auto s = build_shift_operator(GroupOrder{nv});
        EXPECT_EQ((s.dense() - reference_shift(nv)).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Shift, BlockConstructionAgrees) {
    for (int nv : {3, 4, 6, 11}) {
        const GroupOrder n{nv};
        EXPECT_TRUE(build_block_shift_matrix(n) == build_shift_operator(n)) << "N=" << nv;
    }
}

TEST(Shift, IsAPermutation) {
    std::vector<std::size_t> bad(12, 0);
    EXPECT_THROW((ShiftOperator{GroupOrder{3}, bad}), validation_error);
    EXPECT_THROW((ShiftOperator{GroupOrder{3}, std::vector<std::size_t>(5)}), dimension_error);
}

TEST(StepOperator, MatchesKroneckerReference) {
    std::mt19937_64 rng(11);
    for (int nv : {3, 4, 5, 7}) {
        const GroupOrder n{nv};
        const auto h = build_step_operator(n, hadamard_coin());
        EXPECT_LT((h.dense() - reference_step(nv, hadamard_coin().matrix())).cwiseAbs().maxCoeff(), 1e-15);
        const auto c = random_coin(rng);
        const auto r = build_step_operator(n, c);
        EXPECT_LT((r.dense() - reference_step(nv, c.matrix())).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(StepOperator, Unitary) {
    for (int nv : {3, 4, 5, 16, 50}) {
        EXPECT_LT(build_step_operator(GroupOrder{nv}, hadamard_coin()).unitarity_deviation(), 1e-12);
    }
}

TEST(StepOperator, HadamardOnRotationKet) {
    const GroupOrder n{6};
    const auto u = build_step_operator(n, hadamard_coin());
    const auto out = u.apply(WalkState::basis_state(n, 0, 0, 2));
    const double h = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < out.dimension(); ++i) {
        cplx expected{};
        if (i == basis_index(0, 0, 3, 6)) expected = h;
        if (i == basis_index(1, 1, 2, 6)) expected = h;
        EXPECT_NEAR(std::abs(out[i] - expected), 0.0, 1e-15) << i;
    }
}

TEST(StepOperator, Linear) {
    const GroupOrder n{7};
    std::mt19937_64 rng(3);
    const auto u = build_step_operator(n, hadamard_coin());
    const auto a = WalkState::random(n, rng);
    const auto b = WalkState::random(n, rng);
    const cplx alpha{0.3, -1.2}, beta{-0.7, 0.4};
    std::vector<cplx> mix(a.dimension());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = alpha * a[i] + beta * b[i];
    const auto lhs = u.apply(std::span<const cplx>(mix));
    const auto ua = u.apply(a);
    const auto ub = u.apply(b);
    for (std::size_t i = 0; i < mix.size(); ++i) EXPECT_NEAR(std::abs(lhs[i] - (alpha * ua[i] + beta * ub[i])), 0.0, 1e-14);
}

TEST(Evolve, NormIsPreserved) {
    const GroupOrder n{100};
    const auto u = build_step_operator(n, hadamard_coin());
    const auto psi0 = WalkState::basis_state(n, 0, 0, 0);
    for_each_step(psi0, u, 1000, [](int t, const WalkState& psi) {
        ASSERT_NEAR(psi.norm_squared(), 1.0, 1e-10) << "step " << t;
    });
}

TEST(Evolve, MatchesDensePowers) {
    const GroupOrder n{5};
    std::mt19937_64 rng(5);
    const auto coin = random_coin(rng);
    const auto u = build_step_operator(n, coin);
    const auto psi0 = WalkState::random(n, rng);
    const Eigen::MatrixXcd dense = reference_step(5, coin.matrix());
    Eigen::VectorXcd ref = as_eigen(psi0);
    for (int t = 1; t <= 40; ++t) {
        ref = dense * ref;
        const auto psi = evolve(psi0, u, t);
        ASSERT_LT((as_eigen(psi) - ref).cwiseAbs().maxCoeff(), 1e-13) << t;
    }
}

TEST(Evolve, RejectsMismatchedOrder) {
    const auto u = build_step_operator(GroupOrder{4}, hadamard_coin());
    EXPECT_THROW((void)evolve(WalkState::basis_state(GroupOrder{5}, 0, 0, 0), u, 3), order_mismatch_error);
    EXPECT_THROW((void)evolve(WalkState::basis_state(GroupOrder{4}, 0, 0, 0), u, -1), validation_error);
}

TEST(State, NormalizationChecks) {
    const GroupOrder n{3};
    EXPECT_THROW((WalkState{n, std::vector<cplx>(12, cplx{0.5})}), normalization_error);
    EXPECT_THROW((void)WalkState::normalized(n, std::vector<cplx>(12)), normalization_error);
    EXPECT_THROW((WalkState{n, std::vector<cplx>(11)}), dimension_error);
    const auto psi = WalkState::normalized(n, std::vector<cplx>(12, cplx{2.0, 1.0}));
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-15);
}

TEST(State, InitialFamilies) {
    const GroupOrder n{8};
    InitialSpec spec;
    spec.coin = {cplx{1.0}, cplx{0.0, 1.0}};
    spec.s = 1;
    spec.j = 3;
    const auto single = initial_state(n, spec);
    EXPECT_NEAR(std::abs(single.amplitude(0, 1, 3) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(single.amplitude(1, 1, 3) - cplx(0.0, 1.0 / std::sqrt(2.0))), 0.0, 1e-15);

    spec.coin = {cplx{1.0}, cplx{0.0}};
    spec.vertex = InitialSpec::Vertex::pair;
    spec.j = 6;
    spec.d = 3;
    const auto pair = initial_state(n, spec);
    EXPECT_NEAR(std::abs(pair.amplitude(0, 0, 6)), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(pair.amplitude(0, 1, 1)), 1.0 / std::sqrt(2.0), 1e-15);

    spec.vertex = InitialSpec::Vertex::single;
    spec.s = 2;
    EXPECT_THROW((void)initial_state(n, spec), validation_error);
}
