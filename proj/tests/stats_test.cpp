#include "dihedral_walk/stats.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace dihedral_walk;

namespace {

std::vector<double> cesaro(const WalkState& psi0, const CoinOperator& coin, int steps) {
    const auto u = build_step_operator(psi0.order(), coin);
    RunningAverage acc(psi0.order());
    auto psi = psi0;
    for (int t = 1; t <= steps; ++t) {
        psi = u.apply(psi);
        acc.add(probability_distribution(psi));
    }
    return acc.result().mean;
}

}  // namespace

TEST(TotalVariation, BasicProperties) {
    const std::vector<double> a{0.5, 0.5, 0.0, 0.0};
    const std::vector<double> b{0.0, 0.0, 0.25, 0.75};
    const std::vector<double> c{0.25, 0.25, 0.25, 0.25};
    EXPECT_EQ(total_variation(a, a), 0.0);
    EXPECT_DOUBLE_EQ(total_variation(a, b), 1.0);
    EXPECT_DOUBLE_EQ(total_variation(a, c), total_variation(c, a));
    EXPECT_LE(total_variation(a, b), total_variation(a, c) + total_variation(c, b) + 1e-15);
    EXPECT_THROW((void)total_variation(a, std::vector<double>{1.0}), dimension_error);
}

TEST(TimeAverage, EmptyAndMismatched) {
    EXPECT_THROW((void)time_average(std::vector<VertexDistribution>{}), validation_error);
    RunningAverage acc(GroupOrder{3});
    EXPECT_THROW((void)acc.result(), validation_error);
    EXPECT_THROW(acc.add(VertexDistribution{GroupOrder{4}, std::vector<double>(8, 0.125)}), order_mismatch_error);
}

TEST(TimeAverage, MatchesTrajectoryMean) {
    const GroupOrder n{6};
    const auto traj = distribution_trajectory(WalkState::basis_state(n, 0, 0, 0), build_step_operator(n, hadamard_coin()), 30);
    ASSERT_EQ(traj.size(), 31u);
    const auto avg = time_average(traj);
    EXPECT_EQ(avg.steps, 31);
    double expected0 = 0.0;
    for (const auto& d : traj) expected0 += d.p[0];
    EXPECT_NEAR(avg.mean[0], expected0 / 31.0, 1e-15);
    for (const auto& d : traj) EXPECT_NEAR(d.total(), 1.0, 1e-12);
}

TEST(Resonance, Indicator) {
    const cplx a = std::polar(1.0, 0.3);
    EXPECT_EQ(resonance_term(a, a, 1e-9), 1);
    EXPECT_EQ(resonance_term(a, std::polar(1.0, 0.3 + 1e-6), 1e-9), 0);
    EXPECT_EQ(resonance_term(cplx{1.0}, cplx{-1.0}, 1e-9), 0);
    EXPECT_THROW((void)resonance_term(cplx{1.1}, a, 1e-9), validation_error);
}

TEST(LimitingDistribution, IsAProbabilityDistribution) {
    std::mt19937_64 rng(61);
    for (int nv : {3, 4, 5, 8, 12}) {
        const auto lim = limiting_distribution(WalkState::random(GroupOrder{nv}, rng));
        EXPECT_NEAR(std::accumulate(lim.p.begin(), lim.p.end(), 0.0), 1.0, 1e-12);
        for (double x : lim.p) EXPECT_GE(x, -1e-14);
        EXPECT_LT(lim.imaginary_residual, 1e-12);
        EXPECT_GE(lim.resonant_pairs, 4u * nv);  // every eigenvalue resonates with itself
    }
}

TEST(LimitingDistribution, EigenstateIsItsOwnLimit) {
    for (int nv : {4, 5, 8}) {
        const GroupOrder n{nv};
        for (int k : {0, 1, nv - 1}) {
            const auto es = analytic_eigensystem(k, n);
            for (std::size_t i = 0; i < 4; ++i) {
                const Eigen::VectorXcd x = mode_vector(es.eigenvectors[i], k, n);
                const WalkState psi = WalkState::normalized(n, std::vector<cplx>(x.data(), x.data() + x.size()));
                const auto lim = limiting_distribution(psi);
                EXPECT_LT(total_variation(lim.p, vertex_probabilities(psi)), 1e-12) << nv << " " << k << " " << i;
            }
        }
    }
}

TEST(LimitingDistribution, MatchesCesaroAverage) {
    const GroupOrder n4{4};
    const auto psi4 = WalkState::basis_state(n4, 0, 0, 0);
    EXPECT_LT(total_variation(limiting_distribution(psi4).p, cesaro(psi4, hadamard_coin(), 10000)), 1e-6);

    const GroupOrder n8{8};
    const auto psi8 = WalkState::basis_state(n8, 0, 0, 0);
    EXPECT_LT(total_variation(limiting_distribution(psi8).p, cesaro(psi8, hadamard_coin(), 10000)), 2e-4);
}

TEST(LimitingDistribution, RandomCoin) {
    std::mt19937_64 rng(67);
    const GroupOrder n{5};
    const auto coin = random_coin(rng);
    const auto psi = WalkState::random(n, rng);
    const auto lim = limiting_distribution(psi, coin);
    EXPECT_NEAR(std::accumulate(lim.p.begin(), lim.p.end(), 0.0), 1.0, 1e-10);
    EXPECT_LT(total_variation(lim.p, cesaro(psi, coin, 20000)), 5e-3);
}

TEST(Parity, DisplacedPairState) {
    const auto psi = displaced_pair_state(GroupOrder{8}, 6, 3);
    EXPECT_NEAR(std::abs(psi.amplitude(0, 0, 6)), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(psi.amplitude(0, 1, 1)), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Parity, RequiresPowerOfTwo) {
    EXPECT_THROW((void)parity_effect_report(GroupOrder{12}, 0, 1), invalid_order_error);
    EXPECT_TRUE(is_power_of_two(64));
    EXPECT_FALSE(is_power_of_two(96));
}

TEST(Parity, CensusAtHalfPeriod) {
    struct Case {
        int n, d, zeros;
    };
    const Case cases[] = {
        {16, 0, 12}, {16, 1, 40}, {16, 2, 12}, {16, 3, 32}, {16, 4, 12},
        {8, 0, 12},  {8, 1, 24},  {8, 2, 12},  {8, 3, 16},  {8, 4, 12},
    };
    for (const auto& c : cases) {
        for (int j = 0; j < c.n; ++j) {
            const auto r = parity_effect_report(GroupOrder{c.n}, j, c.d);
            EXPECT_EQ(r.step_index, c.n / 2);
            EXPECT_EQ(r.dimension, 4 * c.n);
            EXPECT_EQ(r.zero_count, c.zeros) << "N=" << c.n << " d=" << c.d << " j=" << j;
            EXPECT_EQ(r.nonzero_count, r.dimension - r.zero_count);
            EXPECT_GE(r.small_count, r.zero_count);
            EXPECT_EQ(r.single_parity_class, c.d % 2 == 1);
        }
    }
}

TEST(Shape, TemporalVariance) {
    const GroupOrder n{3};
    std::vector<VertexDistribution> traj;
    traj.push_back({n, {1, 0, 0, 0, 0, 0}});
    traj.push_back({n, {0, 1, 0, 0, 0, 0}});
    const auto v = temporal_variance(traj);
    EXPECT_DOUBLE_EQ(v[0], 0.25);
    EXPECT_DOUBLE_EQ(v[1], 0.25);
    EXPECT_DOUBLE_EQ(v[2], 0.0);
}

TEST(Shape, MarginalAndReflection) {
    const VertexDistribution d{GroupOrder{4}, {0.1, 0.2, 0.0, 0.1, 0.3, 0.0, 0.2, 0.1}};
    EXPECT_EQ(position_marginal(d), (std::vector<double>{0.4, 0.2, 0.2, 0.2}));
    const std::vector<double> p{0.4, 0.3, 0.2, 0.1};
    EXPECT_EQ(reflect_about(p, 0), (std::vector<double>{0.4, 0.1, 0.2, 0.3}));
    EXPECT_EQ(reflect_about(p, 1), (std::vector<double>{0.2, 0.3, 0.4, 0.1}));
}

TEST(Shape, BalancedCoinStartIsStillAsymmetric) {
    const GroupOrder n{100};
    InitialSpec spec;
    spec.coin = {cplx{1.0}, cplx{0.0, 1.0}};
    const auto psi = evolve(initial_state(n, spec), build_step_operator(n, hadamard_coin()), 100);
    const auto marginal = position_marginal(probability_distribution(psi));
    EXPECT_GT(total_variation(marginal, reflect_about(marginal, 0)), 1e-3);
}
