// stats.hpp
// Vertex distributions, Cesaro time averages, the resonance-sum limiting
// distribution, and the census used for the displaced-pair parity experiment.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "parallel.hpp"
#include "spectral.hpp"
#include "state.hpp"
#include "walk.hpp"

namespace dihedral_walk {

// p[s*N + j] = sum_c |<c,s,j|psi>|^2
struct VertexDistribution {
    GroupOrder order;
    std::vector<double> p;

    [[nodiscard]] double at(int s, int j) const { return p.at(static_cast<std::size_t>(s) * order.size() + static_cast<std::size_t>(j)); }
    [[nodiscard]] double total() const { return std::accumulate(p.begin(), p.end(), 0.0); }
};

[[nodiscard]] inline VertexDistribution probability_distribution(const WalkState& psi) {
    return {psi.order(), vertex_probabilities(psi)};
}

[[nodiscard]] inline double total_variation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw dimension_error("distributions differ in size");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

[[nodiscard]] inline double total_variation(const VertexDistribution& a, const VertexDistribution& b) {
    if (a.order != b.order) throw order_mismatch_error("distributions built for different N");
    return total_variation(a.p, b.p);
}

[[nodiscard]] inline std::vector<VertexDistribution> distribution_trajectory(const WalkState& psi0, const StepOperator& u,
                                                                             int steps) {
    std::vector<VertexDistribution> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for_each_step(psi0, u, steps, [&](int, const WalkState& psi) { out.push_back(probability_distribution(psi)); });
    return out;
}

struct TimeAverage {
    GroupOrder order;
    int steps = 0;
    std::vector<double> mean;
};

// Streaming mean (1/n) sum_{i=1..n} p(i).
class RunningAverage {
public:
    explicit RunningAverage(GroupOrder n) : order_(n), sum_(n.group_size(), 0.0) {}

    void add(const VertexDistribution& d) {
        if (d.order != order_) throw order_mismatch_error("distribution built for a different N");
        for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += d.p[i];
        ++count_;
    }

    [[nodiscard]] int count() const noexcept { return count_; }

    [[nodiscard]] TimeAverage result() const {
        if (count_ == 0) throw validation_error("time average of an empty trajectory");
        TimeAverage t{order_, count_, sum_};
        for (double& x : t.mean) x /= count_;
        return t;
    }

private:
    GroupOrder order_;
    std::vector<double> sum_;
    int count_ = 0;
};

[[nodiscard]] inline TimeAverage time_average(std::span<const VertexDistribution> trajectory) {
    if (trajectory.empty()) throw validation_error("time average of an empty trajectory");
    RunningAverage acc(trajectory.front().order);
    for (const auto& d : trajectory) acc.add(d);
    return acc.result();
}

// lim (1/t) sum_s (conj(a) b)^s over unimodular a, b: 1 when conj(a) b = 1, else 0.
[[nodiscard]] inline int resonance_term(cplx a, cplx b, double tol) {
    if (std::abs(std::abs(a) - 1.0) > tol || std::abs(std::abs(b) - 1.0) > tol) {
        throw validation_error("resonance_term needs unimodular eigenvalues");
    }
    return std::abs(std::conj(a) * b - 1.0) < tol ? 1 : 0;
}

inline constexpr double resonance_tolerance = 1e-9;

struct LimitingDistribution {
    GroupOrder order;
    std::vector<double> p;  // s*N + j
    std::size_t resonant_pairs = 0;
    double imaginary_residual = 0.0;  // largest |Im| of a summed vertex term
};

// Cesaro limit of the vertex distribution:
//   p(a, n) = N^-2 sum_{k,m} sum_{i,l} e^{2 pi i (m-k) n / N}
//             conj(alpha_i(k) v_i(k)_a) alpha_l(m) v_l(m)_a  [lambda_i(k) ~ lambda_l(m)]
// summed over the four (c, s) components a with matching s.
[[nodiscard]] inline LimitingDistribution limiting_distribution(const WalkState& initial,
                                                                const CoinOperator& coin = hadamard_coin()) {
    const GroupOrder n = initial.order();
    const int nn = n.value();
    const std::size_t nk = n.size();
    const SpectralPropagator prop(initial, coin);
    const auto& systems = prop.eigensystems();
    const auto& alpha = prop.coefficients();

    // w[k][i] = alpha_i(k) v_i(k)
    std::vector<std::array<AmplitudeQuadruple, 4>> w(nk);
    for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t i = 0; i < 4; ++i) w[k][i] = alpha[k][i] * systems[k].eigenvectors[i];

    // One partial sum per k, reduced in k order.
    std::vector<std::vector<cplx>> partial(nk, std::vector<cplx>(4 * nk));
    std::vector<std::size_t> pairs(nk, 0);
    parallel_for(nk, [&](std::size_t k) {
        auto& acc = partial[k];
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t m = 0; m < nk; ++m) {
                for (std::size_t l = 0; l < 4; ++l) {
                    if (!resonance_term(systems[k].eigenvalues[i], systems[m].eigenvalues[l], resonance_tolerance)) continue;
                    ++pairs[k];
                    const long long dk = static_cast<long long>(m) - static_cast<long long>(k);
                    for (Eigen::Index a = 0; a < 4; ++a) {
                        const cplx c = std::conj(w[k][i](a)) * w[m][l](a);
                        if (c == cplx{}) continue;
                        for (int pos = 0; pos < nn; ++pos)
                            acc[static_cast<std::size_t>(a) * nk + static_cast<std::size_t>(pos)] +=
                                c * root_of_unity(dk * pos, nn, +1);
                    }
                }
            }
        }
    });

    std::vector<cplx> total(4 * nk);
    for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t x = 0; x < total.size(); ++x) total[x] += partial[k][x];

    LimitingDistribution out{n, std::vector<double>(2 * nk, 0.0), 0, 0.0};
    for (auto c : pairs) out.resonant_pairs += c;
    const double scale = 1.0 / (static_cast<double>(nk) * static_cast<double>(nk));
    for (std::size_t a = 0; a < 4; ++a) {
        const std::size_t s = a % 2;
        for (std::size_t pos = 0; pos < nk; ++pos) {
            const cplx v = total[a * nk + pos] * scale;
            out.imaginary_residual = std::max(out.imaginary_residual, std::abs(v.imag()));
            out.p[s * nk + pos] += v.real();
        }
    }
    return out;
}

// Displaced-pair start |0>_C (x) (|0, j> + |1, j+d>)/sqrt2.
[[nodiscard]] inline WalkState displaced_pair_state(GroupOrder n, int j, int d) {
    InitialSpec spec;
    spec.vertex = InitialSpec::Vertex::pair;
    spec.j = j;
    spec.d = d;
    return initial_state(n, spec);
}

struct ParityReport {
    int step_index = 0;
    int dimension = 0;
    int zero_count = 0;     // |alpha| < zero_threshold
    int small_count = 0;    // |alpha| < small_threshold (includes zeros)
    int nonzero_count = 0;  // dimension - zero_count
    double zero_threshold = 1e-12;
    double small_threshold = 1e-6;
    bool single_parity_class = false;  // all weight on one (s + j) mod 2 class
};

[[nodiscard]] inline bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

// Amplitude census after N/2 Hadamard steps from the displaced pair.
[[nodiscard]] inline ParityReport parity_effect_report(GroupOrder n, int j, int d) {
    if (!is_power_of_two(n.value())) {
        throw invalid_order_error("parity experiment needs N = 2^n, got " + std::to_string(n.value()));
    }
    const int steps = n.value() / 2;
    const WalkState psi = evolve(displaced_pair_state(n, j, d), build_step_operator(n, hadamard_coin()), steps);

    ParityReport r;
    r.step_index = steps;
    r.dimension = static_cast<int>(psi.dimension());
    double weight[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
        const double mag = std::abs(psi[i]);
        if (mag < r.zero_threshold) ++r.zero_count;
        if (mag < r.small_threshold) ++r.small_count;
        const auto lbl = basis_label(i, n.size());
        weight[(lbl.bit + lbl.pos) % 2] += mag * mag;
    }
    r.nonzero_count = r.dimension - r.zero_count;
    r.single_parity_class = std::min(weight[0], weight[1]) < r.zero_threshold * r.zero_threshold * r.dimension;
    return r;
}

// ---------------------------------------------------------------------------
// Shape diagnostics for long runs.

// Population variance of each vertex probability across the given steps.
[[nodiscard]] inline std::vector<double> temporal_variance(std::span<const VertexDistribution> traj) {
    if (traj.empty()) throw validation_error("empty trajectory");
    const std::size_t nv = traj.front().p.size();
    std::vector<double> mean(nv, 0.0), var(nv, 0.0);
    for (const auto& d : traj)
        for (std::size_t i = 0; i < nv; ++i) mean[i] += d.p[i];
    for (double& m : mean) m /= static_cast<double>(traj.size());
    for (const auto& d : traj)
        for (std::size_t i = 0; i < nv; ++i) var[i] += (d.p[i] - mean[i]) * (d.p[i] - mean[i]);
    for (double& v : var) v /= static_cast<double>(traj.size());
    return var;
}

// Marginal over the rotation index j.
[[nodiscard]] inline std::vector<double> position_marginal(const VertexDistribution& d) {
    const std::size_t nn = d.order.size();
    std::vector<double> m(nn, 0.0);
    for (std::size_t i = 0; i < d.p.size(); ++i) m[i % nn] += d.p[i];
    return m;
}

// q[j] = p[(2 * centre - j) mod N]
[[nodiscard]] inline std::vector<double> reflect_about(std::span<const double> p, int centre) {
    const int nn = static_cast<int>(p.size());
    std::vector<double> q(p.size());
    for (int j = 0; j < nn; ++j) q[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(mod(2LL * centre - j, nn))];
    return q;
}

}  // namespace dihedral_walk
