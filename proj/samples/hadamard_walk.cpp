// Hadamard walk on Cayley(D_N) from |0>_C |0,0>, evolved both directly and
// through the Fourier modes. Prints the most likely vertices at the end.

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "dihedral_walk/dihedral_walk.hpp"

using namespace dihedral_walk;

int main() {
    const GroupOrder n{100};
    const int steps = 100;
    const auto psi0 = WalkState::basis_state(n, 0, 0, 0);

    const auto direct = evolve(psi0, build_step_operator(n, hadamard_coin()), steps);
    const auto spectral = spectral_evolve(psi0, steps);
    std::printf("N=%d, %d steps, backend deviation %.3g\n", n.value(), steps,
                max_abs_difference(direct.amplitudes(), spectral.amplitudes()));

    const auto p = probability_distribution(direct);
    std::vector<std::size_t> order(p.p.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + 5, order.end(),
                      [&](std::size_t a, std::size_t b) { return p.p[a] > p.p[b]; });
    for (int i = 0; i < 5; ++i) {
        const auto v = order[static_cast<std::size_t>(i)];
        std::printf("  (s=%zu, j=%2zu)  %.6f\n", v / n.size(), v % n.size(), p.p[v]);
    }
    std::printf("total probability %.15f\n", p.total());
}
