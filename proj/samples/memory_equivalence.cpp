// The walk with one-step memory on an N-cycle is the dihedral walk in disguise:
// find the line-digraph isomorphism, conjugate, and compare.

#include <cstdio>

#include "dihedral_walk/dihedral_walk.hpp"

using namespace dihedral_walk;

int main() {
    for (int nv : {3, 4, 8, 16}) {
        const GroupOrder n{nv};
        const auto l = line_digraph(n);
        const auto iso = cayley_isomorphism(l, build_cayley_graph(n));
        const Eigen::MatrixXcd p = permutation_matrix(basis_permutation(l, iso.bijection));
        const Eigen::MatrixXcd ud = build_step_operator(n, hadamard_coin()).dense();
        const Eigen::MatrixXcd um = build_memory_walk_operator(n, hadamard_coin()).dense();
        const double conj = (p * ud * p.transpose() - um).cwiseAbs().maxCoeff();
        const auto spec = eigenvalue_multiset_compare(ud, um, 1e-10);
        const auto transport = transport_distributions(n, hadamard_coin(), 50);
        std::printf("N=%2d  isomorphism %s  |P U P^T - U_mem| = %.1e  eigenvalue distance %.1e  transport %.1e\n", nv,
                    iso.verified ? "ok" : "FAILED", conj, spec.max_distance, transport.max_deviation);
    }
}
