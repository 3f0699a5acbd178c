// memory_walk.hpp
// Quantum walk with one-step memory on the N-cycle and its equivalence with
// the memoryless walk on Cayley(D_N).
//
// The memory walk lives on the line digraph of the (symmetric) N-cycle: its
// vertices are the 2N directed cycle edges, with an arc (a,b) -> (b,c). A
// directed edge is labelled by (m, v): m = 0 for (v, v+1), m = 1 for (v+1, v),
// so v names the undirected edge {v, v+1} and m the direction of travel.
// Coin 0 transmits (keep going), coin 1 reflects (turn around).

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "assignment.hpp"
#include "cayley.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "state.hpp"
#include "walk.hpp"

namespace dihedral_walk {

struct DirectedEdge {
    int from;
    int to;

    friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

[[nodiscard]] inline std::string to_string(DirectedEdge e) {
    return "(" + std::to_string(e.from) + "," + std::to_string(e.to) + ")";
}

struct LineDigraph {
    int base_size = 0;
    std::vector<DirectedEdge> vertices;                     // edges of the base digraph
    std::vector<std::pair<std::size_t, std::size_t>> arcs;  // indices into vertices

    [[nodiscard]] std::size_t vertex_index(DirectedEdge e) const {
        const auto it = std::find(vertices.begin(), vertices.end(), e);
        if (it == vertices.end()) throw validation_error("edge " + to_string(e) + " is not a line-digraph vertex");
        return static_cast<std::size_t>(it - vertices.begin());
    }

    [[nodiscard]] std::vector<int> out_degrees() const {
        std::vector<int> d(vertices.size(), 0);
        for (const auto& [a, b] : arcs) ++d[a];
        return d;
    }

    [[nodiscard]] std::vector<int> in_degrees() const {
        std::vector<int> d(vertices.size(), 0);
        for (const auto& [a, b] : arcs) ++d[b];
        return d;
    }
};

// ((a,b),(c,d)) is an arc iff both are base edges and b == c.
[[nodiscard]] inline LineDigraph line_digraph_of(int base_size, std::vector<DirectedEdge> base_edges) {
    LineDigraph l{base_size, std::move(base_edges), {}};
    for (std::size_t x = 0; x < l.vertices.size(); ++x)
        for (std::size_t y = 0; y < l.vertices.size(); ++y)
            if (l.vertices[x].to == l.vertices[y].from) l.arcs.emplace_back(x, y);
    return l;
}

// Both orientations of every cycle edge, ordered (0,1), (0,N-1), (1,2), (1,0), ...
[[nodiscard]] inline std::vector<DirectedEdge> cycle_edges(GroupOrder n) {
    std::vector<DirectedEdge> e;
    e.reserve(n.group_size());
    for (int u = 0; u < n.value(); ++u) {
        e.push_back({u, mod(u + 1, n.value())});
        e.push_back({u, mod(u - 1, n.value())});
    }
    return e;
}

[[nodiscard]] inline LineDigraph line_digraph(GroupOrder n) { return line_digraph_of(n.value(), cycle_edges(n)); }
[[nodiscard]] inline LineDigraph line_digraph(int n) { return line_digraph(GroupOrder{n}); }

struct MemoryLabel {
    int m;  // 0: clockwise (v -> v+1), 1: counter-clockwise
    int v;  // undirected edge {v, v+1}
};

[[nodiscard]] inline MemoryLabel memory_label(DirectedEdge e, GroupOrder n) {
    if (e.to == mod(e.from + 1, n.value())) return {0, e.from};
    if (e.to == mod(e.from - 1, n.value())) return {1, e.to};
    throw validation_error("edge " + to_string(e) + " is not a cycle edge");
}

[[nodiscard]] inline DirectedEdge memory_edge(MemoryLabel l, GroupOrder n) {
    return l.m == 0 ? DirectedEdge{l.v, mod(l.v + 1, n.value())} : DirectedEdge{mod(l.v + 1, n.value()), l.v};
}

// ---------------------------------------------------------------------------
// Partitions

struct Partition {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> classes;
};

struct PartitionVerdict {
    bool valid = true;
    std::vector<std::string> violations;
};

[[nodiscard]] inline PartitionVerdict validate_partition(const Partition& p, const LineDigraph& l,
                                                         bool cycle_factorization) {
    PartitionVerdict verdict;
    auto fail = [&](std::string msg) {
        verdict.valid = false;
        verdict.violations.push_back(std::move(msg));
    };
    const std::set<std::pair<std::size_t, std::size_t>> arc_set(l.arcs.begin(), l.arcs.end());
    std::set<std::pair<std::size_t, std::size_t>> covered;
    for (std::size_t ci = 0; ci < p.classes.size(); ++ci) {
        std::vector<int> out(l.vertices.size(), 0), in(l.vertices.size(), 0);
        for (const auto& arc : p.classes[ci]) {
            if (arc.first >= l.vertices.size() || arc.second >= l.vertices.size() || !arc_set.contains(arc)) {
                fail("class " + std::to_string(ci) + " contains a pair that is not an arc");
                continue;
            }
            covered.insert(arc);
            ++out[arc.first];
            ++in[arc.second];
        }
        for (std::size_t v = 0; v < l.vertices.size(); ++v) {
            if (out[v] != 1) {
                fail("class " + std::to_string(ci) + ": vertex " + to_string(l.vertices[v]) + " has out-degree " +
                     std::to_string(out[v]));
            }
            if (cycle_factorization && in[v] != 1) {
                fail("class " + std::to_string(ci) + ": vertex " + to_string(l.vertices[v]) + " has in-degree " +
                     std::to_string(in[v]));
            }
        }
    }
    for (const auto& arc : l.arcs) {
        if (!covered.contains(arc)) {
            fail("arc " + to_string(l.vertices[arc.first]) + "->" + to_string(l.vertices[arc.second]) +
                 " is in no class");
        }
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// Isomorphism with Cayley(D_N)

struct VertexBijection {
    GroupOrder order;
    std::vector<GroupElement> image;  // image[i] for line-digraph vertex i
};

struct IsomorphismCheck {
    bool verified = false;
    std::string counterexample;  // empty when verified
};

namespace detail {

// Arc multiplicities keyed by (from, to) vertex index.
using ArcCount = std::map<std::pair<std::size_t, std::size_t>, int>;

[[nodiscard]] inline ArcCount count_arcs(const LineDigraph& l) {
    ArcCount c;
    for (const auto& arc : l.arcs) ++c[arc];
    return c;
}

[[nodiscard]] inline ArcCount count_edges(const CayleyGraph& g) {
    ArcCount c;
    for (const auto& e : g.edges) ++c[{e.from.index(g.order), e.to.index(g.order)}];
    return c;
}

[[nodiscard]] inline int lookup(const ArcCount& c, std::size_t a, std::size_t b) {
    const auto it = c.find({a, b});
    return it == c.end() ? 0 : it->second;
}

}  // namespace detail

// Checks bijectivity and that (x, y) is an arc of L iff (f(x), f(y)) is an
// edge of G, with multiplicities.
[[nodiscard]] inline IsomorphismCheck verify_isomorphism(const LineDigraph& l, const CayleyGraph& g,
                                                         const VertexBijection& f) {
    IsomorphismCheck r;
    const std::size_t nv = g.order.group_size();
    if (l.vertices.size() != nv || f.image.size() != nv) {
        r.counterexample = "vertex counts differ: line digraph " + std::to_string(l.vertices.size()) + ", Cayley " +
                           std::to_string(nv);
        return r;
    }
    std::vector<std::size_t> fidx(nv);
    std::vector<bool> hit(nv, false);
    for (std::size_t i = 0; i < nv; ++i) {
        if (!is_valid(f.image[i], g.order) || hit[f.image[i].index(g.order)]) {
            r.counterexample = "map is not a bijection at " + to_string(l.vertices[i]);
            return r;
        }
        fidx[i] = f.image[i].index(g.order);
        hit[fidx[i]] = true;
    }
    const auto la = detail::count_arcs(l);
    const auto ge = detail::count_edges(g);
    for (std::size_t x = 0; x < nv; ++x) {
        for (std::size_t y = 0; y < nv; ++y) {
            const int a = detail::lookup(la, x, y);
            const int b = detail::lookup(ge, fidx[x], fidx[y]);
            if (a != b) {
                std::ostringstream os;
                os << "arc " << to_string(l.vertices[x]) << "->" << to_string(l.vertices[y]) << " has multiplicity "
                   << a << " in the line digraph but its image (" << f.image[x].s << "," << f.image[x].t << ")->("
                   << f.image[y].s << "," << f.image[y].t << ") has " << b << " in the Cayley graph";
                r.counterexample = os.str();
                return r;
            }
        }
    }
    r.verified = true;
    return r;
}

// (v, v+1) -> (0, v),  (v, v-1) -> (1, v-1).
[[nodiscard]] inline VertexBijection canonical_bijection(const LineDigraph& l, GroupOrder n) {
    VertexBijection f{n, {}};
    f.image.reserve(l.vertices.size());
    for (const auto& e : l.vertices) {
        if (e.to == mod(e.from + 1, n.value())) {
            f.image.push_back({0, e.from});
        } else if (e.to == mod(e.from - 1, n.value())) {
            f.image.push_back({1, e.to});
        } else {
            f.image.push_back({-1, -1});  // rejected by verification
        }
    }
    return f;
}

// Backtracking search for an arc-preserving bijection (small graphs only).
[[nodiscard]] inline std::optional<VertexBijection> search_isomorphism(const LineDigraph& l, const CayleyGraph& g) {
    const std::size_t nv = g.order.group_size();
    if (l.vertices.size() != nv || l.arcs.size() != g.edges.size()) return std::nullopt;
    const auto la = detail::count_arcs(l);
    const auto ge = detail::count_edges(g);
    std::vector<int> lout(nv, 0), lin(nv, 0), gout(nv, 0), gin(nv, 0);
    for (const auto& [k, c] : la) {
        lout[k.first] += c;
        lin[k.second] += c;
    }
    for (const auto& [k, c] : ge) {
        gout[k.first] += c;
        gin[k.second] += c;
    }

    // Visit line-digraph vertices in BFS order so each new vertex touches a mapped one.
    std::vector<std::size_t> order;
    std::vector<bool> seen(nv, false);
    std::vector<std::vector<std::size_t>> nbr(nv);
    for (const auto& [a, b] : l.arcs) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    for (std::size_t root = 0; root < nv; ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        order.push_back(root);
        for (std::size_t h = order.size() - 1; h < order.size(); ++h)
            for (auto w : nbr[order[h]])
                if (!seen[w]) {
                    seen[w] = true;
                    order.push_back(w);
                }
    }

    std::vector<std::ptrdiff_t> map(nv, -1);
    std::vector<bool> used(nv, false);
    auto consistent = [&](std::size_t x, std::size_t t) {
        if (lout[x] != gout[t] || lin[x] != gin[t]) return false;
        if (detail::lookup(la, x, x) != detail::lookup(ge, t, t)) return false;
        for (std::size_t y = 0; y < nv; ++y) {
            if (map[y] < 0) continue;
            const auto u = static_cast<std::size_t>(map[y]);
            if (detail::lookup(la, x, y) != detail::lookup(ge, t, u)) return false;
            if (detail::lookup(la, y, x) != detail::lookup(ge, u, t)) return false;
        }
        return true;
    };
    auto recurse = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == nv) return true;
        const std::size_t x = order[depth];
        for (std::size_t t = 0; t < nv; ++t) {
            if (used[t] || !consistent(x, t)) continue;
            map[x] = static_cast<std::ptrdiff_t>(t);
            used[t] = true;
            if (self(self, depth + 1)) return true;
            map[x] = -1;
            used[t] = false;
        }
        return false;
    };
    if (!recurse(recurse, 0)) return std::nullopt;

    VertexBijection f{g.order, {}};
    for (std::size_t x = 0; x < nv; ++x) f.image.push_back(GroupElement::from_index(static_cast<std::size_t>(map[x]), g.order));
    return f;
}

enum class IsomorphismStrategy { canonical_then_search, search_only };

struct IsomorphismResult {
    VertexBijection bijection;
    bool verified = false;
    bool used_search = false;
    std::string counterexample;
};

[[nodiscard]] inline IsomorphismResult cayley_isomorphism(
    const LineDigraph& l, const CayleyGraph& g,
    IsomorphismStrategy strategy = IsomorphismStrategy::canonical_then_search) {
    if (l.base_size != g.order.value()) {
        throw order_mismatch_error("line digraph of the " + std::to_string(l.base_size) + "-cycle vs Cayley(D_" +
                                   std::to_string(g.order.value()) + ")");
    }
    IsomorphismResult r{canonical_bijection(l, g.order), false, false, {}};
    if (strategy == IsomorphismStrategy::canonical_then_search) {
        const auto check = verify_isomorphism(l, g, r.bijection);
        if (check.verified) {
            r.verified = true;
            return r;
        }
        r.counterexample = check.counterexample;
    }
    r.used_search = true;
    if (auto found = search_isomorphism(l, g)) {
        const auto check = verify_isomorphism(l, g, *found);
        if (check.verified) {
            r.bijection = std::move(*found);
            r.verified = true;
            r.counterexample.clear();
            return r;
        }
    }
    if (r.counterexample.empty()) r.counterexample = "no arc-preserving bijection exists";
    return r;
}

// Colours each arc of L by the generator label of its image edge.
[[nodiscard]] inline Partition label_partition(const LineDigraph& l, const CayleyGraph& g, const VertexBijection& f) {
    std::map<std::pair<std::size_t, std::size_t>, GeneratorLabel> label_of;
    for (const auto& e : g.edges) label_of[{e.from.index(g.order), e.to.index(g.order)}] = e.label;
    Partition p;
    p.classes.resize(2);
    for (const auto& arc : l.arcs) {
        const auto key = std::make_pair(f.image[arc.first].index(g.order), f.image[arc.second].index(g.order));
        const auto it = label_of.find(key);
        if (it == label_of.end()) throw validation_error("bijection does not preserve arcs");
        p.classes[it->second == GeneratorLabel::rotation ? 0 : 1].push_back(arc);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Memory walk operator

using MemoryShiftOperator = BasicShift<MemoryBasis>;
using MemoryStepOperator = BasicStepOperator<MemoryBasis>;

// Built from the line digraph: the transmit successor of (a,b) is the arc
// target (b,c) with c != a, the reflect successor is (b,a).
[[nodiscard]] inline MemoryShiftOperator build_memory_shift(GroupOrder n) {
    const LineDigraph l = line_digraph(n);
    const std::size_t nn = n.size();
    std::vector<std::size_t> image(4 * nn);
    for (const auto& [x, y] : l.arcs) {
        const DirectedEdge from = l.vertices[x];
        const DirectedEdge to = l.vertices[y];
        const MemoryLabel src = memory_label(from, n);
        const MemoryLabel dst = memory_label(to, n);
        const int coin = to.to == from.from ? 1 : 0;
        image[basis_index(coin, src.m, src.v, nn)] = basis_index(coin, dst.m, dst.v, nn);
    }
    return {n, std::move(image)};
}

[[nodiscard]] inline MemoryStepOperator build_memory_walk_operator(GroupOrder n, const CoinOperator& coin) {
    return {build_memory_shift(n), coin};
}

// Coin |0>, memory (|0> + |1>)/sqrt2 when requested (else |0>), edge index j.
[[nodiscard]] inline MemoryWalkState memory_initial_state(GroupOrder n, bool memory_superposition, int j) {
    if (j < 0 || j >= n.value()) throw validation_error("start position outside Z_N");
    std::vector<cplx> a(4 * n.size());
    a[basis_index(0, 0, j, n.size())] = 1.0;
    if (memory_superposition) a[basis_index(0, 1, j, n.size())] = 1.0;
    return MemoryWalkState::normalized(n, std::move(a));
}

// Basis permutation P with P |c, s, j> = |c, m, v> induced by a verified
// bijection: perm[dihedral index] = memory index.
[[nodiscard]] inline std::vector<std::size_t> basis_permutation(const LineDigraph& l, const VertexBijection& f) {
    const GroupOrder n = f.order;
    const std::size_t nn = n.size();
    std::vector<std::size_t> perm(4 * nn);
    for (std::size_t x = 0; x < l.vertices.size(); ++x) {
        const MemoryLabel ml = memory_label(l.vertices[x], n);
        const GroupElement g = f.image[x];
        for (int c = 0; c < 2; ++c) perm[basis_index(c, g.s, g.t, nn)] = basis_index(c, ml.m, ml.v, nn);
    }
    return perm;
}

[[nodiscard]] inline Eigen::MatrixXcd permutation_matrix(const std::vector<std::size_t>& perm) {
    const auto d = static_cast<Eigen::Index>(perm.size());
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < perm.size(); ++i) p(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(i)) = 1.0;
    return p;
}

// ---------------------------------------------------------------------------
// Spectral comparison

struct SpectrumComparison {
    std::vector<cplx> spectrum_a;
    std::vector<cplx> spectrum_b;
    double max_distance = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

[[nodiscard]] inline std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXcd& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    if (solver.info() != Eigen::Success) throw numeric_error("eigensolver did not converge");
    std::vector<cplx> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

[[nodiscard]] inline SpectrumComparison eigenvalue_multiset_compare(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                                                    double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw dimension_error("operators must be square and of equal dimension");
    }
    SpectrumComparison r;
    r.spectrum_a = dense_eigenvalues(a);
    r.spectrum_b = dense_eigenvalues(b);
    r.max_distance = pair_eigenvalues(r.spectrum_a, r.spectrum_b).max_distance;
    r.tolerance = tol;
    r.pass = r.max_distance < tol;
    return r;
}

template <class BasisA, class BasisB>
[[nodiscard]] SpectrumComparison eigenvalue_multiset_compare(const BasicStepOperator<BasisA>& a,
                                                             const BasicStepOperator<BasisB>& b, double tol) {
    return eigenvalue_multiset_compare(a.dense(), b.dense(), tol);
}

// Evolves the dihedral start (|0,j> + |1,j>)/sqrt2 (coin 0) and the memory
// start with memory in superposition, maps memory probabilities through the
// bijection, and returns the largest per-vertex deviation over all steps.
struct TransportReport {
    int steps = 0;
    double max_deviation = 0.0;
};

[[nodiscard]] inline TransportReport transport_distributions(GroupOrder n, const CoinOperator& coin, int steps,
                                                            int j = 0) {
    const LineDigraph l = line_digraph(n);
    const CayleyGraph g = build_cayley_graph(n);
    const auto iso = cayley_isomorphism(l, g);
    if (!iso.verified) throw validation_error("no isomorphism: " + iso.counterexample);
    const auto perm = basis_permutation(l, iso.bijection);
    const std::size_t nn = n.size();

    const StepOperator ud = build_step_operator(n, coin);
    const MemoryStepOperator um = build_memory_walk_operator(n, coin);
    InitialSpec spec;
    spec.vertex = InitialSpec::Vertex::pair;
    spec.j = j;
    WalkState psi = initial_state(n, spec);
    MemoryWalkState phi = memory_initial_state(n, true, j);

    TransportReport r{steps, 0.0};
    for (int t = 0; t <= steps; ++t) {
        if (t > 0) {
            psi = ud.apply(psi);
            phi = um.apply(phi);
        }
        const auto pd = vertex_probabilities(psi);
        const auto pm = vertex_probabilities(phi);
        for (std::size_t vtx = 0; vtx < 2 * nn; ++vtx) {
            // vtx = s*N + j is also the coin-0 dihedral index
            const std::size_t mem = perm[vtx] % (2 * nn);
            r.max_deviation = std::max(r.max_deviation, std::abs(pd[vtx] - pm[mem]));
        }
    }
    return r;
}

}  // namespace dihedral_walk
