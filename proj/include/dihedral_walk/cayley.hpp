// cayley.hpp
// Cayley graph of D_N for the generating set {sigma, tau} and the classical
// random walk that assigns probability 1/2 to each outgoing edge.
//
// Edges realise LEFT multiplication by the generator, so that the rotation
// edge from (s, j) lands on (s, j + (-1)^s). This is the adjacency the
// quantum shift operator uses.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace dihedral_walk {

enum class GeneratorLabel { rotation, flip };

[[nodiscard]] inline char label_char(GeneratorLabel l) noexcept {
    return l == GeneratorLabel::rotation ? 'R' : 'F';
}

[[nodiscard]] inline GroupElement generator(GeneratorLabel l) noexcept {
    return l == GeneratorLabel::rotation ? rotation_generator() : flip_generator();
}

struct LabeledEdge {
    GroupElement from;
    GroupElement to;
    GeneratorLabel label;

    friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
};

// Plain value type. Tests build broken fixtures by editing `edges`.
struct CayleyGraph {
    GroupOrder order;
    std::vector<GroupElement> vertices;
    std::vector<LabeledEdge> edges;

    [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges.size(); }
};

[[nodiscard]] inline CayleyGraph build_cayley_graph(GroupOrder n) {
    CayleyGraph g{n, elements(n), {}};
    g.edges.reserve(2 * g.vertices.size());
    for (const auto& v : g.vertices) {
        for (auto label : {GeneratorLabel::rotation, GeneratorLabel::flip}) {
            g.edges.push_back({v, compose(generator(label), v, n), label});
        }
    }
    return g;
}

[[nodiscard]] inline CayleyGraph build_cayley_graph(int n) { return build_cayley_graph(GroupOrder{n}); }

struct DegreeReport {
    std::vector<int> out_degree;  // indexed by GroupElement::index
    std::vector<int> in_degree;
    bool is_regular = false;
    int degree = 0;  // common degree when regular
};

// Regular digraphs are reversible, which is what a coined walk needs.
[[nodiscard]] inline DegreeReport check_regular_reversible(const CayleyGraph& g) {
    const std::size_t nv = g.order.group_size();
    DegreeReport r;
    r.out_degree.assign(nv, 0);
    r.in_degree.assign(nv, 0);
    for (const auto& e : g.edges) {
        if (!is_valid(e.from, g.order) || !is_valid(e.to, g.order)) {
            throw validation_error("edge endpoint outside the vertex set");
        }
        ++r.out_degree[e.from.index(g.order)];
        ++r.in_degree[e.to.index(g.order)];
    }
    const int d = r.out_degree.empty() ? 0 : r.out_degree.front();
    r.is_regular = g.vertices.size() == nv;
    for (std::size_t i = 0; i < nv && r.is_regular; ++i) {
        r.is_regular = r.out_degree[i] == d && r.in_degree[i] == d;
    }
    r.degree = r.is_regular ? d : 0;
    return r;
}

// Each label class must be a permutation of the vertex set: one outgoing and
// one incoming edge of that label at every vertex.
[[nodiscard]] inline bool label_class_is_permutation(const CayleyGraph& g, GeneratorLabel label) {
    const std::size_t nv = g.order.group_size();
    std::vector<int> out(nv, 0), in(nv, 0);
    for (const auto& e : g.edges) {
        if (e.label != label) continue;
        ++out[e.from.index(g.order)];
        ++in[e.to.index(g.order)];
    }
    for (std::size_t i = 0; i < nv; ++i)
        if (out[i] != 1 || in[i] != 1) return false;
    return true;
}

// Probability mass over the 2N group elements, indexed by GroupElement::index.
class ClassicalDistribution {
public:
    static constexpr double tolerance = 1e-12;

    ClassicalDistribution(GroupOrder n, std::vector<double> mass) : order_(n), mass_(std::move(mass)) {
        if (mass_.size() != n.group_size()) {
            throw dimension_error("classical distribution needs " + std::to_string(n.group_size()) +
                                  " entries, got " + std::to_string(mass_.size()));
        }
        double total = 0.0;
        for (double m : mass_) {
            if (m < 0.0) throw normalization_error("negative probability mass");
            total += m;
        }
        if (std::abs(total - 1.0) > tolerance) {
            throw normalization_error("classical distribution sums to " + std::to_string(total));
        }
    }

    [[nodiscard]] static ClassicalDistribution point_mass(GroupOrder n, GroupElement g) {
        require_valid(g, n);
        std::vector<double> m(n.group_size(), 0.0);
        m[g.index(n)] = 1.0;
        return {n, std::move(m)};
    }

    [[nodiscard]] static ClassicalDistribution uniform(GroupOrder n) {
        return {n, std::vector<double>(n.group_size(), 1.0 / static_cast<double>(n.group_size()))};
    }

    [[nodiscard]] GroupOrder order() const noexcept { return order_; }
    [[nodiscard]] const std::vector<double>& mass() const noexcept { return mass_; }
    [[nodiscard]] double operator[](GroupElement g) const { return mass_.at(g.index(order_)); }

private:
    GroupOrder order_;
    std::vector<double> mass_;
};

// One step of the classical walk: half of each vertex's mass along its R edge,
// half along its F edge.
[[nodiscard]] inline ClassicalDistribution classical_step(const ClassicalDistribution& dist, GroupOrder n) {
    if (dist.order() != n) throw order_mismatch_error("classical distribution built for a different N");
    std::vector<double> next(n.group_size(), 0.0);
    for (std::size_t i = 0; i < n.group_size(); ++i) {
        const GroupElement v = GroupElement::from_index(i, n);
        const double half = 0.5 * dist.mass()[i];
        next[compose(rotation_generator(), v, n).index(n)] += half;
        next[compose(flip_generator(), v, n).index(n)] += half;
    }
    return {n, std::move(next)};
}

// Cesaro mean of the first `steps` iterates (steps >= 1), starting after one step.
[[nodiscard]] inline std::vector<double> classical_time_average(ClassicalDistribution dist, int steps) {
    if (steps < 1) throw validation_error("time average needs at least one step");
    const GroupOrder n = dist.order();
    std::vector<double> acc(n.group_size(), 0.0);
    for (int t = 0; t < steps; ++t) {
        dist = classical_step(dist, n);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += dist.mass()[i];
    }
    for (double& a : acc) a /= steps;
    return acc;
}

}  // namespace dihedral_walk
