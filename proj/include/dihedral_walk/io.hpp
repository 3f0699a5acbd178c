// io.hpp
// JSON and CSV emitters. CSV numbers use 17 significant digits so doubles
// round-trip; lines end with LF.

#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cayley.hpp"
#include "memory_walk.hpp"
#include "spectral.hpp"
#include "state.hpp"
#include "stats.hpp"

namespace dihedral_walk::io {

using json = nlohmann::json;

[[nodiscard]] inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

[[nodiscard]] inline json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

[[nodiscard]] inline json element_pair(GroupElement g) { return json::array({g.s, g.t}); }

[[nodiscard]] inline json cayley_graph_json(const CayleyGraph& g) {
    json vertices = json::array();
    for (const auto& v : g.vertices) vertices.push_back(element_pair(v));
    json edges = json::array();
    for (const auto& e : g.edges) {
        edges.push_back({{"from", element_pair(e.from)},
                         {"to", element_pair(e.to)},
                         {"label", std::string(1, label_char(e.label))}});
    }
    return {{"N", g.order.value()}, {"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

template <class Basis>
[[nodiscard]] json state_snapshot_json(const BasicState<Basis>& psi, int step) {
    json amps = json::array();
    for (const auto& a : psi.amplitudes()) amps.push_back(complex_pair(a));
    return {{"N", psi.order().value()}, {"step", step}, {"amplitudes", std::move(amps)}};
}

[[nodiscard]] inline json spectrum_json(GroupOrder n, std::span<const ModeComparison> modes) {
    json out_modes = json::array();
    for (const auto& m : modes) {
        json ev = json::array(), num = json::array(), res = json::array();
        for (std::size_t i = 0; i < 4; ++i) {
            ev.push_back(complex_pair(m.analytic.eigenvalues[i]));
            num.push_back(complex_pair(m.numeric.eigenvalues[i]));
            res.push_back(m.analytic.residuals[i]);
        }
        out_modes.push_back({{"k", m.k},
                             {"eigenvalues", std::move(ev)},
                             {"residuals", std::move(res)},
                             {"numeric_eigenvalues", std::move(num)},
                             {"pairing_distance", m.pairing_distance}});
    }
    return {{"N", n.value()}, {"modes", std::move(out_modes)}};
}

// Columns k, i, re, im, residual, pairing_distance (analytic eigenvalues).
inline void write_spectrum_csv(std::ostream& os, std::span<const ModeComparison> modes) {
    os << "k,i,re,im,residual,pairing_distance\n";
    for (const auto& m : modes) {
        for (std::size_t i = 0; i < 4; ++i) {
            const cplx z = m.analytic.eigenvalues[i];
            os << m.k << ',' << i + 1 << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << ','
               << format_double(m.analytic.residuals[i]) << ',' << format_double(m.pairing_distance) << '\n';
        }
    }
}

[[nodiscard]] inline json certificate_json(const LineDigraph& l, const VertexBijection& f, bool verified) {
    json map = json::array();
    for (std::size_t x = 0; x < l.vertices.size() && x < f.image.size(); ++x) {
        map.push_back({{"edge", json::array({l.vertices[x].from, l.vertices[x].to})},
                       {"vertex", element_pair(f.image[x])}});
    }
    return {{"N", f.order.value()}, {"map", std::move(map)}, {"verified", verified}};
}

inline void write_trajectory_header(std::ostream& os) { os << "step,s,j,probability\n"; }

inline void write_trajectory_rows(std::ostream& os, int step, std::span<const double> p, std::size_t n) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        os << step << ',' << i / n << ',' << i % n << ',' << format_double(p[i]) << '\n';
    }
}

inline void write_trajectory_csv(std::ostream& os, std::span<const VertexDistribution> traj) {
    write_trajectory_header(os);
    for (std::size_t t = 0; t < traj.size(); ++t) write_trajectory_rows(os, static_cast<int>(t), traj[t].p, traj[t].order.size());
}

// Columns s, j, probability.
inline void write_distribution_csv(std::ostream& os, std::span<const double> p, std::size_t n) {
    os << "s,j,probability\n";
    for (std::size_t i = 0; i < p.size(); ++i) os << i / n << ',' << i % n << ',' << format_double(p[i]) << '\n';
}

}  // namespace dihedral_walk::io
