#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dihedral_walk/dihedral_walk.hpp"

namespace dw = dihedral_walk;
using dw::io::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_breach = 2;
constexpr int exit_io = 3;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    int n = 4;
    int steps = 0;
    std::string coin = "hadamard";
    std::string initial = "c=0;s=0;j=0";
    std::string backend = "direct";
    std::string output = "csv";
    std::string out_path;
    std::uint64_t seed = 0;

    std::string coin_state;
    bool corrupt = false;
    int j = 0;
    int d = 1;
};

template <class F>
auto field(const char* name, F&& f) {
    try {
        return f();
    } catch (const dw::walk_error& e) {
        throw usage_error(std::string(name) + ": " + e.what());
    }
}

struct Resolved {
    dw::RunConfig cfg;
    dw::GroupOrder order;
    dw::CoinOperator coin;
};

Resolved resolve(const Flags& f) {
    const dw::GroupOrder order = field("--n", [&] { return dw::GroupOrder{f.n}; });
    if (f.steps < 0) throw usage_error("--steps: must be >= 0");
    dw::RunConfig cfg;
    cfg.n = f.n;
    cfg.steps = f.steps;
    cfg.coin = f.coin;
    cfg.initial = f.initial;
    cfg.backend = field("--backend", [&] { return dw::parse_backend(f.backend); });
    cfg.output = field("--output", [&] { return dw::parse_output(f.output); });
    cfg.seed = f.seed;
    cfg.out_path = f.out_path;
    return {cfg, order, field("--coin", [&] { return dw::parse_coin(f.coin); })};
}

dw::InitialSpec initial_spec(const Flags& f) {
    auto spec = field("--initial", [&] { return dw::parse_initial(f.initial); });
    if (!f.coin_state.empty()) spec.coin = field("--coin-state", [&] { return dw::parse_coin_state(f.coin_state); });
    return spec;
}

dw::WalkState initial_state(const Flags& f, dw::GroupOrder n) {
    if (f.initial == "random") {
        std::mt19937_64 rng(f.seed);
        return dw::WalkState::random(n, rng);
    }
    const auto spec = initial_spec(f);
    return field("--initial", [&] { return dw::initial_state(n, spec); });
}

void emit(const dw::RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw io_error("failed writing to stdout");
        return;
    }
    std::ofstream os(cfg.out_path, std::ios::binary);
    if (!os) throw io_error("cannot open " + cfg.out_path + " for writing");
    os << text;
    os.close();
    if (!os) throw io_error("failed writing " + cfg.out_path);
}

json dump_distribution(std::span<const double> p) { return json(std::vector<double>(p.begin(), p.end())); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_evolve(const Flags& f) {
    const auto r = resolve(f);
    const auto psi0 = initial_state(f, r.order);
    const auto u = dw::build_step_operator(r.order, r.coin);

    std::vector<dw::VertexDistribution> traj;
    std::optional<double> deviation;
    if (r.cfg.backend == dw::Backend::spectral) {
        const dw::SpectralPropagator prop(psi0, r.coin);
        for (int t = 0; t <= r.cfg.steps; ++t) traj.push_back(dw::probability_distribution(prop.state_at(t)));
    } else {
        std::optional<dw::SpectralPropagator> prop;
        if (r.cfg.backend == dw::Backend::both) {
            prop.emplace(psi0, r.coin);
            deviation = 0.0;
        }
        dw::for_each_step(psi0, u, r.cfg.steps, [&](int t, const dw::WalkState& psi) {
            traj.push_back(dw::probability_distribution(psi));
            if (prop) deviation = std::max(*deviation, dw::max_abs_difference(prop->amplitudes_at(t), psi.amplitudes()));
        });
    }

    std::ostringstream os;
    if (r.cfg.output == dw::OutputFormat::csv) {
        dw::io::write_trajectory_csv(os, traj);
    } else {
        json j{{"N", r.cfg.n}, {"steps", r.cfg.steps}, {"final", dump_distribution(traj.back().p)}};
        if (r.cfg.steps > 0) {
            j["time_average"] = dump_distribution(dw::time_average(std::span(traj).subspan(1)).mean);
        } else {
            j["time_average"] = nullptr;
        }
        j["limiting"] = dump_distribution(dw::limiting_distribution(psi0, r.coin).p);
        if (deviation) j["backend_deviation"] = *deviation;
        os << dump(j);
    }
    emit(r.cfg, os.str());

    if (deviation) {
        const bool ok = *deviation < dw::RunConfig::cross_check_tolerance;
        std::fprintf(stderr, "backend deviation %s (tolerance %g) %s\n", dw::io::format_double(*deviation).c_str(),
                     dw::RunConfig::cross_check_tolerance, ok ? "ok" : "BREACH");
        if (!ok) return exit_breach;
    }
    return exit_ok;
}

int cmd_spectrum(const Flags& f) {
    const auto r = resolve(f);
    if (!dw::is_hadamard(r.coin)) throw usage_error("--coin: closed-form spectra are available for the Hadamard coin only");
    const auto modes = dw::compare_spectra(r.order);

    std::ostringstream os;
    if (r.cfg.output == dw::OutputFormat::csv) {
        dw::io::write_spectrum_csv(os, modes);
    } else {
        os << dump(dw::io::spectrum_json(r.order, modes));
    }
    emit(r.cfg, os.str());

    double worst = 0.0;
    for (const auto& m : modes) {
        worst = std::max(worst, m.pairing_distance);
        for (double res : m.analytic.residuals) worst = std::max(worst, res);
    }
    if (!(worst < dw::RunConfig::cross_check_tolerance)) {
        std::fprintf(stderr, "spectrum check failed: worst residual/pairing distance %g\n", worst);
        return exit_breach;
    }
    return exit_ok;
}

int cmd_compare_memory(const Flags& f) {
    constexpr double tolerance = 1e-10;
    const auto r = resolve(f);
    auto l = dw::line_digraph(r.order);
    if (f.corrupt) l.arcs.front().second = l.arcs.front().first;
    const auto g = dw::build_cayley_graph(r.order);
    const auto iso = dw::cayley_isomorphism(l, g);

    json j{{"N", r.cfg.n}, {"isomorphism", dw::io::certificate_json(l, iso.bijection, iso.verified)}};
    bool pass = iso.verified;
    if (!iso.verified) {
        j["isomorphism"]["counterexample"] = iso.counterexample;
    } else {
        const auto spec = dw::eigenvalue_multiset_compare(dw::build_step_operator(r.order, r.coin),
                                                          dw::build_memory_walk_operator(r.order, r.coin), tolerance);
        const auto transport = dw::transport_distributions(r.order, r.coin, r.cfg.steps);
        const bool transport_ok = transport.max_deviation < tolerance;
        pass = spec.pass && transport_ok;
        j["eigenvalues"] = {{"max_distance", spec.max_distance}, {"tolerance", tolerance}, {"pass", spec.pass}};
        j["transport"] = {{"steps", transport.steps},
                          {"max_deviation", transport.max_deviation},
                          {"tolerance", tolerance},
                          {"pass", transport_ok}};
    }
    j["pass"] = pass;

    std::ostringstream os;
    if (r.cfg.output == dw::OutputFormat::csv) {
        os << "check,value,tolerance,pass\n";
        os << "isomorphism," << (iso.verified ? 1 : 0) << ",," << (iso.verified ? "true" : "false") << '\n';
        if (iso.verified) {
            os << "eigenvalues," << dw::io::format_double(j["eigenvalues"]["max_distance"].get<double>()) << ','
               << dw::io::format_double(tolerance) << ',' << (j["eigenvalues"]["pass"].get<bool>() ? "true" : "false")
               << '\n';
            os << "transport," << dw::io::format_double(j["transport"]["max_deviation"].get<double>()) << ','
               << dw::io::format_double(tolerance) << ',' << (j["transport"]["pass"].get<bool>() ? "true" : "false")
               << '\n';
        }
    } else {
        os << dump(j);
    }
    emit(r.cfg, os.str());

    if (!iso.verified) std::fprintf(stderr, "isomorphism check failed: %s\n", iso.counterexample.c_str());
    return pass ? exit_ok : exit_breach;
}

// 1, 2, 4, ... up to steps, always ending at steps.
std::vector<int> geometric_checkpoints(int steps) {
    std::vector<int> out;
    for (int c = 1; c < steps; c *= 2) out.push_back(c);
    out.push_back(steps);
    return out;
}

int cmd_time_average(const Flags& f) {
    const auto r = resolve(f);
    if (r.cfg.steps < 1) throw usage_error("--steps: time average needs at least one step");
    const auto psi0 = initial_state(f, r.order);
    const auto u = dw::build_step_operator(r.order, r.coin);
    const auto limit = dw::limiting_distribution(psi0, r.coin);
    const auto checkpoints = geometric_checkpoints(r.cfg.steps);
    const std::size_t nn = r.order.size();

    std::ostringstream os;
    const bool csv = r.cfg.output == dw::OutputFormat::csv;
    if (csv) os << "step,s,j,probability,time_average,limiting\n";
    json gaps = json::array();
    dw::RunningAverage acc(r.order);
    dw::VertexDistribution last{r.order, {}};
    auto psi = psi0;
    std::size_t next_cp = 0;
    for (int t = 1; t <= r.cfg.steps; ++t) {
        psi = u.apply(psi);
        last = dw::probability_distribution(psi);
        acc.add(last);
        const auto avg = acc.result();
        if (csv) {
            for (std::size_t i = 0; i < last.p.size(); ++i) {
                os << t << ',' << i / nn << ',' << i % nn << ',' << dw::io::format_double(last.p[i]) << ','
                   << dw::io::format_double(avg.mean[i]) << ',' << dw::io::format_double(limit.p[i]) << '\n';
            }
        }
        if (next_cp < checkpoints.size() && checkpoints[next_cp] == t) {
            gaps.push_back({{"step", t}, {"tv_to_limiting", dw::total_variation(avg.mean, limit.p)}});
            ++next_cp;
        }
    }
    if (!csv) {
        os << dump({{"N", r.cfg.n},
                    {"steps", r.cfg.steps},
                    {"final", dump_distribution(last.p)},
                    {"time_average", dump_distribution(acc.result().mean)},
                    {"limiting", dump_distribution(limit.p)},
                    {"checkpoints", gaps}});
    }
    emit(r.cfg, os.str());
    if (csv) {
        for (const auto& g : gaps)
            std::fprintf(stderr, "checkpoint %d tv_to_limiting %s\n", g["step"].get<int>(),
                         dw::io::format_double(g["tv_to_limiting"].get<double>()).c_str());
    }
    return exit_ok;
}

int cmd_classical(const Flags& f) {
    const auto r = resolve(f);
    if (r.cfg.steps < 1) throw usage_error("--steps: time average needs at least one step");
    const auto spec = initial_spec(f);
    if (spec.vertex != dw::InitialSpec::Vertex::single) throw usage_error("--initial: classical walk starts on one vertex");
    const dw::GroupElement start{spec.s, dw::mod(spec.j, r.cfg.n)};
    const auto avg = dw::classical_time_average(dw::ClassicalDistribution::point_mass(r.order, start), r.cfg.steps);
    const auto uniform = dw::ClassicalDistribution::uniform(r.order);
    const double tv = dw::total_variation(avg, uniform.mass());

    std::ostringstream os;
    if (r.cfg.output == dw::OutputFormat::csv) {
        dw::io::write_distribution_csv(os, avg, r.order.size());
    } else {
        os << dump({{"N", r.cfg.n}, {"steps", r.cfg.steps}, {"time_average", dump_distribution(avg)}, {"tv_to_uniform", tv}});
    }
    emit(r.cfg, os.str());
    return exit_ok;
}

int cmd_parity(const Flags& f) {
    const auto r = resolve(f);
    const auto rep = field("--n", [&] { return dw::parity_effect_report(r.order, dw::mod(f.j, r.cfg.n), f.d); });

    std::ostringstream os;
    if (r.cfg.output == dw::OutputFormat::csv) {
        os << "N,j,d,step_index,dimension,zero_count,small_count,nonzero_count,zero_threshold,small_threshold,"
              "single_parity_class\n";
        os << r.cfg.n << ',' << dw::mod(f.j, r.cfg.n) << ',' << f.d << ',' << rep.step_index << ',' << rep.dimension
           << ',' << rep.zero_count << ',' << rep.small_count << ',' << rep.nonzero_count << ','
           << dw::io::format_double(rep.zero_threshold) << ',' << dw::io::format_double(rep.small_threshold) << ','
           << (rep.single_parity_class ? "true" : "false") << '\n';
    } else {
        os << dump({{"N", r.cfg.n},
                    {"j", dw::mod(f.j, r.cfg.n)},
                    {"d", f.d},
                    {"step_index", rep.step_index},
                    {"dimension", rep.dimension},
                    {"zero_count", rep.zero_count},
                    {"small_count", rep.small_count},
                    {"nonzero_count", rep.nonzero_count},
                    {"zero_threshold", rep.zero_threshold},
                    {"small_threshold", rep.small_threshold},
                    {"single_parity_class", rep.single_parity_class}});
    }
    emit(r.cfg, os.str());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coined quantum walks on the Cayley graph of the dihedral group D_N"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--n", f.n, "polygon size N (>= 3)");
    app.add_option("--steps", f.steps, "number of walk steps");
    app.add_option("--coin", f.coin, "hadamard | symmetric | m00,m01,m10,m11");
    app.add_option("--initial", f.initial, "c=<0|1|a,b>;s=<0|1|sup>;j=<int>;d=<int>, or random");
    app.add_option("--backend", f.backend, "direct | spectral | both");
    app.add_option("--output", f.output, "csv | json");
    app.add_option("--out-path", f.out_path, "write here instead of stdout");
    app.add_option("--seed", f.seed, "seed for --initial random");

    auto* evolve = app.add_subcommand("evolve", "per-step vertex distributions");
    auto* spectrum = app.add_subcommand("spectrum", "per-mode eigenvalues, closed form vs dense solver");
    auto* memory = app.add_subcommand("compare-memory", "equivalence with the memory walk on the N-cycle");
    memory->add_flag("--corrupt", f.corrupt, "break one line-digraph arc before the isomorphism check");
    auto* average = app.add_subcommand("time-average", "running time average and limiting distribution");
    average->add_option("--coin-state", f.coin_state, "initial coin amplitudes a,b (normalized)");
    auto* classical = app.add_subcommand("classical", "time-averaged classical random walk");
    auto* parity = app.add_subcommand("parity", "amplitude census after N/2 steps from a displaced pair");
    parity->add_option("--j", f.j, "first vertex of the pair");
    parity->add_option("--d", f.d, "offset of the second vertex");
    for (auto* sub : {evolve, spectrum, memory, average, classical, parity}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*evolve) return cmd_evolve(f);
        if (*spectrum) return cmd_spectrum(f);
        if (*memory) return cmd_compare_memory(f);
        if (*average) return cmd_time_average(f);
        if (*classical) return cmd_classical(f);
        if (*parity) return cmd_parity(f);
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return exit_usage;
    } catch (const io_error& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return exit_io;
    } catch (const dw::numeric_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return exit_breach;
    } catch (const dw::walk_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    }
    return exit_usage;
}
