// config.hpp
// Run configuration and the small text formats accepted on the command line:
//
//   complex:  1   -0.5   i   -2i   0.5+0.5i   1e-3-4i
//   coin:     hadamard | symmetric | m00,m01,m10,m11 (complex entries, row major)
//   initial:  c=<0|1|a,b>;s=<0|1|sup>;j=<int>;d=<int>   (any subset, any order)
//
// s=sup selects the vertex pair (|0, j> + |1, j+d>).

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "state.hpp"
#include "walk.hpp"

namespace dihedral_walk {

namespace detail {

[[nodiscard]] inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

[[nodiscard]] inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[nodiscard]] inline double parse_real(std::string_view s, std::string_view what) {
    const std::string t(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) throw validation_error("cannot parse " + std::string(what) + " '" + t + "'");
    return v;
}

}  // namespace detail

[[nodiscard]] inline int parse_int(std::string_view s, std::string_view what) {
    const std::string t = detail::trim(s);
    int v = 0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc{} || ptr != last) {
        throw validation_error("cannot parse " + std::string(what) + " '" + t + "' as an integer");
    }
    return v;
}

[[nodiscard]] inline cplx parse_complex(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw validation_error("empty complex number");
    if (s.back() != 'i') return {detail::parse_real(s, "complex number"), 0.0};

    // Split "re+imi" at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t p = s.size() - 1; p > 0; --p) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    const std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string im_part = s.substr(split == std::string::npos ? 0 : split);
    im_part.pop_back();  // drop 'i'
    double im = 0.0;
    if (im_part.empty() || im_part == "+") {
        im = 1.0;
    } else if (im_part == "-") {
        im = -1.0;
    } else {
        im = detail::parse_real(im_part, "imaginary part");
    }
    const double re = re_part.empty() ? 0.0 : detail::parse_real(re_part, "real part");
    return {re, im};
}

[[nodiscard]] inline CoinOperator parse_coin(std::string_view text) {
    const std::string t = detail::trim(text);
    if (t == "hadamard" || t == "H") return hadamard_coin();
    if (t == "symmetric") {
        const double h = 1.0 / std::sqrt(2.0);
        Eigen::Matrix2cd m;
        m << cplx{h, 0}, cplx{0, h}, cplx{0, h}, cplx{h, 0};
        return CoinOperator{m};
    }
    const auto parts = detail::split(t, ',');
    if (parts.size() != 4) throw validation_error("coin must be 'hadamard', 'symmetric' or four complex entries");
    Eigen::Matrix2cd m;
    m << parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2]), parse_complex(parts[3]);
    return CoinOperator{m};
}

// "a,b" -> coin amplitudes (not normalized here; initial_state normalizes).
[[nodiscard]] inline std::array<cplx, 2> parse_coin_state(std::string_view text) {
    const auto parts = detail::split(text, ',');
    if (parts.size() != 2) throw validation_error("coin state must be 'a,b'");
    return {parse_complex(parts[0]), parse_complex(parts[1])};
}

[[nodiscard]] inline InitialSpec parse_initial(std::string_view text) {
    InitialSpec spec;
    for (const auto& field : detail::split(text, ';')) {
        if (field.empty()) continue;
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw validation_error("initial-state field '" + field + "' has no '='");
        const std::string key = detail::trim(std::string_view(field).substr(0, eq));
        const std::string val = detail::trim(std::string_view(field).substr(eq + 1));
        if (key == "c") {
            if (val == "0") {
                spec.coin = {cplx{1.0}, cplx{0.0}};
            } else if (val == "1") {
                spec.coin = {cplx{0.0}, cplx{1.0}};
            } else {
                spec.coin = parse_coin_state(val);
            }
        } else if (key == "s") {
            if (val == "sup") {
                spec.vertex = InitialSpec::Vertex::pair;
            } else {
                spec.vertex = InitialSpec::Vertex::single;
                spec.s = parse_int(val, "s");
                if (spec.s != 0 && spec.s != 1) throw validation_error("s must be 0, 1 or sup");
            }
        } else if (key == "j") {
            spec.j = parse_int(val, "j");
        } else if (key == "d") {
            spec.d = parse_int(val, "d");
        } else {
            throw validation_error("unknown initial-state field '" + key + "'");
        }
    }
    return spec;
}

enum class Backend { direct, spectral, both };
enum class OutputFormat { csv, json };

[[nodiscard]] inline Backend parse_backend(std::string_view s) {
    if (s == "direct") return Backend::direct;
    if (s == "spectral") return Backend::spectral;
    if (s == "both") return Backend::both;
    throw validation_error("backend must be direct, spectral or both");
}

[[nodiscard]] inline OutputFormat parse_output(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw validation_error("output must be csv or json");
}

struct RunConfig {
    int n = 4;
    int steps = 0;
    std::string coin = "hadamard";
    std::string initial = "c=0;s=0;j=0";
    Backend backend = Backend::direct;
    std::uint64_t seed = 0;
    OutputFormat output = OutputFormat::csv;
    std::string out_path;  // empty: stdout

    static constexpr double cross_check_tolerance = 1e-9;
};

}  // namespace dihedral_walk
