// group.hpp
// Dihedral group D_N with elements encoded as tau^s sigma^t -> (s, t).

#pragma once

#include <cstddef>
#include <compare>
#include <string>
#include <vector>

#include "errors.hpp"

namespace dihedral_walk {

// Number of polygon sides. Always >= 3.
class GroupOrder {
public:
    explicit GroupOrder(int n) : n_(n) {
        if (n < 3) {
            throw invalid_order_error("dihedral group order must be >= 3, got " + std::to_string(n));
        }
    }

    [[nodiscard]] int value() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(n_); }
    // |D_N| = 2N
    [[nodiscard]] std::size_t group_size() const noexcept { return 2 * size(); }

    friend bool operator==(GroupOrder, GroupOrder) = default;

private:
    int n_;
};

// Reduce any integer into Z_N.
[[nodiscard]] inline int mod(long long x, int n) noexcept {
    long long r = x % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

// s = 0 rotations, s = 1 flips.
struct GroupElement {
    int s = 0;
    int t = 0;

    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

    [[nodiscard]] bool is_rotation() const noexcept { return s == 0; }
    [[nodiscard]] bool is_flip() const noexcept { return s == 1; }

    // Position in the vertex list (rotations first, then flips).
    [[nodiscard]] std::size_t index(GroupOrder n) const noexcept {
        return static_cast<std::size_t>(s) * n.size() + static_cast<std::size_t>(t);
    }

    [[nodiscard]] static GroupElement from_index(std::size_t i, GroupOrder n) noexcept {
        return {static_cast<int>(i / n.size()), static_cast<int>(i % n.size())};
    }
};

[[nodiscard]] inline bool is_valid(GroupElement g, GroupOrder n) noexcept {
    return (g.s == 0 || g.s == 1) && g.t >= 0 && g.t < n.value();
}

inline void require_valid(GroupElement g, GroupOrder n) {
    if (!is_valid(g, n)) {
        throw validation_error("element (" + std::to_string(g.s) + "," + std::to_string(g.t) +
                               ") is not in D_" + std::to_string(n.value()));
    }
}

[[nodiscard]] inline GroupElement identity_element() noexcept { return {0, 0}; }
[[nodiscard]] inline GroupElement rotation_generator() noexcept { return {0, 1}; }
[[nodiscard]] inline GroupElement flip_generator() noexcept { return {1, 0}; }

// tau^{s_a} sigma^{t_a} tau^{s_b} sigma^{t_b}; pushing tau^{s_b} left through
// sigma^{t_a} uses tau sigma tau = sigma^{-1}.
[[nodiscard]] inline GroupElement compose(GroupElement a, GroupElement b, GroupOrder n) {
    require_valid(a, n);
    require_valid(b, n);
    const int sign = b.s == 0 ? 1 : -1;
    return {a.s ^ b.s, mod(static_cast<long long>(b.t) + sign * a.t, n.value())};
}

// Elements tagged with the order they were built for; composing across orders fails.
[[nodiscard]] inline GroupElement compose(GroupElement a, GroupOrder na, GroupElement b, GroupOrder nb) {
    if (na != nb) {
        throw order_mismatch_error("cannot compose elements of D_" + std::to_string(na.value()) +
                                   " and D_" + std::to_string(nb.value()));
    }
    return compose(a, b, na);
}

[[nodiscard]] inline GroupElement inverse(GroupElement a, GroupOrder n) {
    require_valid(a, n);
    if (a.is_flip()) return a;
    return {0, mod(-static_cast<long long>(a.t), n.value())};
}

// a^k by repeated composition (k >= 0).
[[nodiscard]] inline GroupElement power(GroupElement a, int k, GroupOrder n) {
    GroupElement r = identity_element();
    for (int i = 0; i < k; ++i) r = compose(r, a, n);
    return r;
}

// All 2N elements in vertex-list order.
[[nodiscard]] inline std::vector<GroupElement> elements(GroupOrder n) {
    std::vector<GroupElement> out;
    out.reserve(n.group_size());
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < n.value(); ++t) out.push_back({s, t});
    return out;
}

}  // namespace dihedral_walk
