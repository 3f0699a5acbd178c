// errors.hpp
// Exception types thrown by the dihedral walk library.

#pragma once

#include <stdexcept>
#include <string>

namespace dihedral_walk {

struct walk_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// N < 3, or an N that some routine cannot accept (e.g. not a power of two).
struct invalid_order_error : walk_error {
    using walk_error::walk_error;
};

// Two operands built for different group orders.
struct order_mismatch_error : walk_error {
    using walk_error::walk_error;
};

struct normalization_error : walk_error {
    using walk_error::walk_error;
};

// Non-unitary coin, malformed fixture, bad input range.
struct validation_error : walk_error {
    using walk_error::walk_error;
};

struct dimension_error : walk_error {
    using walk_error::walk_error;
};

struct numeric_error : walk_error {
    using walk_error::walk_error;
};

}  // namespace dihedral_walk
