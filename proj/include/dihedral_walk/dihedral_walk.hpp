// dihedral_walk.hpp
// Umbrella header.

#pragma once

#include "assignment.hpp"
#include "cayley.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "io.hpp"
#include "memory_walk.hpp"
#include "parallel.hpp"
#include "spectral.hpp"
#include "state.hpp"
#include "stats.hpp"
#include "walk.hpp"
