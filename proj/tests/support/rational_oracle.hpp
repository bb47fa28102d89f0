#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "knotsim/gauss_code.hpp"
#include "knotsim/geometry.hpp"

namespace knotsim::testing {

struct ExactCrossing {
    std::size_t seg_a;
    std::size_t seg_b;
    bool a_over;
};

struct ExactResult {
    std::vector<ExactCrossing> crossings;
    GaussCode code;
};

/// Brute-force crossing oracle in exact rational arithmetic (GMP). Every
/// coordinate is converted exactly from double. Returns nullopt when the
/// projection is degenerate in exact arithmetic: touching or collinear
/// segments, an intersection on a bead, equal heights, or two crossings at
/// the same point of a segment.
std::optional<ExactResult> exact_gauss_code(const KnotConfiguration& config);

/// Number of sign-assigned double-occurrence words of length 2n with
/// canonical labels, by exhaustive enumeration of all (2n)^(2n) words.
unsigned long long enumerate_gauss_codes(unsigned n);

}  // namespace knotsim::testing
