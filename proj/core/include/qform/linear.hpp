#pragma once

#include "qform/rational.hpp"

#include <optional>
#include <vector>

namespace qform {

/// Solution set of A*x = b described as particular + span(nullspace).
struct AffineSolution {
    bool consistent = false;
    RatVec particular;
    std::vector<RatVec> nullspace;  // basis vectors, one per free variable
};

/// Exact Gauss-Jordan elimination over the rationals. A is given as rows;
/// all rows must have the same length.
AffineSolution solve_exact(const std::vector<RatVec>& a, const RatVec& b);

/// Some point of the solution set inside the box [lo, hi], if one exists.
/// Supports nullspace dimension <= 1 (all systems in this artifact have a
/// kernel of at most one dimension); throws std::logic_error beyond that.
std::optional<RatVec> box_feasible_point(const AffineSolution& sol,
                                         const RatVec& lo, const RatVec& hi);

/// The point of the solution set inside the box closest (in Euclidean
/// norm) to `target`. Same dimensionality restriction as above.
std::optional<RatVec> box_nearest_point(const AffineSolution& sol,
                                        const RatVec& lo, const RatVec& hi,
                                        const RatVec& target);

}  // namespace qform
