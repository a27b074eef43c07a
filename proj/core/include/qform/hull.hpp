#pragma once

#include "qform/formation.hpp"

#include <optional>
#include <vector>

namespace qform {

/// Per-coordinate interval of admissible quantizer outputs: a singleton
/// on interior cells, the full [-1,+1] on boundary (active) coordinates.
struct QInterval {
    Rat lo, hi;
    bool is_point() const { return lo == hi; }
};

/// Exact representation of the Krasowskii regularization K(f(z)) as the
/// image of a box under the constant tridiagonal map: { M*q : q in q_box }.
struct KrasowskiiHull {
    TridiagonalField M;
    std::vector<QInterval> q_box;
    std::vector<int> active;  // coordinates with full [-1,1] interval

    bool is_singleton() const { return active.empty(); }
};

/// Coordinate i counts as active iff min(|z_i|, ||z_i|-d_i|) <= snap_tol.
/// With exact rational state, snap_tol = 0 gives exact boundary detection.
KrasowskiiHull hull_at(const RatVec& z, const FormationSpec& spec,
                       const Rat& snap_tol = 0);

struct ZeroMembership {
    bool contains = false;
    RatVec witness;  // q in q_box with M*q = 0, when contains
};

/// Exact linear feasibility of M*q = 0 over the hull's box.
ZeroMembership contains_zero(const KrasowskiiHull& hull);

/// Images M*q over all vertices of the box (2^#active points).
std::vector<RatVec> hull_vertices(const KrasowskiiHull& hull);

/// Analytic equilibrium set membership: sum_i |z_i| * ||z_i|-d_i| = 0,
/// relaxed coordinatewise by snap_tol.
bool is_equilibrium_analytic(const RatVec& z, const FormationSpec& spec,
                             const Rat& snap_tol = 0);

enum class EquilibriumTag { NotEquilibrium, Desired, Degenerate };

struct EquilibriumClass {
    EquilibriumTag tag = EquilibriumTag::NotEquilibrium;
    RatVec witness;  // zero-membership witness for equilibria
};

/// Desired: every |z_i| = d_i (up to snap_tol). Degenerate: equilibrium
/// with some z_i = 0.
EquilibriumClass classify_equilibrium(const RatVec& z, const FormationSpec& spec,
                                      const Rat& snap_tol = 0);

const char* to_string(EquilibriumTag tag);

}  // namespace qform
