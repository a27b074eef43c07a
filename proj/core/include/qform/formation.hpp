#pragma once

#include "qform/rational.hpp"

#include <vector>

namespace qform {

/// Problem instance: a chain of n agents with desired gaps d_i between
/// neighbors i and i+1 and per-constraint guidance gains k_i.
struct FormationSpec {
    int n = 0;
    RatVec d;  // n-1 desired gaps, all > 0
    RatVec k;  // n-1 gains, all > 0

    int m() const { return n - 1; }

    /// Throws std::invalid_argument if n < 2, sizes mismatch, or any
    /// gap/gain is not strictly positive.
    void validate() const;

    /// n agents with the same gap everywhere.
    static FormationSpec uniform(int n, const Rat& gap, RatVec gains);
};

struct XState {
    RatVec x;  // n absolute positions
    Rat t = 0;
};

struct ZState {
    RatVec z;  // n-1 relative positions z_i = x_i - x_{i+1}
    Rat t = 0;
};

/// Location of one coordinate relative to its quantizer surfaces
/// {-d, 0, d}. Boundary locations make the coordinate "active": the
/// quantizer output there spans [-1,+1] in the Krasowskii hull.
enum class CellLoc {
    BelowNegD,    // (-inf, -d)   q = -1
    AtNegD,       // {-d}         active
    NegInterior,  // (-d, 0)      q = +1
    AtZero,       // {0}          active
    PosInterior,  // (0, d)       q = -1
    AtPosD,       // {d}          active
    AbovePosD,    // (d, inf)     q = +1
};

CellLoc cell_of(const Rat& z, const Rat& d);
bool is_boundary(CellLoc loc);

/// Quantizer output on an interior cell; must not be called on boundaries.
int cell_output(CellLoc loc);

/// sgn(0) = +1, per the two-level quantizer definition.
int sgn(const Rat& v);
inline int sgn(double v) { return v >= 0.0 ? 1 : -1; }

/// Composite two-level output sgn(z) * sgn(|z|-d).
int quantize(const Rat& z, const Rat& d);
int quantize(double z, double d);

/// The constant tridiagonal map M with the property that the z-dynamics
/// equal M*q for the quantizer output vector q: sub-diagonal 1, diagonal
/// -(k_i+1), super-diagonal k_{i+1}.
struct TridiagonalField {
    int dim = 0;
    RatVec diag;
    RatVec super;  // dim-1 entries

    explicit TridiagonalField(const FormationSpec& spec);

    Rat entry(int row, int col) const;
    RatVec apply(const RatVec& q) const;
    std::vector<RatVec> dense() const;
};

/// Quantizer outputs q_i = quantize(z_i, d_i), using the literal sgn(0)=+1
/// convention on boundaries.
std::vector<int> quantizer_outputs(const RatVec& z, const FormationSpec& spec);

/// Agent velocities in absolute coordinates for a given output vector q.
RatVec field_x_from_outputs(const std::vector<int>& q, const FormationSpec& spec);

RatVec vector_field_x(const RatVec& x, const FormationSpec& spec);
RatVec vector_field_z(const RatVec& z, const FormationSpec& spec);

RatVec x_to_z(const RatVec& x);
RatVec z_to_x(const RatVec& z, const Rat& anchor);

/// Equilibrium-characterization gain conditions:
/// k_1+1 > k_2, k_i > k_{i+1} (i=2..n-2), k_{n-1} > 0.
bool validate_gains_equilibrium(const FormationSpec& spec);

/// Convergence gain conditions:
/// k_1 >= k_2, k_i >= k_{i+1}+1 (i=2..n-2), k_{n-1} >= 1.
/// Implies validate_gains_equilibrium.
bool validate_gains_convergence(const FormationSpec& spec);

/// Guidance-channel bandwidth accounting. The per-agent derivation gives
/// 4 bits for each middle agent and 2 bits for the end agents; the paper's
/// stated total of 4n-2 disagrees with that sum, so both are reported.
struct BitBudget {
    std::vector<int> per_agent;  // n entries
    int derived_total = 0;       // sum of per_agent = 4n-4 for n >= 2
    int stated_total = 0;        // 4n-2
    bool totals_agree = false;
};

BitBudget bit_budget(const FormationSpec& spec);

/// Upper bound on |component i of M*q| over all outputs:
/// 1 + (k_i+1) + k_{i+1}, truncated at the chain ends.
Rat speed_bound(const FormationSpec& spec, int i);

}  // namespace qform
