#pragma once

#include "qform/event_solver.hpp"

#include <array>
#include <optional>

namespace qform {

/// V(z) = 1/4 * sum_i (z_i^2 - d_i^2)^2; zero iff all |z_i| = d_i.
Rat lyapunov(const RatVec& z, const FormationSpec& spec);
double lyapunov(const std::vector<double>& z, const FormationSpec& spec);

/// Sum_i |z_i| * |z_i^2 - d_i^2|; the guaranteed decay rate of V off the
/// discontinuity set. Throws std::invalid_argument on boundary points.
Rat decay_bound(const RatVec& z, const FormationSpec& spec);

/// Three-agent (two-constraint) basin prediction for gains k = (1,1).
struct BasinPrediction {
    std::vector<std::array<Rat, 2>> limits;
    bool deterministic = false;
    /// Closed-form arrival time; emitted for same-sign quadrant starts,
    /// where the flight/slide composition is explicit.
    std::optional<Rat> finite_time_bound;
};

/// Interior starts (z_1 * z_2 != 0) map to the single corner
/// (sgn(z_1) d_1, sgn(z_2) d_2); axis starts to the three-point
/// alternative set; the origin to all nine equilibrium candidates.
BasinPrediction classify_basin_3agent(const std::array<Rat, 2>& z0,
                                      const std::array<Rat, 2>& d);

struct ConvergenceReport {
    EquilibriumTag terminal = EquilibriumTag::NotEquilibrium;
    bool timed_out = false;
    Rat terminal_V;
    /// Last time the state is outside the tol-neighborhood of E_1 / E_2
    /// (0 if never outside). Exact, from the piecewise-linear segments.
    Rat time_to_E1;
    Rat time_to_E2;
    bool reaches_E1 = false;
    bool reaches_E2 = false;
    Rat sliding_duration;
    std::size_t event_count = 0;
    std::vector<std::pair<Rat, Rat>> V_profile;  // (t, V) at segment endpoints
};

ConvergenceReport convergence_report(const Trajectory& traj, const FormationSpec& spec,
                                     const Rat& tol);

}  // namespace qform
