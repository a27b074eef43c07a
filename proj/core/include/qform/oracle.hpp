#pragma once

#include "qform/formation.hpp"

#include <vector>

namespace qform {

/// Fixed-step trajectory from the low-tech reference integrators.
struct SampledTrajectory {
    double h = 0;
    std::vector<double> t;
    std::vector<std::vector<double>> z;  // one state per sample
    std::vector<double> V;
    /// Quantizer output vector used for the step leaving each sample
    /// (the last entry repeats the final outputs).
    std::vector<std::vector<int>> q;
};

/// Double-precision evaluation of the z-dynamics on the raw discontinuous
/// field (literal sgn(0) = +1 quantizer).
std::vector<double> vector_field_z(const std::vector<double>& z, const FormationSpec& spec);

/// Forward Euler on the raw field: z_{j+1} = z_j + h * f(z_j). The field
/// is piecewise constant, so Euler is the natural reference scheme; the
/// discretization chatters across sliding surfaces instead of sliding.
SampledTrajectory simulate_euler(const std::vector<double>& z0, const FormationSpec& spec,
                                 double h, double t_max);

/// Euler with a per-coordinate hysteretic quantizer: the emitted output
/// q_i flips only once z_i has left an eps_h-band around the surface it
/// crossed, which removes per-step chatter at the cost of an O(eps_h)
/// tracking offset.
SampledTrajectory simulate_hysteresis(const std::vector<double>& z0, const FormationSpec& spec,
                                      double h, double eps_h, double t_max);

}  // namespace qform
