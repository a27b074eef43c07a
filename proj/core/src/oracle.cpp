#include "qform/oracle.hpp"

#include "qform/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace qform {

namespace {

std::vector<double> field_from_outputs(const std::vector<int>& q, const FormationSpec& spec) {
    const int m = spec.m();
    std::vector<double> dz(m);
    for (int i = 0; i < m; ++i) {
        double v = -(to_double(spec.k[i]) + 1.0) * q[i];
        if (i > 0) v += q[i - 1];
        if (i + 1 < m) v += to_double(spec.k[i + 1]) * q[i + 1];
        dz[i] = v;
    }
    return dz;
}

void append_sample(SampledTrajectory& out, double t, const std::vector<double>& z,
                   const std::vector<int>& q, const FormationSpec& spec) {
    out.t.push_back(t);
    out.z.push_back(z);
    out.V.push_back(lyapunov(z, spec));
    out.q.push_back(q);
}

}  // namespace

std::vector<double> vector_field_z(const std::vector<double>& z, const FormationSpec& spec) {
    std::vector<int> q(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) q[i] = quantize(z[i], to_double(spec.d[i]));
    return field_from_outputs(q, spec);
}

SampledTrajectory simulate_euler(const std::vector<double>& z0, const FormationSpec& spec,
                                 double h, double t_max) {
    spec.validate();
    if (h <= 0) throw std::invalid_argument("simulate_euler: step size must be > 0");

    SampledTrajectory out;
    out.h = h;
    const long steps = static_cast<long>(std::floor(t_max / h));
    out.t.reserve(steps + 1);
    out.z.reserve(steps + 1);
    out.V.reserve(steps + 1);

    std::vector<double> z = z0;
    std::vector<int> q(z.size());
    for (long j = 0; j <= steps; ++j) {
        for (std::size_t i = 0; i < z.size(); ++i) q[i] = quantize(z[i], to_double(spec.d[i]));
        append_sample(out, j * h, z, q, spec);
        if (j == steps) break;
        const auto dz = field_from_outputs(q, spec);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += h * dz[i];
    }
    return out;
}

SampledTrajectory simulate_hysteresis(const std::vector<double>& z0, const FormationSpec& spec,
                                      double h, double eps_h, double t_max) {
    spec.validate();
    if (h <= 0) throw std::invalid_argument("simulate_hysteresis: step size must be > 0");
    if (eps_h <= 0) throw std::invalid_argument("simulate_hysteresis: band width must be > 0");

    SampledTrajectory out;
    out.h = h;
    const long steps = static_cast<long>(std::floor(t_max / h));

    std::vector<double> z = z0;
    std::vector<int> q(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) q[i] = quantize(z[i], to_double(spec.d[i]));

    append_sample(out, 0.0, z, q, spec);
    for (long j = 1; j <= steps; ++j) {
        const auto dz = field_from_outputs(q, spec);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += h * dz[i];
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double d = to_double(spec.d[i]);
            const int raw = quantize(z[i], d);
            // Flip only once the state has cleared the band around the
            // nearest surface on the opposite side of the held output.
            const double dist = std::min(std::abs(z[i]), std::abs(std::abs(z[i]) - d));
            if (raw != q[i] && dist >= eps_h) q[i] = raw;
        }
        append_sample(out, j * h, z, q, spec);
    }
    return out;
}

}  // namespace qform
