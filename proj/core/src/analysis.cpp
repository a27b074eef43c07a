#include "qform/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace qform {

namespace {

int true_sign(const Rat& v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

// Exact arrival time at (d1, d2) for first-quadrant interior starts of the
// k = (1,1) three-agent system: straight flight composed, where needed,
// with a 3/2-speed sliding leg along the attracting surfaces.
Rat first_quadrant_arrival(const Rat& w1, const Rat& w2, const Rat& d1, const Rat& d2) {
    const Rat two_thirds = Rat(2, 3);

    if (w1 >= d1 && w2 >= d2) {  // outer region, flight (-1,-1)
        const Rat lhs = w2 - w1, rhs = d2 - d1;
        if (lhs == rhs) return w1 - d1;
        if (lhs > rhs) {
            const Rat ta = w1 - d1;
            return ta + two_thirds * (w2 - ta - d2);
        }
        const Rat ta = w2 - d2;
        return ta + two_thirds * (w1 - ta - d1);
    }
    if (w1 < d1 && w2 >= d2) {  // flight (3,-3)
        const Rat sum = w1 + w2, target = d1 + d2;
        if (sum == target) return (d1 - w1) / 3;
        if (sum > target) {
            const Rat ta = (d1 - w1) / 3;
            return ta + two_thirds * (w2 - (d1 - w1) - d2);
        }
        const Rat ta = (w2 - d2) / 3;
        return ta + two_thirds * (d1 - (w1 + w2 - d2));
    }
    if (w1 >= d1 && w2 < d2) {  // flight (-3,3)
        const Rat sum = w1 + w2, target = d1 + d2;
        if (sum == target) return (w1 - d1) / 3;
        if (sum > target) {
            const Rat ta = (d2 - w2) / 3;
            return ta + two_thirds * (w1 - (d2 - w2) - d1);
        }
        const Rat ta = (w1 - d1) / 3;
        return ta + two_thirds * (d2 - (w2 + w1 - d1));
    }
    // inner region, flight (1,1)
    const Rat g1 = d1 - w1, g2 = d2 - w2;
    if (g1 == g2) return g1;
    if (g1 < g2) return g1 + two_thirds * (g2 - g1);
    return g2 + two_thirds * (g1 - g2);
}

// Sup of the violation times of `inside(|z(t)|)` over [t0, t1] for the
// affine coordinate z(t) = a + b*t, where the admitted |z| values are the
// union of closed intervals `bands`. Returns no value when never violated.
std::optional<Rat> last_violation(const Rat& a, const Rat& b, const Rat& t0, const Rat& t1,
                                  const std::vector<std::pair<Rat, Rat>>& bands) {
    auto inside = [&](const Rat& value) {
        const Rat v = abs(value);
        return std::any_of(bands.begin(), bands.end(),
                           [&](const auto& band) { return v >= band.first && v <= band.second; });
    };

    if (b == 0) {
        if (inside(a)) return std::nullopt;
        return t1;
    }

    std::vector<Rat> cuts{t0, t1};
    for (const auto& band : bands) {
        for (const Rat& edge : {band.first, band.second, Rat(-band.first), Rat(-band.second)}) {
            const Rat t = (edge - a) / b;
            if (t > t0 && t < t1) cuts.push_back(t);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t i = cuts.size() - 1; i-- > 0;) {
        const Rat mid = cuts[i] + (cuts[i + 1] - cuts[i]) / 2;
        if (!inside(a + b * mid)) return cuts[i + 1];
    }
    return std::nullopt;
}

}  // namespace

Rat lyapunov(const RatVec& z, const FormationSpec& spec) {
    Rat v = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const Rat term = z[i] * z[i] - spec.d[i] * spec.d[i];
        v += term * term;
    }
    return v / 4;
}

double lyapunov(const std::vector<double>& z, const FormationSpec& spec) {
    double v = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double d = to_double(spec.d[i]);
        const double term = z[i] * z[i] - d * d;
        v += term * term;
    }
    return v / 4;
}

Rat decay_bound(const RatVec& z, const FormationSpec& spec) {
    Rat bound = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (is_boundary(cell_of(z[i], spec.d[i])))
            throw std::invalid_argument("decay_bound: undefined on discontinuity surfaces");
        bound += abs(Rat(z[i] * (z[i] * z[i] - spec.d[i] * spec.d[i])));
    }
    return bound;
}

BasinPrediction classify_basin_3agent(const std::array<Rat, 2>& z0,
                                      const std::array<Rat, 2>& d) {
    if (d[0] <= 0 || d[1] <= 0)
        throw std::invalid_argument("classify_basin_3agent: gaps must be positive");

    const int s1 = true_sign(z0[0]);
    const int s2 = true_sign(z0[1]);

    BasinPrediction p;
    if (s1 != 0 && s2 != 0) {
        p.limits.push_back({Rat(s1 * d[0]), Rat(s2 * d[1])});
        p.deterministic = true;
        // Closed-form arrival time in the same-sign quadrants, where the
        // point reflection z -> -z maps the start into the analyzed
        // first-quadrant flight/slide compositions.
        if (s1 == s2)
            p.finite_time_bound = first_quadrant_arrival(abs(z0[0]), abs(z0[1]), d[0], d[1]);
        return p;
    }
    if (s1 == 0 && s2 == 0) {
        for (int a : {-1, 0, 1})
            for (int b : {-1, 0, 1}) p.limits.push_back({Rat(a * d[0]), Rat(b * d[1])});
        return p;
    }
    if (s1 == 0) {
        for (int a : {-1, 0, 1}) p.limits.push_back({Rat(a * d[0]), Rat(s2 * d[1])});
    } else {
        for (int b : {-1, 0, 1}) p.limits.push_back({Rat(s1 * d[0]), Rat(b * d[1])});
    }
    return p;
}

ConvergenceReport convergence_report(const Trajectory& traj, const FormationSpec& spec,
                                     const Rat& tol) {
    ConvergenceReport rep;
    rep.terminal = traj.terminal_class.tag;
    rep.timed_out = traj.terminal == TerminalKind::Timeout;
    rep.terminal_V = lyapunov(traj.z_end, spec);
    rep.sliding_duration = traj.sliding_duration();
    rep.event_count = traj.events.size();

    rep.V_profile.emplace_back(Rat(0), lyapunov(traj.z0, spec));
    for (const auto& seg : traj.segments)
        rep.V_profile.emplace_back(seg.t_end, lyapunov(seg.z_end(), spec));

    rep.time_to_E1 = 0;
    rep.time_to_E2 = 0;
    for (const auto& seg : traj.segments) {
        for (std::size_t i = 0; i < seg.z_start.size(); ++i) {
            const Rat lo = spec.d[i] - tol < 0 ? Rat(0) : Rat(spec.d[i] - tol);
            const std::vector<std::pair<Rat, Rat>> e1{{lo, spec.d[i] + tol}};
            const std::vector<std::pair<Rat, Rat>> e2{{lo, spec.d[i] + tol}, {Rat(0), tol}};
            if (auto t = last_violation(seg.z_start[i], seg.velocity[i], seg.t_start,
                                        seg.t_end, e1);
                t && *t > rep.time_to_E1)
                rep.time_to_E1 = *t;
            if (auto t = last_violation(seg.z_start[i], seg.velocity[i], seg.t_start,
                                        seg.t_end, e2);
                t && *t > rep.time_to_E2)
                rep.time_to_E2 = *t;
        }
    }
    rep.reaches_E1 = is_equilibrium_analytic(traj.z_end, spec, tol) &&
                     classify_equilibrium(traj.z_end, spec, tol).tag == EquilibriumTag::Desired;
    rep.reaches_E2 = is_equilibrium_analytic(traj.z_end, spec, tol);
    return rep;
}

}  // namespace qform
