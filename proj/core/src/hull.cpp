#include "qform/hull.hpp"

#include "qform/linear.hpp"

namespace qform {

namespace {

Rat boundary_distance(const Rat& z, const Rat& d) {
    const Rat az = abs(z);
    const Rat gap = abs(Rat(az - d));
    return az < gap ? az : gap;
}

}  // namespace

KrasowskiiHull hull_at(const RatVec& z, const FormationSpec& spec, const Rat& snap_tol) {
    KrasowskiiHull hull{TridiagonalField(spec), {}, {}};
    hull.q_box.reserve(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (boundary_distance(z[i], spec.d[i]) <= snap_tol) {
            hull.q_box.push_back({Rat(-1), Rat(1)});
            hull.active.push_back(static_cast<int>(i));
        } else {
            const Rat q = quantize(z[i], spec.d[i]);
            hull.q_box.push_back({q, q});
        }
    }
    return hull;
}

ZeroMembership contains_zero(const KrasowskiiHull& hull) {
    const int m = hull.M.dim;
    RatVec lo(m), hi(m);
    for (int i = 0; i < m; ++i) {
        lo[i] = hull.q_box[i].lo;
        hi[i] = hull.q_box[i].hi;
    }
    const auto sol = solve_exact(hull.M.dense(), RatVec(m, 0));
    auto q = box_feasible_point(sol, lo, hi);
    if (!q) return {};
    return {true, std::move(*q)};
}

std::vector<RatVec> hull_vertices(const KrasowskiiHull& hull) {
    const int m = hull.M.dim;
    const int na = static_cast<int>(hull.active.size());
    std::vector<RatVec> out;
    out.reserve(std::size_t{1} << na);

    RatVec q(m);
    for (int i = 0; i < m; ++i) q[i] = hull.q_box[i].lo;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << na); ++mask) {
        for (int j = 0; j < na; ++j)
            q[hull.active[j]] = (mask >> j) & 1 ? hull.q_box[hull.active[j]].hi
                                                : hull.q_box[hull.active[j]].lo;
        out.push_back(hull.M.apply(q));
    }
    return out;
}

bool is_equilibrium_analytic(const RatVec& z, const FormationSpec& spec,
                             const Rat& snap_tol) {
    for (std::size_t i = 0; i < z.size(); ++i)
        if (boundary_distance(z[i], spec.d[i]) > snap_tol) return false;
    return true;
}

EquilibriumClass classify_equilibrium(const RatVec& z, const FormationSpec& spec,
                                      const Rat& snap_tol) {
    if (!is_equilibrium_analytic(z, spec, snap_tol)) return {};

    EquilibriumClass cls;
    cls.tag = EquilibriumTag::Desired;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (abs(Rat(abs(z[i]) - spec.d[i])) > snap_tol) {
            cls.tag = EquilibriumTag::Degenerate;
            break;
        }
    }
    cls.witness = contains_zero(hull_at(z, spec, snap_tol)).witness;
    return cls;
}

const char* to_string(EquilibriumTag tag) {
    switch (tag) {
        case EquilibriumTag::NotEquilibrium: return "not-equilibrium";
        case EquilibriumTag::Desired: return "desired";
        case EquilibriumTag::Degenerate: return "degenerate";
    }
    return "?";
}

}  // namespace qform
