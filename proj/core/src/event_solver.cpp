#include "qform/event_solver.hpp"

#include "qform/analysis.hpp"
#include "qform/linear.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace qform {

namespace {

enum class Action { DepartLiteral, Slide, DepartOther };

enum class Side { Above, Below };

struct ActiveGeom {
    Rat boundary;     // the surface value z_i sits on
    int above_q;      // cell output just above the surface
    int below_q;      // cell output just below
    Side literal;     // side matching the sgn(0)=+1 quantizer value
};

ActiveGeom geometry_at(const Rat& z, const Rat& d) {
    if (z == d) return {d, +1, -1, Side::Above};
    if (z == 0) return {Rat(0), -1, +1, Side::Above};
    if (z == -d) return {Rat(-d), +1, -1, Side::Below};
    throw std::invalid_argument("resolve_boundary: coordinate is not on a quantizer surface");
}

int side_q(const ActiveGeom& g, Side s) {
    return s == Side::Above ? g.above_q : g.below_q;
}

// Solves (M*q)_i = 0 for i in S over q_S in [-1,1]^S with the remaining
// coordinates fixed; picks the feasible q_S nearest to `target`.
std::optional<RatVec> solve_sliding(const TridiagonalField& M, const std::vector<int>& S,
                                    const RatVec& q_fixed, const RatVec& target) {
    const int ns = static_cast<int>(S.size());
    std::vector<int> col_of(M.dim, -1);
    for (int c = 0; c < ns; ++c) col_of[S[c]] = c;

    std::vector<RatVec> a(ns, RatVec(ns, 0));
    RatVec rhs(ns, 0);
    for (int r = 0; r < ns; ++r) {
        const int i = S[r];
        for (int j = std::max(0, i - 1); j <= std::min(M.dim - 1, i + 1); ++j) {
            const Rat coeff = M.entry(i, j);
            if (coeff == 0) continue;
            if (col_of[j] >= 0) {
                a[r][col_of[j]] = coeff;
            } else {
                rhs[r] -= coeff * q_fixed[j];
            }
        }
    }

    RatVec lo(ns, Rat(-1)), hi(ns, Rat(1)), tgt(ns);
    for (int c = 0; c < ns; ++c) tgt[c] = target[S[c]];
    auto q_s = box_nearest_point(solve_exact(a, rhs), lo, hi, tgt);
    if (!q_s) return std::nullopt;

    RatVec q = q_fixed;
    for (int c = 0; c < ns; ++c) q[S[c]] = (*q_s)[c];
    return q;
}

bool all_zero(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// Internal Lyapunov guards; a violation means the solver itself is wrong.
void check_segment_lyapunov(const TrajectorySegment& seg, const FormationSpec& spec) {
    const RatVec z_end = seg.z_end();
    if (lyapunov(z_end, spec) > lyapunov(seg.z_start, spec))
        throw std::logic_error("event solver: Lyapunov function increased across a segment");

    if (seg.mode != SegmentMode::Regular) return;

    const Rat mid = seg.t_start + (seg.t_end - seg.t_start) / 2;
    for (const RatVec& z : {seg.z_start, seg.state_at(mid)}) {
        Rat dv = 0, bound = 0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const Rat w = z[i] * (z[i] * z[i] - spec.d[i] * spec.d[i]);
            dv += w * seg.velocity[i];
            bound += abs(w);
        }
        if (dv > -bound)
            throw std::logic_error("event solver: Lyapunov decay bound violated on a regular segment");
    }
}

struct PendingBranch {
    Rat t;
    RatVec z;
    Trajectory traj;
    std::optional<Move> committed;
};

}  // namespace

RatVec TrajectorySegment::state_at(const Rat& t) const {
    RatVec z(z_start.size());
    const Rat dt = t - t_start;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = z_start[i] + dt * velocity[i];
    return z;
}

RatVec Trajectory::state_at(const Rat& t) const {
    if (segments.empty() || t >= t_end) return z_end;
    for (const auto& seg : segments) {
        if (t <= seg.t_end) return seg.state_at(t);
    }
    return z_end;
}

Rat Trajectory::sliding_duration() const {
    Rat total = 0;
    for (const auto& seg : segments)
        if (seg.mode == SegmentMode::Sliding) total += seg.t_end - seg.t_start;
    return total;
}

std::vector<int> active_set(const RatVec& z, const FormationSpec& spec) {
    std::vector<int> active;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (is_boundary(cell_of(z[i], spec.d[i]))) active.push_back(static_cast<int>(i));
    return active;
}

BoundaryHitInfo time_to_boundary(const RatVec& z, const RatVec& velocity,
                                 const FormationSpec& spec) {
    BoundaryHitInfo hit;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (velocity[i] == 0) continue;
        for (const Rat& b : {Rat(-spec.d[i]), Rat(0), Rat(spec.d[i])}) {
            const Rat tau = (b - z[i]) / velocity[i];
            if (tau <= 0) continue;
            if (!hit.finite || tau < hit.t) {
                hit.finite = true;
                hit.t = tau;
                hit.coords.assign(1, static_cast<int>(i));
            } else if (tau == hit.t && hit.coords.back() != static_cast<int>(i)) {
                hit.coords.push_back(static_cast<int>(i));
            }
        }
    }
    return hit;
}

std::vector<Move> resolve_boundary(const RatVec& z, const std::vector<int>& A,
                                   const FormationSpec& spec) {
    if (A.empty()) throw std::invalid_argument("resolve_boundary: empty active set");

    const TridiagonalField M(spec);
    const int na = static_cast<int>(A.size());

    std::vector<ActiveGeom> geom;
    geom.reserve(na);
    for (int i : A) geom.push_back(geometry_at(z[i], spec.d[i]));

    // Literal quantizer outputs everywhere; the target for the sliding
    // selection and the base vector fixed coordinates are read from.
    RatVec literal(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) literal[i] = quantize(z[i], spec.d[i]);

    std::vector<Move> moves;
    auto already_have = [&](const Move& m) {
        return std::any_of(moves.begin(), moves.end(), [&](const Move& o) {
            return o.sliding == m.sliding && o.q == m.q;
        });
    };

    std::size_t combos = 1;
    for (int c = 0; c < na; ++c) combos *= 3;

    // Lexicographic over the per-coordinate preference order, so the
    // first consistent assignment is the Deterministic policy's choice.
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rem = code;
        std::vector<Action> actions(na);
        for (int c = na - 1; c >= 0; --c) {
            actions[c] = static_cast<Action>(rem % 3);
            rem /= 3;
        }

        RatVec q = literal;
        std::vector<int> sliding;
        std::vector<std::pair<int, Side>> departing;  // (coordinate, side)
        for (int c = 0; c < na; ++c) {
            const int i = A[c];
            if (actions[c] == Action::Slide) {
                sliding.push_back(i);
                continue;
            }
            Side s = geom[c].literal;
            if (actions[c] == Action::DepartOther)
                s = s == Side::Above ? Side::Below : Side::Above;
            departing.emplace_back(i, s);
            q[i] = side_q(geom[c], s);
        }

        if (!sliding.empty()) {
            auto solved = solve_sliding(M, sliding, q, literal);
            if (!solved) continue;
            q = std::move(*solved);
        }

        const RatVec v = M.apply(q);
        bool consistent = true;
        for (const auto& [i, s] : departing) {
            if (s == Side::Above ? v[i] <= 0 : v[i] >= 0) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;

        Move m{sliding, q, v, all_zero(v)};
        if (!already_have(m)) moves.push_back(std::move(m));
    }
    return moves;
}

std::pair<RatVec, RatVec> sliding_velocity(const RatVec& z, const std::vector<int>& A,
                                           const FormationSpec& spec) {
    const TridiagonalField M(spec);
    RatVec literal(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) literal[i] = quantize(z[i], spec.d[i]);

    auto q = solve_sliding(M, A, literal, literal);
    if (!q) throw std::invalid_argument("sliding_velocity: active set admits no sliding dynamics");
    RatVec v = M.apply(*q);
    for (int i : A) {
        if (v[i] != 0) throw std::logic_error("sliding_velocity: nonzero velocity on active set");
    }
    return {std::move(v), std::move(*q)};
}

std::vector<Trajectory> simulate(const RatVec& z0, const FormationSpec& spec,
                                 const SolverOptions& opts) {
    spec.validate();
    if (static_cast<int>(z0.size()) != spec.m())
        throw std::invalid_argument("simulate: z0 must have n-1 entries");

    const bool gains_ok = validate_gains_convergence(spec);
    const bool check_v = opts.check_lyapunov && gains_ok;

    std::size_t event_cap = opts.event_cap;
    if (event_cap == 0) {
        const Rat budget = 10 * spec.n * (1 + lyapunov(z0, spec));
        event_cap = static_cast<std::size_t>(
            boost::multiprecision::numerator(budget) / boost::multiprecision::denominator(budget) + 1);
    }

    std::vector<Trajectory> results;
    std::deque<PendingBranch> pending;
    int next_branch_id = 0;

    {
        PendingBranch root;
        root.t = 0;
        root.z = z0;
        root.traj.z0 = z0;
        root.traj.branch_id = next_branch_id++;
        pending.push_back(std::move(root));
    }

    while (!pending.empty()) {
        PendingBranch br = std::move(pending.front());
        pending.pop_front();

        bool branch_open = true;
        while (branch_open) {
            auto finalize = [&](TerminalKind kind) {
                br.traj.terminal = kind;
                br.traj.t_end = br.t;
                br.traj.z_end = br.z;
                br.traj.terminal_class = kind == TerminalKind::Equilibrium
                                             ? classify_equilibrium(br.z, spec)
                                             : EquilibriumClass{};
                results.push_back(std::move(br.traj));
                branch_open = false;
            };

            if (br.t >= opts.t_max) {
                br.traj.events.push_back({br.t, EventKind::Timeout, {}});
                finalize(TerminalKind::Timeout);
                break;
            }

            Move move;
            if (br.committed) {
                move = std::move(*br.committed);
                br.committed.reset();
            } else {
                const auto A = active_set(br.z, spec);
                if (A.empty()) {
                    RatVec q(br.z.size());
                    for (std::size_t i = 0; i < br.z.size(); ++i)
                        q[i] = quantize(br.z[i], spec.d[i]);
                    RatVec v = TridiagonalField(spec).apply(q);
                    move = Move{{}, std::move(q), std::move(v), false};
                } else {
                    auto moves = resolve_boundary(br.z, A, spec);
                    if (moves.empty())
                        throw std::logic_error("simulate: no consistent continuation at boundary");
                    if (opts.policy == BranchPolicy::Enumerate && moves.size() > 1) {
                        br.traj.events.push_back({br.t, EventKind::BranchPoint, A});
                        for (auto& m : moves) {
                            if (static_cast<std::size_t>(next_branch_id) >= opts.branch_cap)
                                throw EventOverflow("simulate: branch cap exceeded");
                            PendingBranch child;
                            child.t = br.t;
                            child.z = br.z;
                            child.traj = br.traj;
                            child.traj.branch_id = next_branch_id++;
                            child.committed = std::move(m);
                            pending.push_back(std::move(child));
                        }
                        branch_open = false;
                        break;
                    }
                    move = std::move(moves.front());
                    if (!move.rest && !move.sliding.empty())
                        br.traj.events.push_back({br.t, EventKind::ModeChange, move.sliding});
                }
            }

            if (move.rest) {
                br.traj.segments.push_back({br.t, br.t, br.z, RatVec(br.z.size(), 0), move.q,
                                            active_set(br.z, spec), SegmentMode::Rest});
                br.traj.events.push_back({br.t, EventKind::EquilibriumReached, {}});
                finalize(TerminalKind::Equilibrium);
                break;
            }

            const auto hit = time_to_boundary(br.z, move.velocity, spec);
            const SegmentMode mode =
                move.sliding.empty() ? SegmentMode::Regular : SegmentMode::Sliding;

            Rat t_end = opts.t_max;
            bool timed_out = true;
            if (hit.finite && br.t + hit.t <= opts.t_max) {
                t_end = br.t + hit.t;
                timed_out = false;
            }

            TrajectorySegment seg{br.t, t_end, br.z, move.velocity, move.q, move.sliding, mode};
            if (check_v) check_segment_lyapunov(seg, spec);
            br.z = seg.z_end();
            // Pin sliding coordinates to their exact boundary values.
            for (int i : move.sliding) br.z[i] = seg.z_start[i];
            br.t = t_end;
            br.traj.segments.push_back(std::move(seg));

            if (timed_out) {
                br.traj.events.push_back({br.t, EventKind::Timeout, {}});
                finalize(TerminalKind::Timeout);
                break;
            }

            br.traj.events.push_back({br.t, EventKind::BoundaryHit, hit.coords});
            if (br.traj.events.size() > event_cap)
                throw EventOverflow("simulate: event cap exceeded (possible livelock)");
        }
    }
    return results;
}

Trajectory simulate_one(const RatVec& z0, const FormationSpec& spec,
                        const SolverOptions& opts) {
    SolverOptions o = opts;
    o.policy = BranchPolicy::Deterministic;
    auto trajectories = simulate(z0, spec, o);
    return std::move(trajectories.front());
}

const char* to_string(SegmentMode mode) {
    switch (mode) {
        case SegmentMode::Regular: return "regular";
        case SegmentMode::Sliding: return "sliding";
        case SegmentMode::Rest: return "rest";
    }
    return "?";
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::BoundaryHit: return "boundary-hit";
        case EventKind::ModeChange: return "mode-change";
        case EventKind::EquilibriumReached: return "equilibrium-reached";
        case EventKind::BranchPoint: return "branch-point";
        case EventKind::Timeout: return "timeout";
    }
    return "?";
}

}  // namespace qform
