#pragma once

#include "qform/hull.hpp"

#include <stdexcept>
#include <vector>

namespace qform {

enum class SegmentMode { Regular, Sliding, Rest };

/// One piece of a piecewise-linear trajectory: z(t) = z_start +
/// (t - t_start) * velocity on [t_start, t_end]. In Sliding mode the
/// coordinates in `sliding` have zero velocity and sit exactly on their
/// boundary values; `q` is the selected quantizer vector (convex weights
/// on sliding coordinates).
struct TrajectorySegment {
    Rat t_start, t_end;
    RatVec z_start;
    RatVec velocity;
    RatVec q;
    std::vector<int> sliding;
    SegmentMode mode = SegmentMode::Regular;

    RatVec state_at(const Rat& t) const;
    RatVec z_end() const { return state_at(t_end); }
};

enum class EventKind { BoundaryHit, ModeChange, EquilibriumReached, BranchPoint, Timeout };

struct Event {
    Rat t;
    EventKind kind;
    std::vector<int> coords;
};

enum class TerminalKind { Equilibrium, Timeout };

struct Trajectory {
    RatVec z0;
    std::vector<TrajectorySegment> segments;
    std::vector<Event> events;
    TerminalKind terminal = TerminalKind::Timeout;
    EquilibriumClass terminal_class;
    Rat t_end;
    RatVec z_end;
    int branch_id = 0;

    /// Exact state at any time in [0, t_end].
    RatVec state_at(const Rat& t) const;
    Rat sliding_duration() const;
};

enum class BranchPolicy { Deterministic, Enumerate };

struct SolverOptions {
    Rat t_max = 100;
    BranchPolicy policy = BranchPolicy::Deterministic;
    /// 0 = auto: ceil(10 * n * (1 + V(z0))).
    std::size_t event_cap = 0;
    std::size_t branch_cap = 4096;
    /// Online Lyapunov monotonicity/decay assertions; only applied when
    /// the gains satisfy the convergence conditions.
    bool check_lyapunov = true;
};

class EventOverflow : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Indices of coordinates lying exactly on a quantizer surface.
std::vector<int> active_set(const RatVec& z, const FormationSpec& spec);

struct BoundaryHitInfo {
    bool finite = false;
    Rat t;                    // strictly positive flight time
    std::vector<int> coords;  // all coordinates achieving the minimum
};

/// Closed-form first boundary-hit time under constant velocity. Zero-time
/// hits (coordinates already sitting on a surface) are ignored, so this is
/// also usable to advance a state off a boundary it is departing from.
BoundaryHitInfo time_to_boundary(const RatVec& z, const RatVec& velocity,
                                 const FormationSpec& spec);

/// One admissible continuation from a boundary point: each active
/// coordinate either slides (velocity pinned to 0) or departs into an
/// adjacent cell consistently with the cell's own field.
struct Move {
    std::vector<int> sliding;
    RatVec q;
    RatVec velocity;
    bool rest = false;  // velocity identically zero
};

/// All Krasowskii-consistent continuations at z (active set A), ordered by
/// the deterministic preference: each coordinate prefers departing to the
/// side selected by the literal sgn(0)=+1 quantizer, then sliding, then
/// the opposite side. The front element is the Deterministic policy's
/// choice. Throws std::invalid_argument if z is not on the boundaries in A.
std::vector<Move> resolve_boundary(const RatVec& z, const std::vector<int>& A,
                                   const FormationSpec& spec);

/// Sliding dynamics on active set A: q solves (M*q)_i = 0 for i in A with
/// q_i in [-1,1], remaining coordinates fixed at their cell outputs; when
/// non-unique, the feasible q closest to the literal cell-consistent
/// values is selected. Throws std::invalid_argument if A is infeasible.
std::pair<RatVec, RatVec> sliding_velocity(const RatVec& z, const std::vector<int>& A,
                                           const FormationSpec& spec);

/// Exact event-driven integration of the quantized formation inclusion.
/// Returns one trajectory under Deterministic policy and one per explored
/// branch under Enumerate.
std::vector<Trajectory> simulate(const RatVec& z0, const FormationSpec& spec,
                                 const SolverOptions& opts = {});

/// Convenience wrapper: Deterministic policy, single trajectory.
Trajectory simulate_one(const RatVec& z0, const FormationSpec& spec,
                        const SolverOptions& opts = {});

const char* to_string(SegmentMode mode);
const char* to_string(EventKind kind);

}  // namespace qform
