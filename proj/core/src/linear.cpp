#include "qform/linear.hpp"

#include <stdexcept>

namespace qform {

namespace {

struct TInterval {
    Rat lo, hi;
    bool unbounded_lo = true, unbounded_hi = true;

    bool empty() const { return !unbounded_lo && !unbounded_hi && lo > hi; }

    void clip_lo(const Rat& v) {
        if (unbounded_lo || v > lo) { lo = v; unbounded_lo = false; }
    }
    void clip_hi(const Rat& v) {
        if (unbounded_hi || v < hi) { hi = v; unbounded_hi = false; }
    }

    Rat clamp(const Rat& v) const {
        if (!unbounded_lo && v < lo) return lo;
        if (!unbounded_hi && v > hi) return hi;
        return v;
    }
};

// Intersection of {t : lo <= p + t*dir <= hi} over all coordinates.
// Returns nullopt when empty (including a fixed coordinate out of range).
std::optional<TInterval> line_box_interval(const RatVec& p, const RatVec& dir,
                                           const RatVec& lo, const RatVec& hi) {
    TInterval t;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (dir[i] == 0) {
            if (p[i] < lo[i] || p[i] > hi[i]) return std::nullopt;
            continue;
        }
        Rat a = (lo[i] - p[i]) / dir[i];
        Rat b = (hi[i] - p[i]) / dir[i];
        if (dir[i] > 0) {
            t.clip_lo(a);
            t.clip_hi(b);
        } else {
            t.clip_lo(b);
            t.clip_hi(a);
        }
    }
    if (t.empty()) return std::nullopt;
    return t;
}

RatVec point_on_line(const RatVec& p, const RatVec& dir, const Rat& t) {
    RatVec out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] + t * dir[i];
    return out;
}

}  // namespace

AffineSolution solve_exact(const std::vector<RatVec>& a, const RatVec& b) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows > 0 ? static_cast<int>(a[0].size()) : 0;
    if (static_cast<int>(b.size()) != rows)
        throw std::invalid_argument("solve_exact: rhs size mismatch");

    std::vector<RatVec> aug(rows, RatVec(cols + 1));
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(a[r].size()) != cols)
            throw std::invalid_argument("solve_exact: ragged matrix");
        for (int c = 0; c < cols; ++c) aug[r][c] = a[r][c];
        aug[r][cols] = b[r];
    }

    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int pr = -1;
        for (int r = row; r < rows; ++r) {
            if (aug[r][col] != 0) { pr = r; break; }
        }
        if (pr < 0) continue;
        std::swap(aug[row], aug[pr]);

        const Rat inv = aug[row][col];
        for (int c = col; c <= cols; ++c) aug[row][c] /= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == row || aug[r][col] == 0) continue;
            const Rat factor = aug[r][col];
            for (int c = col; c <= cols; ++c) aug[r][c] -= factor * aug[row][c];
        }
        pivot_col.push_back(col);
        ++row;
    }

    AffineSolution sol;
    for (int r = row; r < rows; ++r) {
        if (aug[r][cols] != 0) return sol;  // 0 = nonzero: inconsistent
    }
    sol.consistent = true;

    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;

    sol.particular.assign(cols, 0);
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
        sol.particular[pivot_col[r]] = aug[r][cols];

    for (int c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        RatVec basis(cols, 0);
        basis[c] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r)
            basis[pivot_col[r]] = -aug[r][c];
        sol.nullspace.push_back(std::move(basis));
    }
    return sol;
}

std::optional<RatVec> box_feasible_point(const AffineSolution& sol,
                                         const RatVec& lo, const RatVec& hi) {
    if (!sol.consistent) return std::nullopt;
    if (sol.nullspace.empty()) {
        for (std::size_t i = 0; i < sol.particular.size(); ++i)
            if (sol.particular[i] < lo[i] || sol.particular[i] > hi[i]) return std::nullopt;
        return sol.particular;
    }
    if (sol.nullspace.size() > 1)
        throw std::logic_error("box_feasible_point: nullspace dimension > 1 unsupported");

    auto t = line_box_interval(sol.particular, sol.nullspace[0], lo, hi);
    if (!t) return std::nullopt;
    return point_on_line(sol.particular, sol.nullspace[0], t->clamp(0));
}

std::optional<RatVec> box_nearest_point(const AffineSolution& sol,
                                        const RatVec& lo, const RatVec& hi,
                                        const RatVec& target) {
    if (!sol.consistent) return std::nullopt;
    if (sol.nullspace.empty()) return box_feasible_point(sol, lo, hi);
    if (sol.nullspace.size() > 1)
        throw std::logic_error("box_nearest_point: nullspace dimension > 1 unsupported");

    const RatVec& dir = sol.nullspace[0];
    auto t = line_box_interval(sol.particular, dir, lo, hi);
    if (!t) return std::nullopt;

    // Unconstrained minimizer of ||p + t*dir - target||^2, then clamp.
    Rat num = 0, den = 0;
    for (std::size_t i = 0; i < dir.size(); ++i) {
        num += dir[i] * (target[i] - sol.particular[i]);
        den += dir[i] * dir[i];
    }
    const Rat best = den == 0 ? Rat(0) : Rat(num / den);
    return point_on_line(sol.particular, dir, t->clamp(best));
}

}  // namespace qform
