#include "qform/formation.hpp"

#include <cmath>
#include <stdexcept>

namespace qform {

void FormationSpec::validate() const {
    if (n < 2) throw std::invalid_argument("FormationSpec: n must be >= 2");
    if (static_cast<int>(d.size()) != n - 1)
        throw std::invalid_argument("FormationSpec: d must have n-1 entries");
    if (static_cast<int>(k.size()) != n - 1)
        throw std::invalid_argument("FormationSpec: k must have n-1 entries");
    for (const auto& di : d)
        if (di <= 0) throw std::invalid_argument("FormationSpec: gaps d_i must be > 0");
    for (const auto& ki : k)
        if (ki <= 0) throw std::invalid_argument("FormationSpec: gains k_i must be > 0");
}

FormationSpec FormationSpec::uniform(int n, const Rat& gap, RatVec gains) {
    FormationSpec spec;
    spec.n = n;
    spec.d.assign(n - 1, gap);
    spec.k = std::move(gains);
    spec.validate();
    return spec;
}

CellLoc cell_of(const Rat& z, const Rat& d) {
    if (z < -d) return CellLoc::BelowNegD;
    if (z == -d) return CellLoc::AtNegD;
    if (z < 0) return CellLoc::NegInterior;
    if (z == 0) return CellLoc::AtZero;
    if (z < d) return CellLoc::PosInterior;
    if (z == d) return CellLoc::AtPosD;
    return CellLoc::AbovePosD;
}

bool is_boundary(CellLoc loc) {
    return loc == CellLoc::AtNegD || loc == CellLoc::AtZero || loc == CellLoc::AtPosD;
}

int cell_output(CellLoc loc) {
    switch (loc) {
        case CellLoc::BelowNegD: return -1;
        case CellLoc::NegInterior: return +1;
        case CellLoc::PosInterior: return -1;
        case CellLoc::AbovePosD: return +1;
        default: throw std::logic_error("cell_output: boundary location has no fixed output");
    }
}

int sgn(const Rat& v) { return v >= 0 ? 1 : -1; }

int quantize(const Rat& z, const Rat& d) {
    return sgn(z) * sgn(Rat(abs(z) - d));
}

int quantize(double z, double d) {
    return sgn(z) * sgn(std::abs(z) - d);
}

TridiagonalField::TridiagonalField(const FormationSpec& spec) : dim(spec.m()) {
    diag.reserve(dim);
    for (int i = 0; i < dim; ++i) diag.push_back(Rat(-(spec.k[i] + 1)));
    super.reserve(dim - 1);
    for (int i = 0; i + 1 < dim; ++i) super.push_back(spec.k[i + 1]);
}

Rat TridiagonalField::entry(int row, int col) const {
    if (row == col) return diag[row];
    if (col == row - 1) return 1;
    if (col == row + 1) return super[row];
    return 0;
}

RatVec TridiagonalField::apply(const RatVec& q) const {
    RatVec out(dim);
    for (int i = 0; i < dim; ++i) {
        Rat v = diag[i] * q[i];
        if (i > 0) v += q[i - 1];
        if (i + 1 < dim) v += super[i] * q[i + 1];
        out[i] = v;
    }
    return out;
}

std::vector<RatVec> TridiagonalField::dense() const {
    std::vector<RatVec> rows(dim, RatVec(dim, 0));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) rows[i][j] = entry(i, j);
    return rows;
}

std::vector<int> quantizer_outputs(const RatVec& z, const FormationSpec& spec) {
    std::vector<int> q(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) q[i] = quantize(z[i], spec.d[i]);
    return q;
}

RatVec field_x_from_outputs(const std::vector<int>& q, const FormationSpec& spec) {
    RatVec dx(spec.n);
    dx[0] = Rat(-spec.k[0] * q[0]);
    for (int i = 1; i < spec.n - 1; ++i) dx[i] = Rat(q[i - 1] - spec.k[i] * q[i]);
    dx[spec.n - 1] = q[spec.n - 2];
    return dx;
}

RatVec vector_field_x(const RatVec& x, const FormationSpec& spec) {
    return field_x_from_outputs(quantizer_outputs(x_to_z(x), spec), spec);
}

RatVec vector_field_z(const RatVec& z, const FormationSpec& spec) {
    const auto q = quantizer_outputs(z, spec);
    RatVec qr(q.begin(), q.end());
    return TridiagonalField(spec).apply(qr);
}

RatVec x_to_z(const RatVec& x) {
    RatVec z(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) z[i] = x[i] - x[i + 1];
    return z;
}

RatVec z_to_x(const RatVec& z, const Rat& anchor) {
    RatVec x(z.size() + 1);
    x.back() = anchor;
    for (std::size_t i = z.size(); i-- > 0;) x[i] = z[i] + x[i + 1];
    return x;
}

bool validate_gains_equilibrium(const FormationSpec& spec) {
    const int m = spec.m();
    if (m == 1) return spec.k[0] > 0;
    if (!(spec.k[0] + 1 > spec.k[1])) return false;
    for (int i = 1; i + 1 < m; ++i)
        if (!(spec.k[i] > spec.k[i + 1])) return false;
    return spec.k[m - 1] > 0;
}

bool validate_gains_convergence(const FormationSpec& spec) {
    const int m = spec.m();
    if (m == 1) return spec.k[0] >= 1;
    if (!(spec.k[0] >= spec.k[1])) return false;
    for (int i = 1; i + 1 < m; ++i)
        if (!(spec.k[i] >= spec.k[i + 1] + 1)) return false;
    return spec.k[m - 1] >= 1;
}

BitBudget bit_budget(const FormationSpec& spec) {
    BitBudget b;
    b.per_agent.assign(spec.n, 4);
    b.per_agent.front() = 2;
    b.per_agent.back() = 2;
    for (int bits : b.per_agent) b.derived_total += bits;
    b.stated_total = 4 * spec.n - 2;
    b.totals_agree = b.derived_total == b.stated_total;
    return b;
}

Rat speed_bound(const FormationSpec& spec, int i) {
    const int m = spec.m();
    Rat bound = spec.k[i] + 1;
    if (i > 0) bound += 1;
    if (i + 1 < m) bound += spec.k[i + 1];
    return bound;
}

}  // namespace qform
