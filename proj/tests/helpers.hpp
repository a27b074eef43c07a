#pragma once

#include "qform/formation.hpp"

#include <random>

namespace qform::test {

/// Uniform rational in [lo, hi] with denominator `den`.
inline Rat rand_rat(std::mt19937_64& rng, const Rat& lo, const Rat& hi, int den = 100) {
    const Rat span = hi - lo;
    std::uniform_int_distribution<long> pick(0, den);
    return lo + span * pick(rng) / den;
}

/// Gains satisfying the equilibrium-characterization conditions
/// (k_1+1 > k_2, k_i > k_{i+1} for middle i, k_{n-1} > 0).
inline RatVec equilibrium_gains(std::mt19937_64& rng, int m) {
    RatVec k(m);
    k[m - 1] = rand_rat(rng, Rat(1, 10), Rat(2));
    for (int i = m - 2; i >= 1; --i) k[i] = k[i + 1] + rand_rat(rng, Rat(1, 10), Rat(2));
    if (m >= 2) k[0] = k[1] - 1 + rand_rat(rng, Rat(1, 2), Rat(2));
    if (k[0] <= 0) k[0] = rand_rat(rng, Rat(1, 10), Rat(1));
    return k;
}

/// Gains satisfying the convergence conditions of Eq. (4):
/// k_1 >= k_2, k_i >= k_{i+1}+1 for middle i, k_{n-1} >= 1.
inline RatVec convergence_gains(std::mt19937_64& rng, int m) {
    RatVec k(m);
    k[m - 1] = 1 + rand_rat(rng, Rat(0), Rat(2));
    for (int i = m - 2; i >= 1; --i) k[i] = k[i + 1] + 1 + rand_rat(rng, Rat(0), Rat(1));
    if (m >= 2) k[0] = k[1] + rand_rat(rng, Rat(0), Rat(1));
    return k;
}

inline RatVec random_gaps(std::mt19937_64& rng, int m) {
    RatVec d(m);
    for (auto& di : d) di = rand_rat(rng, Rat(1, 2), Rat(2));
    return d;
}

inline FormationSpec random_convergence_spec(std::mt19937_64& rng, int n) {
    FormationSpec spec;
    spec.n = n;
    spec.d = random_gaps(rng, n - 1);
    spec.k = convergence_gains(rng, n - 1);
    return spec;
}

}  // namespace qform::test
