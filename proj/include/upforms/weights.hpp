#pragma once

// Weight bookkeeping for the U-operator: the reduced weight k0, the target
// weight k' = (k - k0)/p + k0, and the classical contraction bound
// floor((k + p^2 - 1)/p) that k' sharpens.

#include <cstdint>

#include "upforms/errors.hpp"
#include "upforms/fp_linalg.hpp"

namespace upforms {

struct WeightTarget {
    std::uint64_t p;
    long long k;
    long long k0;      // the unique integer in [2, p+1] congruent to k mod p
    long long k_prime; // (k - k0)/p + k0
    long long serre_bound;
};

inline WeightTarget target_weight(long long k, const PrimeField& field) {
    if (k < 2) throw usage_error("target_weight: k must be >= 2");
    long long p = static_cast<long long>(field.modulus());
    long long k0 = 2 + ((k - 2) % p + p) % p; // k0 in [2, p+1], k0 = k mod p
    long long k_prime = (k - k0) / p + k0;
    long long serre = (k + p * p - 1) / p; // k >= 2 > 1-p^2 so the floor is plain division
    return WeightTarget{field.modulus(), k, k0, k_prime, serre};
}

// Largest target weight allowed by the classical contraction statement
// p*k'' <= k + p^2 - 1, i.e. floor((k + p^2 - 1)/p). The raw floor, with no
// congruence refinement: the comparison only needs an upper bound.
inline long long serre_contraction_bound(long long k, const PrimeField& field) {
    long long p = static_cast<long long>(field.modulus());
    if (k < p + 2) throw usage_error("serre_contraction_bound: requires k >= p+2");
    return (k + p * p - 1) / p;
}

} // namespace upforms
