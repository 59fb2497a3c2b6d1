#pragma once

// Level-1 spaces M_k(SL_2(Z)) over F_p realized by truncated q-expansions.
// The generators E4, E6 and the discriminant are computed directly over F_p
// (240, 504 and the eta-product coefficients are reduced at construction;
// there is no big-integer stage), and each space is presented by its
// Victor-Miller echelon basis f_i = q^i + O(q^dim).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "upforms/errors.hpp"
#include "upforms/fp_linalg.hpp"
#include "upforms/qexp.hpp"

namespace upforms {

// dim M_k(SL_2(Z)): 0 for negative or odd k, else floor(k/12) when
// k = 2 mod 12 and floor(k/12)+1 otherwise. Equals the number of pairs
// (a, b) >= 0 with 4a + 6b = k.
inline std::size_t level1_dimension(long long k) noexcept {
    if (k < 0 || k % 2 != 0) return 0;
    return static_cast<std::size_t>(k % 12 == 2 ? k / 12 : k / 12 + 1);
}

namespace detail {

// sum of d^j over divisors d of m, reduced mod p
inline std::uint64_t sigma_mod(const PrimeField& F, std::uint64_t m, std::uint64_t j) {
    std::uint64_t s = 0;
    for (std::uint64_t d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        s = F.add(s, F.pow(d % F.modulus(), j));
        std::uint64_t e = m / d;
        if (e != d) s = F.add(s, F.pow(e % F.modulus(), j));
    }
    return s;
}

inline const std::array<std::uint64_t, 25>& binomials24() {
    // Pascal row 24; the largest entry is C(24,12) = 2704156.
    static const std::array<std::uint64_t, 25> row = [] {
        std::array<std::uint64_t, 25> r{};
        r[0] = 1;
        for (int n = 1; n <= 24; ++n)
            for (int i = n; i >= 1; --i) r[static_cast<std::size_t>(i)] += r[static_cast<std::size_t>(i - 1)];
        return r;
    }();
    return row;
}

} // namespace detail

// E4 = 1 + 240 sum_{m>=1} sigma_3(m) q^m, reduced mod p.
inline QExp eisenstein_e4(const PrimeField& field, std::size_t precision) {
    if (precision < 1) throw usage_error("eisenstein_e4: precision must be >= 1");
    std::vector<std::uint64_t> c(precision, 0);
    c[0] = 1 % field.modulus();
    std::uint64_t scale = field.reduce_int(240);
    for (std::size_t m = 1; m < precision; ++m)
        c[m] = field.mul(scale, detail::sigma_mod(field, m, 3));
    return QExp(field, std::move(c));
}

// E6 = 1 - 504 sum_{m>=1} sigma_5(m) q^m, reduced mod p.
inline QExp eisenstein_e6(const PrimeField& field, std::size_t precision) {
    if (precision < 1) throw usage_error("eisenstein_e6: precision must be >= 1");
    std::vector<std::uint64_t> c(precision, 0);
    c[0] = 1 % field.modulus();
    std::uint64_t scale = field.neg(field.reduce_int(504));
    for (std::size_t m = 1; m < precision; ++m)
        c[m] = field.mul(scale, detail::sigma_mod(field, m, 5));
    return QExp(field, std::move(c));
}

// Delta = q prod_{m>=1} (1-q^m)^24, by iterated truncated multiplication of
// the factors (each expanded binomially, so the factors stay sparse).
inline QExp discriminant(const PrimeField& field, std::size_t precision) {
    if (precision < 2) throw usage_error("discriminant: precision must be >= 2");
    QExp acc = QExp::monomial(field, 1, precision);
    const auto& binom = detail::binomials24();
    for (std::size_t m = 1; m < precision; ++m) {
        std::vector<std::uint64_t> f(precision, 0);
        for (std::size_t i = 0; i <= 24 && m * i < precision; ++i) {
            std::uint64_t b = binom[i] % field.modulus();
            f[m * i] = (i % 2 == 0) ? b : field.neg(b);
        }
        acc = acc * QExp(field, std::move(f));
    }
    return acc;
}

// A weight-k space of forms presented by an echelonized basis of truncated
// q-expansions. For the built-in level-1 construction the basis rows satisfy
// f_i = q^i + O(q^dim) (pivot of row i in column i).
struct FormSpace {
    long long weight;
    PrimeField field;
    std::size_t precision;
    std::size_t dim;
    FpMatrix basis;
};

// Victor-Miller basis of M_k at the given precision: with d = dim-1, row i
// is the echelon reduction of g_i = Delta^i * E6^b * E4^a where b in {0,1}
// is chosen so that k - 12i - 6b = 0 mod 4 and a = (k - 12i - 6b)/4. Each
// g_i has q-valuation exactly i, so the reduced matrix has pivots 0..d.
inline FormSpace victor_miller_basis(long long k, std::size_t precision, const PrimeField& field) {
    if (k < 0 || k % 2 != 0)
        throw usage_error("victor_miller_basis: weight must be even and nonnegative");
    std::size_t dim = level1_dimension(k);
    if (precision < dim + 1)
        throw usage_error("victor_miller_basis: precision " + std::to_string(precision) +
                          " too small for dimension " + std::to_string(dim));
    if (dim == 0)
        return FormSpace{k, field, precision, 0, FpMatrix(field, 0, precision)};

    QExp e4 = eisenstein_e4(field, precision);
    QExp e6 = eisenstein_e6(field, precision);
    QExp delta = dim >= 2 ? discriminant(field, precision) : QExp::one(field, precision);
    FpMatrix rows(field, dim, precision);
    QExp delta_power = QExp::one(field, precision); // Delta^i, advanced per row
    for (std::size_t i = 0; i < dim; ++i) {
        if (i > 0) delta_power = delta_power * delta;
        long long rem = k - 12 * static_cast<long long>(i);
        int b = (rem % 4 == 0) ? 0 : 1;
        long long a4 = rem - 6 * b;
        if (a4 < 0 || a4 % 4 != 0)
            throw std::logic_error("victor_miller_basis: monomial exponent bookkeeping failed");
        QExp g = pow(e4, static_cast<unsigned long long>(a4 / 4));
        if (b) g = g * e6;
        if (i > 0) g = g * delta_power;
        rows.set_row(i, g.coeffs());
    }
    RrefResult ech = rref(rows);
    if (ech.rank != dim)
        throw std::logic_error("victor_miller_basis: expected full rank");
    for (std::size_t i = 0; i < dim; ++i)
        if (ech.pivots[i] != i)
            throw std::logic_error("victor_miller_basis: pivot pattern is not 0..dim-1");
    return FormSpace{k, field, precision, dim, std::move(ech.echelon)};
}

} // namespace upforms
