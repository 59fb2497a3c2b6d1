#pragma once

// Exact arithmetic in the prime field F_p and dense linear algebra over it
// (reduced row echelon form, rank, row-span membership). All values are
// immutable after construction and every operation is a pure function, so
// everything here is safe to share across threads.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "upforms/errors.hpp"

namespace upforms {

// Field context for F_p. Primality is checked once at construction; element
// values are canonical residues in [0, p) stored as plain uint64_t. The
// supported modulus range is 2 <= p < 2^31, so a product of two canonical
// residues always fits in a uint64_t.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p < 2 || p >= (std::uint64_t{1} << 31))
            throw usage_error("PrimeField: modulus must satisfy 2 <= p < 2^31");
        if (!is_prime(p))
            throw usage_error("PrimeField: " + std::to_string(p) + " is not prime");
    }

    std::uint64_t modulus() const noexcept { return p_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
        return a >= b ? a - b : a + p_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p_ - a; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
        return (a * b) % p_;
    }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept {
        std::uint64_t base = a % p_, acc = 1 % p_;
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            e >>= 1;
            if (e) base = mul(base, base);
        }
        return acc;
    }

    // Multiplicative inverse by extended Euclid; exact, no probabilistic step.
    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw usage_error("PrimeField::inv: inverse of zero");
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a % p_);
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        // r == gcd(a, p) == 1 because p is prime and a != 0
        return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(p_))
                     : static_cast<std::uint64_t>(t);
    }

    // Canonical residue of an arbitrary signed integer.
    std::uint64_t reduce_int(long long x) const noexcept {
        long long m = static_cast<long long>(p_);
        long long r = x % m;
        if (r < 0) r += m;
        return static_cast<std::uint64_t>(r);
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    // Deterministic trial division; the modulus cap keeps this at most ~2^15.5
    // iterations, paid once per field context.
    static bool is_prime(std::uint64_t n) noexcept {
        if (n < 2) return false;
        if (n % 2 == 0) return n == 2;
        for (std::uint64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

    std::uint64_t p_;
};

// Dense row-major matrix over a single prime field. Dimensions in this
// artifact stay small (a few hundred at most), so no sparse path exists.
class FpMatrix {
public:
    FpMatrix(const PrimeField& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    const PrimeField& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::uint64_t at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, std::uint64_t v) { a_[i * cols_ + j] = v; }

    std::span<const std::uint64_t> row(std::size_t i) const {
        return std::span<const std::uint64_t>(a_).subspan(i * cols_, cols_);
    }

    void set_row(std::size_t i, std::span<const std::uint64_t> v) {
        if (v.size() != cols_) throw usage_error("FpMatrix::set_row: length mismatch");
        std::copy(v.begin(), v.end(), a_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }

    FpMatrix transposed() const {
        FpMatrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
        return t;
    }

    friend bool operator==(const FpMatrix& a, const FpMatrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    PrimeField field_;
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> a_;
};

struct RrefResult {
    FpMatrix echelon;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots; // strictly increasing column indices
};

// Reduced row echelon form by Gauss-Jordan elimination. Empty matrices come
// back with rank 0.
inline RrefResult rref(const FpMatrix& m) {
    const PrimeField& F = m.field();
    FpMatrix w = m;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < w.cols() && r < w.rows(); ++col) {
        std::size_t sel = r;
        while (sel < w.rows() && w.at(sel, col) == 0) ++sel;
        if (sel == w.rows()) continue;
        if (sel != r)
            for (std::size_t j = 0; j < w.cols(); ++j) {
                std::uint64_t tmp = w.at(r, j);
                w.set(r, j, w.at(sel, j));
                w.set(sel, j, tmp);
            }
        std::uint64_t scale = F.inv(w.at(r, col));
        for (std::size_t j = col; j < w.cols(); ++j) w.set(r, j, F.mul(w.at(r, j), scale));
        for (std::size_t i = 0; i < w.rows(); ++i) {
            if (i == r) continue;
            std::uint64_t f = w.at(i, col);
            if (f == 0) continue;
            for (std::size_t j = col; j < w.cols(); ++j)
                w.set(i, j, F.sub(w.at(i, j), F.mul(f, w.at(r, j))));
        }
        pivots.push_back(col);
        ++r;
    }
    return RrefResult{std::move(w), r, std::move(pivots)};
}

// Membership of v in the row span of a matrix that is already in reduced
// echelon form: reduce v against each pivot and test for a zero remainder.
inline bool subspace_contains(const FpMatrix& echelon_basis, std::span<const std::uint64_t> v) {
    if (v.size() != echelon_basis.cols())
        throw usage_error("subspace_contains: vector length does not match basis columns");
    const PrimeField& F = echelon_basis.field();
    std::vector<std::uint64_t> rem(v.begin(), v.end());
    for (std::size_t i = 0; i < echelon_basis.rows(); ++i) {
        std::size_t pc = 0;
        while (pc < echelon_basis.cols() && echelon_basis.at(i, pc) == 0) ++pc;
        if (pc == echelon_basis.cols()) continue; // zero row
        std::uint64_t f = rem[pc];
        if (f == 0) continue;
        // pivot entries of an rref basis are 1, so f itself is the coefficient
        for (std::size_t j = pc; j < echelon_basis.cols(); ++j)
            rem[j] = F.sub(rem[j], F.mul(f, echelon_basis.at(i, j)));
    }
    for (std::uint64_t x : rem)
        if (x != 0) return false;
    return true;
}

} // namespace upforms
