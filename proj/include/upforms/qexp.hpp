#pragma once

// Truncated q-expansions over F_p and the three classical operators acting
// on coefficient sequences: the slicing operator U ((Uf)_m = a_{mp}), the
// spreading operator V ((Vf)_{mp} = a_m), and theta = q d/dq.
//
// Precision is tracked explicitly: a QExp with precision n represents
// a_0 + a_1 q + ... + a_{n-1} q^{n-1} + O(q^n), and every operation reports
// the largest output precision its inputs can prove. In particular a product
// is truncated to the minimum of the operand precisions.

#include <algorithm>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "upforms/errors.hpp"
#include "upforms/fp_linalg.hpp"

namespace upforms {

class QExp {
public:
    QExp(const PrimeField& field, std::vector<std::uint64_t> coeffs)
        : field_(field), c_(std::move(coeffs)) {
        if (c_.empty()) throw usage_error("QExp: precision must be at least 1");
        for (std::uint64_t x : c_)
            if (x >= field_.modulus()) throw usage_error("QExp: coefficient not a canonical residue");
    }

    static QExp zero(const PrimeField& field, std::size_t precision) {
        return QExp(field, std::vector<std::uint64_t>(checked(precision), 0));
    }

    static QExp one(const PrimeField& field, std::size_t precision) {
        std::vector<std::uint64_t> c(checked(precision), 0);
        c[0] = 1 % field.modulus();
        return QExp(field, std::move(c));
    }

    // q^e + O(q^precision)
    static QExp monomial(const PrimeField& field, std::size_t e, std::size_t precision) {
        std::vector<std::uint64_t> c(checked(precision), 0);
        if (e < precision) c[e] = 1 % field.modulus();
        return QExp(field, std::move(c));
    }

    static QExp from_integers(const PrimeField& field, std::span<const long long> raw) {
        std::vector<std::uint64_t> c;
        c.reserve(raw.size());
        for (long long x : raw) c.push_back(field.reduce_int(x));
        return QExp(field, std::move(c));
    }

    const PrimeField& field() const noexcept { return field_; }
    std::size_t precision() const noexcept { return c_.size(); }
    std::uint64_t coeff(std::size_t m) const { return c_[m]; }
    const std::vector<std::uint64_t>& coeffs() const noexcept { return c_; }

    bool is_zero() const noexcept {
        for (std::uint64_t x : c_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const QExp& f, const QExp& g) {
        return f.field_ == g.field_ && f.c_ == g.c_;
    }

private:
    static std::size_t checked(std::size_t precision) {
        if (precision == 0) throw usage_error("QExp: precision must be at least 1");
        return precision;
    }

    PrimeField field_;
    std::vector<std::uint64_t> c_;
};

namespace detail {
inline const PrimeField& common_field(const QExp& f, const QExp& g) {
    if (!(f.field() == g.field())) throw usage_error("QExp: modulus mismatch");
    return f.field();
}
} // namespace detail

inline QExp operator+(const QExp& f, const QExp& g) {
    const PrimeField& F = detail::common_field(f, g);
    std::size_t n = std::min(f.precision(), g.precision());
    std::vector<std::uint64_t> c(n);
    for (std::size_t m = 0; m < n; ++m) c[m] = F.add(f.coeff(m), g.coeff(m));
    return QExp(F, std::move(c));
}

inline QExp operator-(const QExp& f, const QExp& g) {
    const PrimeField& F = detail::common_field(f, g);
    std::size_t n = std::min(f.precision(), g.precision());
    std::vector<std::uint64_t> c(n);
    for (std::size_t m = 0; m < n; ++m) c[m] = F.sub(f.coeff(m), g.coeff(m));
    return QExp(F, std::move(c));
}

// Cauchy-product convolution, truncated to the minimum operand precision.
// Partial sums are accumulated in 128 bits and reduced once per output
// coefficient; with p < 2^31 and precision < ~2^60 this cannot overflow.
inline QExp operator*(const QExp& f, const QExp& g) {
    const PrimeField& F = detail::common_field(f, g);
    std::size_t n = std::min(f.precision(), g.precision());
    std::vector<unsigned __int128> acc(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t ai = f.coeff(i);
        if (ai == 0) continue;
        for (std::size_t j = 0; i + j < n; ++j) acc[i + j] += ai * g.coeff(j);
    }
    std::vector<std::uint64_t> c(n);
    for (std::size_t m = 0; m < n; ++m)
        c[m] = static_cast<std::uint64_t>(acc[m] % F.modulus());
    return QExp(F, std::move(c));
}

inline QExp mul_scalar(const QExp& f, std::uint64_t s) {
    const PrimeField& F = f.field();
    std::vector<std::uint64_t> c(f.precision());
    for (std::size_t m = 0; m < f.precision(); ++m) c[m] = F.mul(f.coeff(m), s);
    return QExp(F, std::move(c));
}

// Binary powering; pow(f, 0) is the constant series 1 at f's precision.
inline QExp pow(const QExp& f, unsigned long long e) {
    QExp acc = QExp::one(f.field(), f.precision());
    QExp base = f;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

// Lower a series to a smaller precision.
inline QExp truncated(const QExp& f, std::size_t n) {
    if (n < 1 || n > f.precision()) throw usage_error("truncated: invalid target precision");
    return QExp(f.field(), std::vector<std::uint64_t>(f.coeffs().begin(), f.coeffs().begin() + static_cast<std::ptrdiff_t>(n)));
}

// (Uf)_m = a_{mp}. Output precision ceil(n/p): coefficient m is provable
// exactly when mp < n.
inline QExp u_slice(const QExp& f) {
    std::uint64_t p = f.field().modulus();
    std::size_t n = f.precision();
    std::size_t out = (n + p - 1) / p;
    std::vector<std::uint64_t> c(out);
    for (std::size_t m = 0; m < out; ++m) c[m] = f.coeff(m * p);
    return QExp(f.field(), std::move(c));
}

// (Vf)_{mp} = a_m, zero elsewhere. Output precision p*(n-1)+1, the largest
// index determined by the input plus one.
inline QExp v_expand(const QExp& f) {
    std::uint64_t p = f.field().modulus();
    std::size_t n = f.precision();
    std::size_t out = p * (n - 1) + 1;
    std::vector<std::uint64_t> c(out, 0);
    for (std::size_t m = 0; m < n; ++m) c[m * p] = f.coeff(m);
    return QExp(f.field(), std::move(c));
}

// theta = q d/dq: multiplies coefficient m by m mod p. Same precision.
inline QExp theta(const QExp& f) {
    const PrimeField& F = f.field();
    std::vector<std::uint64_t> c(f.precision());
    for (std::size_t m = 0; m < f.precision(); ++m)
        c[m] = F.mul(f.coeff(m), m % F.modulus());
    return QExp(F, std::move(c));
}

inline std::string to_string(const QExp& f) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t m = 0; m < f.precision(); ++m) {
        std::uint64_t c = f.coeff(m);
        if (c == 0) continue;
        if (!first) os << " + ";
        if (m == 0) os << c;
        else if (c == 1) os << "q" << (m == 1 ? "" : "^" + std::to_string(m));
        else os << c << "*q" << (m == 1 ? "" : "^" + std::to_string(m));
        first = false;
    }
    if (first) os << "0";
    os << " + O(q^" << f.precision() << ")";
    return os.str();
}

} // namespace upforms
