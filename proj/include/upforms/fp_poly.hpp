#pragma once

// Dense univariate polynomials over F_p: ring arithmetic, division, gcd,
// p-th roots and squarefree decomposition in characteristic p. Coefficients
// are canonical residues; the zero polynomial has an empty coefficient
// vector and degree -1.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "upforms/errors.hpp"
#include "upforms/fp_linalg.hpp"

namespace upforms {

class FpPoly {
public:
    explicit FpPoly(const PrimeField& field) : field_(field) {}

    FpPoly(const PrimeField& field, std::vector<std::uint64_t> coeffs)
        : field_(field), c_(std::move(coeffs)) {
        for (std::uint64_t x : c_)
            if (x >= field_.modulus()) throw usage_error("FpPoly: coefficient not a canonical residue");
        normalize();
    }

    static FpPoly from_integers(const PrimeField& field, const std::vector<long long>& raw) {
        std::vector<std::uint64_t> c;
        c.reserve(raw.size());
        for (long long x : raw) c.push_back(field.reduce_int(x));
        return FpPoly(field, std::move(c));
    }

    static FpPoly monomial(const PrimeField& field, std::size_t degree, std::uint64_t c = 1) {
        std::vector<std::uint64_t> v(degree + 1, 0);
        v[degree] = c % field.modulus();
        return FpPoly(field, std::move(v));
    }

    const PrimeField& field() const noexcept { return field_; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    long long degree() const noexcept { return static_cast<long long>(c_.size()) - 1; }
    std::uint64_t coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    std::uint64_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
    const std::vector<std::uint64_t>& coeffs() const noexcept { return c_; }

    friend bool operator==(const FpPoly& a, const FpPoly& b) {
        return a.field_ == b.field_ && a.c_ == b.c_;
    }

    friend FpPoly operator+(const FpPoly& a, const FpPoly& b) {
        const PrimeField& F = common(a, b);
        std::vector<std::uint64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.add(a.coeff(i), b.coeff(i));
        return FpPoly(F, std::move(c));
    }

    friend FpPoly operator-(const FpPoly& a, const FpPoly& b) {
        const PrimeField& F = common(a, b);
        std::vector<std::uint64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.sub(a.coeff(i), b.coeff(i));
        return FpPoly(F, std::move(c));
    }

    friend FpPoly operator*(const FpPoly& a, const FpPoly& b) {
        const PrimeField& F = common(a, b);
        if (a.is_zero() || b.is_zero()) return FpPoly(F);
        std::vector<unsigned __int128> acc(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += a.c_[i] * b.c_[j];
        }
        std::vector<std::uint64_t> c(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i)
            c[i] = static_cast<std::uint64_t>(acc[i] % F.modulus());
        return FpPoly(F, std::move(c));
    }

    FpPoly mul_scalar(std::uint64_t s) const {
        std::vector<std::uint64_t> c(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) c[i] = field_.mul(c_[i], s);
        return FpPoly(field_, std::move(c));
    }

    static std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b) {
        const PrimeField& F = common(a, b);
        if (b.is_zero()) throw usage_error("FpPoly::divmod: division by zero");
        if (a.degree() < b.degree()) return {FpPoly(F), a};
        std::vector<std::uint64_t> rem = a.c_;
        std::size_t qlen = a.c_.size() - b.c_.size() + 1;
        std::vector<std::uint64_t> quo(qlen, 0);
        std::uint64_t lead_inv = F.inv(b.leading());
        for (std::size_t k = qlen; k-- > 0;) {
            std::uint64_t top = rem[k + b.c_.size() - 1];
            if (top == 0) continue;
            std::uint64_t q = F.mul(top, lead_inv);
            quo[k] = q;
            for (std::size_t i = 0; i < b.c_.size(); ++i)
                rem[k + i] = F.sub(rem[k + i], F.mul(q, b.c_[i]));
        }
        return {FpPoly(F, std::move(quo)), FpPoly(F, std::move(rem))};
    }

    friend FpPoly operator/(const FpPoly& a, const FpPoly& b) { return divmod(a, b).first; }
    friend FpPoly operator%(const FpPoly& a, const FpPoly& b) { return divmod(a, b).second; }

    FpPoly derivative() const {
        if (c_.size() <= 1) return FpPoly(field_);
        std::vector<std::uint64_t> c(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            c[i - 1] = field_.mul(c_[i], i % field_.modulus());
        return FpPoly(field_, std::move(c));
    }

    std::uint64_t eval(std::uint64_t x) const {
        std::uint64_t v = 0;
        for (std::size_t i = c_.size(); i-- > 0;) v = field_.add(field_.mul(v, x), c_[i]);
        return v;
    }

    FpPoly monic() const {
        if (is_zero()) return *this;
        return mul_scalar(field_.inv(leading()));
    }

    static FpPoly gcd(FpPoly a, FpPoly b) {
        common(a, b);
        while (!b.is_zero()) {
            FpPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    FpPoly pow(unsigned long long e) const {
        FpPoly acc = monomial(field_, 0);
        FpPoly base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return acc;
    }

    // p-th root of a polynomial of the form g(t^p). Over F_p such a
    // polynomial equals (h(t))^p with h obtained by dividing exponents by p
    // (coefficient p-th roots are the identity on the prime field).
    FpPoly pth_root() const {
        if (is_zero()) return FpPoly(field_);
        std::uint64_t p = field_.modulus();
        std::vector<std::uint64_t> c(static_cast<std::size_t>(degree()) / p + 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (i % p != 0) throw usage_error("FpPoly::pth_root: polynomial is not a p-th power");
            c[i / p] = c_[i];
        }
        return FpPoly(field_, std::move(c));
    }

    // P(t + a), by Horner recomposition.
    FpPoly shifted(std::uint64_t a) const {
        FpPoly shift_factor = FpPoly(field_, {a % field_.modulus(), 1});
        FpPoly acc(field_);
        for (std::size_t i = c_.size(); i-- > 0;) {
            acc = acc * shift_factor;
            acc = acc + monomial(field_, 0, c_[i]);
        }
        return acc;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!first) os << " + ";
            if (i == 0) os << c_[i];
            else if (c_[i] == 1) os << "t" << (i == 1 ? "" : "^" + std::to_string(i));
            else os << c_[i] << "*t" << (i == 1 ? "" : "^" + std::to_string(i));
            first = false;
        }
        return os.str();
    }

private:
    static const PrimeField& common(const FpPoly& a, const FpPoly& b) {
        if (!(a.field_ == b.field_)) throw usage_error("FpPoly: modulus mismatch");
        return a.field_;
    }

    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    PrimeField field_;
    std::vector<std::uint64_t> c_;
};

namespace detail {

inline void squarefree_rec(const FpPoly& f, std::size_t mult_scale,
                           std::vector<std::pair<FpPoly, std::size_t>>& out) {
    const PrimeField& F = f.field();
    if (f.degree() < 1) return;
    FpPoly fp = f.derivative();
    if (fp.is_zero()) {
        squarefree_rec(f.pth_root().monic(), mult_scale * F.modulus(), out);
        return;
    }
    FpPoly c = FpPoly::gcd(f, fp);
    FpPoly w = (f / c).monic();
    std::size_t i = 1;
    while (!w.is_one()) {
        FpPoly y = FpPoly::gcd(w, c);
        FpPoly z = (w / y).monic();
        if (!z.is_one()) out.emplace_back(z, i * mult_scale);
        w = std::move(y);
        c = (c / w).monic();
        ++i;
    }
    // what is left of c collects the factors whose multiplicity p divides
    if (!c.is_one()) squarefree_rec(c.pth_root().monic(), mult_scale * F.modulus(), out);
}

} // namespace detail

// f = unit * prod g_i^{m_i} with the g_i monic, squarefree and pairwise
// coprime. Valid in characteristic p (p-th-power parts are extracted by
// exponent division). Parts are returned in increasing multiplicity order,
// ties broken by degree then coefficients, so the output is deterministic.
inline std::vector<std::pair<FpPoly, std::size_t>> squarefree_decomposition(const FpPoly& f) {
    if (f.is_zero()) throw usage_error("squarefree_decomposition: zero polynomial");
    std::vector<std::pair<FpPoly, std::size_t>> out;
    detail::squarefree_rec(f.monic(), 1, out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.coeffs() < b.first.coeffs();
    });
    return out;
}

} // namespace upforms
