#pragma once

// The Cartier operator on rational differentials of the projective line
// over F_p, global sections of Omega^1(S) twisted by powers of O(d*infty),
// surjectivity of the induced trace map, and the exhaustive evaluation of
// the Tango sum over polynomial witnesses (whose maximum is -1 in genus 0).
//
// Differentials are kept in partial-fraction canonical form
//
//   omega = ( sum_{s,j<0} c_{s,j} (t-s)^j  +  sum_{j>=0} c_j t^j ) dt
//
// with distinct F_p-rational poles s, no zero coefficients stored. On a term
// the Cartier operator acts by the local rule
//
//   C((t-s)^j dt) = (t-s)^{(j+1)/p - 1} dt  if p | j+1,  else 0,
//
// with coefficient p-th roots, which are the identity on F_p.

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "upforms/errors.hpp"
#include "upforms/fp_linalg.hpp"
#include "upforms/fp_poly.hpp"

namespace upforms {

class RatDifferential {
public:
    explicit RatDifferential(const PrimeField& field) : field_(field) {}

    static RatDifferential from_poly(const FpPoly& f) {
        RatDifferential w(f.field());
        for (std::size_t i = 0; i < f.coeffs().size(); ++i)
            w.add_poly_term(static_cast<long long>(i), f.coeff(i));
        return w;
    }

    const PrimeField& field() const noexcept { return field_; }

    // coefficient of t^j dt, j >= 0
    void add_poly_term(long long j, std::uint64_t c) {
        if (j < 0) throw usage_error("RatDifferential: polynomial exponent must be >= 0");
        accumulate(poly_, j, c);
    }

    // coefficient of (t-s)^j dt, j < 0
    void add_pole_term(std::uint64_t s, long long j, std::uint64_t c) {
        if (j >= 0) throw usage_error("RatDifferential: pole exponent must be negative");
        if (s >= field_.modulus()) throw usage_error("RatDifferential: pole is not a canonical residue");
        accumulate(poles_, std::make_pair(s, j), c);
    }

    const std::map<long long, std::uint64_t>& poly_terms() const noexcept { return poly_; }
    const std::map<std::pair<std::uint64_t, long long>, std::uint64_t>& pole_terms() const noexcept {
        return poles_;
    }

    FpPoly poly_part() const {
        if (poly_.empty()) return FpPoly(field_);
        std::vector<std::uint64_t> c(static_cast<std::size_t>(poly_.rbegin()->first) + 1, 0);
        for (const auto& [j, v] : poly_) c[static_cast<std::size_t>(j)] = v;
        return FpPoly(field_, std::move(c));
    }

    bool is_zero() const noexcept { return poly_.empty() && poles_.empty(); }

    friend bool operator==(const RatDifferential& a, const RatDifferential& b) {
        return a.field_ == b.field_ && a.poly_ == b.poly_ && a.poles_ == b.poles_;
    }

private:
    template <typename Map, typename Key>
    void accumulate(Map& m, const Key& key, std::uint64_t c) {
        if (c >= field_.modulus()) throw usage_error("RatDifferential: coefficient not canonical");
        if (c == 0) return;
        auto [it, inserted] = m.emplace(key, c);
        if (!inserted) {
            it->second = field_.add(it->second, c);
            if (it->second == 0) m.erase(it);
        }
    }

    PrimeField field_;
    std::map<long long, std::uint64_t> poly_;
    std::map<std::pair<std::uint64_t, long long>, std::uint64_t> poles_;
};

// Termwise Cartier image; canonical form in, canonical form out.
inline RatDifferential cartier(const RatDifferential& w) {
    const PrimeField& F = w.field();
    long long p = static_cast<long long>(F.modulus());
    RatDifferential out(F);
    for (const auto& [j, c] : w.poly_terms())
        if ((j + 1) % p == 0) out.add_poly_term((j + 1) / p - 1, c);
    for (const auto& [key, c] : w.pole_terms()) {
        auto [s, j] = key;
        if ((j + 1) % p == 0) out.add_pole_term(s, (j + 1) / p - 1, c);
    }
    return out;
}

// g * omega, re-expanded to canonical form. Around each pole s the factor g
// is rewritten in powers of (t-s); term products that land in nonnegative
// exponents are folded back into the polynomial part.
inline RatDifferential mul_poly(const RatDifferential& w, const FpPoly& g) {
    const PrimeField& F = w.field();
    if (!(g.field() == F)) throw usage_error("mul_poly: modulus mismatch");
    RatDifferential out(F);
    FpPoly poly_acc = w.poly_part() * g;

    // group pole terms by pole
    std::map<std::uint64_t, std::vector<std::pair<long long, std::uint64_t>>> by_pole;
    for (const auto& [key, c] : w.pole_terms()) by_pole[key.first].emplace_back(key.second, c);

    for (const auto& [s, terms] : by_pole) {
        FpPoly local = g.shifted(s); // g(u + s), u = t - s
        FpPoly carry(F);             // polynomial contribution in the variable u
        for (const auto& [j, c] : terms) {
            for (std::size_t i = 0; i < local.coeffs().size(); ++i) {
                std::uint64_t gi = local.coeff(i);
                if (gi == 0) continue;
                long long e = j + static_cast<long long>(i);
                std::uint64_t prod = F.mul(c, gi);
                if (e < 0) out.add_pole_term(s, e, prod);
                else carry = carry + FpPoly::monomial(F, static_cast<std::size_t>(e), prod);
            }
        }
        if (!carry.is_zero()) poly_acc = poly_acc + carry.shifted(F.neg(s)); // back to powers of t
    }
    for (std::size_t i = 0; i < poly_acc.coeffs().size(); ++i)
        out.add_poly_term(static_cast<long long>(i), poly_acc.coeff(i));
    return out;
}

// The divisor data: L = O(d * infty) and a reduced set S of finite
// F_p-rational points (distinct, infty excluded by convention).
struct TwistConfig {
    TwistConfig(const PrimeField& f, long long deg, std::vector<std::uint64_t> pts)
        : field(f), degree(deg), points(std::move(pts)) {
        std::sort(points.begin(), points.end());
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i] >= field.modulus())
                throw usage_error("TwistConfig: point is not a canonical residue");
            if (i > 0 && points[i] == points[i - 1])
                throw usage_error("TwistConfig: points must be distinct");
        }
    }

    PrimeField field;
    long long degree; // deg L
    std::vector<std::uint64_t> points;

    FpPoly vanishing_poly() const {
        FpPoly d = FpPoly::monomial(field, 0);
        for (std::uint64_t s : points)
            d = d * FpPoly(field, {field.neg(s), 1});
        return d;
    }
};

// Basis of H^0(P^1, Omega^1(S) (x) L^m) in the model
//   { g(t)/prod_{s in S}(t-s) dt : deg g <= m*d + |S| - 2 },
// of dimension max(0, m*d + |S| - 1). Numerators run over monomials t^i and
// each element is returned in partial-fraction canonical form (the pole
// divisor is squarefree, so all pole terms are simple).
inline std::vector<RatDifferential> h0_basis(const TwistConfig& cfg, std::size_t m) {
    if (m < 1) throw usage_error("h0_basis: twist exponent must be >= 1");
    const PrimeField& F = cfg.field;
    long long max_deg = static_cast<long long>(m) * cfg.degree +
                        static_cast<long long>(cfg.points.size()) - 2;
    std::vector<RatDifferential> basis;
    if (max_deg < 0) return basis;

    FpPoly D = cfg.vanishing_poly();
    FpPoly Dprime = D.derivative();
    basis.reserve(static_cast<std::size_t>(max_deg) + 1);
    for (long long i = 0; i <= max_deg; ++i) {
        auto [q, r] = FpPoly::divmod(FpPoly::monomial(F, static_cast<std::size_t>(i)), D);
        RatDifferential w = RatDifferential::from_poly(q);
        for (std::uint64_t s : cfg.points) {
            // residue of r/D at the simple root s
            std::uint64_t c = F.mul(r.eval(s), F.inv(Dprime.eval(s)));
            if (c != 0) w.add_pole_term(s, -1, c);
        }
        basis.push_back(std::move(w));
    }
    return basis;
}

struct TraceSurjectivityReport {
    std::size_t source_dim = 0;
    std::size_t target_dim = 0;
    std::size_t rank = 0;
    bool surjective = false;
};

// Matrix of the Cartier operator from h0_basis(cfg, p) to coordinates in
// h0_basis(cfg, 1); surjective iff the rank equals the target dimension.
// Coordinates are read off by clearing the common denominator: the element
// g/D dt corresponds to the numerator coefficient vector of g.
inline TraceSurjectivityReport verify_trace_surjective(const TwistConfig& cfg) {
    if (cfg.degree < 0) throw usage_error("verify_trace_surjective: requires deg L >= 0");
    const PrimeField& F = cfg.field;
    std::vector<RatDifferential> source = h0_basis(cfg, static_cast<std::size_t>(F.modulus()));
    long long target_max_deg =
        cfg.degree + static_cast<long long>(cfg.points.size()) - 2;
    std::size_t target_dim = target_max_deg < 0 ? 0 : static_cast<std::size_t>(target_max_deg) + 1;

    FpPoly D = cfg.vanishing_poly();
    FpMatrix mat(F, source.size(), target_dim);
    for (std::size_t row = 0; row < source.size(); ++row) {
        RatDifferential img = cartier(source[row]);
        // numerator of img relative to the common denominator D
        FpPoly num = img.poly_part() * D;
        for (const auto& [key, c] : img.pole_terms()) {
            auto [s, j] = key;
            if (j != -1)
                throw std::logic_error("verify_trace_surjective: image has a non-simple pole");
            FpPoly cofactor = D / FpPoly(F, {F.neg(s), 1});
            num = num + cofactor.mul_scalar(c);
        }
        if (num.degree() > target_max_deg)
            throw std::logic_error("verify_trace_surjective: image leaves the target space");
        for (std::size_t col = 0; col < target_dim; ++col) mat.set(row, col, num.coeff(col));
    }
    std::size_t rank = rref(mat).rank;
    return TraceSurjectivityReport{source.size(), target_dim, rank, rank == target_dim};
}

namespace detail {
inline long long floor_div(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}
} // namespace detail

// sum over points x of P^1 of floor(ord_x(df)/p) for df = f' dt. Finite
// geometric points contribute deg(pi) * floor(m/p) per irreducible factor pi
// of f' with multiplicity m (read off the squarefree decomposition, whose
// parts group irreducibles of equal multiplicity); the point at infinity
// contributes floor((-deg f' - 2)/p).
inline long long tango_sum(const FpPoly& f) {
    const PrimeField& F = f.field();
    long long p = static_cast<long long>(F.modulus());
    FpPoly df = f.derivative();
    if (df.is_zero()) throw usage_error("tango_sum: df = 0 (f is a p-th power)");
    long long total = 0;
    for (const auto& [part, mult] : squarefree_decomposition(df))
        total += part.degree() * static_cast<long long>(mult / static_cast<std::size_t>(p));
    total += detail::floor_div(-df.degree() - 2, p);
    return total;
}

struct TangoSearchResult {
    long long max_value = 0;
    std::vector<std::uint64_t> witness_coeffs; // a_0..a_max_deg of an attaining f
    std::uint64_t candidates = 0;              // tuples enumerated, including skipped
    std::uint64_t skipped = 0;                 // tuples with f' = 0
};

// Exhaustive maximum of tango_sum over all polynomials of degree <= max_deg
// with f' != 0, enumerated in lexicographic order of the coefficient tuple
// (a_0, ..., a_max_deg); the reported witness is the lexicographically
// smallest attaining tuple. Guarded at 10^7 candidates.
inline TangoSearchResult tango_search(const PrimeField& field, std::size_t max_deg) {
    constexpr std::uint64_t kGuard = 10'000'000;
    std::uint64_t p = field.modulus();
    if (max_deg < 1)
        throw usage_error("tango_search: degree bound must be >= 1 (constants have df = 0)");
    std::uint64_t count = 1;
    for (std::size_t i = 0; i <= max_deg; ++i) {
        if (count > kGuard / p)
            throw guard_error("tango_search: more than 10^7 candidates");
        count *= p;
    }

    TangoSearchResult res;
    res.candidates = count;
    bool have_best = false;
    std::vector<std::uint64_t> digits(max_deg + 1, 0); // digits[i] = a_i
    for (std::uint64_t n = 0; n < count; ++n) {
        FpPoly f(field, digits);
        if (f.derivative().is_zero()) {
            ++res.skipped;
        } else {
            long long v = tango_sum(f);
            if (!have_best || v > res.max_value) {
                res.max_value = v;
                res.witness_coeffs = digits;
                have_best = true;
            }
        }
        // odometer increment, last coefficient fastest = lexicographic order
        for (std::size_t i = digits.size(); i-- > 0;) {
            if (++digits[i] < p) break;
            digits[i] = 0;
        }
    }
    if (!have_best) throw std::logic_error("tango_search: no admissible candidate");
    return res;
}

} // namespace upforms
