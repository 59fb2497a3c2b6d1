#pragma once

// End-to-end verification that the U operator maps the weight-k expansion
// space onto the weight-k' one: build the slice images of an echelon basis
// of M_k, and certify by exact rank and membership computations at a
// truncation length that is provably injective on every space involved.
//
// Soundness of the truncation: with L = dim M_k + 1, truncation to L
// coefficients is injective on the q-expansion space of M_k because the
// echelon basis has its pivots in columns 0..dim-1. Since k' = k (mod p-1)
// and multiplication by the weight-(p-1) form with q-expansion 1 embeds the
// expansion space of M_{k'} into that of M_k coefficientwise, and U lands in
// some M_{k''} with k'' <= k, k'' = k (mod p-1), membership plus equality of
// ranks at truncation L certifies genuine equality of subspaces.

#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "upforms/errors.hpp"
#include "upforms/fp_linalg.hpp"
#include "upforms/level1.hpp"
#include "upforms/qexp.hpp"
#include "upforms/weights.hpp"

namespace upforms {

enum class HypothesisFlag { within_theorem, outside_theorem };

inline const char* to_string(HypothesisFlag f) {
    return f == HypothesisFlag::within_theorem ? "within_theorem" : "outside_theorem";
}

struct SurjectivityReport {
    std::uint64_t p = 0;
    long long k = 0;
    long long k0 = 0;
    long long k_prime = 0;
    std::size_t dim_k = 0;
    std::size_t dim_k_prime = 0;
    std::size_t image_rank = 0;
    bool contained = false;
    bool surjective = false;
    std::size_t precision_used = 0;
    long long serre_bound = 0;
    HypothesisFlag hypothesis_flag = HypothesisFlag::outside_theorem;
    // manifest path only: "table" when dimensions came from the manifest's
    // dimension table, "rank-only" when they are computed ranks
    std::optional<std::string> dim_mode;
};

struct VerifyOptions {
    // Explore weights in [2, p+1], below the surjectivity statement's range.
    // Such reports are always flagged outside_theorem.
    bool allow_below_range = false;
};

namespace detail {

struct Pipeline {
    std::size_t image_rank = 0;
    bool contained = false;
};

// Shared tail of the level-1 and manifest paths: slice each source basis
// row, truncate to length L, and compare rank/membership against the target
// echelon basis (given at precision exactly L).
inline Pipeline run_u_pipeline(const PrimeField& field, const FpMatrix& source_basis,
                               std::size_t source_precision, const FpMatrix& target_basis,
                               std::size_t L) {
    if (source_basis.cols() != source_precision)
        throw std::logic_error("u pipeline: source basis width mismatch");
    if (target_basis.cols() != L)
        throw std::logic_error("u pipeline: target basis width mismatch");

    FpMatrix images(field, source_basis.rows(), L);
    bool contained = true;
    for (std::size_t i = 0; i < source_basis.rows(); ++i) {
        QExp row(field, std::vector<std::uint64_t>(source_basis.row(i).begin(),
                                                   source_basis.row(i).end()));
        QExp sliced = u_slice(row);
        if (sliced.precision() < L)
            throw std::logic_error("u pipeline: sliced precision fell below the certification length");
        QExp img = truncated(sliced, L);
        images.set_row(i, img.coeffs());
        if (!subspace_contains(target_basis, img.coeffs())) contained = false;
    }
    return Pipeline{rref(images).rank, contained};
}

} // namespace detail

// Exact verification at level 1: does U map the weight-k expansion space
// over F_p onto the weight-k' one? Odd k short-circuits to a vacuous pass
// (zero spaces) so sweeps over all k are uniform. Precision policy: with
// L = dim M_k + 1, the source basis is computed at N = p*(L+1) so that the
// sliced rows keep one spare coefficient beyond the certification length.
inline SurjectivityReport verify_level1(const PrimeField& field, long long k,
                                        VerifyOptions opts = {}) {
    std::uint64_t p = field.modulus();
    if (k < 2) throw usage_error("verify_level1: k must be >= 2");
    if (k < static_cast<long long>(p) + 2 && !opts.allow_below_range)
        throw usage_error("verify_level1: k below p+2 (pass the below-range override to explore)");

    WeightTarget wt = target_weight(k, field);
    SurjectivityReport r;
    r.p = p;
    r.k = k;
    r.k0 = wt.k0;
    r.k_prime = wt.k_prime;
    r.serre_bound = wt.serre_bound;
    r.hypothesis_flag = (p >= 5 && k >= static_cast<long long>(p) + 2)
                            ? HypothesisFlag::within_theorem
                            : HypothesisFlag::outside_theorem;

    std::size_t d = level1_dimension(k);
    std::size_t d_prime = level1_dimension(wt.k_prime);
    if (d > 2000)
        throw guard_error("verify_level1: weight " + std::to_string(k) + " gives dimension " +
                          std::to_string(d) + ", beyond the desk-scale cap of 2000");
    if (d_prime > d)
        throw std::logic_error("verify_level1: target dimension exceeds source dimension");
    std::size_t L = d + 1;
    std::size_t N = static_cast<std::size_t>(p) * (L + 1);
    r.dim_k = d;
    r.dim_k_prime = d_prime;

    FpMatrix source = d == 0 ? FpMatrix(field, 0, N)
                             : victor_miller_basis(k, N, field).basis;
    FpMatrix target = d_prime == 0 ? FpMatrix(field, 0, L)
                                   : victor_miller_basis(wt.k_prime, L, field).basis;
    detail::Pipeline pipe = detail::run_u_pipeline(field, source, N, target, L);
    r.image_rank = pipe.image_rank;
    r.contained = pipe.contained;
    r.precision_used = N;
    r.surjective = r.contained && r.image_rank == r.dim_k_prime;
    return r;
}

struct ScanResult {
    std::vector<SurjectivityReport> reports; // every even k, increasing
    std::size_t failures = 0;                // reports with surjective = false
};

// Sweep every even k in [k_min, k_max]. Cells are independent pure
// computations; with workers > 1 they are evaluated concurrently and merged
// in k order, so the output is identical for any worker count.
inline ScanResult scan_level1(const PrimeField& field, long long k_min, long long k_max,
                              unsigned workers = 0) {
    if (k_min < static_cast<long long>(field.modulus()) + 2)
        throw usage_error("scan_level1: k_min must be at least p+2");
    std::vector<long long> ks;
    for (long long k = k_min % 2 == 0 ? k_min : k_min + 1; k <= k_max; k += 2) ks.push_back(k);

    ScanResult out;
    out.reports.resize(ks.size(), SurjectivityReport{});
    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 1;
    }
    if (workers <= 1 || ks.size() <= 1) {
        for (std::size_t i = 0; i < ks.size(); ++i) out.reports[i] = verify_level1(field, ks[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto work = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= ks.size()) return;
                try {
                    out.reports[i] = verify_level1(field, ks[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        std::size_t spawn = std::min<std::size_t>(workers, ks.size());
        pool.reserve(spawn);
        for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    for (const auto& rep : out.reports)
        if (!rep.surjective) ++out.failures;
    return out;
}

// User-supplied generator data for a moduli problem beyond the built-in
// level-1 path. Coefficient sequences are expansions in the uniformizer
// q^{1/e} at the chosen cusp (index n holds the coefficient of q^{n/e}), so
// internally everything is an integral power series in that uniformizer.
// The group index mu drives the truncation bound L = floor(k*mu/12) + 2.
struct GeneratorManifest {
    struct Generator {
        long long weight = 0;
        std::vector<std::uint64_t> coeffs; // reduced mod p at load
    };

    std::string label;
    std::uint64_t p = 0;
    std::uint64_t cusp_width = 1; // e
    std::uint64_t index = 1;      // mu
    std::vector<Generator> generators;
    std::map<long long, std::size_t> dimension_table; // optional, weight -> dim

    void validate() const {
        PrimeField field(p); // checks primality and range
        if (cusp_width < 1) throw usage_error("manifest: cusp_width must be >= 1");
        if (index < 1) throw usage_error("manifest: index must be >= 1");
        if (generators.empty()) throw usage_error("manifest: no generators");
        for (const auto& g : generators) {
            if (g.weight < 2 || g.weight % 2 != 0)
                throw usage_error("manifest: generator weights must be even and >= 2");
            std::size_t need = static_cast<std::size_t>(
                                   static_cast<unsigned long long>(g.weight) * index / 12) + 2;
            if (g.coeffs.size() < need)
                throw usage_error("manifest: generator of weight " + std::to_string(g.weight) +
                                  " needs at least " + std::to_string(need) + " coefficients");
            for (std::uint64_t c : g.coeffs)
                if (c >= field.modulus())
                    throw usage_error("manifest: coefficient not reduced mod p");
        }
    }
};

namespace detail {

// All exponent tuples (e_1..e_r) >= 0 with sum e_i * weight_i = k, in
// lexicographic order.
inline void weight_monomials_rec(const std::vector<GeneratorManifest::Generator>& gens,
                                 std::size_t idx, long long remaining,
                                 std::vector<std::size_t>& current,
                                 std::vector<std::vector<std::size_t>>& out) {
    if (out.size() > 20000)
        throw guard_error("manifest: weight monomial enumeration beyond the desk-scale cap "
                          "of 20000");
    if (idx == gens.size()) {
        if (remaining == 0) out.push_back(current);
        return;
    }
    long long w = gens[idx].weight;
    for (long long e = 0; e * w <= remaining; ++e) {
        current[idx] = static_cast<std::size_t>(e);
        weight_monomials_rec(gens, idx + 1, remaining - e * w, current, out);
    }
    current[idx] = 0;
}

inline std::vector<std::vector<std::size_t>> weight_monomials(
    const std::vector<GeneratorManifest::Generator>& gens, long long k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> current(gens.size(), 0);
    if (k >= 0) weight_monomials_rec(gens, 0, k, current, out);
    return out;
}

// Echelonized span of all weight-k monomials in the generators, at the given
// precision. Throws guard_error when some needed generator is too short.
inline RrefResult manifest_span(const PrimeField& field, const GeneratorManifest& m,
                                long long k, std::size_t precision,
                                const std::vector<std::vector<std::size_t>>& monomials) {
    FpMatrix rows(field, monomials.size(), precision);
    for (std::size_t r = 0; r < monomials.size(); ++r) {
        QExp prod = QExp::one(field, precision);
        for (std::size_t i = 0; i < m.generators.size(); ++i) {
            std::size_t e = monomials[r][i];
            if (e == 0) continue;
            const auto& gen = m.generators[i];
            if (gen.coeffs.size() < precision)
                throw guard_error("manifest: generator of weight " + std::to_string(gen.weight) +
                                  " has " + std::to_string(gen.coeffs.size()) +
                                  " coefficients but weight " + std::to_string(k) +
                                  " verification needs " + std::to_string(precision));
            QExp g(field, std::vector<std::uint64_t>(gen.coeffs.begin(),
                                                     gen.coeffs.begin() + static_cast<std::ptrdiff_t>(precision)));
            prod = prod * pow(g, e);
        }
        rows.set_row(r, prod.coeffs());
    }
    return rref(rows);
}

} // namespace detail

// The same surjectivity verification driven by manifest data: source space
// is the echelonized span of the weight-k monomials in the generators at
// precision N = p*L, target the weight-k' span at precision L, with the
// Sturm-style truncation L = floor(k*mu/12) + 2 trusted from the manifest's
// index. Dimensions come from the dimension table when present, otherwise
// they are the computed ranks (flagged "rank-only").
inline SurjectivityReport verify_manifest(const GeneratorManifest& m, long long k,
                                          VerifyOptions opts = {}) {
    m.validate();
    PrimeField field(m.p);
    std::uint64_t p = field.modulus();
    if (k < 2) throw usage_error("verify_manifest: k must be >= 2");
    if (k < static_cast<long long>(p) + 2 && !opts.allow_below_range)
        throw usage_error("verify_manifest: k below p+2 (pass the below-range override to explore)");

    WeightTarget wt = target_weight(k, field);
    if (static_cast<unsigned long long>(k) > 1'000'000ull / m.index)
        throw guard_error("verify_manifest: k * index beyond the desk-scale cap");
    std::size_t L = static_cast<std::size_t>(
                        static_cast<unsigned long long>(k) * m.index / 12) + 2;
    std::size_t N = static_cast<std::size_t>(p) * L;

    auto src_monomials = detail::weight_monomials(m.generators, k);
    if (src_monomials.empty())
        throw usage_error("verify_manifest: weight " + std::to_string(k) +
                          " is not representable by the manifest generators");
    RrefResult src = detail::manifest_span(field, m, k, N, src_monomials);

    auto tgt_monomials = detail::weight_monomials(m.generators, wt.k_prime);
    RrefResult tgt = tgt_monomials.empty()
                         ? RrefResult{FpMatrix(field, 0, L), 0, {}}
                         : detail::manifest_span(field, m, wt.k_prime, L, tgt_monomials);

    // keep only the nonzero rows of the echelon forms
    FpMatrix src_basis(field, src.rank, N);
    for (std::size_t i = 0; i < src.rank; ++i) src_basis.set_row(i, src.echelon.row(i));
    FpMatrix tgt_basis(field, tgt.rank, L);
    for (std::size_t i = 0; i < tgt.rank; ++i) tgt_basis.set_row(i, tgt.echelon.row(i));

    detail::Pipeline pipe = detail::run_u_pipeline(field, src_basis, N, tgt_basis, L);

    SurjectivityReport r;
    r.p = p;
    r.k = k;
    r.k0 = wt.k0;
    r.k_prime = wt.k_prime;
    r.serre_bound = wt.serre_bound;
    r.hypothesis_flag = (p >= 5 && k >= static_cast<long long>(p) + 2)
                            ? HypothesisFlag::within_theorem
                            : HypothesisFlag::outside_theorem;
    auto dim_of = [&](long long weight, std::size_t rank) -> std::pair<std::size_t, bool> {
        auto it = m.dimension_table.find(weight);
        if (it != m.dimension_table.end()) return {it->second, true};
        return {rank, false};
    };
    auto [dk, dk_from_table] = dim_of(k, src.rank);
    auto [dkp, dkp_from_table] = dim_of(wt.k_prime, tgt.rank);
    r.dim_k = dk;
    r.dim_k_prime = dkp;
    r.dim_mode = (dk_from_table && dkp_from_table) ? "table" : "rank-only";
    r.image_rank = pipe.image_rank;
    r.contained = pipe.contained;
    r.precision_used = N;
    r.surjective = r.contained && r.image_rank == r.dim_k_prime;
    return r;
}

} // namespace upforms
