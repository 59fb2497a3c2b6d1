#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "upforms/level1.hpp"

using namespace upforms;

namespace {

// Independent oracle: the ring of level-1 forms is freely generated in
// weights 4 and 6, so dim M_k equals the number of pairs (a, b) >= 0 with
// 4a + 6b = k.
std::size_t monomial_count(long long k) {
    if (k < 0) return 0;
    std::size_t n = 0;
    for (long long b = 0; 6 * b <= k; ++b)
        if ((k - 6 * b) % 4 == 0) ++n;
    return n;
}

// Independent oracle: divisor-power sum by direct enumeration, over the
// integers (no reduction until the caller asks).
unsigned long long sigma_oracle(unsigned long long m, unsigned j) {
    unsigned long long s = 0;
    for (unsigned long long d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        unsigned long long dp = 1;
        for (unsigned i = 0; i < j; ++i) dp *= d;
        s += dp;
    }
    return s;
}

} // namespace

TEST_CASE("dimension formula matches the monomial-count oracle", "[level1]") {
    CHECK(level1_dimension(0) == 1);
    CHECK(level1_dimension(2) == 0); // no (a,b) with 4a+6b = 2
    CHECK(level1_dimension(16) == 2); // (4,0) and (1,2)
    CHECK(level1_dimension(-4) == 0);
    CHECK(level1_dimension(7) == 0);
    for (long long k = 0; k <= 300; ++k)
        CHECK(level1_dimension(k) == monomial_count(k % 2 == 0 ? k : -1));
}

TEST_CASE("Eisenstein series expansions", "[level1]") {
    SECTION("E4 mod 5 is the constant series 1") {
        PrimeField F(5);
        CHECK(eisenstein_e4(F, 30) == QExp::one(F, 30));
    }
    SECTION("E6 mod 7 is the constant series 1") {
        PrimeField F(7);
        CHECK(eisenstein_e6(F, 30) == QExp::one(F, 30));
    }
    SECTION("E4 coefficient at q^2 is 240*sigma_3(2) = 2160") {
        CHECK(240 * sigma_oracle(2, 3) == 2160);
        for (std::uint64_t p : {7ull, 11ull, 13ull}) {
            PrimeField F(p);
            CHECK(eisenstein_e4(F, 3).coeff(2) == 2160 % p);
        }
    }
    SECTION("E6 coefficients against the divisor-sum oracle") {
        PrimeField F(11);
        QExp e6 = eisenstein_e6(F, 20);
        for (unsigned long long m = 1; m < 20; ++m)
            CHECK(e6.coeff(m) == F.reduce_int(-504 * static_cast<long long>(sigma_oracle(m, 5))));
    }
}

TEST_CASE("discriminant expansion", "[level1]") {
    SECTION("normalization: coefficient of q is 1") {
        for (std::uint64_t p : {2ull, 5ull, 13ull}) {
            PrimeField F(p);
            QExp d = discriminant(F, 8);
            CHECK(d.coeff(0) == 0);
            CHECK(d.coeff(1) == 1 % p);
        }
    }
    SECTION("coefficient of q^2 is -24") {
        // direct product expansion to q^2: only the m = 1 factor contributes,
        // with -binomial(24, 1) = -24
        unsigned long long binom_24_1 = 24;
        for (std::uint64_t p : {5ull, 7ull, 11ull}) {
            PrimeField F(p);
            CHECK(discriminant(F, 3).coeff(2) == F.reduce_int(-static_cast<long long>(binom_24_1)));
        }
    }
    SECTION("cross-oracle: eta product equals (E4^3 - E6^2)/1728") {
        for (std::uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
            PrimeField F(p);
            std::size_t prec = 50;
            QExp lhs = discriminant(F, prec);
            QExp num = pow(eisenstein_e4(F, prec), 3) - pow(eisenstein_e6(F, prec), 2);
            QExp rhs = mul_scalar(num, F.inv(F.reduce_int(1728)));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("Victor-Miller basis on the stated examples", "[level1]") {
    SECTION("k = 0 is the constants") {
        PrimeField F(7);
        FormSpace s = victor_miller_basis(0, 5, F);
        CHECK(s.dim == 1);
        CHECK(s.basis.rows() == 1);
        CHECK(s.basis.at(0, 0) == 1);
        for (std::size_t j = 1; j < 5; ++j) CHECK(s.basis.at(0, j) == 0);
    }
    SECTION("k = 12, p = 7: pivots (0,1) and f_1 = Delta") {
        PrimeField F(7);
        std::size_t prec = 10;
        FormSpace s = victor_miller_basis(12, prec, F);
        REQUIRE(s.dim == 2);
        CHECK(s.basis.at(0, 0) == 1);
        CHECK(s.basis.at(0, 1) == 0);
        CHECK(s.basis.at(1, 0) == 0);
        CHECK(s.basis.at(1, 1) == 1);
        // row 1 has no constant term and leading coefficient 1, and Delta has
        // zero coefficient in column 0, so the echelon row 1 is Delta itself
        QExp delta = discriminant(F, prec);
        for (std::size_t j = 0; j < prec; ++j) CHECK(s.basis.at(1, j) == delta.coeff(j));
        CHECK(delta.coeff(2) == F.reduce_int(-24));
    }
    SECTION("k = 16, p = 5: dimension 2 with pivots at q^0 and q^1") {
        PrimeField F(5);
        FormSpace s = victor_miller_basis(16, 8, F);
        REQUIRE(s.dim == 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                CHECK(s.basis.at(i, j) == (i == j ? 1u : 0u));
    }
    SECTION("odd and negative weights are rejected") {
        PrimeField F(5);
        CHECK_THROWS_AS(victor_miller_basis(3, 10, F), usage_error);
        CHECK_THROWS_AS(victor_miller_basis(-2, 10, F), usage_error);
    }
    SECTION("insufficient precision is rejected") {
        PrimeField F(5);
        CHECK_THROWS_AS(victor_miller_basis(24, 2, F), usage_error); // dim 3 needs >= 4
    }
}

TEST_CASE("basis dimensions and echelon property for all even k <= 300", "[level1]") {
    for (std::uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
        PrimeField F(p);
        for (long long k = 0; k <= 300; k += 2) {
            std::size_t dim = level1_dimension(k);
            CHECK(dim == monomial_count(k));
            FormSpace s = victor_miller_basis(k, dim + 2, F);
            REQUIRE(s.dim == dim);
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j)
                    CHECK(s.basis.at(i, j) == (i == j ? 1u : 0u));
            }
        }
    }
}

TEST_CASE("E4*E6 lies in the span of the weight-10 basis", "[level1]") {
    for (std::uint64_t p : {5ull, 7ull, 13ull}) {
        PrimeField F(p);
        std::size_t prec = 12;
        FormSpace s = victor_miller_basis(10, prec, F);
        QExp prod = eisenstein_e4(F, prec) * eisenstein_e6(F, prec);
        CHECK(subspace_contains(s.basis, prod.coeffs()));
    }
}
