#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qsd/errors.hpp"
#include "qsd/linalg.hpp"
#include "qsd/random.hpp"
#include "qsd/tna.hpp"

using namespace qsd;

namespace {

ComplexMatrix random_matrix(std::size_t dim, Rng& rng) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
    return m;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
    ComplexMatrix m = random_matrix(dim, rng);
    return 0.5 * (m + m.adjoint());
}

// Monic polynomial with the given roots, ascending coefficients.
std::vector<double> poly_from_roots(const std::vector<double>& roots) {
    std::vector<double> c = {1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

}  // namespace

TEST_CASE("characteristic polynomials of worked matrices are exact") {
    ComplexMatrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    const CharPoly p = char_poly(d);
    REQUIRE(p.degree == 2);
    CHECK(p.coeffs[0] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(p.coeffs[1] == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(p.coeffs[2] == 1.0);

    const CharPoly cube = char_poly(ComplexMatrix::identity(3));
    REQUIRE(cube.degree == 3);
    CHECK(cube.coeffs[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(cube.coeffs[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(cube.coeffs[2] == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(cube.coeffs[3] == 1.0);

    ComplexMatrix ex(2, 2);
    ex(0, 0) = 2.0;
    ex(0, 1) = 1.0;
    ex(1, 0) = 1.0;
    ex(1, 1) = 2.0;
    const CharPoly q = char_poly(ex);  // eigenvalues 1 and 3
    CHECK(q.coeffs[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(q.coeffs[1] == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("characteristic coefficients match the eigenvalue expansion") {
    Rng rng(4001);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 2 + rng.integer(9);
        const ComplexMatrix a = random_hermitian(dim, rng);
        const CharPoly p = char_poly(a);
        const std::vector<double> want = poly_from_roots(hermitian_eigvalues(a));

        REQUIRE(p.coeffs.size() == want.size());
        double scale = 1.0;
        for (double w : want) scale = std::max(scale, std::abs(w));
        for (std::size_t i = 0; i <= p.degree; ++i)
            CHECK(std::abs(p.coeffs[i] - want[i]) <= 1e-6 * scale);
    }
}

TEST_CASE("characteristic polynomial rejects bad inputs") {
    ComplexMatrix skew(2, 2);
    skew(0, 1) = 1.0;  // not Hermitian
    CHECK_THROWS_AS(char_poly(skew), argument_error);
    CHECK_THROWS_AS(char_poly(ComplexMatrix(2, 3)), argument_error);
    CHECK_THROWS_AS(char_poly(ComplexMatrix::identity(kTnaMaxSide + 1)), capacity_error);
}

TEST_CASE("root finding recovers known spectra") {
    CharPoly p;
    p.degree = 2;
    p.coeffs = {6.0, -5.0, 1.0};  // (x-2)(x-3)
    std::vector<double> roots = poly_roots(p, 30);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(3.0).epsilon(1e-9));  // descending
    CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-9));

    CharPoly sq;
    sq.degree = 2;
    sq.coeffs = {0.0, 0.0, 1.0};  // x^2
    roots = poly_roots(sq, 30);
    CHECK(roots[0] == 0.0);
    CHECK(roots[1] == 0.0);

    CharPoly cubic;
    cubic.degree = 3;
    cubic.coeffs = {-6.0, 11.0, -6.0, 1.0};  // (x-1)(x-2)(x-3)
    roots = poly_roots(cubic, 30);
    CHECK(roots[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(roots[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("root finding flags inconsistent or negative inputs") {
    CharPoly bad;
    bad.degree = 2;
    bad.coeffs = {1.0, 1.0};  // count mismatch
    CHECK_THROWS_AS(poly_roots(bad, 20), argument_error);

    CharPoly nonmonic;
    nonmonic.degree = 1;
    nonmonic.coeffs = {1.0, 2.0};
    CHECK_THROWS_AS(poly_roots(nonmonic, 20), argument_error);

    CharPoly negative;
    negative.degree = 1;
    negative.coeffs = {1.0, 1.0};  // root at -1, far below the clamp
    CHECK_THROWS_AS(poly_roots(negative, 20), numeric_error);
}

TEST_CASE("trace norm via the polynomial hits the worked values") {
    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -2.0;
    CHECK(tna(a, 30) == doctest::Approx(1.5).epsilon(1e-9));

    ComplexMatrix b(2, 2);
    b(0, 1) = 1.0;
    b(1, 0) = 1.0;
    CHECK(tna(b, 30) == doctest::Approx(1.0).epsilon(1e-9));

    ComplexMatrix c(2, 2);
    c(0, 1) = 2.0;
    c(1, 0) = 1.0;  // singular values 2 and 1
    CHECK(tna(c, 30) == doctest::Approx(1.5).epsilon(1e-9));

    CHECK(tna(ComplexMatrix(3, 3), 30) == 0.0);
}

TEST_CASE("polynomial and eigenvalue routes agree to the requested bits") {
    Rng rng(4002);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 1 + rng.integer(16);
        const unsigned k = 1 + static_cast<unsigned>(rng.integer(30));
        const ComplexMatrix x = random_matrix(dim, rng);
        CHECK(std::abs(tna(x, k) - trace_norm(x)) < std::pow(2.0, -static_cast<double>(k)));
    }
}

TEST_CASE("the wide-matrix tier stays within tolerance") {
    Rng rng(4003);
    const ComplexMatrix x = random_matrix(24, rng);
    CHECK(std::abs(tna(x, 20) - trace_norm(x)) < std::pow(2.0, -20.0));
}

TEST_CASE("magnitude spread does not break the root route") {
    ComplexMatrix d(3, 3);
    d(0, 0) = 1e-3;
    d(1, 1) = 5.0;
    d(2, 2) = 100.0;
    CHECK(std::abs(tna(d, 20) - 52.5005) < std::pow(2.0, -20.0));
}

TEST_CASE("precision and capacity ceilings are enforced") {
    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;
    CHECK_THROWS_AS(tna(a, kTnaMaxBits + 1), precision_error);
    CHECK_THROWS_AS(tna(ComplexMatrix(kTnaMaxSide + 1, kTnaMaxSide + 1), 10), capacity_error);
    CHECK_THROWS_AS(tna(ComplexMatrix(2, 3), 10), argument_error);
}
