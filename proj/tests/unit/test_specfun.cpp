#include "doctest.h"
#include "oracle_values.hpp"

#include "edgestat/errors.hpp"
#include "edgestat/quadrature.hpp"
#include "edgestat/specfun.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace edgestat;
using std::numbers::pi;

TEST_SUITE("specfun") {

TEST_CASE("airy matches the extended-precision oracle")
{
    for (const auto& c : oracle::airy_cases) {
        CAPTURE(c.x);
        const AiryValue v = airy(c.x);
        const double tol = std::fabs(c.x) <= 30 ? 1e-12 : 1e-12 * std::max(1.0, std::pow(std::fabs(c.x), 0.25));
        CHECK(std::fabs(v.ai - c.ai) <= tol);
        CHECK(std::fabs(v.aip - c.aip) <= tol * std::max(1.0, std::sqrt(std::fabs(c.x))));
        // the Maclaurin branch loses relative digits to cancellation just below the switch
        if (c.x > 0) CHECK(std::fabs(v.ai - c.ai) <= 5e-10 * std::fabs(c.ai));
    }
}

TEST_CASE("airy anchor values")
{
    CHECK(airy_ai(0.0) == doctest::Approx(0.35502805388781723926).epsilon(1e-15));
    CHECK(std::fabs(airy_ai(oracle::airy_first_zero)) < 1e-10);
    CHECK(std::fabs(airy_ai(-2.33810741045976703849)) < 1e-10);
    const double ten = airy_ai(10.0);
    CHECK(ten > 0.0);
    CHECK(ten <= airy_envelope_c * std::exp(-2.0 * std::pow(10.0, 1.5) / 3.0) / std::pow(10.0, 0.25));
}

TEST_CASE("airy range is enforced")
{
    CHECK_THROWS_AS(airy_ai(200.5), DomainError);
    CHECK_THROWS_AS(airy_ai(-201.0), DomainError);
    CHECK_NOTHROW(airy_ai(200.0));
}

TEST_CASE("airy envelope bounds on a dense grid")
{
    for (double x = 0.5; x <= 50.0; x += 0.01) {
        const double env = airy_envelope_c * std::exp(-2.0 * std::pow(x, 1.5) / 3.0) * std::pow(x, -0.25);
        REQUIRE(std::fabs(airy_ai(x)) <= env);
    }
    for (double x = -50.0; x <= -0.5; x += 0.01) REQUIRE(std::fabs(airy_ai(x)) <= airy_envelope_c * std::pow(-x, -0.25));
}

TEST_CASE("airy is positive and decreasing on the right, sign-alternating on the left")
{
    double prev = airy_ai(0.0);
    for (double x = 0.1; x <= 30.0; x += 0.1) {
        const double v = airy_ai(x);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    // between consecutive zeros the sign flips
    CHECK(airy_ai(-1.0) > 0.0);
    CHECK(airy_ai(-3.0) < 0.0);
    CHECK(airy_ai(-4.5) > 0.0);
}

TEST_CASE("hermite functions match the oracle")
{
    for (const auto& c : oracle::hermite_cases) {
        CAPTURE(c.n);
        CAPTURE(c.x);
        HermiteBasis b(c.beta, c.n);
        CHECK(std::fabs(hermite_psi(b, c.n, c.x) - c.psi) < 1e-9);
    }
}

TEST_CASE("hermite trivial values and index checks")
{
    HermiteBasis b(1.0, 5);
    CHECK(hermite_psi(b, 0, 0.0) == doctest::Approx(0.7511255444649425).epsilon(1e-15));
    CHECK(std::fabs(hermite_psi(b, 1, 0.0)) < 1e-300);
    CHECK_THROWS_AS(hermite_psi(b, 6, 0.0), IndexError);
    CHECK_THROWS_AS(HermiteBasis(0.0, 3), DomainError);
}

TEST_CASE("hermite recurrence stays finite far in the tail")
{
    HermiteBasis b(1.0, 300);
    std::vector<double> out(301);
    for (double x : {0.0, 10.0, 24.0, 29.5, 40.0, 80.0}) {
        b.evaluate_all(x, out);
        for (double v : out) REQUIRE(std::isfinite(v));
    }
    b.evaluate_all(80.0, out);
    CHECK(std::fabs(out[300]) < 1e-300);
}

TEST_CASE("hermite orthonormality by quadrature")
{
    const QuadratureRule r = gauss_legendre(400, -12.0, 12.0);
    HermiteBasis b(2.0, 5);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(hermite_psi(b, 5, r.nodes[i]), 2);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mehler closed form against partial sums")
{
    const double q = 0.5, x = 0.3, y = -0.2;
    HermiteBasis b(beta_q(q), 59);
    std::vector<double> px(60), py(60);
    b.evaluate_all(x, px);
    b.evaluate_all(y, py);
    long double s = 0;
    for (int n = 0; n < 60; ++n) s += std::pow(q, n + 0.5) * px[n] * py[n];
    const double ref = mehler_closed_form(q, x, y);
    CHECK(std::fabs(static_cast<double>(s) - ref) / ref < 1e-10);
    CHECK(mehler_closed_form(0.3, 1.1, -0.4) == doctest::Approx(mehler_closed_form(0.3, -0.4, 1.1)).epsilon(1e-15));
    CHECK(mehler_closed_form(1e-12, 0.5, -0.5) < 1e-5);
    CHECK_THROWS_AS(mehler_closed_form(1.0, 0, 0), DomainError);
    CHECK_THROWS_AS(mehler_closed_form(0.0, 0, 0), DomainError);
}

TEST_CASE("gumbel law and scaling constants")
{
    CHECK(gumbel_cdf(0.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    const GumbelScaling g = gumbel_scaling(100);
    CHECK(g.a == doctest::Approx(oracle::gumbel_a100).epsilon(1e-14));
    CHECK(g.b == doctest::Approx(oracle::gumbel_b100).epsilon(1e-14));
    CHECK(g.a == doctest::Approx(1.67321).epsilon(1e-5));
    CHECK(g.b == doctest::Approx(0.23299).epsilon(1e-4));
    for (long long n : {2LL, 10LL, 1000LL, 123456789LL}) {
        const GumbelScaling s = gumbel_scaling(n);
        CHECK(s.b * std::sqrt(std::log(static_cast<double>(n))) == doctest::Approx(0.5).epsilon(1e-15));
    }
    CHECK_THROWS_AS(gumbel_scaling(1), DomainError);
    CHECK_THROWS_AS(gumbel_scaling(100, GumbelVariant::mns_edge), DomainError);
    // a_N(c) differs from the classical centering only through log(lambda^2 c^2)
    const GumbelScaling e = gumbel_scaling(100, GumbelVariant::mns_edge, 1.0);
    const double lam = std::expm1(1.0);
    CHECK(e.a - g.a == doctest::Approx(std::log(lam * lam) / (4.0 * std::sqrt(std::log(100.0)))).epsilon(1e-12));
}

TEST_CASE("logistic law")
{
    for (double a : {0.1, 1.0, 7.0}) {
        CHECK(logistic_cdf(a, 0.0) == 0.5);
        for (double x : {0.3, 2.0, 50.0, 400.0}) CHECK(logistic_cdf(a, x) + logistic_cdf(a, -x) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(logistic_cdf(2.0, 5.0) == doctest::Approx(oracle::logistic_2_5).epsilon(1e-14));
    CHECK(logistic_cdf(1.0, 1e6) == 1.0);
    CHECK(logistic_cdf(1.0, -1e6) == 0.0);
    CHECK_THROWS_AS(logistic_cdf(0.0, 1.0), DomainError);
}

}
