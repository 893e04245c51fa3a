#include "doctest.h"
#include "oracle_values.hpp"

#include "edgestat/errors.hpp"
#include "edgestat/fredholm.hpp"

#include <cmath>

using namespace edgestat;

namespace {

KernelHandle rank_one()
{
    KernelHandle h;
    h.evaluate = [](double x, double y) { return 0.5 * std::exp(-x - y); };
    h.decay_rate = 2.0;
    h.envelope_amplitude = 0.5;
    return h;
}

}

TEST_SUITE("fredholm") {

TEST_CASE("rank one and zero kernels")
{
    // int_0^inf 0.5 e^{-2x} dx = 1/4
    CHECK(fredholm_det(rank_one(), 0.0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(fredholm_det(rank_one(), 1.0) == doctest::Approx(1.0 - 0.25 * std::exp(-2.0)).epsilon(1e-12));
    KernelHandle zero;
    zero.evaluate = [](double, double) { return 0.0; };
    CHECK(fredholm_det(zero, -3.0) == 1.0);
    CHECK(expected_count(rank_one(), 0.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("tracy-widom against the independent Nystrom oracle")
{
    for (const auto& c : oracle::tracywidom_cases) {
        CAPTURE(c.t);
        CHECK(std::fabs(tracy_widom_cdf(c.t) - c.f) < 1e-10);
    }
    CHECK(tracy_widom_cdf(-2.0) == doctest::Approx(0.4132241).epsilon(1e-6));
    CHECK_THROWS_AS(tracy_widom_cdf(-13.0), DomainError);
}

TEST_CASE("f_alpha against the oracle")
{
    for (const auto& c : oracle::falpha_cases) {
        CAPTURE(c.t);
        CHECK(std::fabs(f_alpha_cdf(c.alpha, c.t) - c.f) < 1e-8);
    }
}

TEST_CASE("cdfs are monotone and inside [0, 1]")
{
    double p_tw = 0, p_1 = 0, p_g = 0;
    for (double t = -6.0; t <= 4.0; t += 0.5) {
        const double tw = tracy_widom_cdf(t), f1 = f_alpha_cdf(1.0, t), g = f_alpha_gumbel_cdf(0.3, t);
        for (double v : {tw, f1, g}) {
            CHECK(v >= -1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
        CHECK(tw >= p_tw - 1e-12);
        CHECK(f1 >= p_1 - 1e-12);
        CHECK(g >= p_g - 1e-12);
        p_tw = tw;
        p_1 = f1;
        p_g = g;
    }
}

TEST_CASE("f_alpha tends to tracy-widom")
{
    double prev = INFINITY;
    for (double a : {2.0, 6.0, 20.0}) {
        double worst = 0;
        for (double t = -5.0; t <= 2.0; t += 0.5) worst = std::max(worst, std::fabs(f_alpha_cdf(a, t) - tracy_widom_cdf(t)));
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("node doubling raises an accuracy error on a starved grid")
{
    NystromConfig cfg;
    cfg.node_count = 4;
    CHECK_THROWS(fredholm_det(airy_kernel_handle(), -4.0, cfg));
    cfg.node_count = 8;
    cfg.nodes_per_resolution = 0;
    cfg.refine_tol = 1e-14;
    try {
        fredholm_det(airy_kernel_handle(), -10.0, cfg);
        FAIL("expected AccuracyError");
    } catch (const AccuracyError& e) {
        CHECK(e.coarse != e.fine);
    }
}

TEST_CASE("memo returns the same value")
{
    clear_fredholm_memo();
    const double a = tracy_widom_cdf(-1.3);
    CHECK(fredholm_memo_size() >= 1);
    CHECK(tracy_widom_cdf(-1.3) == a);
}

TEST_CASE("expected count of the airy process right of t")
{
    // E#{x > t} = int_t^inf K(x,x) dx, which by the Airy ODE equals (2t^2 Ai^2 - 2t Ai'^2 - Ai Ai') / 3
    for (double t : {-2.0, 0.0, 1.0}) {
        const double ai = airy_ai(t), aip = airy_ai_prime(t);
        const double ref = (2 * t * t * ai * ai - 2 * t * aip * aip - ai * aip) / 3.0;
        CHECK(expected_count(airy_kernel_handle(), t) == doctest::Approx(ref).epsilon(1e-9));
    }
}

}
