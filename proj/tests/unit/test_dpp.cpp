#include "doctest.h"

#include "edgestat/dpp.hpp"
#include "edgestat/errors.hpp"
#include "edgestat/fredholm.hpp"
#include "edgestat/stats.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <vector>

using namespace edgestat;

TEST_SUITE("dpp") {

TEST_CASE("projection sampler edge cases")
{
    HermiteBasis b(1.0, 10);
    Rng rng(1);
    CHECK(sample_projection_dpp(b, std::vector<int>{}, rng).empty());
    const std::vector<int> idx{0, 1, 2, 3, 4};
    const auto pts = sample_projection_dpp(b, idx, rng);
    CHECK(pts.size() == 5);
    CHECK(std::is_sorted(pts.begin(), pts.end()));
}

TEST_CASE("a single psi_0 gives a gaussian of variance 1/(2 beta^2)")
{
    for (double beta : {1.0, 2.0}) {
        HermiteBasis b(beta, 0);
        Rng rng(7);
        std::vector<double> xs;
        SamplerStats st;
        for (int i = 0; i < 4000; ++i) xs.push_back(sample_projection_dpp(b, std::vector<int>{0}, rng, &st)[0]);
        EmpiricalCDF e(xs);
        const double v = 0.5 / (beta * beta);
        CHECK(std::fabs(e.mean()) < 4 * std::sqrt(v / 4000));
        CHECK(e.variance() == doctest::Approx(v).epsilon(0.06));
        CHECK(st.envelope_violations == 0);
        CHECK(st.accepted == 4000);
    }
}

TEST_CASE("projection onto psi_0..psi_4 reproduces the GUE(5) density")
{
    HermiteBasis b(1.0, 4);
    const std::vector<int> idx{0, 1, 2, 3, 4};
    std::vector<PointConfiguration> samples;
    for (std::uint64_t s = 0; s < 3000; ++s) {
        Rng rng(100 + s);
        samples.push_back({sample_projection_dpp(b, idx, rng), s, ""});
    }
    std::vector<double> edges;
    for (double x = -4; x <= 4.001; x += 0.5) edges.push_back(x);
    const Rho1Estimate r = empirical_rho1(samples, edges);
    int inside = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double ref = expected_count(KernelHandle{[](double x, double y) { return gue_kernel(5, x, y); }},
                                          edges[i], edges[i + 1], 20) /
                           (edges[i + 1] - edges[i]);
        if (std::fabs(r.density[i] - ref) <= 3 * r.std_error[i] + 1e-12) ++inside;
    }
    CHECK(inside >= 14);
}

TEST_CASE("grand canonical counts follow the poisson-binomial law")
{
    const SpectralKernel k = mns_kernel_mu(0.1, 20);
    const CountDistribution exact = count_distribution(k);
    CHECK(exact.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact.mean() == doctest::Approx(k.trace()).epsilon(1e-10));
    std::vector<PointConfiguration> samples;
    for (std::uint64_t s = 0; s < 2000; ++s) samples.push_back(sample_grand_canonical(k, 9000 + s));
    const CountDistribution emp = empirical_counts(samples);
    CHECK(total_variation(emp.probabilities, exact.probabilities) < 0.06);
}

TEST_CASE("sampling is a pure function of the seed")
{
    const SpectralKernel k = mns_kernel_mu(0.2, 10);
    const auto a = sample_grand_canonical(k, 42), b = sample_grand_canonical(k, 42);
    CHECK(a.points == b.points);
    CHECK(a.seed == 42);
    CHECK(sample_poisson_exp(-1.0, 3).points == sample_poisson_exp(-1.0, 3).points);
}

TEST_CASE("poisson process with intensity e^{-x}")
{
    const double t = -2.0;
    double total = 0;
    std::vector<double> shifted;
    const int reps = 3000;
    for (int i = 0; i < reps; ++i) {
        const auto c = sample_poisson_exp(t, 500 + i);
        total += c.size();
        for (double p : c.points) {
            REQUIRE(p > t);
            shifted.push_back(p - t);
        }
    }
    CHECK(total / reps == doctest::Approx(std::exp(-t)).epsilon(0.03));
    EmpiricalCDF e(shifted);
    CHECK(e.ks_distance([](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); }) < e.dkw_band(0.001));
    CHECK_THROWS_AS(sample_poisson_exp(-INFINITY, 1), DomainError);
}

TEST_CASE("thinning")
{
    PointConfiguration c{{}, 1, "x"};
    for (int i = 0; i < 10000; ++i) c.points.push_back(i * 1e-3);
    CHECK(thin(c, 1.0, 5).points == c.points);
    CHECK(thin(c, 0.0, 5).points.empty());
    const auto h = thin(c, 0.3, 5);
    CHECK(std::fabs(double(h.size()) / c.size() - 0.3) < 0.02);
    CHECK(std::is_sorted(h.points.begin(), h.points.end()));
}

TEST_CASE("von koch product identity")
{
    Eigen::MatrixXd a(60, 60), b(60, 60);
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 60; ++j) {
            a(i, j) = 0.7 * std::ldexp(1.0, -i - j - 2);
            b(i, j) = -0.4 * std::ldexp(1.0, -i - j - 2);
        }
    const VonKochReport r = von_koch_check(a, b);
    CHECK(r.pass);
    CHECK(r.max_error < 1e-12);
    CHECK(r.small_size == 30);
    CHECK_THROWS_AS(von_koch_check(a, Eigen::MatrixXd::Zero(3, 3)), DomainError);
}

TEST_CASE("empirical rho2 factorizes for a Poisson process")
{
    std::vector<PointConfiguration> s;
    for (int i = 0; i < 2000; ++i) s.push_back(sample_poisson_exp(0.0, 77 + i));
    const std::vector<double> edges{0.0, 0.5, 1.0, 1.5};
    const Rho2Estimate r2 = empirical_rho2(s, edges);
    // Poisson: rho2 factorizes
    const Rho1Estimate r1 = empirical_rho1(s, edges);
    CHECK(std::fabs(r2.density(0, 2) - r1.density[0] * r1.density[2]) < 4 * r2.std_error(0, 2) + 0.02);
}

}
