#include "doctest.h"

#include "edgestat/specfun.hpp"
#include "edgestat/stats.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace edgestat;

TEST_SUITE("stats") {

TEST_CASE("empirical cdf basics")
{
    EmpiricalCDF e({3.0, 1.0, 2.0, 2.0});
    CHECK(e.size() == 4);
    CHECK(e.sorted().front() == 1.0);
    CHECK(e(0.5) == 0.0);
    CHECK(e(2.0) == 0.75);
    CHECK(e(10.0) == 1.0);
    CHECK(e.mean() == 2.0);
    CHECK(e.quantile(0.5) >= 1.0);
    CHECK(e.quantile(0.5) <= 2.0);
}

TEST_CASE("ks distance against a point mass cdf and itself")
{
    EmpiricalCDF e({0.0, 1.0});
    // F jumps at 0.5: the empirical cdf sits at 1/2 on both sides
    CHECK(e.ks_distance([](double t) { return t < 0.5 ? 0.0 : 1.0; }) == doctest::Approx(0.5));
    CHECK(e.ks_distance(e) == 0.0);
    EmpiricalCDF f({0.5, 1.5});
    CHECK(e.ks_distance(f) == doctest::Approx(0.5));
}

TEST_CASE("ks of a gumbel sample stays inside the DKW band")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> s(4000);
    for (double& v : s) v = -std::log(-std::log(u(rng)));
    EmpiricalCDF e(std::move(s));
    CHECK(e.ks_distance(gumbel_cdf) < e.dkw_band(0.001));
    CHECK(e.dkw_band(0.05) == doctest::Approx(std::sqrt(std::log(2 / 0.05) / (2 * 4000.0))));
}

TEST_CASE("tabulated cdf interpolates smooth functions")
{
    TabulatedCdf t(gumbel_cdf, -4, 8, 0.1);
    double worst = 0;
    for (double x = -3.95; x < 7.9; x += 0.037) worst = std::max(worst, std::fabs(t(x) - gumbel_cdf(x)));
    CHECK(worst < 1e-7);
    CHECK(t(-100) == doctest::Approx(gumbel_cdf(-4)).epsilon(1e-12));
    CHECK(t(100) == doctest::Approx(gumbel_cdf(8)).epsilon(1e-12));
}

TEST_CASE("poisson binomial")
{
    const double p[] = {0.5, 0.5};
    const auto d = poisson_binomial(p);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == doctest::Approx(0.25));
    CHECK(d[1] == doctest::Approx(0.5));
    CHECK(d[2] == doctest::Approx(0.25));
    std::vector<double> many(200);
    for (std::size_t i = 0; i < many.size(); ++i) many[i] = 1.0 / (1.0 + std::exp(0.1 * (double(i) - 100)));
    const auto m = poisson_binomial(many);
    CHECK(std::accumulate(m.begin(), m.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    double mean = 0;
    for (std::size_t k = 0; k < m.size(); ++k) mean += k * m[k];
    CHECK(mean == doctest::Approx(std::accumulate(many.begin(), many.end(), 0.0)).epsilon(1e-12));
    for (double v : m) CHECK(v >= 0.0);
}

TEST_CASE("total variation")
{
    const double a[] = {0.5, 0.5}, b[] = {1.0}, c[] = {0.5, 0.5, 0.0};
    CHECK(total_variation(a, b) == doctest::Approx(0.5));
    CHECK(total_variation(a, c) == 0.0);
}

TEST_CASE("parallel_for visits each index exactly once")
{
    for (unsigned w : {1u, 3u, 8u}) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), w, [&](std::size_t i) { hits[i]++; });
        for (auto& h : hits) CHECK(h.load() == 1);
    }
    CHECK(default_workers() >= 1);
}

}
