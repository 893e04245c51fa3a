#include "doctest.h"

#include "edgestat/errors.hpp"
#include "edgestat/limits.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace edgestat;

namespace {

double part(const IdentityCheck& c, const std::string& key)
{
    for (const auto& [k, v] : c.parts)
        if (k == key) return v;
    FAIL("missing part " << key);
    return NAN;
}

}

TEST_SUITE("limits") {

TEST_CASE("m_alpha to airy table")
{
    const std::vector<double> alphas{2, 6, 20};
    const ConvergenceTable t = check_kernel_alpha_limit(AlphaLimit::to_airy, alphas, 2);
    CHECK(t.parameters == alphas);
    CHECK(t.trend_ok());
    CHECK(t.passed());
    const std::string csv = t.csv();
    CHECK(csv.find("alpha") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 4);
}

TEST_CASE("mns interpolation towards gue")
{
    const std::vector<double> mus{2, 4, 8};
    const ConvergenceTable t = check_mns_interpolation(MnsLimit::to_gue, mus, 10, 2);
    CHECK(t.passed());
    CHECK(t.columns.front().values.back() < 0.01);
}

TEST_CASE("bulk approximation within two percent at c = 0.05")
{
    CHECK(bulk_approximation_error(0.05) < 0.02);
    CHECK_THROWS_AS(bulk_approximation_error(0.0), DomainError);
}

TEST_CASE("identity suite")
{
    const IdentityCheck a = verify_airy_identity();
    CHECK(a.pass);
    CHECK(a.max_error < 1e-8);
    CHECK(verify_von_koch().pass);
    CHECK(verify_orthonormality().pass);
    const std::vector<double> al{1.0};
    const IdentityCheck b = verify_operator_bounds(al);
    CHECK(b.pass);
}

TEST_CASE("mehler truncation error is what the geometric tail predicts")
{
    const std::vector<double> qs{0.1, 0.5, 0.9};
    const IdentityCheck m = verify_mehler(80, qs);
    CHECK(part(m, "q=0.1") < 1e-14);
    CHECK(part(m, "q=0.5") < 1e-14);
    // the dropped tail is of order 0.9^80 relative to the sup
    CHECK(part(m, "q=0.9") > 1e-6);
    CHECK_FALSE(m.pass);
}

TEST_CASE("limit checks reject bad parameters")
{
    const std::vector<double> empty;
    CHECK_THROWS_AS(check_kernel_alpha_limit(AlphaLimit::to_airy, empty), DomainError);
    const std::vector<double> neg{-1, 2};
    CHECK_THROWS_AS(check_mns_interpolation(MnsLimit::to_gue, neg), DomainError);
}

}
