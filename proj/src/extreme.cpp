#include "edgestat/specfun.hpp"
#include "edgestat/errors.hpp"

#include <cmath>
#include <numbers>

namespace edgestat {

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double logistic_cdf(double alpha, double x)
{
    if (!(alpha > 0.0)) throw DomainError("logistic_cdf: alpha must be positive");
    const double z = alpha * x;
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

GumbelScaling gumbel_scaling(long long n, GumbelVariant variant, std::optional<double> c)
{
    if (n < 2) throw DomainError("gumbel_scaling: N must be at least 2");
    const double ln = std::log(static_cast<double>(n));
    const double sl = std::sqrt(ln);
    const double b = 1.0 / (2.0 * sl);
    if (variant == GumbelVariant::classical)
        return {sl - std::log(4.0 * std::numbers::pi * ln) / (4.0 * sl), b, variant};
    if (!c || !(*c > 0.0)) throw DomainError("gumbel_scaling: mns_edge needs c > 0");
    const double lam = std::expm1(1.0 / *c);
    const double arg = 4.0 * std::numbers::pi * ln / (lam * lam * (*c) * (*c));
    return {sl - std::log(arg) / (4.0 * sl), b, variant};
}

} // namespace edgestat
