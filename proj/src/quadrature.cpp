#include "edgestat/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace edgestat {

void QuadratureRule::append(const QuadratureRule& other)
{
    nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
    weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

namespace {

// Newton on P_n from the Tricomi initial guess; nodes come out to full precision for n in the thousands.
QuadratureRule build_gauss_legendre(int n)
{
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        long double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        long double pp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p1 = 1, p2 = 0;
            for (int j = 1; j <= n; ++j) {
                long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1) * z * p2 - (j - 1.0L) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1);
            long double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        {
            long double p1 = 1, p2 = 0;
            for (int j = 1; j <= n; ++j) {
                long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1) * z * p2 - (j - 1.0L) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1);
        }
        double w = static_cast<double>(2 / ((1 - z * z) * pp * pp));
        r.nodes[i] = -static_cast<double>(z);
        r.nodes[n - 1 - i] = static_cast<double>(z);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

} // namespace

const QuadratureRule& gauss_legendre(int n)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_legendre(n));
    return *slot;
}

QuadratureRule gauss_legendre(int n, double a, double b)
{
    const QuadratureRule& ref = gauss_legendre(n);
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * ref.nodes[i];
        r.weights[i] = half * ref.weights[i];
    }
    return r;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breaks, int n)
{
    QuadratureRule r;
    if (breaks.size() < 2) return r;
    r.nodes.reserve((breaks.size() - 1) * n);
    r.weights.reserve((breaks.size() - 1) * n);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        r.append(gauss_legendre(n, breaks[i], breaks[i + 1]));
    return r;
}

} // namespace edgestat
