#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace edgestat {

class EmpiricalCDF {
public:
    explicit EmpiricalCDF(std::vector<double> sample);

    std::size_t size() const { return x_.size(); }
    const std::vector<double>& sorted() const { return x_; }
    double operator()(double t) const;
    double quantile(double p) const;
    double mean() const;
    double variance() const;

    // sup_t |F_n(t) - F(t)|, checked on both sides of every jump.
    double ks_distance(const std::function<double(double)>& cdf) const;
    double ks_distance(const EmpiricalCDF& other) const;
    // Dvoretzky-Kiefer-Wolfowitz half-width at confidence 1 - delta.
    double dkw_band(double delta) const;

private:
    std::vector<double> x_;
};

// Smooth CDF tabulated once on a uniform grid, then interpolated.
class TabulatedCdf {
public:
    TabulatedCdf(const std::function<double(double)>& f, double lo, double hi, double step);
    double operator()(double t) const;
    double lo() const { return lo_; }
    double hi() const { return lo_ + h_ * (v_.size() - 1); }

private:
    double lo_, h_;
    std::vector<double> v_;
};

// Exact law of a sum of independent Bernoulli(p_i).
std::vector<double> poisson_binomial(std::span<const double> p);
double total_variation(std::span<const double> p, std::span<const double> q);

// Runs body(i) for i in [0, count) on `workers` threads; each index goes to exactly one call.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);
unsigned default_workers();

} // namespace edgestat
