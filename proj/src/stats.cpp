#include "edgestat/stats.hpp"
#include "edgestat/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace edgestat {

EmpiricalCDF::EmpiricalCDF(std::vector<double> sample) : x_(std::move(sample))
{
    for (double v : x_)
        if (std::isnan(v)) throw DomainError("EmpiricalCDF: NaN in sample");
    std::sort(x_.begin(), x_.end());
}

double EmpiricalCDF::operator()(double t) const
{
    if (x_.empty()) return 0.0;
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    return static_cast<double>(it - x_.begin()) / x_.size();
}

double EmpiricalCDF::quantile(double p) const
{
    if (x_.empty()) throw DomainError("quantile of empty sample");
    p = std::clamp(p, 0.0, 1.0);
    double pos = p * (x_.size() - 1);
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= x_.size()) return x_.back();
    double fr = pos - i;
    return x_[i] * (1 - fr) + x_[i + 1] * fr;
}

double EmpiricalCDF::mean() const
{
    if (x_.empty()) return 0.0;
    long double s = 0;
    for (double v : x_) s += v;
    return static_cast<double>(s / x_.size());
}

double EmpiricalCDF::variance() const
{
    if (x_.size() < 2) return 0.0;
    const double m = mean();
    long double s = 0;
    for (double v : x_) s += (v - m) * (v - m);
    return static_cast<double>(s / (x_.size() - 1));
}

double EmpiricalCDF::ks_distance(const std::function<double(double)>& cdf) const
{
    const double n = static_cast<double>(x_.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (i + 1 < x_.size() && x_[i + 1] == x_[i]) continue;
        const double f = cdf(x_[i]);
        auto first = std::lower_bound(x_.begin(), x_.end(), x_[i]) - x_.begin();
        d = std::max({d, std::fabs((i + 1) / n - f), std::fabs(first / n - f)});
    }
    return d;
}

double EmpiricalCDF::ks_distance(const EmpiricalCDF& other) const
{
    const auto& a = x_;
    const auto& b = other.x_;
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

double EmpiricalCDF::dkw_band(double delta) const
{
    return std::sqrt(std::log(2.0 / delta) / (2.0 * x_.size()));
}

TabulatedCdf::TabulatedCdf(const std::function<double(double)>& f, double lo, double hi, double step)
    : lo_(lo), h_(step)
{
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
    v_.resize(n);
    for (std::size_t i = 0; i < n; ++i) v_[i] = f(lo + i * step);
}

// Six-point Lagrange on the window around t, clamped to the table's end values outside it.
double TabulatedCdf::operator()(double t) const
{
    const double s = (t - lo_) / h_;
    const auto last = static_cast<long>(v_.size()) - 1;
    if (s <= 0) return v_.front();
    if (s >= last) return v_.back();
    long i0 = static_cast<long>(std::floor(s)) - 2;
    i0 = std::clamp<long>(i0, 0, std::max<long>(0, last - 5));
    const long m = std::min<long>(6, last + 1);
    double acc = 0.0;
    for (long j = 0; j < m; ++j) {
        double l = 1.0;
        for (long k = 0; k < m; ++k)
            if (k != j) l *= (s - (i0 + k)) / static_cast<double>(j - k);
        acc += l * v_[i0 + j];
    }
    return acc;
}

std::vector<double> poisson_binomial(std::span<const double> p)
{
    std::vector<double> d{1.0};
    for (double pi : p) {
        d.push_back(0.0);
        for (std::size_t k = d.size() - 1; k > 0; --k) d[k] = d[k] * (1 - pi) + d[k - 1] * pi;
        d[0] *= (1 - pi);
    }
    return d;
}

double total_variation(std::span<const double> p, std::span<const double> q)
{
    const std::size_t n = std::max(p.size(), q.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = i < p.size() ? p[i] : 0.0, b = i < q.size() ? q[i] : 0.0;
        s += std::fabs(a - b);
    }
    return 0.5 * s;
}

unsigned default_workers()
{
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body)
{
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(err_mu);
                    if (!err) err = std::current_exception();
                    next = count;
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace edgestat
