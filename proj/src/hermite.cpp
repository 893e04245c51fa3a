#include "edgestat/specfun.hpp"
#include "edgestat/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace edgestat {

namespace {
const double pi_m14 = std::pow(std::numbers::pi, -0.25);
constexpr double rescale_at = 1e150;
constexpr double rescale_by = 1e-150;
const double log_rescale = std::log(1e150);
} // namespace

// Recurrence on (mantissa, log-scale) pairs: phi_n = v_n exp(ls), with the
// Gaussian weight starting in ls so nothing ever overflows or underflows early.
void hermite_functions(double x, std::span<double> out)
{
    const std::size_t count = out.size();
    if (count == 0) return;
    double ls = -0.5 * x * x;
    double prev = 0.0, cur = pi_m14;
    double scale = std::exp(ls);
    auto emit = [&](std::size_t n, double v) {
        if (ls > -700.0) out[n] = v * scale;
        else if (v == 0.0) out[n] = 0.0;
        else out[n] = std::copysign(std::exp(std::log(std::fabs(v)) + ls), v);
    };
    emit(0, cur);
    for (std::size_t n = 0; n + 1 < count; ++n) {
        double next = std::sqrt(2.0 / (n + 1.0)) * x * cur - std::sqrt(n / (n + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::fabs(cur) > rescale_at) {
            cur *= rescale_by;
            prev *= rescale_by;
            ls += log_rescale;
            scale = std::exp(ls);
        }
        emit(n + 1, cur);
    }
}

HermiteBasis::HermiteBasis(double beta, int max_index) : beta_(beta), max_index_(max_index)
{
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("HermiteBasis: beta must be positive");
    if (max_index < 0) throw IndexError("HermiteBasis: negative max_index");
}

double HermiteBasis::operator()(int n, double x) const
{
    if (n < 0 || n > max_index_)
        throw IndexError("hermite_psi: index " + std::to_string(n) + " outside [0, " +
                         std::to_string(max_index_) + "]");
    std::vector<double> buf(n + 1);
    hermite_functions(beta_ * x, buf);
    return std::sqrt(beta_) * buf[n];
}

void HermiteBasis::evaluate_all(double x, std::span<double> out) const
{
    if (out.size() > static_cast<std::size_t>(max_index_) + 1) throw IndexError("evaluate_all: too many indices");
    hermite_functions(beta_ * x, out);
    const double sb = std::sqrt(beta_);
    for (double& v : out) v *= sb;
}

double hermite_psi(const HermiteBasis& basis, int n, double x) { return basis(n, x); }

double beta_q(double q)
{
    if (!(q > 0.0 && q < 1.0)) throw DomainError("beta_q: q outside (0,1)");
    return std::sqrt((1.0 + q) / (1.0 - q));
}

double mehler_closed_form(double q, double x, double y)
{
    if (!(q > 0.0 && q < 1.0)) throw DomainError("mehler_closed_form: q outside (0,1)");
    const double omq = 1.0 - q;
    const double d = x - y;
    return std::sqrt(q) / (omq * std::sqrt(std::numbers::pi)) *
           std::exp(-0.5 * (x * x + y * y) - q * d * d / (omq * omq));
}

} // namespace edgestat
