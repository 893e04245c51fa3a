#include "edgestat/kernels.hpp"
#include "edgestat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace edgestat {

using std::numbers::pi;

double KernelHandle::envelope(double x) const
{
    return envelope_amplitude * std::exp(-decay_rate * x);
}

Eigen::MatrixXd KernelHandle::matrix(std::span<const double> nodes) const
{
    if (matrix_fn) return matrix_fn(nodes);
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            k(i, j) = evaluate(nodes[i], nodes[j]);
            k(j, i) = symmetric ? k(i, j) : evaluate(nodes[j], nodes[i]);
        }
    return k;
}

// ---- weighted Airy integrals ----------------------------------------------

namespace {

constexpr int panel_points = 20;
constexpr double tail_exponent = 40.0;   // e^{-40} ~ 4e-18 relative to the O(1) Airy scale

// Upper end: beyond s = x + l the Ai^2 decay beats the weight's growth by e^{-40}.
double upper_argument(double growth, double xmin)
{
    double s = 1.0;
    while (4.0 / 3.0 * s * std::sqrt(s) - growth * (s - xmin) < tail_exponent) s += 0.25;
    return s;
}

} // namespace

QuadratureRule airy_lambda_rule(const AiryWeight& wt, double xmin)
{
    const double hi = upper_argument(wt.growth, xmin) - xmin;
    const double lo = wt.lo;
    if (!(hi > lo)) return {};
    auto width = [&](double l) {
        double freq = 2.0 * std::sqrt(std::max(0.0, -(xmin + l))) + 1.0;
        double h = std::min(1.0, 6.0 / freq);
        double cap = std::max(wt.max_panel, 0.4 * std::fabs(l));
        return std::min(h, cap);
    };
    // Panels must not straddle l = 0 where weights like the Fermi factor turn over.
    std::vector<double> br;
    if (lo < 0.0 && hi > 0.0) {
        br = panel_breaks(lo, 0.0, width);
        auto right = panel_breaks(0.0, hi, width);
        br.insert(br.end(), right.begin() + 1, right.end());
    } else {
        br = panel_breaks(lo, hi, width);
    }
    return composite_gauss_legendre(br, panel_points);
}

double weighted_airy(const AiryWeight& wt, double x, double y)
{
    QuadratureRule r = airy_lambda_rule(wt, std::min(x, y));
    long double acc = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        double l = r.nodes[k];
        double a = detail::airy_unchecked(x + l).ai;
        if (a == 0.0) continue;
        double b = (x == y) ? a : detail::airy_unchecked(y + l).ai;
        acc += static_cast<long double>(r.weights[k] * wt.w(l)) * a * b;
    }
    return static_cast<double>(acc);
}

Eigen::MatrixXd weighted_airy_gram(const AiryWeight& wt, std::span<const double> xs)
{
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    if (n == 0) return out;
    const double xmin = *std::min_element(xs.begin(), xs.end());
    QuadratureRule r = airy_lambda_rule(wt, xmin);
    const auto m = static_cast<Eigen::Index>(r.size());
    if (m == 0) return out;
    std::vector<double> sw(m);
    for (Eigen::Index k = 0; k < m; ++k) sw[k] = std::sqrt(r.weights[k] * wt.w(r.nodes[k]));
    // Rows whose whole lambda range sits deep in the decaying tail are exactly zero.
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < n; ++i)
        if (xs[i] + wt.lo < 105.0) active.push_back(i);
    const auto na = static_cast<Eigen::Index>(active.size());
    if (na == 0) return out;
    Eigen::MatrixXd a(na, m);
    for (Eigen::Index ii = 0; ii < na; ++ii) {
        const double x = xs[active[ii]];
        for (Eigen::Index k = 0; k < m; ++k)
            a(ii, k) = sw[k] == 0.0 ? 0.0 : detail::airy_unchecked(x + r.nodes[k]).ai * sw[k];
    }
    Eigen::MatrixXd g(na, na);
    g.setZero();
    g.selfadjointView<Eigen::Lower>().rankUpdate(a);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) out(active[i], active[j]) = out(active[j], active[i]) = g(i, j);
    return out;
}

// ---- Airy kernel -----------------------------------------------------------

namespace {

AiryWeight airy_weight()
{
    return {[](double) { return 1.0; }, 0.0, 0.0, 1.0};
}

void check_airy_args(double x, double y)
{
    if (!(x >= -40.0) || !(y >= -40.0)) throw DomainError("kernel argument below -40");
}

} // namespace

double airy_kernel(double x, double y)
{
    check_airy_args(x, y);
    return weighted_airy(airy_weight(), x, y);
}

double airy_kernel_closed_form(double x, double y)
{
    if (std::fabs(x - y) < 1e-6) {
        AiryValue m = airy(0.5 * (x + y));
        return m.aip * m.aip - 0.5 * (x + y) * m.ai * m.ai;
    }
    AiryValue a = airy(x);
    AiryValue b = airy(y);
    return (a.ai * b.aip - a.aip * b.ai) / (x - y);
}

KernelHandle airy_kernel_handle()
{
    KernelHandle h;
    h.evaluate = [](double x, double y) { return airy_kernel(x, y); };
    h.matrix_fn = [](std::span<const double> xs) {
        for (double x : xs) check_airy_args(x, x);
        return weighted_airy_gram(airy_weight(), xs);
    };
    h.decay_rate = 2.5;
    h.envelope_amplitude = 4.0;
    h.resolution = 1.0;
    h.label = "airy";
    return h;
}

double exp_airy_identity_rhs(double alpha, double x, double y)
{
    if (!(alpha > 0.0)) throw DomainError("exp_airy_identity_rhs: alpha must be positive");
    const double d = x - y;
    return std::exp(-d * d / (4.0 * alpha) - alpha * (x + y) / 2.0 + alpha * alpha * alpha / 12.0) /
           std::sqrt(4.0 * pi * alpha);
}

// ---- M_alpha ---------------------------------------------------------------
//
// sigma(z) = sum_{k=1}^{K} (-1)^{k+1} e^{kz} + (-1)^K e^{(K+1)z} / (1 + e^z).
// The first K pieces integrate in closed form against Ai Ai, leaving a
// remainder whose weight dies at rate (K+1) alpha on the left instead of alpha.

namespace {

constexpr double airy_sup_sq = 0.29;   // (max |Ai|)^2 bounds the left tail density
constexpr double lambda_tol = 1e-13;

struct MAlphaPlan {
    double alpha;
    int terms;
    AiryWeight remainder;
};

MAlphaPlan plan_m_alpha(double alpha, double xmin)
{
    int k = 0;
    if (alpha < 0.5) {
        k = static_cast<int>(std::floor(1.0 / alpha));
        while (k > 0 && k * alpha * std::max(0.0, -xmin) > 6.0) --k;
    }
    MAlphaPlan p{alpha, k, {}};
    const double rate = (k + 1) * alpha;
    p.remainder.lo = std::log(lambda_tol * rate / airy_sup_sq) / rate;
    p.remainder.growth = k * alpha;
    p.remainder.max_panel = pi / alpha;
    if (k == 0) {
        p.remainder.w = [alpha](double l) { return logistic_cdf(alpha, l); };
    } else {
        p.remainder.w = [alpha, k](double l) {
            const double z = alpha * l;
            if (z <= 0) return std::exp((k + 1) * z) / (1.0 + std::exp(z));
            return std::exp(k * z) / (1.0 + std::exp(-z));
        };
    }
    return p;
}

double series_part(const MAlphaPlan& p, double x, double y)
{
    double s = 0.0;
    for (int k = 1; k <= p.terms; ++k) {
        double e = exp_airy_identity_rhs(k * p.alpha, x, y);
        s += (k % 2 == 1) ? e : -e;
    }
    return s;
}

double remainder_sign(const MAlphaPlan& p) { return (p.terms % 2 == 0) ? 1.0 : -1.0; }

void check_alpha(double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
}

Eigen::MatrixXd m_alpha_matrix(double alpha, std::span<const double> xs)
{
    const double xmin = xs.empty() ? 0.0 : *std::min_element(xs.begin(), xs.end());
    MAlphaPlan p = plan_m_alpha(alpha, xmin);
    Eigen::MatrixXd k = weighted_airy_gram(p.remainder, xs);
    k *= remainder_sign(p);
    if (p.terms > 0) {
        const auto n = static_cast<Eigen::Index>(xs.size());
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) {
                double s = series_part(p, xs[i], xs[j]);
                k(i, j) += s;
                if (i != j) k(j, i) += s;
            }
    }
    return k;
}

} // namespace

double m_alpha(double alpha, double x, double y)
{
    check_alpha(alpha);
    check_airy_args(x, y);
    MAlphaPlan p = plan_m_alpha(alpha, std::min(x, y));
    return series_part(p, x, y) + remainder_sign(p) * weighted_airy(p.remainder, x, y);
}

double gumbel_shift(double alpha)
{
    return std::log(4.0 * pi * alpha * alpha * alpha) / (2.0 * alpha);
}

double m_alpha_gumbel_scaled(double alpha, double u, double v)
{
    check_alpha(alpha);
    if (alpha > 1.0) throw DomainError("m_alpha_gumbel_scaled: alpha must be in (0, 1]");
    const double f = gumbel_shift(alpha);
    return m_alpha(alpha, u / alpha - f, v / alpha - f) / alpha;
}

KernelHandle m_alpha_handle(double alpha)
{
    check_alpha(alpha);
    KernelHandle h;
    h.evaluate = [alpha](double x, double y) { return m_alpha(alpha, x, y); };
    h.matrix_fn = [alpha](std::span<const double> xs) {
        for (double x : xs) check_airy_args(x, x);
        return m_alpha_matrix(alpha, xs);
    };
    if (alpha >= 1.0) {
        h.decay_rate = 1.0;
        h.envelope_amplitude = 1.0;
        h.resolution = 1.0;
    } else {
        h.decay_rate = alpha;
        h.envelope_amplitude = std::exp(alpha * alpha * alpha / 12.0) / std::sqrt(4.0 * pi * alpha);
        h.resolution = std::sqrt(2.0 * alpha);
    }
    h.label = "m_alpha:" + std::to_string(alpha);
    return h;
}

KernelHandle m_alpha_gumbel_scaled_handle(double alpha)
{
    check_alpha(alpha);
    if (alpha > 1.0) throw DomainError("m_alpha_gumbel_scaled: alpha must be in (0, 1]");
    const double f = gumbel_shift(alpha);
    KernelHandle h;
    h.evaluate = [alpha](double u, double v) { return m_alpha_gumbel_scaled(alpha, u, v); };
    h.matrix_fn = [alpha, f](std::span<const double> us) {
        std::vector<double> xs(us.size());
        for (std::size_t i = 0; i < us.size(); ++i) {
            xs[i] = us[i] / alpha - f;
            check_airy_args(xs[i], xs[i]);
        }
        Eigen::MatrixXd k = m_alpha_matrix(alpha, xs);
        k /= alpha;
        return k;
    };
    h.decay_rate = 1.0;
    h.envelope_amplitude = std::exp(alpha * alpha * alpha / 12.0);
    h.resolution = std::sqrt(2.0 * alpha * alpha * alpha);
    h.label = "m_alpha_scaled:" + std::to_string(alpha);
    return h;
}

// ---- spectral (MNS) kernel -------------------------------------------------

namespace {

const double pi_m14 = std::pow(pi, -0.25);

// sum_{n<count} p_n phi_n(X) phi_n(Y) with both recurrences carried on (mantissa, log-scale) pairs.
double weighted_hermite_sum(std::span<const double> p, double bx, double by)
{
    double px = 0, cx = pi_m14, lx = -0.5 * bx * bx;
    double py = 0, cy = pi_m14, ly = -0.5 * by * by;
    long double acc = 0;
    double scale = (lx + ly > -700.0) ? std::exp(lx + ly) : 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (scale != 0.0) acc += static_cast<long double>(p[n]) * cx * cy * scale;
        else if (cx != 0.0 && cy != 0.0) {
            double lg = std::log(std::fabs(cx)) + std::log(std::fabs(cy)) + lx + ly;
            if (lg > -745.0) acc += p[n] * std::copysign(std::exp(lg), cx * cy);
        }
        double nx = std::sqrt(2.0 / (n + 1.0)) * bx * cx - std::sqrt(n / (n + 1.0)) * px;
        double ny = std::sqrt(2.0 / (n + 1.0)) * by * cy - std::sqrt(n / (n + 1.0)) * py;
        px = cx; cx = nx;
        py = cy; cy = ny;
        bool rescaled = false;
        if (std::fabs(cx) > 1e150) { cx *= 1e-150; px *= 1e-150; lx += 345.38776394910684; rescaled = true; }
        if (std::fabs(cy) > 1e150) { cy *= 1e-150; py *= 1e-150; ly += 345.38776394910684; rescaled = true; }
        if (rescaled) scale = (lx + ly > -700.0) ? std::exp(lx + ly) : 0.0;
    }
    return static_cast<double>(acc);
}

} // namespace

double SpectralKernel::evaluate(double x, double y) const
{
    const double b = basis.beta();
    return b * weighted_hermite_sum(weights, b * x, b * y);
}

double SpectralKernel::trace() const
{
    long double s = 0;
    for (double p : weights) s += p;
    return static_cast<double>(s);
}

KernelHandle SpectralKernel::handle(std::string label) const
{
    KernelHandle h;
    SpectralKernel copy = *this;
    h.evaluate = [copy](double x, double y) { return copy.evaluate(x, y); };
    h.label = std::move(label);
    // Gaussian decay of the top basis function past its turning point.
    const double edge = (std::sqrt(2.0 * truncation_index + 1.0) + 1.0) / basis.beta();
    h.decay_rate = basis.beta() * basis.beta();
    h.envelope_amplitude = std::exp(h.decay_rate * edge) * (truncation_index + 1.0);
    h.resolution = 1.0 / (basis.beta() * std::sqrt(2.0 * truncation_index + 1.0));
    return h;
}

SpectralKernel mns_kernel_log(double q, double log_lambda, double truncation_tol)
{
    if (!(q > 0.0 && q < 1.0)) throw DomainError("mns_kernel: q outside (0,1)");
    if (!std::isfinite(log_lambda)) throw DomainError("mns_kernel: lambda must be positive and finite");
    if (!(truncation_tol > 0.0)) throw DomainError("mns_kernel: truncation_tol must be positive");
    const double lq = std::log(q);
    const double log_tail_fac = -std::log1p(-q);   // tail of lambda q^{n+1/2} sums to (.)/(1-q)
    std::vector<double> w;
    const double log_tol = std::log(truncation_tol);
    for (int n = 0;; ++n) {
        const double z = log_lambda + (n + 0.5) * lq;   // log(lambda q^{n+1/2})
        if (z < log_tol && z + log_tail_fac < log_tol) break;
        if (n > 5'000'000) throw DomainError("mns_kernel: truncation index too large");
        w.push_back(z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)));
    }
    const int t = static_cast<int>(w.size());
    const double tail = std::exp(log_lambda + (t + 0.5) * lq + log_tail_fac);
    return SpectralKernel{std::move(w), HermiteBasis(beta_q(q), std::max(t, 1)), t, tail};
}

SpectralKernel mns_kernel(double q, double lambda, double truncation_tol)
{
    if (!(lambda > 0.0)) throw DomainError("mns_kernel: lambda must be positive");
    return mns_kernel_log(q, std::log(lambda), truncation_tol);
}

SpectralKernel mns_kernel_mu(double mu, double n_particles, double truncation_tol)
{
    if (!(mu > 0.0) || !(n_particles > 0.0)) throw DomainError("mns_kernel_mu: mu and N must be positive");
    const double mn = mu * n_particles;
    // log(e^{mn} - 1) without overflow
    const double log_lambda = mn > 30.0 ? mn + std::log1p(-std::exp(-mn)) : std::log(std::expm1(mn));
    return mns_kernel_log(std::exp(-mu), log_lambda, truncation_tol);
}

double gue_kernel(int n, double x, double y)
{
    if (n < 1 || n > 1000) throw DomainError("gue_kernel: N outside [1, 1000]");
    std::vector<double> ones(n, 1.0);
    return weighted_hermite_sum(ones, x, y);
}

// ---- bulk kernel L_c -------------------------------------------------------

namespace {

double log_lambda_of_c(double c)
{
    const double inv = 1.0 / c;
    return inv > 30.0 ? inv + std::log1p(-std::exp(-inv)) : std::log(std::expm1(inv));
}

} // namespace

double bulk_kernel_lc(double c, double x, double y)
{
    if (!(c > 0.0)) throw DomainError("bulk_kernel_lc: c must be positive");
    const double ll = log_lambda_of_c(c);
    const double d = x - y;
    const double umax = std::sqrt(c * std::max(ll + 40.0, 1.0));
    // Fermi step near u = sqrt(c log lambda) has complex poles at distance ~ pi c / (2u).
    const double u0 = std::sqrt(c * std::max(ll, 0.0));
    const double pole = std::max(pi * c / (2.0 * std::max(u0, 1e-3)), 1e-3);
    const double osc = pi * std::fabs(d);
    auto width = [&](double u) {
        double h = std::min(0.5, 6.0 / (osc + 1e-300));
        double dist = std::fabs(u - u0);
        return std::min(h, std::max(pole, 0.4 * dist));
    };
    std::vector<double> br = panel_breaks(0.0, umax, width);
    QuadratureRule r = composite_gauss_legendre(br, 20);
    long double acc = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double u = r.nodes[k];
        const double z = ll - u * u / c;      // 1/(lambda^{-1} e^{u^2/c} + 1) = sigma(z)
        const double fermi = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        acc += r.weights[k] * std::cos(osc * u) * fermi;
    }
    return static_cast<double>(acc);
}

double bulk_kernel_lc_approx(double c, double x, double y)
{
    if (!(c > 0.0)) throw DomainError("bulk_kernel_lc_approx: c must be positive");
    const double d = x - y;
    if (std::fabs(d) < 1e-12) return 1.0;
    const double a = pi * pi * c * d / 2.0;
    if (std::fabs(a) > 700.0) return 0.0;
    return pi * c / 2.0 * std::sin(pi * d) / std::sinh(a);
}

// ---- correlation functions -------------------------------------------------

double correlation_rho(const KernelHandle& kernel, std::span<const double> points)
{
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n == 0) return 1.0;
    if (n == 1) return kernel(points[0], points[0]);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            m(i, j) = kernel(points[i], points[j]);
            m(j, i) = kernel.symmetric ? m(i, j) : kernel(points[j], points[i]);
        }
    return m.partialPivLu().determinant();
}

} // namespace edgestat
