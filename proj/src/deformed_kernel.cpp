#include "edgestat/errors.hpp"
#include "edgestat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace edgestat {

namespace {

using cplx = std::complex<double>;
using std::numbers::pi;

struct Circle {
    double center;
    double radius;
};

// Vertical line Re w = c near v (where e^{(w-v)^2/2S} does not oscillate), nudged to
// keep as far from every y_j as the window v +- 2 sqrt(S) allows.
double place_line(double v, double s, std::span<const double> y)
{
    const double half = 2.0 * std::sqrt(s);
    double best_c = v, best_gap = -1.0;
    for (int i = 0; i <= 80; ++i) {
        double c = v - half + 2.0 * half * i / 80.0;
        double gap = INFINITY;
        for (double yj : y) gap = std::min(gap, std::fabs(c - yj));
        double score = gap - 1e-3 * std::fabs(c - v);
        if (score > best_gap) {
            best_gap = score;
            best_c = c;
        }
    }
    return best_c;
}

std::vector<Circle> place_circles(double c, std::span<const double> y)
{
    std::vector<Circle> out;
    auto enclose = [&](bool left) {
        double lo = INFINITY, hi = -INFINITY, gap = INFINITY;
        for (double yj : y) {
            if ((yj < c) != left) continue;
            lo = std::min(lo, yj);
            hi = std::max(hi, yj);
            gap = std::min(gap, std::fabs(c - yj));
        }
        if (!std::isfinite(lo)) return;
        if (!(gap > 1e-9)) throw NumericError("deformed_kernel: contour line passes through a pole");
        Circle cir{0.5 * (lo + hi), 0.5 * (hi - lo) + 0.5 * gap};
        if (std::fabs(cir.center - c) - cir.radius < 0.25 * gap)
            throw NumericError("deformed_kernel: contours intersect");
        out.push_back(cir);
    };
    enclose(true);
    enclose(false);
    return out;
}

struct ZNodes {
    std::vector<cplx> z, f; // f = dz weight * e^{-(z-u)^2/2S} / prod(z - y_j)
};

ZNodes z_nodes(const std::vector<Circle>& circles, int m, double u, double s, std::span<const double> y)
{
    ZNodes out;
    for (const Circle& cir : circles) {
        for (int k = 0; k < m; ++k) {
            const double th = 2.0 * pi * (k + 0.5) / m;
            const cplx e(std::cos(th), std::sin(th));
            const cplx z = cir.center + cir.radius * e;
            const cplx dz = cplx(0.0, 2.0 * pi / m) * cir.radius * e;
            cplx prod = 1.0;
            for (double yj : y) prod *= (z - yj);
            out.z.push_back(z);
            out.f.push_back(dz * std::exp(-(z - u) * (z - u) / (2.0 * s)) / prod);
        }
    }
    return out;
}

double log_line_magnitude(double c, double t, double v, double s, std::span<const double> y)
{
    const cplx w(c, t);
    double lm = std::real((w - v) * (w - v)) / (2.0 * s);
    for (double yj : y) lm += std::log(std::abs(w - yj));
    return lm;
}

cplx evaluate(double u, double v, double s, std::span<const double> y, int mz, int line_panels)
{
    const double c = place_line(v, s, y);
    auto circles = place_circles(c, y);
    ZNodes zn = z_nodes(circles, mz, u, s, y);

    // Truncate the line once the integrand is e^{-36} below its peak.
    double peak = -INFINITY;
    const double dt = 0.05 * std::sqrt(s);
    double tmax = 0.0;
    for (double t = 0.0;; t += dt) {
        double lm = log_line_magnitude(c, t, v, s, y);
        peak = std::max(peak, lm);
        if (lm < peak - 36.0 && t > std::sqrt(s)) {
            tmax = t;
            break;
        }
    }
    std::vector<double> br(line_panels * 2 + 1);
    for (int i = 0; i <= 2 * line_panels; ++i) br[i] = -tmax + tmax * i / line_panels;
    QuadratureRule r = composite_gauss_legendre(br, 20);

    cplx acc = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const cplx w(c, r.nodes[k]);
        cplx prod = 1.0;
        for (double yj : y) prod *= (w - yj);
        const cplx g = std::exp((w - v) * (w - v) / (2.0 * s)) * prod;
        cplx inner = 0.0;
        for (std::size_t j = 0; j < zn.z.size(); ++j) inner += zn.f[j] / (w - zn.z[j]);
        acc += r.weights[k] * cplx(0.0, 1.0) * g * inner;   // dw = i dt
    }
    const cplx two_pi_i(0.0, 2.0 * pi);
    return acc / (two_pi_i * two_pi_i * s);
}

} // namespace

double deformed_kernel(int n, double s, std::span<const double> y, double u, double v)
{
    if (n != static_cast<int>(y.size())) throw DomainError("deformed_kernel: y must have N entries");
    if (n < 1 || n > 60) throw std::length_error("deformed_kernel: N outside [1, 60]");
    if (!(s > 0.0)) throw DomainError("deformed_kernel: S must be positive");
    for (double yj : y)
        if (!std::isfinite(yj)) throw DomainError("deformed_kernel: non-finite y");
    int mz = 64, panels = 8;
    cplx prev = evaluate(u, v, s, y, mz, panels);
    double last_change = INFINITY;
    for (int it = 0; it < 7; ++it) {
        mz *= 2;
        panels *= 2;
        const cplx cur = evaluate(u, v, s, y, mz, panels);
        const double scale = std::max(1.0, std::abs(cur));
        const double change = std::abs(cur - prev);
        if (change <= 1e-12 * scale) return cur.real();
        // roundoff floor: refinement stopped helping
        if (change >= 0.5 * last_change && change <= 1e-9 * scale) return cur.real();
        last_change = change;
        prev = cur;
    }
    throw NumericError("deformed_kernel: contour quadrature did not converge");
}

KernelHandle deformed_kernel_handle(int n, double s, std::vector<double> y)
{
    KernelHandle h;
    h.evaluate = [n, s, y](double u, double v) { return deformed_kernel(n, s, y, u, v); };
    h.label = "deformed";
    h.symmetric = false;
    h.decay_rate = 1.0 / s;
    double top = *std::max_element(y.begin(), y.end()) + 2.0 * std::sqrt(2.0 * s * n) + 1.0;
    h.envelope_amplitude = std::exp(top / s);
    h.resolution = std::sqrt(s / n);
    return h;
}

} // namespace edgestat
