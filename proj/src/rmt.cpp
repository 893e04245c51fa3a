#include "edgestat/rmt.hpp"
#include "edgestat/errors.hpp"
#include "edgestat/fredholm.hpp"
#include "edgestat/quadrature.hpp"
#include "edgestat/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edgestat {

// ---- GUE -----------------------------------------------------------------

std::vector<double> sample_gue_eigs(int n, Rng& rng)
{
    if (n < 2 || n > 2000) throw DomainError("sample_gue_eigs: n must be in [2, 2000]");
    std::normal_distribution<double> diag(0.0, std::sqrt(0.5)), off(0.0, 0.5);
    Eigen::MatrixXcd m(n, n);
    for (int j = 0; j < n; ++j) {
        m(j, j) = diag(rng);
        for (int i = j + 1; i < n; ++i) {
            double re = off(rng), im = off(rng);
            m(i, j) = {re, im};
            m(j, i) = {re, -im};
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("sample_gue_eigs: eigensolver failed");
    const auto& ev = es.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + n);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> sample_gue_eigs(int n, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_gue_eigs(n, rng);
}

namespace {

// Number of eigenvalues below x (negative pivots of T - x).
int sturm_count(std::span<const double> a, std::span<const double> b2, double x)
{
    int cnt = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = a[i] - x - (i ? b2[i - 1] / d : 0.0);
        if (d == 0.0) d = -1e-300;
        if (d < 0) ++cnt;
    }
    return cnt;
}

} // namespace

std::vector<double> tridiagonal_top_eigenvalues(std::span<const double> diag, std::span<const double> off, int k)
{
    const int n = static_cast<int>(diag.size());
    if (off.size() + 1 != diag.size()) throw DomainError("tridiagonal: size mismatch");
    k = std::min(k, n);
    std::vector<double> b2(off.size());
    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < n; ++i) {
        double r = (i > 0 ? std::fabs(off[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
        if (i + 1 < n) b2[i] = off[i] * off[i];
    }
    std::vector<double> out;
    out.reserve(k);
    double upper = hi;
    for (int j = 0; j < k; ++j) {
        const int idx = n - 1 - j;   // ascending index of the target
        double l = lo, h = upper;
        while (h - l > 4 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(l), std::fabs(h)) + 1e-300) {
            double mid = 0.5 * (l + h);
            if (mid == l || mid == h) break;
            if (sturm_count(diag, b2, mid) > idx) h = mid;
            else l = mid;
        }
        out.push_back(0.5 * (l + h));
        upper = h;
    }
    return out;
}

std::vector<double> sample_gue_top(int n, int k, Rng& rng)
{
    if (n < 2) throw DomainError("sample_gue_top: n must be >= 2");
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    std::vector<double> a(n), b(n - 1);
    for (auto& v : a) v = nd(rng);
    for (int i = 0; i < n - 1; ++i) {
        std::gamma_distribution<double> chi2(n - 1 - i, 2.0);   // chi^2 with 2(n-1-i) dof
        b[i] = 0.5 * std::sqrt(chi2(rng));
    }
    return tridiagonal_top_eigenvalues(a, b, k);
}

std::vector<double> sample_gue_top(int n, int k, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_gue_top(n, k, rng);
}

double edge_rescale(double lambda, int n)
{
    return std::sqrt(2.0) * std::pow(n, 1.0 / 6.0) * (lambda - std::sqrt(2.0 * n));
}

double edge_rescale(std::span<const double> eigs, int n)
{
    if (eigs.empty()) throw DomainError("edge_rescale: no eigenvalues");
    return edge_rescale(*std::max_element(eigs.begin(), eigs.end()), n);
}

// ---- diagonal laws -------------------------------------------------------

DiagLaw DiagLaw::gaussian(double variance)
{
    if (!(variance > 0)) throw DomainError("gaussian law: variance must be positive");
    return {Kind::gaussian, std::sqrt(variance)};
}
DiagLaw DiagLaw::uniform(double half_width)
{
    if (!(half_width > 0)) throw DomainError("uniform law: half width must be positive");
    return {Kind::uniform, half_width};
}
DiagLaw DiagLaw::rademacher(double atom)
{
    if (!(atom > 0)) throw DomainError("rademacher law: atom must be positive");
    return {Kind::rademacher, atom};
}
DiagLaw DiagLaw::point_mass() { return {Kind::point_mass, 0.0}; }

double DiagLaw::variance() const
{
    switch (kind) {
    case Kind::gaussian: return scale * scale;
    case Kind::uniform: return scale * scale / 3.0;
    case Kind::rademacher: return scale * scale;
    case Kind::point_mass: return 0.0;
    }
    return 0.0;
}

double DiagLaw::sample(Rng& rng) const
{
    switch (kind) {
    case Kind::gaussian: return std::normal_distribution<double>(0.0, scale)(rng);
    case Kind::uniform: return std::uniform_real_distribution<double>(-scale, scale)(rng);
    case Kind::rademacher: return std::bernoulli_distribution(0.5)(rng) ? scale : -scale;
    case Kind::point_mass: return 0.0;
    }
    return 0.0;
}

std::string DiagLaw::name() const
{
    switch (kind) {
    case Kind::gaussian: return "gaussian";
    case Kind::uniform: return "uniform";
    case Kind::rademacher: return "rademacher";
    case Kind::point_mass: return "point_mass";
    }
    return "?";
}

double DiagLaw::support_max(double cut) const
{
    switch (kind) {
    case Kind::gaussian: return cut;
    case Kind::uniform: return std::min(scale, cut);
    case Kind::rademacher:
        if (scale > cut) throw ConfigError("rademacher atoms lie outside the cut-off");
        return scale;
    case Kind::point_mass: return 0.0;
    }
    return 0.0;
}

double DiagLaw::mass(double cut) const
{
    switch (kind) {
    case Kind::gaussian: return std::erf(cut / (scale * std::numbers::sqrt2));
    case Kind::uniform: return std::min(1.0, cut / scale);
    case Kind::rademacher: return scale <= cut ? 1.0 : 0.0;
    case Kind::point_mass: return 1.0;
    }
    return 0.0;
}

double DeformedModel::s() const { return alpha * alpha / std::pow(n, 2.0 / 3.0); }
double DeformedModel::cutoff() const { return std::pow(n, epsilon); }

void DeformedModel::validate() const
{
    if (n < 2) throw DomainError("deformed model: n must be >= 2");
    if (!(alpha > 0)) throw DomainError("deformed model: alpha must be positive");
    if (!(epsilon > 1.0 / 7.0 && epsilon < 1.0 / 6.0)) throw DomainError("deformed model: epsilon must lie in (1/7, 1/6)");
    if (law.kind != DiagLaw::Kind::point_mass && !(law.scale > 0)) throw DomainError("deformed model: law scale must be positive");
    law.support_max(cutoff());
}

// ---- mu_N integrals ------------------------------------------------------

double mu_n_integral(const DeformedModel& m, const std::function<double(double)>& f, double singular)
{
    const double cut = m.cutoff();
    switch (m.law.kind) {
    case DiagLaw::Kind::point_mass: return f(0.0);
    case DiagLaw::Kind::rademacher: return 0.5 * (f(m.law.scale) + f(-m.law.scale));
    default: break;
    }
    const double hi = m.law.support_max(cut), lo = -hi;
    const double sd = m.law.kind == DiagLaw::Kind::gaussian ? m.law.scale : m.law.scale / std::sqrt(3.0);
    const double cap = std::min(0.5, 0.5 * sd);
    // Break points graded geometrically toward the pole, capped in width.
    std::vector<double> br{hi};
    const double gap = std::isfinite(singular) ? std::max(singular - hi, 1e-300) : std::numeric_limits<double>::infinity();
    double x = hi;
    while (x > lo) {
        double h = std::min(cap, std::isfinite(gap) ? 0.5 * (singular - x) : cap);
        h = std::max(h, 1e-3 * gap);
        x = (x - h <= lo || x - h - lo < 0.25 * h) ? lo : x - h;
        br.push_back(x);
    }
    std::reverse(br.begin(), br.end());
    const QuadratureRule r = composite_gauss_legendre(br, 20);
    long double acc = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        double t = r.nodes[i];
        double dens = m.law.kind == DiagLaw::Kind::gaussian ? std::exp(-0.5 * t * t / (sd * sd)) / (sd * std::sqrt(2 * std::numbers::pi))
                                                            : 0.5 / m.law.scale;
        acc += r.weights[i] * dens * f(t);
    }
    return static_cast<double>(acc / m.law.mass(cut));
}

double g_n_prime(const DeformedModel& m, double w)
{
    return -mu_n_integral(m, [w](double t) { return 1.0 / ((w - t) * (w - t)); }, w);
}

namespace {

double g_n_second(const DeformedModel& m, double w)
{
    return 2.0 * mu_n_integral(m, [w](double t) { double d = w - t; return 1.0 / (d * d * d); }, w);
}

} // namespace

double solve_wc(const DeformedModel& m)
{
    m.validate();
    const double target = -1.0 / (m.alpha * m.alpha * std::cbrt(static_cast<double>(m.n)));
    auto f = [&](double w) { return g_n_prime(m, w) - target; };
    // G_N' increases from -inf at the support edge to 0; the root is unique.
    const double edge = m.law.support_max(m.cutoff());
    double lo = edge, hi = std::max(2.0 * edge, m.alpha * std::pow(m.n, 1.0 / 6.0)) + 1.0;
    while (f(hi) < 0) {
        lo = hi;
        hi *= 2;
        if (hi > 1e12) throw ConfigError("solve_wc: no sign change in bracket");
    }
    double w = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double fw = f(w);
        if (fw == 0) break;
        (fw < 0 ? lo : hi) = w;
        double step = fw / g_n_second(m, w);
        double next = w - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - w) <= 1e-15 * w) {
            w = next;
            break;
        }
        w = next;
    }
    if (std::fabs(f(w)) > 1e-10) throw NumericError("solve_wc: residual above 1e-10");
    return w;
}

// ---- centering -----------------------------------------------------------

CenteringContext prepare_centering(const DeformedModel& m)
{
    CenteringContext c{m, 0, 0, 0, 0, 0, 0};
    c.w_c = solve_wc(m);
    const double w = c.w_c;
    c.g_prime_wc = g_n_prime(m, w);
    c.inv_mean = mu_n_integral(m, [w](double t) { return 1.0 / (w - t); }, w);
    c.ratio_mean = mu_n_integral(m, [w](double t) { return t / (w - t); }, w);
    const double a2n13 = m.alpha * m.alpha * std::cbrt(static_cast<double>(m.n));
    c.r_of_n = w + a2n13 * c.inv_mean;
    c.wc_residual = std::fabs(c.g_prime_wc + 1.0 / a2n13);
    return c;
}

CenteringData centering(const CenteringContext& ctx, std::span<const double> y)
{
    const auto& m = ctx.model;
    const double w = ctx.w_c;
    const double nn = static_cast<double>(m.n);
    long double inv = 0, inv2 = 0, ratio = 0;
    for (double yi : y) {
        if (std::fabs(yi) >= w) throw CutoffViolation("centering: |y_i| >= w_c");
        long double d = w - yi;
        inv += 1 / d;
        inv2 += 1 / (d * d);
        ratio += yi / d;
    }
    CenteringData c{};
    c.w_c = w;
    c.r_n_value = static_cast<double>(-inv2 - nn * ctx.g_prime_wc);
    c.v_c = static_cast<double>(w + m.s() * inv);
    c.r_of_n = ctx.r_of_n;
    c.s_n_value = static_cast<double>(m.alpha / (w * std::pow(nn, 1.0 / 6.0)) * (ratio - nn * ctx.ratio_mean));
    c.identity_residual = std::fabs(c.v_c - c.r_of_n - m.alpha / std::sqrt(nn) * c.s_n_value);
    return c;
}

CenteringData centering(const DeformedModel& m, std::span<const double> y)
{
    return centering(prepare_centering(m), y);
}

double r_of_n(const DeformedModel& m) { return prepare_centering(m).r_of_n; }

double s_n_variance(const CenteringContext& ctx)
{
    const auto& m = ctx.model;
    const double w = ctx.w_c;
    const double second = mu_n_integral(m, [w](double t) { double r = t / (w - t); return r * r; }, w);
    const double nn = static_cast<double>(m.n);
    return m.alpha * m.alpha * std::pow(nn, 2.0 / 3.0) / (w * w) * (second - ctx.ratio_mean * ctx.ratio_mean);
}

// ---- deformed sampling ---------------------------------------------------

double deformed_lambda_max(std::span<const double> y, double s, Rng& rng)
{
    const int n = static_cast<int>(y.size());
    if (n < 1 || n > 1000) throw DomainError("deformed_lambda_max: n must be in [1, 1000]");
    if (s == 0.0) return *std::max_element(y.begin(), y.end());
    if (!(s > 0)) throw DomainError("deformed_lambda_max: S must be >= 0");
    const double g = std::sqrt(2 * s);
    std::normal_distribution<double> diag(0.0, std::sqrt(0.5) * g), off(0.0, 0.5 * g);
    Eigen::MatrixXcd m(n, n);
    for (int j = 0; j < n; ++j) {
        m(j, j) = y[j] + diag(rng);
        for (int i = j + 1; i < n; ++i) {
            double re = off(rng), im = off(rng);
            m(i, j) = {re, im};
            m(j, i) = {re, -im};
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("deformed_lambda_max: eigensolver failed");
    return es.eigenvalues().maxCoeff();
}

DeformedDraw sample_deformed_max(const DeformedModel& m, Rng& rng)
{
    m.validate();
    if (m.n > 1000) throw DomainError("sample_deformed_max: n must be <= 1000");
    const double cut = m.cutoff();
    DeformedDraw d{0.0, std::vector<double>(m.n), 0};
    for (auto& yi : d.y) {
        for (;;) {
            yi = m.law.sample(rng);
            if (std::fabs(yi) <= cut) break;
            ++d.rejected_entries;
        }
    }
    d.lambda_max = deformed_lambda_max(d.y, m.s(), rng);
    return d;
}

DeformedDraw sample_deformed_max(const DeformedModel& m, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_deformed_max(m, rng);
}

// ---- limiting laws -------------------------------------------------------

const TabulatedCdf& tracy_widom_table()
{
    static const TabulatedCdf table([](double t) { return tracy_widom_cdf(t); }, -10.0, 8.0, 0.1);
    return table;
}

double normal_cdf(double x, double sd, double mean)
{
    return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

double tw_gauss_convolution_cdf(double sigma_over_alpha, double t, double mean)
{
    const auto& tw = tracy_widom_table();
    const double s = sigma_over_alpha;
    if (!(s >= 0)) throw DomainError("tw_gauss_convolution_cdf: sigma must be >= 0");
    t -= mean;
    if (s < 1e-12) return std::clamp(tw(t), 0.0, 1.0);
    // P[X + Y <= t] = int F(t - u) phi_s(u) du; F = 1 for t - u > hi, ~0 below lo.
    const double a = std::max(t - tw.hi(), -12 * s), b = std::min(t - tw.lo(), 12 * s);
    double acc = normal_cdf(a, s);
    if (b > a) {
        const double width = std::min(0.5, 0.5 * s);
        auto br = panel_breaks(a, b, [&](double) { return width; });
        const QuadratureRule r = composite_gauss_legendre(br, 16);
        long double sum = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            double u = r.nodes[i];
            sum += r.weights[i] * tw(t - u) * std::exp(-0.5 * u * u / (s * s));
        }
        acc += static_cast<double>(sum) / (s * std::sqrt(2 * std::numbers::pi));
    }
    return std::clamp(acc, 0.0, 1.0);
}

// ---- experiments ---------------------------------------------------------

DeformedEdgeReport deformed_edge_experiment(const DeformedModel& m, int replicas, std::uint64_t seed, unsigned workers)
{
    m.validate();
    if (replicas < 1) throw DomainError("deformed_edge_experiment: replicas must be >= 1");
    const CenteringContext ctx = prepare_centering(m);
    const double scale = m.alpha / std::sqrt(static_cast<double>(m.n));

    struct Row {
        double stat, lambda, s, r, resid;
        int violations;
        bool left_an;
    };
    std::vector<Row> rows(replicas);
    parallel_for(static_cast<std::size_t>(replicas), workers, [&](std::size_t i) {
        Rng rng(seed + i);
        Row row{0, 0, 0, 0, 0, 0, false};
        for (;;) {
            DeformedDraw d = sample_deformed_max(m, rng);
            row.left_an = row.left_an || d.rejected_entries > 0;
            try {
                CenteringData c = centering(ctx, d.y);
                row.stat = (d.lambda_max - ctx.r_of_n) / scale;
                row.lambda = d.lambda_max;
                row.s = c.s_n_value;
                row.r = c.r_n_value;
                row.resid = c.identity_residual;
                break;
            } catch (const CutoffViolation&) {
                ++row.violations;
            }
        }
        rows[i] = row;
    });

    DeformedEdgeReport rep;
    rep.model = m;
    rep.replicas = replicas;
    rep.seed = seed;
    rep.w_c = ctx.w_c;
    rep.r_of_n = ctx.r_of_n;
    rep.wc_residual = ctx.wc_residual;
    rep.var_s_exact = s_n_variance(ctx);
    rep.an_complement_prob = 1.0 - std::pow(m.law.mass(m.cutoff()), m.n);
    std::vector<double> s(replicas), r(replicas);
    int left = 0;
    for (int i = 0; i < replicas; ++i) {
        rep.statistic.push_back(rows[i].stat);
        rep.lambda_max.push_back(rows[i].lambda);
        s[i] = rows[i].s;
        r[i] = rows[i].r;
        rep.max_identity_residual = std::max(rep.max_identity_residual, rows[i].resid);
        rep.cutoff_violations += rows[i].violations;
        left += rows[i].left_an;
    }
    rep.an_complement_freq = static_cast<double>(left) / replicas;
    EmpiricalCDF es(s), er(r);
    rep.s_values = s;
    rep.var_s = es.variance();
    rep.mean_s = es.mean();
    rep.mean_r = er.mean();
    rep.se_r = std::sqrt(er.variance() / replicas);

    const double sa = std::sqrt(m.law.variance()) / m.alpha;
    EmpiricalCDF stat(rep.statistic);
    const auto& tw = tracy_widom_table();
    rep.ks_convolution = stat.ks_distance([&](double t) { return tw_gauss_convolution_cdf(sa, t); });
    rep.ks_tw = stat.ks_distance([&](double t) { return tw(t); });
    rep.ks_gauss = sa > 0 ? stat.ks_distance([&](double t) { return normal_cdf(t, sa); }) : 1.0;
    return rep;
}

GumbelMaxReport gumbel_max_experiment(long long n, int replicas, std::uint64_t seed, unsigned workers)
{
    if (n < 10) throw DomainError("gumbel_max_experiment: N must be >= 10");
    if (replicas < 1) throw DomainError("gumbel_max_experiment: replicas must be >= 1");
    const GumbelScaling g = gumbel_scaling(n);
    GumbelMaxReport rep;
    rep.n = n;
    rep.replicas = replicas;
    rep.seed = seed;
    rep.a = g.a;
    rep.b = g.b;
    rep.statistic.resize(replicas);
    parallel_for(static_cast<std::size_t>(replicas), workers, [&](std::size_t i) {
        Rng rng(seed + i);
        std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
        double mx = -std::numeric_limits<double>::infinity();
        for (long long k = 0; k < n; ++k) mx = std::max(mx, nd(rng));
        rep.statistic[i] = (mx - g.a) / g.b;
    });
    EmpiricalCDF e(rep.statistic);
    rep.ks = e.ks_distance(gumbel_cdf);
    rep.mean = e.mean();
    return rep;
}

std::vector<double> gue_edge_sample(int n, int replicas, std::uint64_t seed, bool dense, unsigned workers)
{
    if (replicas < 1) throw DomainError("gue_edge_sample: replicas must be >= 1");
    std::vector<double> out(replicas);
    parallel_for(static_cast<std::size_t>(replicas), workers, [&](std::size_t i) {
        Rng rng(seed + i);
        double top = dense ? sample_gue_eigs(n, rng).back() : sample_gue_top(n, 1, rng).front();
        out[i] = edge_rescale(top, n);
    });
    return out;
}

} // namespace edgestat
