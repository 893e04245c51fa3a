#include "edgestat/limits.hpp"
#include "edgestat/errors.hpp"
#include "edgestat/fredholm.hpp"
#include "edgestat/kernels.hpp"
#include "edgestat/dpp.hpp"
#include "edgestat/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace edgestat {

const ConvergenceTable::Column& ConvergenceTable::column(const std::string& name) const
{
    for (const auto& c : columns)
        if (c.name == name) return c;
    throw IndexError("ConvergenceTable: no column " + name);
}

bool ConvergenceTable::trend_ok() const
{
    for (const auto& c : columns) {
        if (!c.asserted) continue;
        for (double v : c.values)
            if (!std::isfinite(v)) return false;
        if (c.values.size() < 2) return false;
        if (!(c.values.back() < c.values.front() || c.values.back() <= c.zero_floor)) return false;
    }
    return true;
}

bool ConvergenceTable::passed() const
{
    if (!trend_ok()) return false;
    for (const auto& [name, ok] : checks)
        if (!ok) return false;
    return true;
}

std::string ConvergenceTable::csv() const
{
    std::ostringstream os;
    os << "# edgestat-convergence-v1 target=" << target << " grid=\"" << grid << "\"\n";
    os << parameter_name;
    for (const auto& c : columns) os << ',' << c.name;
    os << '\n' << std::setprecision(12);
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        os << parameters[i];
        for (const auto& c : columns) os << ',' << c.values[i];
        os << '\n';
    }
    for (const auto& [name, ok] : checks) os << "# check " << name << '=' << (ok ? "pass" : "fail") << '\n';
    os << "# trend=" << (trend_ok() ? "pass" : "fail") << '\n';
    return os.str();
}

namespace {

std::vector<double> grid(double a, double b, double h)
{
    std::vector<double> g;
    const int n = static_cast<int>(std::lround((b - a) / h));
    for (int i = 0; i <= n; ++i) g.push_back(a + i * h);
    return g;
}

std::string grid_text(double a, double b, double h, bool square)
{
    std::ostringstream os;
    os << '[' << a << ',' << b << "]" << (square ? "^2" : "") << " step " << h;
    return os.str();
}

ConvergenceTable::Column& add_column(ConvergenceTable& t, std::string name, bool asserted)
{
    if (t.columns.capacity() < 8) t.columns.reserve(8);
    t.columns.push_back({std::move(name), std::vector<double>(t.parameters.size(), 0.0), asserted, 0.0});
    return t.columns.back();
}

bool strictly(std::span<const double> v, bool increasing)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
    return true;
}

double sup_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

// ---- M_alpha ------------------------------------------------------------

ConvergenceTable check_kernel_alpha_limit(AlphaLimit dir, std::span<const double> alphas, unsigned workers)
{
    ConvergenceTable t;
    t.parameter_name = "alpha";
    t.parameters.assign(alphas.begin(), alphas.end());
    if (t.parameters.size() < 2) throw DomainError("convergence ladder needs at least two entries");
    if (dir == AlphaLimit::to_airy) {
        if (!strictly(alphas, true) || alphas.front() < 2) throw DomainError("airy limit: alphas must increase from >= 2");
        t.target = "m_alpha->airy";
        t.grid = grid_text(-3, 1, 0.5, true);
        const auto g = grid(-3, 1, 0.5);
        const Eigen::MatrixXd airy = airy_kernel_handle().matrix(g);
        auto& err = add_column(t, "sup_error", true);
        parallel_for(alphas.size(), workers,
                     [&](std::size_t i) { err.values[i] = sup_diff(m_alpha_handle(alphas[i]).matrix(g), airy); });
    } else {
        if (!strictly(alphas, false) || alphas.front() > 0.5 || alphas.back() <= 0)
            throw DomainError("poisson limit: alphas must decrease inside (0, 0.5]");
        t.target = "m_alpha_scaled->poisson";
        t.grid = grid_text(-1, 3, 0.5, true);
        const auto g = grid(-1, 3, 0.5);
        auto& diag = add_column(t, "diagonal_error", true);
        auto& off = add_column(t, "offdiagonal_sup", true);
        parallel_for(alphas.size(), workers, [&](std::size_t i) {
            const Eigen::MatrixXd m = m_alpha_gumbel_scaled_handle(alphas[i]).matrix(g);
            double d = 0, o = 0;
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    if (r == c) d = std::max(d, std::fabs(m(r, c) - std::exp(-g[r])));
                    else o = std::max(o, std::fabs(m(r, c)));
            diag.values[i] = d;
            off.values[i] = o;
        });
    }
    return t;
}

// ---- F_alpha -------------------------------------------------------------

ConvergenceTable check_distribution_alpha_limit(AlphaLimit dir, std::span<const double> alphas, unsigned workers)
{
    ConvergenceTable t;
    t.parameter_name = "alpha";
    t.parameters.assign(alphas.begin(), alphas.end());
    if (t.parameters.size() < 2) throw DomainError("convergence ladder needs at least two entries");
    const bool airy = dir == AlphaLimit::to_airy;
    if (airy && (!strictly(alphas, true) || alphas.front() < 2)) throw DomainError("TW limit: alphas must increase from >= 2");
    if (!airy && (!strictly(alphas, false) || alphas.front() > 0.5 || alphas.back() <= 0))
        throw DomainError("Gumbel limit: alphas must decrease inside (0, 0.5]");
    const double a = airy ? -5 : -2, b = airy ? 3 : 4;
    const auto g = grid(a, b, 0.5);
    t.target = airy ? "f_alpha->tracy_widom" : "f_alpha_scaled->gumbel";
    t.grid = grid_text(a, b, 0.5, false);
    std::vector<double> ref(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) ref[j] = airy ? tracy_widom_cdf(g[j]) : gumbel_cdf(g[j]);

    auto& err = add_column(t, "sup_error", true);
    auto& lo = add_column(t, "min_value", false);
    auto& hi = add_column(t, "max_value", false);
    std::vector<char> mono(alphas.size(), 1);
    parallel_for(alphas.size(), workers, [&](std::size_t i) {
        double e = 0, mn = 1, mx = 0, prev = -1;
        for (std::size_t j = 0; j < g.size(); ++j) {
            double f = airy ? f_alpha_cdf(alphas[i], g[j]) : f_alpha_gumbel_cdf(alphas[i], g[j]);
            e = std::max(e, std::fabs(f - ref[j]));
            mn = std::min(mn, f);
            mx = std::max(mx, f);
            if (f < prev - 1e-9) mono[i] = 0;
            prev = f;
        }
        err.values[i] = e;
        lo.values[i] = mn;
        hi.values[i] = mx;
    });
    bool range = true;
    for (std::size_t i = 0; i < alphas.size(); ++i) range = range && lo.values[i] >= -1e-12 && hi.values[i] <= 1 + 1e-12;
    t.checks.emplace_back("values_in_unit_interval", range);
    t.checks.emplace_back("monotone", std::all_of(mono.begin(), mono.end(), [](char c) { return c != 0; }));
    return t;
}

// ---- MNS interpolation between independent particles and GUE -------------

ConvergenceTable check_mns_interpolation(MnsLimit dir, std::span<const double> mus, int n, unsigned workers)
{
    ConvergenceTable t;
    t.parameter_name = "mu";
    t.parameters.assign(mus.begin(), mus.end());
    if (t.parameters.size() < 2) throw DomainError("convergence ladder needs at least two entries");
    if (dir == MnsLimit::to_gue) {
        if (!strictly(mus, true)) throw DomainError("GUE limit: mus must increase");
        t.target = "mns->gue(N=" + std::to_string(n) + ")";
        t.grid = grid_text(-3, 3, 0.5, true);
        const auto g = grid(-3, 3, 0.5);
        auto& err = add_column(t, "sup_error", true);
        parallel_for(mus.size(), workers, [&](std::size_t i) {
            const SpectralKernel k = mns_kernel_mu(mus[i], n);
            double e = 0;
            for (double x : g)
                for (double y : g) e = std::max(e, std::fabs(k.evaluate(x, y) - gue_kernel(n, x, y)));
            err.values[i] = e;
        });
    } else {
        if (!strictly(mus, false)) throw DomainError("independent limit: mus must decrease");
        t.target = "mns->independent(N=" + std::to_string(n) + ")";
        t.grid = "diagonal x in [-2,2] step 0.5; off-diagonal (0,1)";
        const auto g = grid(-2, 2, 0.5);
        auto& off = add_column(t, "offdiagonal_0_1", true);
        off.zero_floor = 1e-14;
        auto& ratio = add_column(t, "diag_ratio_error_at_0", true);
        auto& diag = add_column(t, "diag_density_error", false);
        parallel_for(mus.size(), workers, [&](std::size_t i) {
            const SpectralKernel k = mns_kernel_mu(mus[i], n);
            off.values[i] = std::fabs(k.evaluate(0.0, 1.0));
            ratio.values[i] = std::fabs(k.evaluate(0.0, 0.0) / (n / std::sqrt(std::numbers::pi)) - 1.0);
            double e = 0;
            for (double x : g) e = std::max(e, std::fabs(k.evaluate(x, x) / n - std::exp(-x * x) / std::sqrt(std::numbers::pi)));
            diag.values[i] = e;
        });
    }
    return t;
}

// ---- bulk ----------------------------------------------------------------

ConvergenceTable check_bulk_limit(double c, std::span<const int> ns, unsigned workers)
{
    if (!(c >= 0.05 && c <= 5)) throw DomainError("bulk limit: c must lie in [0.05, 5]");
    for (int n : ns)
        if (n < 1 || n > 400) throw DomainError("bulk limit: N must lie in [1, 400]");
    ConvergenceTable t;
    t.target = "mns_bulk->L_c(c=" + std::to_string(c) + ")";
    t.parameter_name = "N";
    t.parameters.assign(ns.begin(), ns.end());
    if (t.parameters.size() < 2) throw DomainError("convergence ladder needs at least two entries");
    t.grid = grid_text(-2, 2, 0.5, true);
    const auto g = grid(-2, 2, 0.5);
    Eigen::MatrixXd lc(g.size(), g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) lc(i, j) = bulk_kernel_lc(c, g[i], g[j]);
    auto& err = add_column(t, "sup_error", true);
    auto& dmin = add_column(t, "min_diagonal", false);
    parallel_for(ns.size(), workers, [&](std::size_t k) {
        const int n = ns[k];
        const SpectralKernel ker = mns_kernel_mu(1.0 / (c * n), n);
        const double s = std::numbers::pi / (2.0 * n * std::sqrt(c));
        double e = 0, dm = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                double v = s * ker.evaluate(s * g[i], s * g[j]);
                e = std::max(e, std::fabs(v - lc(i, j)));
                if (i == j) dm = std::min(dm, v);
            }
        err.values[k] = e;
        dmin.values[k] = dm;
    });
    bool pos = true;
    for (double v : dmin.values) pos = pos && v > 0;
    t.checks.emplace_back("diagonal_positive", pos);
    return t;
}

double bulk_approximation_error(double c)
{
    const double d0 = bulk_kernel_lc(c, 0.0, 0.0);
    double e = 0;
    for (double d = 0; d <= 2.0 + 1e-12; d += 0.05) e = std::max(e, std::fabs(bulk_kernel_lc(c, d, 0.0) - bulk_kernel_lc_approx(c, d, 0.0)));
    return e / d0;
}

// ---- edge, Poisson regime ------------------------------------------------

ConvergenceTable check_edge_poisson_limit(double c, std::span<const int> ns, unsigned workers)
{
    if (!(c > 0)) throw DomainError("edge Poisson limit: c must be positive");
    ConvergenceTable t;
    t.target = "mns_edge->poisson(c=" + std::to_string(c) + ")";
    t.parameter_name = "N";
    t.parameters.assign(ns.begin(), ns.end());
    if (t.parameters.size() < 2) throw DomainError("convergence ladder needs at least two entries");
    t.grid = "diagonal xi in {0,1,2}; off-diagonal (0,1)";
    auto& diag = add_column(t, "diagonal_error", true);
    auto& off = add_column(t, "offdiagonal_0_1", true);
    off.zero_floor = 1e-14;
    auto& control = add_column(t, "diagonal_error_classical_centering", false);
    parallel_for(ns.size(), workers, [&](std::size_t k) {
        const int n = ns[k];
        const SpectralKernel ker = mns_kernel_mu(1.0 / (c * n), n);
        const GumbelScaling gs = gumbel_scaling(n, GumbelVariant::mns_edge, c);
        const GumbelScaling gc = gumbel_scaling(n, GumbelVariant::classical);
        double d = 0, dc = 0;
        for (double xi : {0.0, 1.0, 2.0}) {
            double x = gs.a + gs.b * xi, xc = gc.a + gc.b * xi;
            d = std::max(d, std::fabs(gs.b * ker.evaluate(x, x) - std::exp(-xi)));
            dc = std::max(dc, std::fabs(gc.b * ker.evaluate(xc, xc) - std::exp(-xi)));
        }
        diag.values[k] = d;
        control.values[k] = dc;
        off.values[k] = std::fabs(gs.b * ker.evaluate(gs.a, gs.a + gs.b));
    });
    bool worse = true;
    for (std::size_t k = 0; k < ns.size(); ++k) worse = worse && control.values[k] > diag.values[k];
    t.checks.emplace_back("classical_centering_is_worse", worse);
    return t;
}

// ---- edge, interpolating regime -----------------------------------------

ConvergenceTable check_edge_interpolating_limit(double alpha, std::span<const int> ns, unsigned workers)
{
    if (!(alpha >= 0.5 && alpha <= 4)) throw DomainError("edge interpolating limit: alpha must lie in [0.5, 4]");
    ConvergenceTable t;
    t.target = "mns_edge->m_alpha(alpha=" + std::to_string(alpha) + ")";
    t.parameter_name = "N";
    t.parameters.assign(ns.begin(), ns.end());
    if (t.parameters.size() < 2) throw DomainError("convergence ladder needs at least two entries");
    t.grid = grid_text(-3, 2, 0.5, true);
    const auto g = grid(-3, 2, 0.5);
    const Eigen::MatrixXd m = m_alpha_handle(alpha).matrix(g);
    auto& err = add_column(t, "sup_error", true);
    auto& rel = add_column(t, "sup_error_over_max_diagonal", false);
    const double dmax = m.diagonal().cwiseAbs().maxCoeff();
    parallel_for(ns.size(), workers, [&](std::size_t k) {
        const double n = ns[k];
        const double n13 = std::cbrt(n);
        const double mu = alpha / n13;
        const SpectralKernel ker = mns_kernel_mu(mu, n);
        const double a = n13 * std::sqrt(alpha), b = std::sqrt(alpha) / (2 * n13);
        double e = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) e = std::max(e, std::fabs(b * ker.evaluate(a + b * g[i], a + b * g[j]) - m(i, j)));
        err.values[k] = e;
        rel.values[k] = e / dmax;
    });
    return t;
}

} // namespace edgestat

// ---- identity suite -------------------------------------------------------

namespace edgestat {

namespace {

IdentityCheck finish(IdentityCheck c)
{
    c.max_error = 0;
    for (const auto& [name, e] : c.parts) c.max_error = std::max(c.max_error, std::isfinite(e) ? e : INFINITY);
    c.pass = c.max_error < c.tolerance;
    return c;
}

std::string label(const char* key, double v)
{
    std::ostringstream os;
    os << key << '=' << v;
    return os.str();
}

} // namespace

IdentityCheck verify_airy_identity(std::span<const double> alphas, double tol)
{
    static const double def[] = {0.5, 1.0, 2.0};
    if (alphas.empty()) alphas = def;
    IdentityCheck c{"airy_identity", 0, tol, false, {}};
    const auto g = grid(-2, 2, 1.0);
    for (double a : alphas) {
        // e^{a l} |Ai|^2 < e^{-42} once l < -42/a.
        AiryWeight w{[a](double l) { return std::exp(a * l); }, -42.0 / a, a, 1.0};
        double e = 0;
        for (double x : g)
            for (double y : g) {
                double lhs = weighted_airy(w, x, y), rhs = exp_airy_identity_rhs(a, x, y);
                e = std::max(e, std::fabs(lhs - rhs) / std::fabs(rhs));
            }
        c.parts.emplace_back(label("alpha", a), e);
    }
    return finish(std::move(c));
}

IdentityCheck verify_mehler(int terms, std::span<const double> qs, double tol)
{
    static const double def[] = {0.1, 0.5, 0.9};
    if (qs.empty()) qs = def;
    IdentityCheck c{"mehler", 0, tol, false, {}};
    const auto g = grid(-2, 2, 0.5);
    std::vector<double> px(terms), py(terms);
    for (double q : qs) {
        HermiteBasis basis(beta_q(q), terms - 1);
        double e = 0, peak = 0;
        for (double x : g) {
            basis.evaluate_all(x, px);
            for (double y : g) {
                basis.evaluate_all(y, py);
                long double s = 0;
                for (int n = 0; n < terms; ++n) s += std::pow(q, n + 0.5) * px[n] * py[n];
                const double ref = mehler_closed_form(q, x, y);
                e = std::max(e, std::fabs(static_cast<double>(s) - ref));
                peak = std::max(peak, std::fabs(ref));
            }
        }
        // relative to the kernel's sup on the grid
        c.parts.emplace_back(label("q", q), e / peak);
    }
    return finish(std::move(c));
}

IdentityCheck verify_von_koch(double tol)
{
    IdentityCheck c{"von_koch", 0, tol, false, {}};
    Rng rng(20240607);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 60;
    Eigen::MatrixXd a(n, n), b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a(i, j) = u(rng) * std::ldexp(1.0, -i - j);
            b(i, j) = u(rng) * std::ldexp(1.0, -i - j);
        }
    VonKochReport r = von_koch_check(a, b, tol);
    c.parts.emplace_back("random_30_vs_60", r.max_error);
    Eigen::MatrixXd da = Eigen::MatrixXd::Zero(n, n), db = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        da(i, i) = 0.5 * std::ldexp(1.0, -i);
        db(i, i) = -0.3 * std::ldexp(1.0, -i);
    }
    c.parts.emplace_back("diagonal", von_koch_check(da, db, tol).max_error);
    c.parts.emplace_back("b_zero", von_koch_check(a, Eigen::MatrixXd::Zero(n, n), tol).max_error);
    return finish(std::move(c));
}

IdentityCheck verify_operator_bounds(std::span<const double> alphas, double tol)
{
    static const double def[] = {0.5, 1.0, 4.0};
    if (alphas.empty()) alphas = def;
    IdentityCheck c{"operator_bounds", 0, tol, false, {}};
    for (double a : alphas)
        for (double t : {-6.0, 0.0}) {
            const QuadratureRule r = gauss_legendre(80, t, t + 30);
            const Eigen::MatrixXd k = m_alpha_handle(a).matrix(r.nodes);
            Eigen::MatrixXd s(80, 80);
            for (int i = 0; i < 80; ++i)
                for (int j = 0; j < 80; ++j) s(i, j) = std::sqrt(r.weights[i] * r.weights[j]) * k(i, j);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
            const auto& ev = es.eigenvalues();
            // distance outside [0, 1]
            double out = std::max({0.0, -ev.minCoeff(), ev.maxCoeff() - 1.0});
            c.parts.emplace_back(label("alpha", a) + "," + label("t", t), out);
        }
    return finish(std::move(c));
}

IdentityCheck verify_orthonormality(double tol)
{
    IdentityCheck c{"orthonormality", 0, tol, false, {}};
    for (double beta : {0.5, 1.0, 3.0}) {
        HermiteBasis basis(beta, 40);
        const double half = (std::sqrt(81.0) + 8.0) / beta;
        const QuadratureRule r = gauss_legendre(400, -half, half);
        Eigen::MatrixXd v(41, r.size());
        std::vector<double> buf(41);
        for (std::size_t k = 0; k < r.size(); ++k) {
            basis.evaluate_all(r.nodes[k], buf);
            for (int n = 0; n <= 40; ++n) v(n, k) = buf[n] * std::sqrt(r.weights[k]);
        }
        Eigen::MatrixXd g = v * v.transpose();
        c.parts.emplace_back(label("beta", beta), (g - Eigen::MatrixXd::Identity(41, 41)).cwiseAbs().maxCoeff());
    }
    return finish(std::move(c));
}

} // namespace edgestat
