#include "edgestat/fredholm.hpp"
#include "edgestat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

namespace edgestat {

namespace {

using MemoKey = std::tuple<std::string, double, int, double, bool, double, double>;

std::shared_mutex memo_mu;
std::map<MemoKey, FredholmResult> memo;

double needed_right_end(const KernelHandle& k, double tail_tol)
{
    return (std::log(k.envelope_amplitude) - std::log(tail_tol)) / k.decay_rate;
}

} // namespace

NystromGrid nystrom_grid(const KernelHandle& kernel, double t, const NystromConfig& cfg, int factor)
{
    if (cfg.node_count < 8) throw ConfigError("NystromConfig: node_count must be at least 8");
    if (!(cfg.interval_length > 0.0)) throw ConfigError("NystromConfig: interval_length must be positive");
    if (!std::isfinite(t)) throw DomainError("fredholm: t must be finite");
    if (t < kernel.domain_left) throw DomainError("fredholm: t left of the kernel's domain");
    double length = std::max(cfg.interval_length, needed_right_end(kernel, cfg.tail_tol) - t);
    int total = static_cast<int>(std::ceil(cfg.node_count * length / cfg.interval_length));
    int panels = 1;
    if (std::isfinite(kernel.resolution)) {
        total = std::max(total, static_cast<int>(std::ceil(cfg.nodes_per_resolution * length / kernel.resolution)));
        // Spiky kernels get composite panels about eight feature widths across.
        panels = std::max(1, static_cast<int>(std::floor(length / (8.0 * kernel.resolution))));
    }
    int per_panel = std::max(8, (total + panels - 1) / panels);
    if (panels == 1) per_panel = total;
    std::vector<double> br(panels + 1);
    for (int i = 0; i <= panels; ++i) br[i] = t + length * i / panels;
    return {composite_gauss_legendre(br, per_panel * factor), length, panels};
}

Eigen::MatrixXd nystrom_matrix(const KernelHandle& kernel, const QuadratureRule& rule)
{
    const auto n = static_cast<Eigen::Index>(rule.size());
    Eigen::MatrixXd k = kernel.matrix(rule.nodes);
    Eigen::VectorXd sw(n);
    for (Eigen::Index i = 0; i < n; ++i) sw(i) = std::sqrt(rule.weights[i]);
    Eigen::MatrixXd a = -(sw.asDiagonal() * k * sw.asDiagonal());
    a.diagonal().array() += 1.0;
    return a;
}

namespace {

double det_on(const KernelHandle& kernel, const QuadratureRule& rule)
{
    Eigen::MatrixXd a = nystrom_matrix(kernel, rule);
    double d = a.partialPivLu().determinant();
    if (!std::isfinite(d)) throw NumericError("fredholm: non-finite determinant");
    return d;
}

} // namespace

FredholmResult fredholm_det_detail(const KernelHandle& kernel, double t, const NystromConfig& cfg)
{
    MemoKey key{kernel.label, t, cfg.node_count, cfg.interval_length, cfg.refine, cfg.refine_tol,
                cfg.nodes_per_resolution};
    const bool memoize = !kernel.label.empty();
    if (memoize) {
        std::shared_lock lock(memo_mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    NystromGrid g = nystrom_grid(kernel, t, cfg);
    FredholmResult res{};
    res.length = g.length;
    res.coarse = det_on(kernel, g.rule);
    res.value = res.coarse;
    res.nodes = static_cast<int>(g.rule.size());
    if (cfg.refine) {
        NystromGrid g2 = nystrom_grid(kernel, t, cfg, 2);
        res.value = det_on(kernel, g2.rule);
        res.nodes = static_cast<int>(g2.rule.size());
        if (std::fabs(res.value - res.coarse) > cfg.refine_tol)
            throw AccuracyError("fredholm: node doubling changed det(I-K) at t=" + std::to_string(t) + " by " +
                                    std::to_string(std::fabs(res.value - res.coarse)),
                                res.coarse, res.value);
    }
    if (memoize) {
        std::unique_lock lock(memo_mu);
        memo.emplace(key, res);
    }
    return res;
}

double fredholm_det(const KernelHandle& kernel, double t, const NystromConfig& cfg)
{
    return fredholm_det_detail(kernel, t, cfg).value;
}

void clear_fredholm_memo()
{
    std::unique_lock lock(memo_mu);
    memo.clear();
}

std::size_t fredholm_memo_size()
{
    std::shared_lock lock(memo_mu);
    return memo.size();
}

double tracy_widom_cdf(double t, const NystromConfig& cfg)
{
    if (t < -12.0) throw DomainError("tracy_widom_cdf: t must be >= -12");
    static const KernelHandle k = airy_kernel_handle();
    return fredholm_det(k, t, cfg);
}

double f_alpha_cdf(double alpha, double t, const NystromConfig& cfg)
{
    if (t < -12.0) throw DomainError("f_alpha_cdf: t must be >= -12");
    return fredholm_det(m_alpha_handle(alpha), t, cfg);
}

double f_alpha_gumbel_cdf(double alpha, double xi, const NystromConfig& cfg)
{
    return fredholm_det(m_alpha_gumbel_scaled_handle(alpha), xi, cfg);
}

double expected_count(const KernelHandle& kernel, double a, double b, int nodes)
{
    if (!(b > a)) return 0.0;
    QuadratureRule r = gauss_legendre(nodes, a, b);
    long double s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * kernel(r.nodes[i], r.nodes[i]);
    return static_cast<double>(s);
}

double expected_count(const KernelHandle& kernel, double t, const NystromConfig& cfg)
{
    NystromGrid g = nystrom_grid(kernel, t, cfg, cfg.refine ? 2 : 1);
    long double s = 0;
    for (std::size_t i = 0; i < g.rule.size(); ++i) s += g.rule.weights[i] * kernel(g.rule.nodes[i], g.rule.nodes[i]);
    return static_cast<double>(s);
}

} // namespace edgestat
