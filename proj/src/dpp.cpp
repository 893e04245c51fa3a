#include "edgestat/dpp.hpp"
#include "edgestat/errors.hpp"
#include "edgestat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace edgestat {

double CountDistribution::total() const
{
    long double s = 0;
    for (double p : probabilities) s += p;
    return static_cast<double>(s);
}

double CountDistribution::mean() const
{
    long double s = 0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) s += k * probabilities[k];
    return static_cast<double>(s);
}

CountDistribution count_distribution(const SpectralKernel& kernel)
{
    return {poisson_binomial(kernel.weights)};
}

CountDistribution empirical_counts(std::span<const PointConfiguration> samples)
{
    CountDistribution d;
    if (samples.empty()) return d;
    for (const auto& c : samples) {
        if (c.size() >= d.probabilities.size()) d.probabilities.resize(c.size() + 1, 0.0);
        d.probabilities[c.size()] += 1.0;
    }
    for (auto& p : d.probabilities) p /= samples.size();
    return d;
}

// ---- projection sampler --------------------------------------------------

namespace {

struct Envelope {
    double lo, width;
    std::vector<double> bound;   // per-cell upper bound of K_0(x, x)
    std::vector<double> cumulative;
};

class Features {
public:
    Features(const HermiteBasis& basis, std::span<const int> indices)
        : basis_(basis), idx_(indices.begin(), indices.end()), buf_(*std::max_element(indices.begin(), indices.end()) + 1)
    {
    }
    // psi_n(x) for the selected n.
    void operator()(double x, Eigen::VectorXd& v)
    {
        basis_.evaluate_all(x, buf_);
        for (std::size_t j = 0; j < idx_.size(); ++j) v[j] = buf_[idx_[j]];
    }

private:
    const HermiteBasis& basis_;
    std::vector<int> idx_;
    std::vector<double> buf_;
};

Envelope build_envelope(Features& feat, int k, double half_support, int cells)
{
    Envelope e{-half_support, 2 * half_support / cells, std::vector<double>(cells), std::vector<double>(cells + 1, 0.0)};
    Eigen::VectorXd v(k);
    for (int c = 0; c < cells; ++c) {
        double mx = 0;
        for (int s = 0; s <= 4; ++s) {
            feat(e.lo + (c + s / 4.0) * e.width, v);
            mx = std::max(mx, v.squaredNorm());
        }
        e.bound[c] = 1.3 * mx + 1e-300;
        e.cumulative[c + 1] = e.cumulative[c] + e.bound[c] * e.width;
    }
    return e;
}

} // namespace

std::vector<double> sample_projection_dpp(const HermiteBasis& basis, std::span<const int> indices, Rng& rng,
                                          SamplerStats* stats)
{
    const int k = static_cast<int>(indices.size());
    if (k == 0) return {};
    const int top = *std::max_element(indices.begin(), indices.end());
    if (top > basis.max_index()) throw IndexError("sample_projection_dpp: index beyond basis");
    Features feat(basis, indices);
    const double half = (std::sqrt(2.0 * top + 1.0) + 4.0) / basis.beta();
    const int cells = std::max(512, 8 * (top + 1));
    const Envelope env = build_envelope(feat, k, half, cells);
    const double total = env.cumulative.back();

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd basis_done(k, k);   // orthonormal directions of the points placed so far
    Eigen::VectorXd v(k), w(k);
    std::vector<double> pts;
    pts.reserve(k);
    SamplerStats local;
    for (int i = 0; i < k; ++i) {
        long long tries = 0;
        for (;;) {
            if (++tries > 100000)
                throw SamplerError("projection sampler stalled: point " + std::to_string(i) + " of " + std::to_string(k) +
                                   ", acceptance below 1e-5 after 1e5 proposals (max index " + std::to_string(top) + ")");
            ++local.proposals;
            const double target = unif(rng) * total;
            auto it = std::upper_bound(env.cumulative.begin(), env.cumulative.end(), target);
            const int c = std::clamp(static_cast<int>(it - env.cumulative.begin()) - 1, 0, cells - 1);
            const double x = env.lo + (c + unif(rng)) * env.width;
            feat(x, v);
            const double k0 = v.squaredNorm();
            double dens = k0;
            if (i > 0) dens -= (basis_done.leftCols(i).transpose() * v).squaredNorm();
            dens = std::max(dens, 0.0);
            if (k0 > env.bound[c]) ++local.envelope_violations;
            if (unif(rng) * env.bound[c] < dens) {
                pts.push_back(x);
                // Gram-Schmidt twice for stability.
                w = v;
                for (int pass = 0; pass < 2 && i > 0; ++pass)
                    w -= basis_done.leftCols(i) * (basis_done.leftCols(i).transpose() * w);
                basis_done.col(i) = w / w.norm();
                ++local.accepted;
                break;
            }
        }
    }
    if (stats) {
        stats->proposals += local.proposals;
        stats->accepted += local.accepted;
        stats->envelope_violations += local.envelope_violations;
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

PointConfiguration sample_grand_canonical(const SpectralKernel& kernel, std::uint64_t seed, SamplerStats* stats)
{
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<int> chosen;
    for (std::size_t n = 0; n < kernel.weights.size(); ++n)
        if (unif(rng) < kernel.weights[n]) chosen.push_back(static_cast<int>(n));
    PointConfiguration c;
    c.seed = seed;
    std::ostringstream meta;
    meta << "grand_canonical beta=" << kernel.basis.beta() << " terms=" << kernel.weights.size();
    c.meta = meta.str();
    c.points = sample_projection_dpp(kernel.basis, chosen, rng, stats);
    return c;
}

PointConfiguration sample_poisson_exp(double t_min, std::uint64_t seed)
{
    if (!std::isfinite(t_min)) throw DomainError("sample_poisson_exp: t_min must be finite");
    Rng rng(seed);
    std::poisson_distribution<long long> count(std::exp(-t_min));
    std::exponential_distribution<double> ex(1.0);
    PointConfiguration c;
    c.seed = seed;
    c.meta = "poisson_exp t_min=" + std::to_string(t_min);
    const long long n = count(rng);
    c.points.resize(n);
    for (auto& p : c.points) p = t_min + ex(rng);
    std::sort(c.points.begin(), c.points.end());
    return c;
}

double sample_shifted_airy_max(double alpha, AiryApprox approx, std::uint64_t seed, double y_shift)
{
    if (!(alpha > 0)) throw DomainError("sample_shifted_airy_max: alpha must be positive");
    if (approx.gue_n < 100) throw DomainError("sample_shifted_airy_max: gue_n must be >= 100");
    if (approx.top_k < 1 || approx.top_k > 20) throw DomainError("sample_shifted_airy_max: top_k must be in [1, 20]");
    Rng rng(seed);
    const auto top = sample_gue_top(approx.gue_n, approx.top_k, rng);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double best = -std::numeric_limits<double>::infinity();
    for (double lam : top) {
        double u = unif(rng);
        while (u == 0.0) u = unif(rng);
        const double y = std::log(u / (1.0 - u)) / alpha + y_shift;   // inverse of e^{ay}/(1+e^{ay})
        best = std::max(best, edge_rescale(lam, approx.gue_n) + y);
    }
    return best;
}

// ---- correlation estimates -----------------------------------------------

namespace {

std::vector<int> bin_counts(const PointConfiguration& c, std::span<const double> edges)
{
    std::vector<int> n(edges.size() - 1, 0);
    for (double p : c.points) {
        auto it = std::upper_bound(edges.begin(), edges.end(), p);
        if (it == edges.begin() || it == edges.end()) continue;
        ++n[(it - edges.begin()) - 1];
    }
    return n;
}

} // namespace

Rho1Estimate empirical_rho1(std::span<const PointConfiguration> samples, std::span<const double> edges)
{
    if (samples.empty()) throw DomainError("empirical_rho1: empty sample set");
    if (edges.size() < 2) throw DomainError("empirical_rho1: need at least one bin");
    const std::size_t bins = edges.size() - 1;
    std::vector<double> s1(bins, 0.0), s2(bins, 0.0);
    for (const auto& c : samples) {
        auto n = bin_counts(c, edges);
        for (std::size_t i = 0; i < bins; ++i) {
            s1[i] += n[i];
            s2[i] += double(n[i]) * n[i];
        }
    }
    Rho1Estimate r;
    r.edges.assign(edges.begin(), edges.end());
    r.samples = samples.size();
    const double m = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < bins; ++i) {
        const double w = edges[i + 1] - edges[i];
        const double mean = s1[i] / m;
        const double var = m > 1 ? std::max(0.0, (s2[i] - m * mean * mean) / (m - 1)) : 0.0;
        r.density.push_back(mean / w);
        r.std_error.push_back(std::sqrt(var / m) / w);
    }
    return r;
}

Rho2Estimate empirical_rho2(std::span<const PointConfiguration> samples, std::span<const double> edges)
{
    if (samples.empty()) throw DomainError("empirical_rho2: empty sample set");
    const int bins = static_cast<int>(edges.size()) - 1;
    Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(bins, bins), s2 = Eigen::MatrixXd::Zero(bins, bins);
    for (const auto& c : samples) {
        auto n = bin_counts(c, edges);
        for (int i = 0; i < bins; ++i)
            for (int j = 0; j < bins; ++j) {
                double v = i == j ? double(n[i]) * (n[i] - 1) : double(n[i]) * n[j];
                s1(i, j) += v;
                s2(i, j) += v * v;
            }
    }
    const double m = static_cast<double>(samples.size());
    Rho2Estimate r{Eigen::MatrixXd(bins, bins), Eigen::MatrixXd(bins, bins)};
    for (int i = 0; i < bins; ++i)
        for (int j = 0; j < bins; ++j) {
            const double area = (edges[i + 1] - edges[i]) * (edges[j + 1] - edges[j]);
            const double mean = s1(i, j) / m;
            const double var = m > 1 ? std::max(0.0, (s2(i, j) - m * mean * mean) / (m - 1)) : 0.0;
            r.density(i, j) = mean / area;
            r.std_error(i, j) = std::sqrt(var / m) / area;
        }
    return r;
}

PointConfiguration thin(const PointConfiguration& config, double keep, std::uint64_t seed)
{
    Rng rng(seed);
    std::bernoulli_distribution coin(keep);
    PointConfiguration out{{}, config.seed, config.meta + " thinned"};
    for (double p : config.points)
        if (coin(rng)) out.points.push_back(p);
    return out;
}

// ---- von Koch ------------------------------------------------------------

VonKochReport von_koch_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw DomainError("von_koch_check: square matrices of equal size required");
    const int n = static_cast<int>(a.rows());
    auto sides = [&](int m) {
        Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
        auto A = a.topLeftCorner(m, m);
        auto B = b.topLeftCorner(m, m);
        double lhs = (id + A).partialPivLu().determinant() * (id + B).partialPivLu().determinant();
        Eigen::MatrixXd c = id + A + B + A * B;
        return std::pair{lhs, c.partialPivLu().determinant()};
    };
    VonKochReport r{};
    r.small_size = n / 2;
    r.full_size = n;
    std::tie(r.lhs_small, r.rhs_small) = sides(r.small_size);
    std::tie(r.lhs_full, r.rhs_full) = sides(n);
    r.max_error = std::max({std::fabs(r.lhs_small - r.rhs_small), std::fabs(r.lhs_full - r.rhs_full),
                            std::fabs(r.lhs_full - r.lhs_small)});
    r.pass = r.max_error < tol;
    return r;
}

} // namespace edgestat
