#pragma once

#include "edgestat/kernels.hpp"

namespace edgestat {

struct NystromConfig {
    int node_count = 80;
    double interval_length = 30.0;   // extended automatically if the envelope demands it
    enum class Rule { gauss_legendre } rule = Rule::gauss_legendre;
    bool refine = true;
    double refine_tol = 1e-8;
    double tail_tol = 1e-13;
    double nodes_per_resolution = 2.0;   // node density floor relative to kernel.resolution
};

struct NystromGrid {
    QuadratureRule rule;
    double length;
    int panels;
};

// Node layout actually used for (kernel, t, cfg); the refine pass doubles points per panel.
NystromGrid nystrom_grid(const KernelHandle& kernel, double t, const NystromConfig& cfg, int factor = 1);

// I - sqrt(w_i) K(x_i, x_j) sqrt(w_j).
Eigen::MatrixXd nystrom_matrix(const KernelHandle& kernel, const QuadratureRule& rule);

struct FredholmResult {
    double value;          // finest estimate
    double coarse;         // estimate before doubling (== value without refine)
    int nodes;
    double length;
};

FredholmResult fredholm_det_detail(const KernelHandle& kernel, double t, const NystromConfig& cfg = {});
double fredholm_det(const KernelHandle& kernel, double t, const NystromConfig& cfg = {});

double tracy_widom_cdf(double t, const NystromConfig& cfg = {});
double f_alpha_cdf(double alpha, double t, const NystromConfig& cfg = {});
// F_alpha(xi / alpha - f(alpha)) computed in the rescaled variables, alpha in (0, 1].
double f_alpha_gumbel_cdf(double alpha, double xi, const NystromConfig& cfg = {});

double expected_count(const KernelHandle& kernel, double t, const NystromConfig& cfg = {});
double expected_count(const KernelHandle& kernel, double a, double b, int nodes);

void clear_fredholm_memo();
std::size_t fredholm_memo_size();

} // namespace edgestat
