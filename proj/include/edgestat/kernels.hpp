#pragma once

#include "edgestat/quadrature.hpp"
#include "edgestat/specfun.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace edgestat {

// An evaluable kernel plus what the Fredholm engine needs to truncate it.
struct KernelHandle {
    std::function<double(double, double)> evaluate;
    double domain_left = -std::numeric_limits<double>::infinity();
    double decay_rate = 1.0;          // diagonal <= amplitude * exp(-decay_rate * x) far right
    double envelope_amplitude = 1.0;
    double resolution = std::numeric_limits<double>::infinity(); // narrowest off-diagonal feature
    std::string label;
    bool symmetric = true;
    // Optional batch fill on a node set; used instead of pointwise evaluation when present.
    std::function<Eigen::MatrixXd(std::span<const double>)> matrix_fn;

    double operator()(double x, double y) const { return evaluate(x, y); }
    double envelope(double x) const;
    Eigen::MatrixXd matrix(std::span<const double> nodes) const;
};

// ---- weighted Airy integrals  int w(l) Ai(x+l) Ai(y+l) dl ----------------

struct AiryWeight {
    std::function<double(double)> w;
    double lo;                     // lower end of the lambda range
    double growth = 0.0;           // w(l) <= exp(growth * l) for l > 0
    double max_panel = 1.0;        // cap on panel width (resolves poles of w)
};

QuadratureRule airy_lambda_rule(const AiryWeight& wt, double xmin);
double weighted_airy(const AiryWeight& wt, double x, double y);
Eigen::MatrixXd weighted_airy_gram(const AiryWeight& wt, std::span<const double> xs);

// ---- the kernels ---------------------------------------------------------

double airy_kernel(double x, double y);
double airy_kernel_closed_form(double x, double y);
KernelHandle airy_kernel_handle();

double exp_airy_identity_rhs(double alpha, double x, double y);

double m_alpha(double alpha, double x, double y);
double m_alpha_gumbel_scaled(double alpha, double u, double v);
double gumbel_shift(double alpha); // f(alpha) = log(4 pi alpha^3) / (2 alpha)
KernelHandle m_alpha_handle(double alpha);
KernelHandle m_alpha_gumbel_scaled_handle(double alpha);

// Grand-canonical kernel in diagonal form: sum_n p_n psi_n(x) psi_n(y).
struct SpectralKernel {
    std::vector<double> weights;
    HermiteBasis basis;
    int truncation_index;   // == weights.size()

    double evaluate(double x, double y) const;
    double trace() const;
    double tail_bound;      // bound on the dropped part of the trace
    KernelHandle handle(std::string label) const;
};

SpectralKernel mns_kernel(double q, double lambda, double truncation_tol = 1e-13);
// Same with lambda given through its logarithm, so e^{mu N} - 1 never overflows.
SpectralKernel mns_kernel_log(double q, double log_lambda, double truncation_tol = 1e-13);
// q = e^{-mu}, lambda = e^{mu N} - 1.
SpectralKernel mns_kernel_mu(double mu, double n_particles, double truncation_tol = 1e-13);

double gue_kernel(int n, double x, double y);

double bulk_kernel_lc(double c, double x, double y);
double bulk_kernel_lc_approx(double c, double x, double y);

double deformed_kernel(int n, double s, std::span<const double> y, double u, double v);
KernelHandle deformed_kernel_handle(int n, double s, std::vector<double> y);

// det(K(x_i, x_j)).
double correlation_rho(const KernelHandle& kernel, std::span<const double> points);

} // namespace edgestat
