#pragma once

#include "edgestat/stats.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace edgestat {

using Rng = std::mt19937_64;

// ---- GUE, density ~ exp(-Tr V^2) -----------------------------------------

// Dense Hermitian draw and full eigendecomposition; ascending.
std::vector<double> sample_gue_eigs(int n, Rng& rng);
std::vector<double> sample_gue_eigs(int n, std::uint64_t seed);

// Largest k eigenvalues (descending) from the tridiagonal beta = 2 model, by Sturm bisection.
std::vector<double> sample_gue_top(int n, int k, Rng& rng);
std::vector<double> sample_gue_top(int n, int k, std::uint64_t seed);

// Largest k eigenvalues of the symmetric tridiagonal matrix (diag, off), descending.
std::vector<double> tridiagonal_top_eigenvalues(std::span<const double> diag, std::span<const double> off, int k);

// sqrt(2) n^{1/6} (lambda - sqrt(2n))
double edge_rescale(double lambda, int n);
double edge_rescale(std::span<const double> eigs, int n);

// ---- the deformed model  diag(y) + sqrt(2S) V,  S = alpha^2 / n^{2/3} -----

struct DiagLaw {
    enum class Kind { gaussian, uniform, rademacher, point_mass };
    Kind kind = Kind::gaussian;
    double scale = 0.7071067811865476;   // sd, half-width, atom position; ignored for point_mass

    static DiagLaw gaussian(double variance);
    static DiagLaw uniform(double half_width);
    static DiagLaw rademacher(double atom);
    static DiagLaw point_mass();

    double variance() const;
    double sample(Rng& rng) const;
    std::string name() const;
    bool discrete() const { return kind == Kind::rademacher || kind == Kind::point_mass; }
    // Right end of the support of the law cut to [-cut, cut].
    double support_max(double cut) const;
    double mass(double cut) const;
};

struct DeformedModel {
    int n = 400;
    double alpha = 1.0;
    DiagLaw law{};
    double epsilon = 0.15;

    double s() const;
    double cutoff() const;   // n^epsilon
    void validate() const;
};

// Integral of f against the cut-off measure mu_N.  `singular` marks a pole just right of
// the support, toward which the panels are graded.
double mu_n_integral(const DeformedModel& m, const std::function<double(double)>& f,
                     double singular = std::numeric_limits<double>::infinity());

double g_n_prime(const DeformedModel& m, double w);
double solve_wc(const DeformedModel& m);

struct CenteringData {
    double w_c;
    double v_c;
    double r_of_n;       // R(N)
    double s_n_value;
    double r_n_value;    // the centered fluctuation r_N(y)
    double identity_residual;   // |v_c - R(N) - alpha s_N / sqrt(N)|
};

// Everything in the centering that depends only on the model.
struct CenteringContext {
    DeformedModel model;
    double w_c;
    double g_prime_wc;
    double inv_mean;     // int dmu_N / (w_c - y)
    double ratio_mean;   // int y / (w_c - y) dmu_N
    double r_of_n;
    double wc_residual;
};

CenteringContext prepare_centering(const DeformedModel& m);
CenteringData centering(const CenteringContext& ctx, std::span<const double> y);
CenteringData centering(const DeformedModel& m, std::span<const double> y);
double r_of_n(const DeformedModel& m);
// Var of s_N under mu_N, in closed form.
double s_n_variance(const CenteringContext& ctx);

struct DeformedDraw {
    double lambda_max;
    std::vector<double> y;
    int rejected_entries;   // draws outside [-n^eps, n^eps] that were redrawn
};

// y i.i.d. from the law cut to [-n^eps, n^eps].
DeformedDraw sample_deformed_max(const DeformedModel& m, std::uint64_t seed);
DeformedDraw sample_deformed_max(const DeformedModel& m, Rng& rng);
double deformed_lambda_max(std::span<const double> y, double s, Rng& rng);

// ---- limiting laws -------------------------------------------------------

// Shared table of F_TW on [-10, 8], step 0.1, six-point interpolation.
const TabulatedCdf& tracy_widom_table();
double tw_gauss_convolution_cdf(double sigma_over_alpha, double t, double mean = 0.0);
double normal_cdf(double x, double sd, double mean = 0.0);

// ---- experiments ---------------------------------------------------------

struct DeformedEdgeReport {
    DeformedModel model;
    int replicas = 0;
    std::uint64_t seed = 0;
    double w_c = 0, r_of_n = 0, wc_residual = 0;
    double ks_convolution = 0, ks_tw = 0, ks_gauss = 0;
    double var_s = 0, var_s_exact = 0, mean_s = 0;
    double mean_r = 0, se_r = 0;
    double max_identity_residual = 0;
    int cutoff_violations = 0;          // |y_i| >= w_c, redrawn
    double an_complement_freq = 0;      // replicas where the uncut law left A_N
    double an_complement_prob = 0;      // 1 - mu([-n^eps, n^eps])^n
    std::vector<double> statistic;      // (lambda_max - R(N)) / (alpha / sqrt(N)), by replica
    std::vector<double> lambda_max;
    std::vector<double> s_values;
};

DeformedEdgeReport deformed_edge_experiment(const DeformedModel& m, int replicas, std::uint64_t seed,
                                            unsigned workers = 1);

struct GumbelMaxReport {
    long long n = 0;
    int replicas = 0;
    std::uint64_t seed = 0;
    double a = 0, b = 0;
    double ks = 0, mean = 0;
    std::vector<double> statistic;
};

// Max of n i.i.d. N(0, 1/2), rescaled by the classical (a_N, b_N).
GumbelMaxReport gumbel_max_experiment(long long n, int replicas, std::uint64_t seed, unsigned workers = 1);

// Edge-rescaled largest GUE eigenvalue for replicas seed, seed+1, ...
std::vector<double> gue_edge_sample(int n, int replicas, std::uint64_t seed, bool dense, unsigned workers = 1);

} // namespace edgestat
