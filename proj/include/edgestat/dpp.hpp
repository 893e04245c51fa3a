#pragma once

#include "edgestat/kernels.hpp"
#include "edgestat/rmt.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace edgestat {

struct PointConfiguration {
    std::vector<double> points;   // ascending
    std::uint64_t seed = 0;
    std::string meta;

    std::size_t size() const { return points.size(); }
};

struct CountDistribution {
    std::vector<double> probabilities;   // P[count = k]

    double total() const;
    double mean() const;
};

// Exact particle-count law of a spectral kernel (Poisson-binomial of its weights).
CountDistribution count_distribution(const SpectralKernel& kernel);
CountDistribution empirical_counts(std::span<const PointConfiguration> samples);

struct SamplerStats {
    long long proposals = 0;
    long long accepted = 0;
    long long envelope_violations = 0;   // density above the cell bound; should stay 0
};

// Projection DPP onto span{psi_n : n in indices}, sequential conditional densities.
std::vector<double> sample_projection_dpp(const HermiteBasis& basis, std::span<const int> indices, Rng& rng,
                                          SamplerStats* stats = nullptr);

PointConfiguration sample_grand_canonical(const SpectralKernel& kernel, std::uint64_t seed,
                                          SamplerStats* stats = nullptr);

// Poisson process with intensity e^{-x} on (t_min, inf).
PointConfiguration sample_poisson_exp(double t_min, std::uint64_t seed);

struct AiryApprox {
    int gue_n = 400;
    int top_k = 10;
};

// max_j (x_j + y_j) with x_j the top edge-rescaled GUE eigenvalues and y_j logistic(alpha).
double sample_shifted_airy_max(double alpha, AiryApprox approx, std::uint64_t seed, double y_shift = 0.0);

struct Rho1Estimate {
    std::vector<double> edges;
    std::vector<double> density;
    std::vector<double> std_error;
    std::size_t samples = 0;

    double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

Rho1Estimate empirical_rho1(std::span<const PointConfiguration> samples, std::span<const double> edges);

// Off-diagonal bin pairs: E[n_i n_j] / (w_i w_j) with standard errors, row-major.
struct Rho2Estimate {
    Eigen::MatrixXd density;
    Eigen::MatrixXd std_error;
};
Rho2Estimate empirical_rho2(std::span<const PointConfiguration> samples, std::span<const double> edges);

// Independent thinning with retention probability keep.
PointConfiguration thin(const PointConfiguration& config, double keep, std::uint64_t seed);

struct VonKochReport {
    int small_size, full_size;
    double lhs_small, rhs_small;
    double lhs_full, rhs_full;
    double max_error;
    bool pass;
};

// det(I+A) det(I+B) against det(I+A+B+AB) at half and full truncation.
VonKochReport von_koch_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol = 1e-8);

} // namespace edgestat
