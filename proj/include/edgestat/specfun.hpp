#pragma once

#include <optional>
#include <span>

namespace edgestat {

// ---- Airy ----------------------------------------------------------------

struct AiryValue {
    double ai;
    double aip;
};

double airy_ai(double x);        // |x| <= 200, else DomainError
double airy_ai_prime(double x);  // same range
AiryValue airy(double x);

namespace detail {
// No range check; asymptotics keep working far into the oscillatory tail,
// which the weighted kernels need near lambda ~ -700.
AiryValue airy_unchecked(double x);
}

// Sharp-ish envelope constants: |Ai(x)| <= C e^{-2x^{3/2}/3} x^{-1/4} (x > 0)
// and |Ai(x)| <= C |x|^{-1/4} (x < 0).
inline constexpr double airy_envelope_c = 0.5642;

// ---- Hermite functions ---------------------------------------------------

// psi_n(x) = sqrt(beta) h_n(beta x) exp(-beta^2 x^2 / 2), h_n the normalized Hermite polynomials.
class HermiteBasis {
public:
    HermiteBasis(double beta, int max_index);

    double beta() const { return beta_; }
    int max_index() const { return max_index_; }

    double operator()(int n, double x) const;
    // psi_0 .. psi_{out.size()-1} at x.
    void evaluate_all(double x, std::span<double> out) const;

private:
    double beta_;
    int max_index_;
};

double hermite_psi(const HermiteBasis& basis, int n, double x);

// phi_0 .. phi_{out.size()-1} at x with phi_n = h_n(x) e^{-x^2/2}.
void hermite_functions(double x, std::span<double> out);

// Sum over n of q^{n+1/2} psi_n(x) psi_n(y) with beta = beta_q, in closed form.
double mehler_closed_form(double q, double x, double y);
double beta_q(double q);

// ---- Extreme-value helpers -----------------------------------------------

double gumbel_cdf(double x);
double logistic_cdf(double alpha, double x);

enum class GumbelVariant { classical, mns_edge };

struct GumbelScaling {
    double a;
    double b;
    GumbelVariant variant;
};

GumbelScaling gumbel_scaling(long long n, GumbelVariant variant = GumbelVariant::classical,
                             std::optional<double> c = std::nullopt);

inline constexpr double euler_gamma = 0.57721566490153286061;

} // namespace edgestat
