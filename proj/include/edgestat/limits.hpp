#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace edgestat {

struct ConvergenceTable {
    struct Column {
        std::string name;
        std::vector<double> values;
        bool asserted;          // must be finite and strictly smaller last than first
        double zero_floor = 0;  // last <= zero_floor also counts as converged
    };

    std::string target;
    std::string parameter_name;
    std::string grid;
    std::vector<double> parameters;
    std::vector<Column> columns;
    std::vector<std::pair<std::string, bool>> checks;   // extra pass/fail facts

    const Column& column(const std::string& name) const;
    bool trend_ok() const;
    bool passed() const;
    std::string csv() const;
};

enum class AlphaLimit { to_poisson, to_airy };
enum class MnsLimit { to_gue, to_independent };

// Scaled M_alpha against the Poisson kernel e^{-u} delta, or M_alpha against the Airy kernel.
ConvergenceTable check_kernel_alpha_limit(AlphaLimit dir, std::span<const double> alphas, unsigned workers = 1);
// F_alpha against F_G (rescaled) or F_TW.
ConvergenceTable check_distribution_alpha_limit(AlphaLimit dir, std::span<const double> alphas, unsigned workers = 1);
// K_lambda with q = e^{-mu}, lambda = e^{mu N} - 1 against K_GUE(N) or the independent-particle limit.
ConvergenceTable check_mns_interpolation(MnsLimit dir, std::span<const double> mus, int n = 10, unsigned workers = 1);
// Bulk scaling mu = 1/(cN) against L_c.
ConvergenceTable check_bulk_limit(double c, std::span<const int> ns, unsigned workers = 1);
// Edge scaling mu = 1/(cN) against the Poisson e^{-x} kernel.
ConvergenceTable check_edge_poisson_limit(double c, std::span<const int> ns, unsigned workers = 1);
// Edge scaling mu = alpha / N^{1/3} against M_alpha.
ConvergenceTable check_edge_interpolating_limit(double alpha, std::span<const int> ns, unsigned workers = 1);

// ---- identity suite -------------------------------------------------------

struct IdentityCheck {
    std::string name;
    double max_error = 0;
    double tolerance = 0;
    bool pass = false;
    std::vector<std::pair<std::string, double>> parts;   // per-parameter worst errors
};

// int e^{a l} Ai(x+l) Ai(y+l) dl against its closed form, relative error.
IdentityCheck verify_airy_identity(std::span<const double> alphas = {}, double tol = 1e-8);
// Truncated Hermite sum against the closed Gaussian form, error relative to the grid sup.
IdentityCheck verify_mehler(int terms = 80, std::span<const double> qs = {}, double tol = 1e-10);
// det(I+A)det(I+B) = det(I+A+B+AB) for entries c 2^{-i-j}, sizes 30 and 60.
IdentityCheck verify_von_koch(double tol = 1e-8);
// Nystrom spectra of M_alpha inside [-tol, 1+tol].
IdentityCheck verify_operator_bounds(std::span<const double> alphas = {}, double tol = 1e-8);
// Gram matrix of psi_0..psi_40 against I.
IdentityCheck verify_orthonormality(double tol = 1e-8);

// sup |L_c - approximate sine-type form| / L_c(0,0) over |x - y| <= 2.
double bulk_approximation_error(double c);

} // namespace edgestat
