#include "edgestat/dpp.hpp"
#include "edgestat/errors.hpp"
#include "edgestat/fredholm.hpp"
#include "edgestat/kernels.hpp"
#include "edgestat/limits.hpp"
#include "edgestat/rmt.hpp"
#include "edgestat/specfun.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace edgestat;

namespace {

NystromConfig config(int nodes, double length, bool refine)
{
    NystromConfig c;
    c.node_count = nodes;
    c.interval_length = length;
    c.refine = refine;
    return c;
}

py::dict to_dict(const IdentityCheck& c)
{
    py::dict d;
    d["name"] = c.name;
    d["max_error"] = c.max_error;
    d["tolerance"] = c.tolerance;
    d["pass"] = c.pass;
    py::dict parts;
    for (const auto& [k, v] : c.parts) parts[py::str(k)] = v;
    d["parts"] = parts;
    return d;
}

py::dict to_dict(const ConvergenceTable& t)
{
    py::dict d;
    d["target"] = t.target;
    d["parameter"] = t.parameter_name;
    d["grid"] = t.grid;
    d["parameters"] = t.parameters;
    py::dict cols;
    for (const auto& c : t.columns) cols[py::str(c.name)] = c.values;
    d["columns"] = cols;
    py::dict checks;
    for (const auto& [k, v] : t.checks) checks[py::str(k)] = v;
    d["checks"] = checks;
    d["trend_ok"] = t.trend_ok();
    d["passed"] = t.passed();
    d["csv"] = t.csv();
    return d;
}

DiagLaw law_from(const std::string& name, double param)
{
    if (name == "gaussian") return DiagLaw::gaussian(param);
    if (name == "uniform") return DiagLaw::uniform(param);
    if (name == "rademacher") return DiagLaw::rademacher(param);
    if (name == "point_mass") return DiagLaw::point_mass();
    throw DomainError("unknown law " + name);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "edge statistics of interpolating random-matrix ensembles";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IndexError>(m, "IndexOutOfRange", PyExc_IndexError);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
    py::register_exception<SamplerError>(m, "SamplerError", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    // specfun
    m.def("airy_ai", &airy_ai, py::arg("x"));
    m.def("airy_ai_prime", &airy_ai_prime, py::arg("x"));
    m.def("hermite_psi", [](double beta, int n, double x) { return hermite_psi(HermiteBasis(beta, n), n, x); },
          py::arg("beta"), py::arg("n"), py::arg("x"));
    m.def("mehler_closed_form", &mehler_closed_form, py::arg("q"), py::arg("x"), py::arg("y"));
    m.def("beta_q", &beta_q, py::arg("q"));
    m.def("gumbel_cdf", &gumbel_cdf, py::arg("x"));
    m.def("logistic_cdf", &logistic_cdf, py::arg("alpha"), py::arg("x"));
    m.def(
        "gumbel_scaling",
        [](long long n, const std::string& variant, std::optional<double> c) {
            const auto g = gumbel_scaling(n, variant == "mns_edge" ? GumbelVariant::mns_edge : GumbelVariant::classical, c);
            return py::make_tuple(g.a, g.b);
        },
        py::arg("n"), py::arg("variant") = "classical", py::arg("c") = py::none());

    // kernels
    m.def("airy_kernel", &airy_kernel, py::arg("x"), py::arg("y"));
    m.def("m_alpha", &m_alpha, py::arg("alpha"), py::arg("x"), py::arg("y"));
    m.def("m_alpha_gumbel_scaled", &m_alpha_gumbel_scaled, py::arg("alpha"), py::arg("u"), py::arg("v"));
    m.def("gue_kernel", &gue_kernel, py::arg("n"), py::arg("x"), py::arg("y"));
    m.def("bulk_kernel", &bulk_kernel_lc, py::arg("c"), py::arg("x"), py::arg("y"));
    m.def("bulk_kernel_approx", &bulk_kernel_lc_approx, py::arg("c"), py::arg("x"), py::arg("y"));
    m.def(
        "mns_kernel",
        [](double mu, double n_particles, double x, double y) { return mns_kernel_mu(mu, n_particles).evaluate(x, y); },
        py::arg("mu"), py::arg("n_particles"), py::arg("x"), py::arg("y"));
    m.def(
        "mns_count_distribution",
        [](double mu, double n_particles) { return count_distribution(mns_kernel_mu(mu, n_particles)).probabilities; },
        py::arg("mu"), py::arg("n_particles"));
    m.def(
        "deformed_kernel",
        [](double s, std::vector<double> y, double u, double v) {
            return deformed_kernel(static_cast<int>(y.size()), s, y, u, v);
        },
        py::arg("s"), py::arg("y"), py::arg("u"), py::arg("v"));
    m.def(
        "deformed_rho",
        [](double s, std::vector<double> y, std::vector<double> points) {
            return correlation_rho(deformed_kernel_handle(static_cast<int>(y.size()), s, y), points);
        },
        py::arg("s"), py::arg("y"), py::arg("points"));

    // fredholm
    m.def(
        "tracy_widom_cdf", [](double t, int nodes, double length, bool refine) { return tracy_widom_cdf(t, config(nodes, length, refine)); },
        py::arg("t"), py::arg("nodes") = 80, py::arg("length") = 30.0, py::arg("refine") = true);
    m.def(
        "f_alpha_cdf",
        [](double alpha, double t, int nodes, double length, bool refine) { return f_alpha_cdf(alpha, t, config(nodes, length, refine)); },
        py::arg("alpha"), py::arg("t"), py::arg("nodes") = 80, py::arg("length") = 30.0, py::arg("refine") = true);
    m.def(
        "f_alpha_gumbel_cdf", [](double alpha, double xi) { return f_alpha_gumbel_cdf(alpha, xi); }, py::arg("alpha"),
        py::arg("xi"));

    // sampling
    m.def(
        "sample_gue_eigs", [](int n, std::uint64_t seed) { return sample_gue_eigs(n, seed); }, py::arg("n"), py::arg("seed"));
    m.def("gue_edge_sample", &gue_edge_sample, py::arg("n"), py::arg("replicas"), py::arg("seed"),
          py::arg("dense") = false, py::arg("workers") = 1u);
    m.def(
        "sample_mns",
        [](double mu, double n_particles, std::uint64_t seed) {
            return sample_grand_canonical(mns_kernel_mu(mu, n_particles), seed).points;
        },
        py::arg("mu"), py::arg("n_particles"), py::arg("seed"));
    m.def(
        "sample_poisson_exp", [](double t_min, std::uint64_t seed) { return sample_poisson_exp(t_min, seed).points; },
        py::arg("t_min"), py::arg("seed"));
    m.def(
        "sample_shifted_airy_max",
        [](double alpha, int gue_n, int top_k, std::uint64_t seed) {
            return sample_shifted_airy_max(alpha, AiryApprox{gue_n, top_k}, seed);
        },
        py::arg("alpha"), py::arg("gue_n") = 400, py::arg("top_k") = 10, py::arg("seed") = 0);
    m.def(
        "deformed_edge_experiment",
        [](int n, double alpha, const std::string& law, double law_param, int replicas, std::uint64_t seed, unsigned workers) {
            DeformedModel model;
            model.n = n;
            model.alpha = alpha;
            model.law = law_from(law, law_param);
            const DeformedEdgeReport r = deformed_edge_experiment(model, replicas, seed, workers);
            py::dict d;
            d["w_c"] = r.w_c;
            d["r_of_n"] = r.r_of_n;
            d["ks_convolution"] = r.ks_convolution;
            d["ks_tracy_widom"] = r.ks_tw;
            d["ks_gaussian"] = r.ks_gauss;
            d["var_s"] = r.var_s;
            d["var_s_exact"] = r.var_s_exact;
            d["max_identity_residual"] = r.max_identity_residual;
            d["statistic"] = r.statistic;
            d["lambda_max"] = r.lambda_max;
            return d;
        },
        py::arg("n"), py::arg("alpha"), py::arg("law") = "gaussian", py::arg("law_param") = 0.5,
        py::arg("replicas") = 100, py::arg("seed") = 0, py::arg("workers") = 1u);

    // limits
    m.def(
        "check_kernel_alpha_limit",
        [](const std::string& dir, std::vector<double> alphas) {
            if (dir != "to_airy" && dir != "to_poisson") throw DomainError("direction must be to_airy or to_poisson");
            return to_dict(check_kernel_alpha_limit(dir == "to_airy" ? AlphaLimit::to_airy : AlphaLimit::to_poisson, alphas));
        },
        py::arg("direction"), py::arg("alphas"));
    m.def(
        "check_mns_interpolation",
        [](const std::string& dir, std::vector<double> mus, int n) {
            if (dir != "to_gue" && dir != "to_independent") throw DomainError("direction must be to_gue or to_independent");
            return to_dict(check_mns_interpolation(dir == "to_gue" ? MnsLimit::to_gue : MnsLimit::to_independent, mus, n));
        },
        py::arg("direction"), py::arg("mus"), py::arg("n") = 10);
    m.def(
        "check_bulk_limit", [](double c, std::vector<int> ns) { return to_dict(check_bulk_limit(c, ns)); }, py::arg("c"),
        py::arg("ns"));
    m.def("verify_airy_identity", [] { return to_dict(verify_airy_identity()); });
    m.def("verify_mehler", [](int terms) { return to_dict(verify_mehler(terms)); }, py::arg("terms") = 80);
    m.def("verify_von_koch", [] { return to_dict(verify_von_koch()); });
    m.def("verify_operator_bounds", [] { return to_dict(verify_operator_bounds()); });
    m.def("verify_orthonormality", [] { return to_dict(verify_orthonormality()); });
}
