#include "manifest.hpp"

#include "edgestat/dpp.hpp"
#include "edgestat/errors.hpp"
#include "edgestat/fredholm.hpp"
#include "edgestat/kernels.hpp"
#include "edgestat/limits.hpp"
#include "edgestat/rmt.hpp"
#include "edgestat/stats.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace edgestat;
using namespace edgestat::cli;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Checks that fail after the output is written (monotonicity, trends, identities).
struct AssertionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double unset = std::numeric_limits<double>::quiet_NaN();

// ---- typed parameter capture --------------------------------------------

// Every option of a subcommand is bound to a variable and exported to the manifest,
// defaults included, so the manifest alone replays the run.
class Params {
public:
    explicit Params(CLI::App* sub) : sub_(sub) {}

    template <class T>
    CLI::Option* add(const std::string& name, T& var, const std::string& desc)
    {
        getters_.emplace_back(name, [&var] { return export_value(var); });
        return sub_->add_option("--" + name, var, desc)->capture_default_str();
    }
    CLI::Option* flag(const std::string& name, bool& var, const std::string& desc)
    {
        getters_.emplace_back(name, [&var] { return json(var); });
        return sub_->add_flag("--" + name, var, desc);
    }
    json to_json() const
    {
        json j = json::object();
        for (const auto& [name, get] : getters_) j[name] = get();
        return j;
    }

private:
    static json export_value(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
    template <class T>
    static json export_value(const T& v) { return json(v); }

    CLI::App* sub_;
    std::vector<std::pair<std::string, std::function<json()>>> getters_;
};

struct Common {
    std::string output;
    std::string format = "csv";
    unsigned workers = default_workers();
};

void add_common(CLI::App* sub, Common& c, bool with_format)
{
    sub->add_option("-o,--output", c.output, "output file (default: $EDGESTAT_OUTPUT_DIR/<command>_<which>.<ext>)");
    sub->add_option("--workers", c.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    if (with_format)
        sub->add_option("--format", c.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
}

fs::path output_path(const Common& c, const std::string& command, const std::string& which, const std::string& ext)
{
    if (!c.output.empty()) return c.output;
    const char* env = std::getenv("EDGESTAT_OUTPUT_DIR");
    fs::path dir = (env && *env) ? fs::path(env) : fs::path(".");
    return dir / (command + "_" + which + "." + ext);
}

fs::path manifest_path(const fs::path& data) { return fs::path(data.string() + ".manifest.json"); }

fs::path sidecar_path(const fs::path& data, const std::string& tag)
{
    fs::path p = data;
    p.replace_extension("." + tag + ".json");
    return p;
}

// ---- tables ---------------------------------------------------------------

struct Table {
    std::string schema;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string csv() const
    {
        std::string out = "# " + schema;
        for (const auto& [k, v] : meta) out += " " + k + "=" + v;
        out += "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
        out += "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + fmt_double(r[i]);
            out += "\n";
        }
        return out;
    }
    std::string json_text() const
    {
        json j;
        j["schema"] = schema;
        json m = json::object();
        for (const auto& [k, v] : meta) m[k] = v;
        j["meta"] = m;
        j["columns"] = columns;
        j["rows"] = rows;
        return j.dump(1) + "\n";
    }
    std::string render(const std::string& format) const { return format == "json" ? json_text() : csv(); }
};

std::vector<double> grid(double from, double to, double step)
{
    if (!(step > 0.0) || !std::isfinite(from) || !std::isfinite(to) || to < from)
        throw UsageError("need finite --from <= --to and --step > 0");
    const double count = std::floor((to - from) / step + 1e-9) + 1.0;
    if (count > 1e6) throw UsageError("grid too large");
    // snap to the decimal resolution of the inputs so -8 + 120 * 0.1 prints as 4
    int digits = 0;
    for (double v : {from, step}) {
        const std::string t = fmt_double(v);
        if (t.find('e') != std::string::npos) { digits = -1; break; }
        if (auto dot = t.find('.'); dot != std::string::npos) digits = std::max(digits, static_cast<int>(t.size() - dot - 1));
    }
    const double scale = digits >= 0 && digits <= 12 ? std::pow(10.0, digits) : 0.0;
    std::vector<double> g(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = from + step * static_cast<double>(i);
        if (scale > 0) g[i] = std::round(g[i] * scale) / scale;
    }
    return g;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

// ---- dist -----------------------------------------------------------------

struct DistArgs {
    std::string which;
    double from = -8, to = 4, step = 0.1;
    double alpha = unset;
    bool gumbel_scaled = false;
    int nodes = 80;
    double length = 30;
    bool no_refine = false;
    double refine_tol = 1e-8;
};

void run_dist(const DistArgs& a, const Common& c, Manifest& man)
{
    const std::vector<double> g = grid(a.from, a.to, a.step);
    if (a.which == "falpha") {
        if (std::isnan(a.alpha)) throw UsageError("dist falpha requires --alpha");
        if (!(a.alpha > 0.0)) throw UsageError("--alpha must be positive");
        if (a.gumbel_scaled && a.alpha > 1.0) throw UsageError("--gumbel-scaled needs alpha <= 1");
    }
    if (a.nodes < 8 || !(a.length > 0)) throw UsageError("--nodes >= 8 and --length > 0 required");
    NystromConfig cfg;
    cfg.node_count = a.nodes;
    cfg.interval_length = a.length;
    cfg.refine = !a.no_refine;
    cfg.refine_tol = a.refine_tol;

    std::vector<double> f(g.size());
    parallel_for(g.size(), c.workers, [&](std::size_t i) {
        if (a.which == "tw")
            f[i] = tracy_widom_cdf(g[i], cfg);
        else if (a.which == "gumbel")
            f[i] = gumbel_cdf(g[i]);
        else if (a.gumbel_scaled)
            f[i] = f_alpha_gumbel_cdf(a.alpha, g[i], cfg);
        else
            f[i] = f_alpha_cdf(a.alpha, g[i], cfg);
    });

    Table t{"edgestat-dist-v1", {{"which", a.which}}, {"t", "F"}, {}};
    if (a.which == "falpha") {
        t.meta.emplace_back("alpha", fmt_double(a.alpha));
        t.meta.emplace_back("variable", a.gumbel_scaled ? "xi" : "t");
    }
    if (a.which != "gumbel") {
        t.meta.emplace_back("rule", "gauss_legendre");
        t.meta.emplace_back("nodes", std::to_string(cfg.node_count));
        t.meta.emplace_back("length", fmt_double(cfg.interval_length));
        t.meta.emplace_back("refine", cfg.refine ? "1" : "0");
        t.meta.emplace_back("refine_tol", fmt_double(cfg.refine_tol));
        t.meta.emplace_back("tail_tol", fmt_double(cfg.tail_tol));
    }
    for (std::size_t i = 0; i < g.size(); ++i) t.rows.push_back({g[i], f[i]});
    const fs::path out = output_path(c, "dist", a.which, c.format);
    write_output(man, "data", out, t.render(c.format));

    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] >= -1e-12 && f[i] <= 1.0 + 1e-12))
            throw AssertionFailure("F outside [0,1] at t=" + fmt_double(g[i]));
        if (i > 0 && f[i] < f[i - 1] - 1e-10) throw AssertionFailure("F not monotone at t=" + fmt_double(g[i]));
    }
}

// ---- kernel ---------------------------------------------------------------

struct KernelArgs {
    std::string which;
    double from = -3, to = 3, step = 0.5;
    double alpha = 1.0;
    double mu = 0.1;
    double particles = 20;
    int n = 10;
    double c = 1.0;
    double s = 0.5;
    std::vector<double> y;
};

void run_kernel(const KernelArgs& a, const Common& c, Manifest& man)
{
    const std::vector<double> g = grid(a.from, a.to, a.step);
    std::function<double(double, double)> k;
    std::vector<std::pair<std::string, std::string>> meta{{"which", a.which}};
    std::optional<SpectralKernel> spectral;
    if (a.which == "airy") {
        k = airy_kernel;
    } else if (a.which == "malpha" || a.which == "malpha_gumbel") {
        if (!(a.alpha > 0)) throw UsageError("--alpha must be positive");
        meta.emplace_back("alpha", fmt_double(a.alpha));
        const double al = a.alpha;
        if (a.which == "malpha")
            k = [al](double x, double y) { return m_alpha(al, x, y); };
        else
            k = [al](double x, double y) { return m_alpha_gumbel_scaled(al, x, y); };
    } else if (a.which == "mns") {
        spectral = mns_kernel_mu(a.mu, a.particles);
        meta.emplace_back("mu", fmt_double(a.mu));
        meta.emplace_back("particles", fmt_double(a.particles));
        meta.emplace_back("terms", std::to_string(spectral->truncation_index));
        const SpectralKernel* sk = &*spectral;
        k = [sk](double x, double y) { return sk->evaluate(x, y); };
    } else if (a.which == "gue") {
        meta.emplace_back("n", std::to_string(a.n));
        const int n = a.n;
        k = [n](double x, double y) { return gue_kernel(n, x, y); };
    } else if (a.which == "bulk" || a.which == "bulk_approx") {
        meta.emplace_back("c", fmt_double(a.c));
        const double cc = a.c;
        if (a.which == "bulk")
            k = [cc](double x, double y) { return bulk_kernel_lc(cc, x, y); };
        else
            k = [cc](double x, double y) { return bulk_kernel_lc_approx(cc, x, y); };
    } else {   // deformed
        std::vector<double> y = a.y.empty() ? std::vector<double>(a.n, 0.0) : a.y;
        if (static_cast<int>(y.size()) != a.n) throw UsageError("--y needs exactly --n entries");
        meta.emplace_back("n", std::to_string(a.n));
        meta.emplace_back("s", fmt_double(a.s));
        const int n = a.n;
        const double s = a.s;
        k = [n, s, y](double u, double v) { return deformed_kernel(n, s, y, u, v); };
    }

    std::vector<double> vals(g.size() * g.size());
    parallel_for(g.size(), c.workers, [&](std::size_t i) {
        for (std::size_t j = 0; j < g.size(); ++j) vals[i * g.size() + j] = k(g[i], g[j]);
    });
    Table t{"edgestat-kernel-v1", meta, {"x", "y", "K"}, {}};
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) t.rows.push_back({g[i], g[j], vals[i * g.size() + j]});
    write_output(man, "data", output_path(c, "kernel", a.which, c.format), t.render(c.format));
}

// ---- sample ---------------------------------------------------------------

struct SampleArgs {
    std::string which;
    int replicas = 1;
    std::uint64_t seed = 0;
    double mu = 0.1;
    double particles = 20;
    double t_min = 0.0;
    double alpha = 1.0;
    int gue_n = 400;
    int top_k = 10;
    int n = 400;
    std::string method = "tridiagonal";
    std::string law = "gaussian";
    double law_param = unset;
    double epsilon = 0.15;
    bool ks = false;
};

DiagLaw make_law(const std::string& name, double param)
{
    if (name == "gaussian") return DiagLaw::gaussian(std::isnan(param) ? 0.5 : param);
    if (name == "uniform") return DiagLaw::uniform(std::isnan(param) ? std::sqrt(1.5) : param);
    if (name == "rademacher") return DiagLaw::rademacher(std::isnan(param) ? std::sqrt(0.5) : param);
    return DiagLaw::point_mass();
}

json describe(const EmpiricalCDF& e)
{
    return {{"mean", e.mean()}, {"variance", e.variance()}, {"median", e.quantile(0.5)},
            {"min", e.sorted().front()}, {"max", e.sorted().back()}};
}

void run_sample(const SampleArgs& a, const Common& c, Manifest& man)
{
    if (a.replicas < 1) throw UsageError("--replicas must be >= 1");
    const std::size_t reps = static_cast<std::size_t>(a.replicas);
    const std::uint64_t seed = a.seed;
    man.seeds = {{"base", seed}, {"replica_rule", "replica i uses seed + i"}};
    const fs::path out = output_path(c, "sample", a.which, c.format);
    json summary;
    summary["schema"] = "edgestat-sample-summary-v1";
    summary["which"] = a.which;
    summary["replicas"] = a.replicas;
    summary["seed"] = seed;
    Table t;
    t.schema = "edgestat-sample-v1";
    t.meta = {{"which", a.which}, {"replicas", std::to_string(a.replicas)}, {"seed", std::to_string(seed)}};

    if (a.which == "mns" || a.which == "poisson") {
        std::vector<PointConfiguration> configs(reps);
        std::vector<SamplerStats> stats(reps);
        std::optional<SpectralKernel> kernel;
        if (a.which == "mns") {
            if (!(a.mu > 0) || !(a.particles > 0)) throw UsageError("--mu and --particles must be positive");
            kernel = mns_kernel_mu(a.mu, a.particles);
            t.meta.emplace_back("mu", fmt_double(a.mu));
            t.meta.emplace_back("particles", fmt_double(a.particles));
        } else {
            t.meta.emplace_back("t_min", fmt_double(a.t_min));
        }
        parallel_for(reps, c.workers, [&](std::size_t i) {
            configs[i] = kernel ? sample_grand_canonical(*kernel, seed + i, &stats[i])
                                : sample_poisson_exp(a.t_min, seed + i);
        });
        t.columns = {"replica", "x"};
        std::vector<int> counts;
        for (std::size_t i = 0; i < reps; ++i) {
            counts.push_back(static_cast<int>(configs[i].size()));
            for (double x : configs[i].points) t.rows.push_back({static_cast<double>(i), x});
        }
        const CountDistribution emp = empirical_counts(configs);
        summary["counts"] = counts;
        summary["mean_count"] = emp.mean();
        if (kernel) {
            const CountDistribution exact = count_distribution(*kernel);
            summary["exact_mean_count"] = exact.mean();
            summary["count_tv"] = total_variation(emp.probabilities, exact.probabilities);
            summary["kernel_terms"] = kernel->truncation_index;
            SamplerStats tot;
            for (const auto& s : stats) {
                tot.proposals += s.proposals;
                tot.accepted += s.accepted;
                tot.envelope_violations += s.envelope_violations;
            }
            summary["sampler"] = {{"proposals", tot.proposals}, {"accepted", tot.accepted},
                                  {"envelope_violations", tot.envelope_violations}};
        } else {
            summary["exact_mean_count"] = std::exp(-a.t_min);
        }
    } else if (a.which == "shifted_airy") {
        if (!(a.alpha > 0)) throw UsageError("--alpha must be positive");
        const AiryApprox approx{a.gue_n, a.top_k};
        std::vector<double> v(reps);
        parallel_for(reps, c.workers, [&](std::size_t i) { v[i] = sample_shifted_airy_max(a.alpha, approx, seed + i); });
        t.meta.emplace_back("alpha", fmt_double(a.alpha));
        t.meta.emplace_back("gue_n", std::to_string(a.gue_n));
        t.meta.emplace_back("top_k", std::to_string(a.top_k));
        t.columns = {"replica", "max"};
        for (std::size_t i = 0; i < reps; ++i) t.rows.push_back({static_cast<double>(i), v[i]});
        const EmpiricalCDF e(v);
        summary["statistics"] = describe(e);
        if (a.ks) {
            const double lo = std::max(-12.0, std::floor(e.sorted().front()) - 1.0);
            const double hi = std::ceil(e.sorted().back()) + 1.0;
            const TabulatedCdf f([&](double x) { return f_alpha_cdf(a.alpha, x); }, lo, hi, 0.2);
            summary["ks_f_alpha"] = e.ks_distance([&](double x) { return f(x); });
        }
    } else if (a.which == "gue") {
        if (a.n < 2 || a.n > 2000) throw UsageError("--n must lie in [2, 2000]");
        const auto v = gue_edge_sample(a.n, a.replicas, seed, a.method == "dense", c.workers);
        t.meta.emplace_back("n", std::to_string(a.n));
        t.meta.emplace_back("method", a.method);
        t.columns = {"replica", "edge_rescaled_max"};
        for (std::size_t i = 0; i < reps; ++i) t.rows.push_back({static_cast<double>(i), v[i]});
        const EmpiricalCDF e(v);
        summary["statistics"] = describe(e);
        if (a.ks) summary["ks_tracy_widom"] = e.ks_distance([](double x) { return tracy_widom_table()(x); });
    } else {   // deformed
        DeformedModel m;
        m.n = a.n;
        m.alpha = a.alpha;
        m.law = make_law(a.law, a.law_param);
        m.epsilon = a.epsilon;
        try {
            m.validate();
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        const DeformedEdgeReport r = deformed_edge_experiment(m, a.replicas, seed, c.workers);
        t.meta.emplace_back("n", std::to_string(m.n));
        t.meta.emplace_back("alpha", fmt_double(m.alpha));
        t.meta.emplace_back("law", m.law.name());
        t.meta.emplace_back("epsilon", fmt_double(m.epsilon));
        t.columns = {"replica", "lambda_max", "statistic", "s_n"};
        for (std::size_t i = 0; i < reps; ++i)
            t.rows.push_back({static_cast<double>(i), r.lambda_max[i], r.statistic[i], r.s_values[i]});
        summary["model"] = {{"n", m.n}, {"alpha", m.alpha}, {"law", m.law.name()},
                            {"law_variance", m.law.variance()}, {"epsilon", m.epsilon}, {"s", m.s()}};
        summary["w_c"] = r.w_c;
        summary["w_c_residual"] = r.wc_residual;
        summary["r_of_n"] = r.r_of_n;
        summary["ks_convolution"] = r.ks_convolution;
        summary["ks_tracy_widom"] = r.ks_tw;
        summary["ks_gaussian"] = r.ks_gauss;
        summary["var_s"] = r.var_s;
        summary["var_s_exact"] = r.var_s_exact;
        summary["mean_s"] = r.mean_s;
        summary["mean_r"] = r.mean_r;
        summary["se_r"] = r.se_r;
        summary["max_identity_residual"] = r.max_identity_residual;
        summary["cutoff_violations"] = r.cutoff_violations;
        summary["an_complement_frequency"] = r.an_complement_freq;
        summary["an_complement_probability"] = r.an_complement_prob;
        std::cout << "ks_convolution " << fmt_double(r.ks_convolution) << "\n";
    }
    write_output(man, "data", out, t.render(c.format));
    write_output(man, "summary", sidecar_path(out, "summary"), json_text(summary));
}

// ---- converge -------------------------------------------------------------

struct ConvergeArgs {
    std::string which;
    std::string direction;
    std::vector<double> sequence;
    double c = 1.0;
    double alpha = 1.0;
    int n = 10;
};

const std::map<std::string, std::string>& converge_aliases()
{
    static const std::map<std::string, std::string> m{
        {"thm1_2", "kernel_alpha"},     {"thm1_3", "distribution_alpha"}, {"prop1_7", "mns_interpolation"},
        {"thm1_8", "bulk"},             {"thm1_9", "edge_poisson"},       {"thm1_10", "edge_interpolating"}};
    return m;
}

std::vector<int> as_ints(const std::vector<double>& v)
{
    std::vector<int> out;
    for (double x : v) {
        if (x != std::floor(x) || x < 1) throw UsageError("--sequence must hold positive integers here");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

void run_converge(const ConvergeArgs& a, const Common& c, Manifest& man)
{
    std::string which = a.which;
    if (auto it = converge_aliases().find(which); it != converge_aliases().end()) which = it->second;
    std::vector<double> seq = a.sequence;
    auto want = [&](std::initializer_list<double> d) {
        if (seq.empty()) seq.assign(d);
    };
    ConvergenceTable table;
    try {
        if (which == "kernel_alpha" || which == "distribution_alpha") {
            const std::string dir = a.direction.empty() ? "to_airy" : a.direction;
            if (dir != "to_airy" && dir != "to_poisson") throw UsageError("--direction must be to_airy or to_poisson");
            const AlphaLimit d = dir == "to_airy" ? AlphaLimit::to_airy : AlphaLimit::to_poisson;
            if (d == AlphaLimit::to_airy)
                want(which == "kernel_alpha" ? std::initializer_list<double>{2, 6, 20} : std::initializer_list<double>{2, 6, 16});
            else
                want({0.4, 0.2, 0.1});
            table = which == "kernel_alpha" ? check_kernel_alpha_limit(d, seq, c.workers)
                                            : check_distribution_alpha_limit(d, seq, c.workers);
        } else if (which == "mns_interpolation") {
            const std::string dir = a.direction.empty() ? "to_gue" : a.direction;
            MnsLimit d;
            if (dir == "to_gue")
                d = MnsLimit::to_gue;
            else if (dir == "to_independent" || dir == "to_poisson_density")
                d = MnsLimit::to_independent;
            else
                throw UsageError("--direction must be to_gue or to_independent");
            want(d == MnsLimit::to_gue ? std::initializer_list<double>{2, 4, 8} : std::initializer_list<double>{0.2, 0.1, 0.05});
            table = check_mns_interpolation(d, seq, a.n, c.workers);
        } else if (which == "bulk") {
            want({50, 100, 200});
            table = check_bulk_limit(a.c, as_ints(seq), c.workers);
        } else if (which == "edge_poisson") {
            want({200, 400, 800});
            table = check_edge_poisson_limit(a.c, as_ints(seq), c.workers);
        } else {
            want({64, 216, 512});
            table = check_edge_interpolating_limit(a.alpha, as_ints(seq), c.workers);
        }
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }

    const fs::path out = output_path(c, "converge", a.which, c.format);
    std::string text;
    if (c.format == "csv") {
        text = table.csv();
    } else {
        json j;
        j["schema"] = "edgestat-convergence-v1";
        j["target"] = table.target;
        j["parameter"] = table.parameter_name;
        j["grid"] = table.grid;
        j["parameters"] = table.parameters;
        json cols = json::array();
        for (const auto& col : table.columns)
            cols.push_back({{"name", col.name}, {"values", col.values}, {"asserted", col.asserted},
                            {"zero_floor", col.zero_floor}});
        j["columns"] = cols;
        json checks = json::object();
        for (const auto& [name, ok] : table.checks) checks[name] = ok;
        j["checks"] = checks;
        j["trend_ok"] = table.trend_ok();
        j["passed"] = table.passed();
        text = json_text(j);
    }
    write_output(man, "data", out, text);
    if (!table.passed()) {
        std::cout << table.csv();
        throw AssertionFailure("convergence assertions failed for " + a.which);
    }
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
    std::string which;
    int terms = 80;
    std::vector<double> q;
    std::vector<double> alphas;
    double tol = unset;
};

void run_verify(const VerifyArgs& a, const Common& c, Manifest& man)
{
    std::vector<IdentityCheck> checks;
    auto tol = [&](double d) { return std::isnan(a.tol) ? d : a.tol; };
    const bool all = a.which == "all";
    if (all || a.which == "airy_identity") checks.push_back(verify_airy_identity(a.alphas, tol(1e-8)));
    if (all || a.which == "mehler") checks.push_back(verify_mehler(a.terms, a.q, tol(1e-10)));
    if (all || a.which == "von_koch") checks.push_back(verify_von_koch(tol(1e-8)));
    if (all || a.which == "operator_bounds") checks.push_back(verify_operator_bounds(a.alphas, tol(1e-8)));
    if (all || a.which == "orthonormality") checks.push_back(verify_orthonormality(tol(1e-8)));

    json j;
    j["schema"] = "edgestat-verify-v1";
    json arr = json::array();
    bool pass = true;
    for (const auto& ch : checks) {
        json parts = json::object();
        for (const auto& [k, v] : ch.parts) parts[k] = v;
        arr.push_back({{"name", ch.name}, {"pass", ch.pass}, {"max_error", ch.max_error},
                       {"tolerance", ch.tolerance}, {"parts", parts}});
        pass = pass && ch.pass;
    }
    j["checks"] = arr;
    j["pass"] = pass;
    const std::string text = json_text(j);
    std::cout << text;
    write_output(man, "data", output_path(c, "verify", a.which, "json"), text);
    if (!pass) throw AssertionFailure("identity verification failed");
}

// ---- driver ---------------------------------------------------------------

int run(std::vector<std::string> args, bool quiet_help = false);

// rerun: replay a manifest and compare output hashes.
int run_rerun(const std::string& manifest_file, const std::string& output_dir, unsigned workers, bool workers_given)
{
    const Manifest old = Manifest::from_json(json::parse(read_file(manifest_file)));
    const OutputRecord* data = nullptr;
    for (const auto& o : old.outputs)
        if (o.role == "data") data = &o;
    if (!data) throw ConfigError("manifest lists no data output");
    fs::path target = data->path;
    if (!output_dir.empty()) target = fs::path(output_dir) / data->path.filename();

    std::vector<std::string> args = old.replay_arguments();
    args.push_back("--output");
    args.push_back(target.string());
    args.push_back("--workers");
    args.push_back(std::to_string(workers_given ? workers : old.workers));
    const int code = run(args);
    if (code == exit_usage) return code;

    const Manifest fresh = Manifest::from_json(json::parse(read_file(manifest_path(target))));
    bool same = fresh.outputs.size() == old.outputs.size();
    for (std::size_t i = 0; same && i < old.outputs.size(); ++i) {
        const bool eq = old.outputs[i].sha1 == fresh.outputs[i].sha1;
        std::cout << old.outputs[i].role << " " << fresh.outputs[i].path.string() << " "
                  << (eq ? "identical " : "DIFFERENT ") << fresh.outputs[i].sha1 << "\n";
        same = same && eq;
    }
    std::cout << (same ? "rerun identical" : "rerun differs") << "\n";
    return same ? exit_ok : exit_failure;
}

int run(std::vector<std::string> args, bool quiet_help)
{
    CLI::App app{"edgestat: edge statistics of interpolating random-matrix ensembles", "edgestat"};
    app.require_subcommand(1);
    app.set_version_flag("--version", EDGESTAT_VERSION);

    Common common;
    Manifest man;

    DistArgs dist;
    auto* dist_cmd = app.add_subcommand("dist", "tabulate F_TW, the Gumbel law or F_alpha");
    Params dist_p(dist_cmd);
    dist_cmd->add_option("which", dist.which, "tw | gumbel | falpha")->required()->check(CLI::IsMember({"tw", "gumbel", "falpha"}));
    dist_p.add("from", dist.from, "first grid point");
    dist_p.add("to", dist.to, "last grid point");
    dist_p.add("step", dist.step, "grid step");
    dist_p.add("alpha", dist.alpha, "alpha (falpha)");
    dist_p.flag("gumbel-scaled", dist.gumbel_scaled, "tabulate F_alpha(xi/alpha - f(alpha)) in xi");
    dist_p.add("nodes", dist.nodes, "Nystrom nodes");
    dist_p.add("length", dist.length, "initial interval length");
    dist_p.flag("no-refine", dist.no_refine, "skip the node-doubling check");
    dist_p.add("refine-tol", dist.refine_tol, "node-doubling tolerance");
    add_common(dist_cmd, common, true);

    KernelArgs ker;
    auto* ker_cmd = app.add_subcommand("kernel", "dump K(x, y) on a square grid");
    Params ker_p(ker_cmd);
    ker_cmd->add_option("which", ker.which, "airy | malpha | malpha_gumbel | mns | gue | bulk | bulk_approx | deformed")
        ->required()
        ->check(CLI::IsMember({"airy", "malpha", "malpha_gumbel", "mns", "gue", "bulk", "bulk_approx", "deformed"}));
    ker_p.add("from", ker.from, "first grid point");
    ker_p.add("to", ker.to, "last grid point");
    ker_p.add("step", ker.step, "grid step");
    ker_p.add("alpha", ker.alpha, "alpha (malpha)");
    ker_p.add("mu", ker.mu, "mu (mns)");
    ker_p.add("particles", ker.particles, "N (mns)");
    ker_p.add("n", ker.n, "matrix size (gue, deformed)");
    ker_p.add("c", ker.c, "c (bulk)");
    ker_p.add("s", ker.s, "S (deformed)");
    ker_p.add("y", ker.y, "diagonal entries (deformed), comma separated")->delimiter(',');
    add_common(ker_cmd, common, true);

    SampleArgs smp;
    auto* smp_cmd = app.add_subcommand("sample", "Monte Carlo sampling experiments");
    Params smp_p(smp_cmd);
    smp_cmd->add_option("which", smp.which, "mns | poisson | shifted_airy | gue | deformed")
        ->required()
        ->check(CLI::IsMember({"mns", "poisson", "shifted_airy", "gue", "deformed"}));
    smp_p.add("replicas", smp.replicas, "number of replicas");
    auto* seed_opt = smp_p.add("seed", smp.seed, "base seed (generated and recorded when absent)");
    smp_p.add("mu", smp.mu, "mu (mns)");
    smp_p.add("particles", smp.particles, "N (mns)");
    smp_p.add("t-min", smp.t_min, "left end (poisson)");
    smp_p.add("alpha", smp.alpha, "alpha (shifted_airy, deformed)");
    smp_p.add("gue-n", smp.gue_n, "GUE size behind the Airy approximation");
    smp_p.add("top-k", smp.top_k, "eigenvalues kept from the Airy approximation");
    smp_p.add("n", smp.n, "matrix size (gue, deformed)");
    smp_p.add("method", smp.method, "tridiagonal | dense (gue)")->check(CLI::IsMember({"tridiagonal", "dense"}));
    smp_p.add("law", smp.law, "gaussian | uniform | rademacher | point_mass (deformed)")
        ->check(CLI::IsMember({"gaussian", "uniform", "rademacher", "point_mass"}));
    smp_p.add("law-param", smp.law_param, "variance (gaussian), half-width (uniform) or atom (rademacher)");
    smp_p.add("epsilon", smp.epsilon, "cutoff exponent (deformed)");
    smp_p.flag("ks", smp.ks, "also report KS against the limiting law (gue, shifted_airy)");
    add_common(smp_cmd, common, true);

    ConvergeArgs conv;
    auto* conv_cmd = app.add_subcommand("converge", "convergence tables for the scaling limits");
    Params conv_p(conv_cmd);
    std::vector<std::string> conv_names{"kernel_alpha", "distribution_alpha", "mns_interpolation",
                                        "bulk", "edge_poisson", "edge_interpolating"};
    for (const auto& [k, v] : converge_aliases()) conv_names.push_back(k);
    conv_cmd->add_option("which", conv.which, "kernel_alpha | distribution_alpha | mns_interpolation | bulk | edge_poisson | edge_interpolating")
        ->required()
        ->check(CLI::IsMember(conv_names));
    conv_p.add("direction", conv.direction, "to_airy | to_poisson | to_gue | to_independent");
    conv_p.add("sequence", conv.sequence, "parameter ladder, comma separated")->delimiter(',');
    conv_p.add("c", conv.c, "c (bulk, edge_poisson)");
    conv_p.add("alpha", conv.alpha, "alpha (edge_interpolating)");
    conv_p.add("n", conv.n, "particle number (mns_interpolation)");
    add_common(conv_cmd, common, true);

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "identity suite with JSON verdicts");
    Params ver_p(ver_cmd);
    ver_cmd->add_option("which", ver.which, "airy_identity | mehler | von_koch | operator_bounds | orthonormality | all")
        ->required()
        ->check(CLI::IsMember({"airy_identity", "mehler", "von_koch", "operator_bounds", "orthonormality", "all"}));
    ver_p.add("terms", ver.terms, "Hermite terms (mehler)");
    ver_p.add("q", ver.q, "q values (mehler), comma separated")->delimiter(',');
    ver_p.add("alphas", ver.alphas, "alpha values (airy_identity, operator_bounds)")->delimiter(',');
    ver_p.add("tol", ver.tol, "override the tolerance");
    add_common(ver_cmd, common, false);

    std::string rerun_manifest, rerun_dir;
    unsigned rerun_workers = 1;
    auto* rerun_cmd = app.add_subcommand("rerun", "replay a manifest and compare output hashes");
    rerun_cmd->add_option("manifest", rerun_manifest, "manifest JSON")->required()->check(CLI::ExistingFile);
    rerun_cmd->add_option("--output-dir", rerun_dir, "write the replay here instead of over the originals");
    auto* rw = rerun_cmd->add_option("--workers", rerun_workers, "worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        if (!quiet_help) app.exit(e);
        return exit_ok;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (rerun_cmd->parsed()) return run_rerun(rerun_manifest, rerun_dir, rerun_workers, rw->count() > 0);

    man.workers = common.workers;
    try {
        if (dist_cmd->parsed()) {
            man.command = "dist";
            man.which = dist.which;
            man.parameters = dist_p.to_json();
            run_dist(dist, common, man);
        } else if (ker_cmd->parsed()) {
            man.command = "kernel";
            man.which = ker.which;
            man.parameters = ker_p.to_json();
            run_kernel(ker, common, man);
        } else if (smp_cmd->parsed()) {
            man.command = "sample";
            man.which = smp.which;
            if (seed_opt->count() == 0) smp.seed = std::random_device{}() * 4294967296ull + std::random_device{}();
            man.parameters = smp_p.to_json();
            run_sample(smp, common, man);
        } else if (conv_cmd->parsed()) {
            man.command = "converge";
            man.which = conv.which;
            man.parameters = conv_p.to_json();
            run_converge(conv, common, man);
        } else if (ver_cmd->parsed()) {
            man.command = "verify";
            man.which = ver.which;
            man.parameters = ver_p.to_json();
            run_verify(ver, common, man);
        }
    } catch (const AssertionFailure& e) {
        if (!man.outputs.empty()) write_manifest(man, manifest_path(man.outputs.front().path));
        std::cerr << "edgestat: " << e.what() << "\n";
        return exit_failure;
    }
    write_manifest(man, manifest_path(man.outputs.front().path));
    return exit_ok;
}

// Flat key=value config: every key becomes --key value unless the flag is already on the
// command line, so explicit flags win.
std::vector<std::string> merge_config(std::vector<std::string> args)
{
    std::string file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (file.empty()) return args;
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(file + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string flag = "--" + key;
        const bool present = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (present) continue;
        if (value == "true") {
            args.push_back(flag);
        } else if (value != "false") {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(merge_config(std::move(args)));
    } catch (const UsageError& e) {
        std::cerr << "edgestat: usage: " << e.what() << "\n";
        return exit_usage;
    } catch (const ConfigError& e) {
        std::cerr << "edgestat: config: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "edgestat: invalid parameter: " << e.what() << "\n";
        return exit_usage;
    } catch (const IndexError& e) {
        std::cerr << "edgestat: invalid parameter: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::length_error& e) {
        std::cerr << "edgestat: invalid parameter: " << e.what() << "\n";
        return exit_usage;
    } catch (const AccuracyError& e) {
        std::cerr << "edgestat: accuracy check failed: " << e.what() << " (coarse " << fmt_double(e.coarse)
                  << ", fine " << fmt_double(e.fine) << ")\n";
        return exit_failure;
    } catch (const SamplerError& e) {
        std::cerr << "edgestat: sampler failed: " << e.what() << "\n";
        return exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "edgestat: " << e.what() << "\n";
        return exit_failure;
    }
}
