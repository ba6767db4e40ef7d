#pragma once

// The `spectra` command line: argument handling and the subcommands. Kept in a
// header so the test suite can drive it in-process.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ugw/cavity.hpp"
#include "ugw/degree.hpp"
#include "ugw/error.hpp"
#include "ugw/graph.hpp"
#include "ugw/limit_theory.hpp"
#include "ugw/parallel.hpp"
#include "ugw/spectrum.hpp"

namespace spectra {

using nlohmann::json;

inline constexpr const char* kVersion = UGW_VERSION;
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
    std::string subcommand;
    std::string distribution;
    std::string model;
    std::string t_grid = "0.1,0.01,0.001";
    std::size_t pool = 100000;
    std::size_t iters = 300;
    std::size_t ab_iters = 200;
    std::size_t root_passes = 10;
    std::size_t draws = 0;  // 0: one root draw per pool sample
    std::size_t n = 2000;
    std::size_t seeds = 10;
    std::string eps = "0.1";
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = "-";
    bool multigraph = false;
    double c_min = 0.5;
    double c_max = 5.0;
    std::size_t steps = 451;
    std::size_t points = 1001;
    int degree = 3;
};

inline json to_json(const RunConfig& c) {
    return json{{"subcommand", c.subcommand}, {"distribution", c.distribution}, {"model", c.model},
                {"t_grid", c.t_grid},         {"pool", c.pool},                 {"iters", c.iters},
                {"ab_iters", c.ab_iters},     {"root_passes", c.root_passes},   {"draws", c.draws},
                {"n", c.n},                   {"seeds", c.seeds},               {"eps", c.eps},
                {"seed", c.seed},             {"threads", c.threads},           {"out", c.out},
                {"multigraph", c.multigraph}, {"c_min", c.c_min},               {"c_max", c.c_max},
                {"steps", c.steps},           {"points", c.points},             {"d", c.degree}};
}

namespace detail {

inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto piece : ugw::detail::split(text, ','))
        if (!piece.empty()) out.emplace_back(piece);
    return out;
}

inline std::vector<double> parse_reals(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const auto& token : split_list(text)) out.push_back(ugw::detail::parse_real(token, what));
    if (out.empty()) throw ugw::Error(ugw::ErrorKind::InvalidArgument, std::string("empty ") + what + " list");
    return out;
}

inline std::string csv_real(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

/// Output sink: "-" is the caller's stream, anything else a file.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw ugw::Error(ugw::ErrorKind::Io, "cannot open " + path + " for writing");
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

inline void csv_preamble(std::ostream& os, const RunConfig& cfg) {
    os << "# spectra " << kVersion << "\n# config " << to_json(cfg).dump() << "\n";
}

inline json envelope(const RunConfig& cfg) { return json{{"version", kVersion}, {"config", to_json(cfg)}}; }

inline std::shared_ptr<spdlog::logger> logger() {
    static auto log = [] {
        auto l = spdlog::stderr_color_mt("spectra");
        l->set_pattern("[%l] %v");
        const char* env = std::getenv("SPECTRA_LOG");
        const std::string level = env ? env : "error";
        if (level == "debug") l->set_level(spdlog::level::debug);
        else if (level == "info") l->set_level(spdlog::level::info);
        else l->set_level(spdlog::level::err);
        return l;
    }();
    return log;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// JSON views of module results

inline json to_json(const ugw::ClassificationReport& r) {
    json argmax = json::array();
    for (double z : r.argmax_set) argmax.push_back(z);
    const auto& t = r.tolerances_used;
    return json{{"distribution", r.distribution},
                {"z_star", detail::finite_or_null(r.z_star)},
                {"argmax_set", argmax},
                {"atom_mass", r.atom_mass},
                {"phi_hat_prime_at_zstar", detail::finite_or_null(r.phi_hat_prime_at_zstar)},
                {"M_second_at_zstar", detail::finite_or_null(r.M_second_at_zstar)},
                {"condition_i", r.condition_i},
                {"condition_ii", r.condition_ii},
                {"condition_i_argmax", r.condition_i_argmax},
                {"condition_i_fixed_point", r.condition_i_fixed_point},
                {"z_hat", detail::finite_or_null(r.z_hat)},
                {"verdict", ugw::to_string(r.verdict)},
                {"diagnostic", r.diagnostic},
                {"tolerances_used",
                 {{"value_tol", t.value_tol},
                  {"merge_radius", t.merge_radius},
                  {"refine_tol", t.refine_tol},
                  {"z_hat_tol", t.z_hat_tol},
                  {"tol_ii", t.tol_ii},
                  {"boundary_layer", t.boundary_layer},
                  {"grid_n", t.grid_n}}}};
}

inline json to_json(const ugw::CategoryTriple& t) {
    return json{{"plus", t.plus}, {"minus", t.minus}, {"star", t.star}};
}

inline json to_json(const ugw::HeavyTailEstimate& h) {
    return json{{"estimate", detail::finite_or_null(h.estimate)},
                {"diverging", h.diverging},
                {"plain_mean", detail::finite_or_null(h.plain_mean)},
                {"top1_share", h.top1_share},
                {"tail_index", detail::finite_or_null(h.tail_index)},
                {"quantiles",
                 {{"q50", detail::finite_or_null(h.q50)},
                  {"q90", detail::finite_or_null(h.q90)},
                  {"q99", detail::finite_or_null(h.q99)}}},
                {"max", detail::finite_or_null(h.max)},
                {"draws", h.draws},
                {"infinite_draws", h.infinite_draws}};
}

inline json theory_json(const ugw::DegreeDistribution& dist) {
    auto j = to_json(ugw::classify(dist));
    if (dist.non_degenerate()) {
        const auto cp = ugw::category_probabilities(dist);
        j["categories"] = {{"under_root_law", to_json(cp.under_root_law)},
                           {"under_offspring_law", to_json(cp.under_offspring_law)},
                           {"z_hat_iterated", cp.z_hat},
                           {"iterations", cp.iterations}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// Graph models

struct Model {
    bool erdos_renyi = false;
    double c = 0.0;
    std::optional<ugw::DegreeDistribution> dist;
    std::string label;

    static Model parse(const std::string& text) {
        Model m;
        m.label = text;
        if (text.rfind("er:", 0) == 0) {
            m.erdos_renyi = true;
            m.c = ugw::detail::parse_real(text.substr(3), "ER mean degree");
        } else {
            m.dist = ugw::DegreeDistribution::parse(text);
        }
        return m;
    }

    ugw::SparseGraph sample(std::size_t n, std::uint64_t seed, bool simple) const {
        if (erdos_renyi) return ugw::sample_er(n, c, seed);
        return ugw::sample_config_model(*dist, n, seed, simple);
    }
};

/// Nullity and window-mass ensemble over `seeds` independent graphs.
inline json ensemble_json(const Model& model, const RunConfig& cfg, const ugw::Workers& workers) {
    const auto eps_tokens = detail::split_list(cfg.eps);
    std::vector<double> eps;
    for (const auto& e : eps_tokens) eps.push_back(ugw::detail::parse_real(e, "eps"));
    struct Sample {
        double nullity_fraction = 0.0;
        std::vector<double> window;
        std::size_t core = 0;
    };
    const auto samples = workers.map<Sample>(cfg.seeds, [&](std::size_t i) {
        const std::uint64_t graph_seed = cfg.seed + i;
        const auto g = model.sample(cfg.n, graph_seed, !cfg.multigraph);
        Sample s;
        const auto nul = ugw::nullity_mod_prime(g, graph_seed);
        s.nullity_fraction = static_cast<double>(nul.nullity) / static_cast<double>(cfg.n);
        s.core = nul.core_size;
        if (!eps.empty()) {
            const auto spec = ugw::eigenvalues(g);
            for (double e : eps) s.window.push_back(ugw::window_mass(spec, nul, e));
        }
        detail::logger()->info("graph {} of {}: nullity/n = {}", i + 1, cfg.seeds, s.nullity_fraction);
        return s;
    });
    std::vector<double> fractions;
    for (const auto& s : samples) fractions.push_back(s.nullity_fraction);
    json window = json::object();
    for (std::size_t k = 0; k < eps.size(); ++k) {
        double total = 0.0;
        for (const auto& s : samples) total += s.window[k];
        window[eps_tokens[k]] = total / static_cast<double>(samples.size());
    }
    json per_seed = json::array();
    for (double f : fractions) per_seed.push_back(f);
    return json{{"n", cfg.n},
                {"c_or_dist", model.label},
                {"seeds", cfg.seeds},
                {"nullity_mean", ugw::stats::mean(fractions)},
                {"nullity_se", ugw::stats::standard_error(fractions)},
                {"nullity_per_seed", per_seed},
                {"window_mass", window}};
}

// ---------------------------------------------------------------------------
// Subcommands

inline void cmd_classify(const RunConfig& cfg, std::ostream& os) {
    const auto dist = ugw::DegreeDistribution::parse(cfg.distribution);
    auto j = detail::envelope(cfg);
    j["report"] = theory_json(dist);
    os << j.dump(2) << "\n";
}

inline void cmd_mcurve(const RunConfig& cfg, std::ostream& os) {
    const ugw::MFunction m(ugw::DegreeDistribution::parse(cfg.distribution));
    if (cfg.points < 2) throw ugw::Error(ugw::ErrorKind::InvalidArgument, "--points must be at least 2");
    detail::csv_preamble(os, cfg);
    os << "z,M,Mprime,Msecond\n";
    for (std::size_t i = 0; i < cfg.points; ++i) {
        const double z = static_cast<double>(i) / static_cast<double>(cfg.points - 1);
        os << detail::csv_real(z) << ',' << detail::csv_real(m.value(z)) << ',' << detail::csv_real(m.prime(z))
           << ',' << detail::csv_real(m.second(z)) << '\n';
    }
}

inline void cmd_locus(const RunConfig& cfg, std::ostream& os) {
    if (!(cfg.c_min > 0.0) || !(cfg.c_max > cfg.c_min))
        throw ugw::Error(ugw::ErrorKind::InvalidArgument, "need 0 < c_min < c_max");
    if (cfg.steps < 2) throw ugw::Error(ugw::ErrorKind::InvalidArgument, "--steps must be at least 2");
    std::vector<double> grid;
    for (std::size_t i = 0; i < cfg.steps; ++i)
        grid.push_back(cfg.c_min + (cfg.c_max - cfg.c_min) * static_cast<double>(i) / static_cast<double>(cfg.steps - 1));
    // The branch point is always sampled when it lies in range.
    const double e = std::numbers::e;
    if (e >= cfg.c_min && e <= cfg.c_max && std::find(grid.begin(), grid.end(), e) == grid.end()) {
        grid.push_back(e);
        std::sort(grid.begin(), grid.end());
    }
    detail::csv_preamble(os, cfg);
    os << "c,q\n";
    for (double c : grid)
        for (double q : ugw::bg_locus(c)) os << detail::csv_real(c) << ',' << detail::csv_real(q) << '\n';
}

inline void cmd_sweep(const RunConfig& cfg, std::ostream& os, const ugw::Workers& workers) {
    const auto dist = ugw::DegreeDistribution::parse(cfg.distribution);
    ugw::SweepOptions opt;
    opt.pool_size = cfg.pool;
    opt.iterations = cfg.iters;
    opt.alpha_beta_iterations = cfg.ab_iters;
    opt.root_passes = cfg.root_passes;
    opt.seed = cfg.seed;
    const auto result = ugw::s_star_sweep(dist, detail::parse_reals(cfg.t_grid, "t"), opt, workers);
    detail::csv_preamble(os, cfg);
    os << "# atom_mass " << detail::csv_real(result.atom_mass) << "\n";
    os << "t,E_root,stderr_root,t_times_E,s_star,trend,stderr_s_star,E_offspring,pool_atom\n";
    for (const auto& r : result.rows) {
        os << detail::csv_real(r.t) << ',' << detail::csv_real(r.mean_s_root) << ',' << detail::csv_real(r.stderr_root)
           << ',' << detail::csv_real(r.t_times_mean) << ',' << detail::csv_real(r.s_star_mean) << ','
           << ugw::to_string(result.trend) << ',' << detail::csv_real(r.stderr_s_star) << ','
           << detail::csv_real(r.mean_s_offspring) << ',' << detail::csv_real(r.pool_atom) << '\n';
    }
}

inline void cmd_alphabeta(const RunConfig& cfg, std::ostream& os, const ugw::Workers& workers) {
    const auto dist = ugw::DegreeDistribution::parse(cfg.distribution);
    const auto pool = ugw::run_alphabeta(dist, {cfg.pool, cfg.iters, cfg.seed}, workers);
    const auto f = ugw::category_frequencies(pool);
    auto j = detail::envelope(cfg);
    j["distribution"] = dist.to_string();
    j["frequencies"] = {{"plus", f.plus}, {"minus", f.minus}, {"star", f.star}};
    j["converged"] = ugw::pool_converged(pool);
    if (dist.non_degenerate()) {
        const auto cp = ugw::category_probabilities(dist);
        j["closed_form"] = to_json(cp.under_offspring_law);
        j["z_hat"] = cp.z_hat;
    }
    const std::size_t draws = cfg.draws == 0 ? cfg.pool : cfg.draws;
    j["beta_star"] = to_json(ugw::beta_star_estimate(dist, pool, draws, cfg.seed, workers));
    j["inverse_alpha"] = to_json(ugw::conditional_inverse_alpha(pool));
    os << j.dump(2) << "\n";
}

inline void cmd_spectrum(const RunConfig& cfg, std::ostream& os) {
    const auto model = Model::parse(cfg.model.empty() ? cfg.distribution : cfg.model);
    const auto g = model.sample(cfg.n, cfg.seed, !cfg.multigraph);
    const auto spec = ugw::eigenvalues(g);
    detail::csv_preamble(os, cfg);
    os << "lambda\n";
    for (double l : spec.eigenvalues) os << detail::csv_real(l) << '\n';
}

inline void cmd_nullity(const RunConfig& cfg, std::ostream& os, const ugw::Workers& workers) {
    const auto model = Model::parse(cfg.model.empty() ? cfg.distribution : cfg.model);
    auto j = detail::envelope(cfg);
    j["ensemble"] = ensemble_json(model, cfg, workers);
    os << j.dump(2) << "\n";
}

inline void cmd_kmcurve(const RunConfig& cfg, std::ostream& os) {
    if (cfg.degree < 2) throw ugw::Error(ugw::ErrorKind::InvalidArgument, "--d must be at least 2");
    if (cfg.points < 2) throw ugw::Error(ugw::ErrorKind::InvalidArgument, "--points must be at least 2");
    const double r = ugw::kesten_mckay_edge(cfg.degree);
    detail::csv_preamble(os, cfg);
    os << "lambda,density,cdf\n";
    for (std::size_t i = 0; i < cfg.points; ++i) {
        const double x = -r + 2.0 * r * static_cast<double>(i) / static_cast<double>(cfg.points - 1);
        os << detail::csv_real(x) << ',' << detail::csv_real(ugw::kesten_mckay_density(cfg.degree, x)) << ','
           << detail::csv_real(ugw::kesten_mckay_cdf(cfg.degree, x)) << '\n';
    }
}

/// Theory, population dynamics and a finite-graph ensemble for one law. The
/// ensemble uses G(n, c/n) for Poisson laws and the configuration model otherwise.
inline void cmd_report(const RunConfig& cfg, std::ostream& os, const ugw::Workers& workers) {
    const auto dist = ugw::DegreeDistribution::parse(cfg.distribution);
    auto j = detail::envelope(cfg);
    j["theory"] = theory_json(dist);
    ugw::SweepOptions opt;
    opt.pool_size = cfg.pool;
    opt.iterations = cfg.iters;
    opt.alpha_beta_iterations = cfg.ab_iters;
    opt.root_passes = cfg.root_passes;
    opt.seed = cfg.seed;
    const auto sweep = ugw::s_star_sweep(dist, detail::parse_reals(cfg.t_grid, "t"), opt, workers);
    json rows = json::array();
    for (const auto& r : sweep.rows)
        rows.push_back({{"t", r.t}, {"t_times_E", r.t_times_mean}, {"s_star", r.s_star_mean},
                        {"stderr_s_star", r.stderr_s_star}});
    j["sweep"] = {{"trend", ugw::to_string(sweep.trend)}, {"rows", rows}};
    const std::string model_text = std::holds_alternative<ugw::law::Poisson>(dist.kind())
                                       ? "er:" + ugw::detail::format_real(dist.mean())
                                       : dist.to_string();
    j["ensemble"] = ensemble_json(Model::parse(cfg.model.empty() ? model_text : cfg.model), cfg, workers);
    const double gap = std::abs(j["theory"]["atom_mass"].get<double>() - j["ensemble"]["nullity_mean"].get<double>());
    j["comparison"] = {{"atom_minus_nullity", gap}};
    os << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

/// Runs the CLI on `args` (args[0] is the program name). Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral diagnostics for unimodular Galton-Watson trees and sparse random graphs", "spectra"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    RunConfig cfg;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "Random seed (recorded in every output)");
        sub->add_option("--threads", cfg.threads, "Worker threads; never changes results")->check(CLI::Range(1u, 256u));
        sub->add_option("--out", cfg.out, "Output path, or - for stdout");
    };
    const auto add_dist = [&](CLI::App* sub) {
        sub->add_option("--dist", cfg.distribution,
                        "Degree law: poisson:c | dirac:d | geometric:p | negbin:r,p | pmf:k=w,...")
            ->required();
    };
    const auto add_pd = [&](CLI::App* sub, std::size_t default_iters) {
        cfg.iters = default_iters;
        sub->add_option("--pool", cfg.pool, "Population size")->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
        sub->add_option("--iters", cfg.iters, "Population-dynamics generations")->check(CLI::Range(std::size_t{50}, std::size_t{1000000}));
    };
    const auto add_graph = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model, "Graph model: er:c, or a degree law for the configuration model");
        sub->add_option("--dist", cfg.distribution, "Degree law (configuration model) when --model is absent");
        sub->add_option("--n", cfg.n, "Number of vertices")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
        sub->add_flag("--multigraph", cfg.multigraph, "Keep loops and multi-edges of the configuration model");
    };

    auto* classify = app.add_subcommand("classify", "Closed-form classification of a degree law (JSON)");
    add_dist(classify);
    add_common(classify);

    auto* mcurve = app.add_subcommand("mcurve", "M, M' and M'' on a grid over [0, 1] (CSV)");
    add_dist(mcurve);
    mcurve->add_option("--points", cfg.points, "Grid points");
    add_common(mcurve);

    auto* locus = app.add_subcommand("locus", "All solutions q of q = exp(-c exp(-c q)) along a c grid (CSV)");
    locus->add_option("--c-min", cfg.c_min, "Smallest c");
    locus->add_option("--c-max", cfg.c_max, "Largest c");
    locus->add_option("--steps", cfg.steps, "Grid points (c = e is added when in range)");
    add_common(locus);

    auto* sweep = app.add_subcommand("sweep", "Stieltjes transform and s* along a decreasing t grid (CSV)");
    add_dist(sweep);
    sweep->add_option("--t-grid", cfg.t_grid, "Comma-separated decreasing t values, each >= 1e-5");
    add_pd(sweep, 300);
    sweep->add_option("--ab-iters", cfg.ab_iters, "Extended-real generations before the first t");
    sweep->add_option("--root-passes", cfg.root_passes, "Root passes averaged per t");
    add_common(sweep);

    auto* alphabeta = app.add_subcommand("alphabeta", "Category frequencies and heavy-tail diagnostics at t = 0 (JSON)");
    add_dist(alphabeta);
    add_pd(alphabeta, 200);
    alphabeta->add_option("--draws", cfg.draws, "Root draws for the beta* estimate (default: pool size)");
    add_common(alphabeta);

    auto* spectrum = app.add_subcommand("spectrum", "Adjacency eigenvalues of one sampled graph (CSV)");
    add_graph(spectrum);
    add_common(spectrum);

    auto* nullity = app.add_subcommand("nullity", "Nullity and window-mass ensemble (JSON)");
    add_graph(nullity);
    nullity->add_option("--seeds", cfg.seeds, "Number of graphs")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    nullity->add_option("--eps", cfg.eps, "Comma-separated window half-widths (empty: skip spectra)");
    add_common(nullity);

    auto* kmcurve = app.add_subcommand("kmcurve", "Kesten-McKay density and CDF on its support (CSV)");
    kmcurve->add_option("--d", cfg.degree, "Degree d >= 2");
    kmcurve->add_option("--points", cfg.points, "Grid points");
    add_common(kmcurve);

    auto* report = app.add_subcommand("report", "Theory, sweep trend and ensemble comparison in one JSON");
    add_dist(report);
    add_pd(report, 300);
    report->add_option("--t-grid", cfg.t_grid, "Comma-separated decreasing t values");
    report->add_option("--ab-iters", cfg.ab_iters, "Extended-real generations before the first t");
    report->add_option("--root-passes", cfg.root_passes, "Root passes averaged per t");
    report->add_option("--model", cfg.model, "Override the ensemble graph model");
    report->add_option("--n", cfg.n, "Vertices per graph");
    report->add_option("--seeds", cfg.seeds, "Number of graphs");
    report->add_option("--eps", cfg.eps, "Comma-separated window half-widths");
    add_common(report);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const auto* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    if (cfg.subcommand == "classify" || cfg.subcommand == "mcurve" || cfg.subcommand == "locus" ||
        cfg.subcommand == "kmcurve" || cfg.subcommand == "spectrum")
        cfg.iters = 0;
    const ugw::Workers workers(cfg.threads);
    try {
        if ((cfg.subcommand == "spectrum" || cfg.subcommand == "nullity") && cfg.model.empty() && cfg.distribution.empty())
            throw ugw::Error(ugw::ErrorKind::InvalidArgument, "either --model or --dist is required");
        detail::Sink sink(cfg.out, out);
        auto& os = sink.stream();
        detail::logger()->info("running {} (seed {}, threads {})", cfg.subcommand, cfg.seed, cfg.threads);
        if (cfg.subcommand == "classify") cmd_classify(cfg, os);
        else if (cfg.subcommand == "mcurve") cmd_mcurve(cfg, os);
        else if (cfg.subcommand == "locus") cmd_locus(cfg, os);
        else if (cfg.subcommand == "sweep") cmd_sweep(cfg, os, workers);
        else if (cfg.subcommand == "alphabeta") cmd_alphabeta(cfg, os, workers);
        else if (cfg.subcommand == "spectrum") cmd_spectrum(cfg, os);
        else if (cfg.subcommand == "nullity") cmd_nullity(cfg, os, workers);
        else if (cfg.subcommand == "kmcurve") cmd_kmcurve(cfg, os);
        else if (cfg.subcommand == "report") cmd_report(cfg, os, workers);
        os.flush();
        if (!os) throw ugw::Error(ugw::ErrorKind::Io, "failed writing output");
    } catch (const ugw::Error& e) {
        err << "spectra: " << e.what() << "\n";
        return e.numerical() ? kExitNumerical : kExitUsage;
    }
    return kExitOk;
}

}  // namespace spectra
