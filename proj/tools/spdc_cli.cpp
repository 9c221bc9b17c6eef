// spdc: figures of merit and design optimization for a collinear
// Gaussian-beam photon-pair source. Every dimensional subcommand reads a
// `key = value` source description (see reference.toml); `figures`
// regenerates the dimensionless CSV figure data. Exit codes: 0 success,
// 1 invalid input, 2 numerical failure, 64 usage error.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spdc/collection.hpp"
#include "spdc/io.hpp"
#include "spdc/model.hpp"
#include "spdc/overlap.hpp"
#include "spdc/pareto.hpp"
#include "spdc/purity.hpp"
#include "spdc/spectral.hpp"

namespace {

using namespace spdc;

void print_kv(const std::string& key, double v) {
    std::cout << key << " = " << format_g9(v) << '\n';
}

void print_warnings(const std::vector<Warning>& ws) {
    for (Warning w : ws) std::cout << "warning: " << describe(w) << '\n';
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        xs[k] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    return xs;
}

// ---------------------------------------------------------------- peak ----

void cmd_peak(const PhysicalSource& src) {
    const FPeak pk = global_F_peak();
    print_kv("xi_star", pk.xi_star);
    print_kv("phi_star_over_pi", pk.phi_star / pi);
    print_kv("absF_max", pk.f_star);
    const double amp = max_spectral_amplitude(src);
    print_kv("max_spectral_amplitude", amp);
    print_kv("peak_spectral_density", amp * amp);
    if (src.N_p > 0.0) print_kv("peak_density_per_pump_photon", amp * amp / src.N_p);
    print_warnings(validate_typicality(src));
}

// ----------------------------------------------------------- bandwidth ----

void cmd_bandwidth(const PhysicalSource& src) {
    const BandwidthReport rep = photon_bandwidth(src);
    print_kv("delta_phi", rep.delta_phi);
    print_kv("heuristic_phi", rep.heuristic_phi);
    print_kv("delta_omega", rep.delta_omega);
    print_kv("delta_omega_over_2pi", rep.delta_omega / two_pi);
    print_kv("confocal_b", rep.confocal_b);
    print_warnings(rep.warnings);
}

// --------------------------------------------------------------- pairs ----

void cmd_pairs(const PhysicalSource& src, bool exact) {
    const DimensionlessConfig cfg = reduce(src);
    const CollectionReport rep = pair_probability(cfg, &src);
    print_kv("p_si_rel", rep.p_si_rel);
    print_kv("p_si_rel_over_max", rep.p_si_rel / (pi / 8.0));
    print_kv("p_si", rep.p_si);
    print_kv("p_si_bound", rep.p_si_bound);
    if (src.N_p > 0.0) print_kv("pairs_per_pump_photon", rep.p_si / src.N_p);
    if (exact) {
        const double c = aux_params(cfg).c_param;
        const double p_exact = pair_probability_exact(cfg, c);
        print_kv("c_param", c);
        print_kv("p_si_rel_exact", p_exact);
        print_kv("approx_rel_error", std::abs(1.0 - rep.p_si_rel / p_exact));
    }
}

// ----------------------------------------------------------- heralding ----

void cmd_heralding(const PhysicalSource& src) {
    const CollectionReport rep = heralding_ratios(reduce(src));
    print_kv("eta_s", rep.eta_s);
    print_kv("eta_i", rep.eta_i);
    print_kv("eta_si", rep.eta_si);
    print_kv("p_s_rel", rep.p_s_rel);
    print_kv("p_i_rel", rep.p_i_rel);
    print_kv("p_si_rel", rep.p_si_rel);
}

// -------------------------------------------------------------- purity ----

void cmd_purity(const PhysicalSource& src, bool theta_given, double theta_deg, double xi_min,
                double xi_max, int xi_steps, int grid) {
    if (!(xi_min > 0.0) || !(xi_max >= xi_min))
        throw ValidationError("purity: require 0 < --xi-min <= --xi-max");
    if (xi_steps < 1) throw ValidationError("purity: --xi-steps must be >= 1");
    const double theta = theta_given ? theta_deg * pi / 180.0 : reduce(src).theta;
    const std::vector<double> xis = log_spaced(xi_min, xi_max, xi_steps);
    const std::vector<PurityPoint> curve = purity_curve(theta, xis, grid);
    std::cout << "xi,bw_star,purity,at_edge\n";
    for (const PurityPoint& p : curve)
        std::cout << format_g9(p.xi) << ',' << format_g9(p.bw_star) << ','
                  << format_g9(p.purity_star) << ',' << (p.at_edge ? 1 : 0) << '\n';
}

// -------------------------------------------------------------- pareto ----

void cmd_pareto(const PhysicalSource& src, const std::string& metric_name, int points) {
    const DimensionlessConfig cfg = reduce(src);
    double a = cfg.ks_over_kp, b = cfg.ki_over_kp;
    if (const double sum = a + b; std::abs(sum - 1.0) > 1e-9) {
        std::cerr << "note: frontier assumes a negligible collinear mismatch; dropping "
                  << "dk/k_p = " << format_g9(cfg.dk_over_kp)
                  << " and renormalizing the wavenumber ratios\n";
        a /= sum;
        b /= sum;
    }
    const Metric metric = metric_name == "signal" ? Metric::signal : Metric::symmetric;
    const std::vector<ParetoPoint> pts = frontier(metric, a, b, points);
    std::cout << "metric,xi_p,xi_s,xi_i,p_si_rel,eta\n";
    for (const ParetoPoint& p : pts)
        std::cout << metric_name << ',' << format_g9(p.xi_p) << ',' << format_g9(p.xi_s) << ','
                  << format_g9(p.xi_i) << ',' << format_g9(p.p_si_rel) << ','
                  << format_g9(p.eta) << '\n';
}

// ------------------------------------------------------------- figures ----

// |F| line cuts against phi for a spread of focal parameters, each window
// centered on its own peak and wide enough to show the first side lobes.
void fig1(const std::filesystem::path& dir) {
    std::vector<std::vector<std::string>> rows;
    for (double xi : {0.1, 1.0, 2.84, 10.0, 100.0}) {
        const double pk = f_peak_phi(xi).first;
        const double w = phi_bandwidth(xi);
        const int n = 601;
        const double lo = pk - 1.5 * w, h = 3.0 * w / (n - 1);
        const std::vector<double> vals = f_dense_samples(xi, 0.0, lo, h, n);
        for (int k = 0; k < n; ++k)
            rows.push_back({format_g9(xi), format_g9(lo + k * h), format_g9(std::abs(vals[k]))});
    }
    write_csv(dir / "fig1.csv", "xi,phi [rad],absF", rows);
}

// Peak joint spectral density relative to the global optimum over the
// (pump, signal = idler) focusing plane.
void fig2(const std::filesystem::path& dir) {
    const std::vector<double> grid = log_spaced(0.1, 100.0, 33);
    std::vector<std::vector<std::string>> rows;
    for (double xp : grid)
        for (double xs : grid)
            rows.push_back({format_g9(xp), format_g9(xs),
                            format_g9(relative_peak_density(xp, xs))});
    write_csv(dir / "fig2.csv", "xi_p,xi_s,rel_density", rows);
}

// Exact phase-mismatch FWHM of |F|^2 against the wide-band heuristic.
void fig3(const std::filesystem::path& dir) {
    std::vector<std::vector<std::string>> rows;
    for (double xi : log_spaced(0.05, 100.0, 25))
        rows.push_back({format_g9(xi), format_g9(phi_bandwidth(xi)),
                        format_g9(two_pi * std::max(1.0, xi / 10.0))});
    write_csv(dir / "fig3.csv", "xi,delta_phi [rad],heuristic [rad]", rows);
}

// Closed-form collection probability against the exact-residual value at the
// worst typical quadratic mismatch, both in units of the asymptotic maximum.
void fig4(const std::filesystem::path& dir) {
    const double c = worst_case_c();
    std::vector<std::vector<std::string>> rows;
    for (double xi : log_spaced(0.1, 100.0, 13)) {
        DimensionlessConfig cfg;
        cfg.xi_p = cfg.xi_s = cfg.xi_i = xi;
        const double approx = pair_probability(cfg).p_si_rel;
        const double exact = pair_probability_exact(cfg, c);
        rows.push_back({format_g9(xi), format_g9(approx / (pi / 8.0)),
                        format_g9(exact / (pi / 8.0))});
    }
    write_csv(dir / "fig4.csv", "xi,p_rel_approx,p_rel_exact_worstcase", rows);
}

// Relative pair-collection probability over the same focusing plane.
void fig5(const std::filesystem::path& dir) {
    const std::vector<double> grid = log_spaced(0.03, 30.0, 41);
    std::vector<std::vector<std::string>> rows;
    for (double xp : grid)
        for (double xs : grid) {
            DimensionlessConfig cfg;
            cfg.xi_p = xp;
            cfg.xi_s = cfg.xi_i = xs;
            rows.push_back({format_g9(xp), format_g9(xs),
                            format_g9(pair_probability(cfg).p_si_rel)});
        }
    write_csv(dir / "fig5.csv", "xi_p,xi_s,p_si_rel", rows);
}

// Bandwidth-optimized purity across focusing at several group-velocity
// angles (256-point grids; the purity subcommand exposes finer control).
void fig6(const std::filesystem::path& dir) {
    const std::vector<double> xis = log_spaced(0.5, 6.0, 11);
    std::vector<std::vector<std::string>> rows;
    for (double th_deg : {-5.0, 0.0, 15.0, 30.0, 45.0}) {
        const std::vector<PurityPoint> curve = purity_curve(th_deg * pi / 180.0, xis, 256);
        for (const PurityPoint& p : curve)
            rows.push_back({format_g9(th_deg), format_g9(p.xi), format_g9(p.purity_star),
                            format_g9(p.bw_star)});
    }
    write_csv(dir / "fig6.csv", "theta_deg,xi,purity,bw_star [pump_bw/|Omega|]", rows);
}

// Both brightness-heralding frontiers at degenerate wavenumber ratios.
void fig7(const std::filesystem::path& dir) {
    std::vector<std::vector<std::string>> rows;
    for (Metric metric : {Metric::signal, Metric::symmetric}) {
        const char* name = metric == Metric::signal ? "signal" : "symmetric";
        for (const ParetoPoint& p : frontier(metric, 0.5, 0.5, 50))
            rows.push_back({name, format_g9(p.xi_p), format_g9(p.xi_s), format_g9(p.xi_i),
                            format_g9(p.p_si_rel), format_g9(p.eta)});
    }
    write_csv(dir / "fig7.csv", "metric,xi_p,xi_s,xi_i,p_si_rel,eta", rows);
}

void cmd_figures(const std::string& out_dir, const std::vector<std::string>& only) {
    const std::filesystem::path dir = out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw ValidationError("figures: cannot create '" + dir.string() + "': " + ec.message());
    const std::set<std::string> want(only.begin(), only.end());
    const auto selected = [&](const char* name) { return want.empty() || want.count(name) > 0; };
    const struct {
        const char* name;
        void (*make)(const std::filesystem::path&);
    } all[] = {{"fig1", fig1}, {"fig2", fig2}, {"fig3", fig3}, {"fig4", fig4},
               {"fig5", fig5}, {"fig6", fig6}, {"fig7", fig7}};
    for (const auto& fig : all)
        if (selected(fig.name)) {
            fig.make(dir);
            std::cout << "wrote " << (dir / (std::string(fig.name) + ".csv")).string() << '\n';
        }
}

// -------------------------------------------------------------- report ----

void cmd_report(const PhysicalSource& src) {
    const DimensionlessConfig cfg = reduce(src);
    const AuxParams aux = aux_params(cfg);
    print_kv("xi_p", cfg.xi_p);
    print_kv("xi_s", cfg.xi_s);
    print_kv("xi_i", cfg.xi_i);
    print_kv("xi_aggregate", aux.xi_agg);
    print_kv("theta_deg", cfg.theta * 180.0 / pi);
    print_kv("phi0", cfg.phi0);
    print_kv("c_param", aux.c_param);
    print_kv("Omega", cfg.Omega);
    print_kv("pump_bw_scaled", cfg.pump_bw_scaled);

    const double amp = max_spectral_amplitude(src);
    print_kv("max_spectral_amplitude", amp);
    print_kv("peak_spectral_density", amp * amp);
    if (src.N_p > 0.0) print_kv("peak_density_per_pump_photon", amp * amp / src.N_p);

    const BandwidthReport bw = photon_bandwidth(src);
    print_kv("delta_phi", bw.delta_phi);
    print_kv("delta_omega", bw.delta_omega);
    print_kv("confocal_b", bw.confocal_b);

    const CollectionReport rep = pair_probability(cfg, &src);
    print_kv("p_si_rel", rep.p_si_rel);
    print_kv("p_si_rel_over_max", rep.p_si_rel / (pi / 8.0));
    print_kv("p_si", rep.p_si);
    print_kv("p_si_bound", rep.p_si_bound);
    if (src.N_p > 0.0) print_kv("pairs_per_pump_photon", rep.p_si / src.N_p);
    print_kv("eta_s", rep.eta_s);
    print_kv("eta_i", rep.eta_i);
    print_kv("eta_si", rep.eta_si);

    if (cfg.pump_bw_scaled > 0.0)
        print_kv("purity", schmidt(build_jsa(cfg, 256)).purity);

    print_warnings(validate_typicality(src));
    print_warnings(bw.warnings);
}

// ------------------------------------------------------------ dispatch ----

int classify(const Error& e) {
    const bool numerical = dynamic_cast<const NoConvergence*>(&e) != nullptr ||
                           dynamic_cast<const NoBracket*>(&e) != nullptr ||
                           dynamic_cast<const TailNotConverged*>(&e) != nullptr ||
                           dynamic_cast<const SumNotConverged*>(&e) != nullptr ||
                           dynamic_cast<const SingularDenominator*>(&e) != nullptr ||
                           dynamic_cast<const EdgeCriterionUnmet*>(&e) != nullptr;
    return numerical ? 2 : 1;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Figures of merit for a collinear Gaussian-beam photon-pair source"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    const auto add_source_opts = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "source description file (key = value)")
            ->required();
        sub->add_option("--set", sets,
                        "override a config key, e.g. --set L=0.02 (repeatable)");
    };

    CLI::App* peak = app.add_subcommand("peak", "global |F| maximum and the peak "
                                                "joint spectral density of the source");
    add_source_opts(peak);

    CLI::App* bandwidth =
        app.add_subcommand("bandwidth", "phase-mismatch FWHM and photon bandwidth");
    add_source_opts(bandwidth);

    CLI::App* pairs =
        app.add_subcommand("pairs", "pair-collection probability and its hard bound");
    add_source_opts(pairs);
    bool exact = false;
    pairs->add_flag("--exact", exact,
                    "also integrate the exact residual-term kernel and report the "
                    "closed-form approximation error");

    CLI::App* heralding = app.add_subcommand("heralding", "heralding ratios");
    add_source_opts(heralding);

    CLI::App* purity = app.add_subcommand(
        "purity", "bandwidth-optimized spectral purity across focusing (CSV on stdout)");
    add_source_opts(purity);
    double theta_deg = 0.0, xi_min = 0.5, xi_max = 6.0;
    int xi_steps = 11, grid = 256;
    CLI::Option* theta_opt = purity->add_option(
        "--theta", theta_deg, "group-velocity angle [deg]; default: the source's own angle");
    purity->add_option("--xi-min", xi_min, "smallest focal parameter (default 0.5)");
    purity->add_option("--xi-max", xi_max, "largest focal parameter (default 6)");
    purity->add_option("--xi-steps", xi_steps, "number of log-spaced points (default 11)");
    purity->add_option("--grid", grid, "joint-spectrum grid size per axis (default 256)");

    CLI::App* pareto = app.add_subcommand(
        "pareto", "brightness-heralding trade-off frontier (CSV on stdout)");
    add_source_opts(pareto);
    std::string metric = "signal";
    int points = 50;
    pareto->add_option("--metric", metric, "heralding metric to maximize (default signal)")
        ->check(CLI::IsMember({"signal", "symmetric"}));
    pareto->add_option("--points", points, "number of frontier levels (default 50)");

    CLI::App* figures =
        app.add_subcommand("figures", "regenerate fig1.csv ... fig7.csv");
    std::string out_dir = ".";
    std::vector<std::string> only;
    figures->add_option("--out", out_dir, "output directory (default .)");
    figures->add_option("--only", only, "restrict to the named figures (repeatable)")
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}));

    CLI::App* report = app.add_subcommand(
        "report", "every single-point figure of merit plus typicality warnings");
    add_source_opts(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (figures->parsed()) {
            cmd_figures(out_dir, only);
            return 0;
        }
        const PhysicalSource src = load_source(config_path, sets);
        if (peak->parsed()) cmd_peak(src);
        if (bandwidth->parsed()) cmd_bandwidth(src);
        if (pairs->parsed()) cmd_pairs(src, exact);
        if (heralding->parsed()) cmd_heralding(src);
        if (purity->parsed())
            cmd_purity(src, theta_opt->count() > 0, theta_deg, xi_min, xi_max, xi_steps, grid);
        if (pareto->parsed()) cmd_pareto(src, metric, points);
        if (report->parsed()) cmd_report(src);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
