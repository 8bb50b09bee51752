// prizecorr CLI: estimate latent rating/citation correlation from prize
// winner rank descriptors, run the top-M overlap Monte Carlo, and dump
// thresholds. All reports are JSON on stdout; CSV artifacts carry full
// 17-digit precision so downstream plotting does not re-round.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "prizecorr/dataset_io.hpp"
#include "prizecorr/inference.hpp"
#include "prizecorr/kernels.hpp"
#include "prizecorr/simulation.hpp"
#include "prizecorr/version.hpp"

namespace {

using nlohmann::ordered_json;

void print_error(const char* code, const std::string& what) {
    std::cerr << "error[" << code << "]: " << what << "\n";
}

ordered_json dataset_echo(const prizecorr::ParsedDescriptor& parsed,
                          const std::string& path) {
    const auto& ds = parsed.dataset;
    ordered_json j;
    j["path"] = path;
    j["label"] = ds.label;
    j["pool_size"] = ds.pool_size;
    j["winner_count"] = ds.winner_count;
    j["observed_count"] = ds.observed_ranks.size();
    j["censored_count"] = ds.censored_count;
    if (ds.list_cutoff_rank) j["list_cutoff_rank"] = *ds.list_cutoff_rank;
    j["ranks_are_placeholders"] = parsed.ranks_are_placeholders;
    return j;
}

ordered_json thresholds_json(const prizecorr::Thresholds& thr) {
    ordered_json j;
    j["x_c"] = thr.x_c;
    if (thr.y_c)
        j["y_c"] = *thr.y_c;
    else
        j["y_c"] = nullptr;
    j["units"] = "z-score";
    return j;
}

ordered_json estimate_json(const prizecorr::EstimateReport& rep) {
    ordered_json j;
    j["r_hat"] = rep.r_hat;
    j["method"] = prizecorr::method_name(rep.method);
    if (rep.ci_low && rep.ci_high) {
        j["ci_low"] = *rep.ci_low;
        j["ci_high"] = *rep.ci_high;
        j["credible_level"] = *rep.credible_level;
        j["interval_kind"] = "equal-tailed";
    }
    j["at_boundary"] = rep.at_boundary;
    j["noise_prefactor"] = rep.noise_prefactor;
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw prizecorr::data_error("cannot write file: " + path);
    out << content;
}

struct EstimateOpts {
    std::string descriptor;
    std::string method;
    double grid_step = 0.002;
    double credible_level = 0.95;
    std::string out_posterior;
};

int run_estimate(const EstimateOpts& opt) {
    const auto parsed = prizecorr::parse_descriptor(opt.descriptor);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";

    ordered_json report;
    report["tool"] = "prizecorr";
    report["version"] = prizecorr::version;
    report["command"] = "estimate";
    report["dataset"] = dataset_echo(parsed, opt.descriptor);

    prizecorr::EstimateReport rep;
    if (opt.method == "mle") {
        rep = prizecorr::mle(parsed.dataset, opt.grid_step);
    } else if (opt.method == "exceedance") {
        rep = prizecorr::infer_by_exceedance(parsed.dataset);
    } else {  // posterior
        auto [grid, prep] =
            prizecorr::posterior(parsed.dataset, opt.grid_step, opt.credible_level);
        rep = prep;
        if (!opt.out_posterior.empty()) {
            std::string csv = "r,posterior_mass\n";
            for (std::size_t i = 0; i < grid.r_values.size(); ++i) {
                csv += prizecorr::format_g17(grid.r_values[i]);
                csv += ',';
                csv += prizecorr::format_g17(grid.posterior_masses[i]);
                csv += '\n';
            }
            write_file(opt.out_posterior, csv);
            report["posterior_csv"] = opt.out_posterior;
            report["posterior_prior"] = grid.prior_tag;
        }
    }
    report["thresholds"] = thresholds_json(rep.thresholds);
    report["estimate"] = estimate_json(rep);
    report["warnings"] = parsed.warnings;
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_thresholds(const std::string& descriptor) {
    const auto parsed = prizecorr::parse_descriptor(descriptor);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    const auto thr = prizecorr::derive_thresholds(parsed.dataset);

    ordered_json report;
    report["tool"] = "prizecorr";
    report["version"] = prizecorr::version;
    report["command"] = "thresholds";
    report["dataset"] = dataset_echo(parsed, descriptor);
    report["thresholds"] = thresholds_json(thr);
    std::cout << report.dump(2) << "\n";
    return 0;
}

struct SimulateOpts {
    std::uint64_t pool = 0;
    std::uint64_t winners = 0;
    double r = 0.0;
    std::string coupling = "gaussian";
    std::uint64_t reps = 0;
    std::uint64_t seed = 1;
    int threads = 0;
    std::optional<std::uint64_t> observed_overlap;
    std::string scan;  // LO:HI:STEP
    std::string out_hist = "overlap_hist.csv";
    std::string out_scan = "profile_scan.csv";
};

int run_simulate(const SimulateOpts& opt) {
    prizecorr::SimConfig cfg;
    cfg.pool_size = opt.pool;
    cfg.winner_count = opt.winners;
    cfg.r = opt.r;
    cfg.coupling = opt.coupling == "mixture" ? prizecorr::Coupling::mixture
                                             : prizecorr::Coupling::gaussian;
    cfg.replications = opt.reps;
    cfg.seed = opt.seed;

    const auto result = prizecorr::overlap_experiment(cfg, opt.threads);

    std::string csv = "k,count,fraction\n";
    for (std::size_t k = 0; k < result.overlap_histogram.size(); ++k) {
        csv += std::to_string(k);
        csv += ',';
        csv += std::to_string(result.overlap_histogram[k]);
        csv += ',';
        csv += prizecorr::format_g17(static_cast<double>(result.overlap_histogram[k]) /
                                     static_cast<double>(result.replications));
        csv += '\n';
    }
    write_file(opt.out_hist, csv);

    ordered_json report;
    report["tool"] = "prizecorr";
    report["version"] = prizecorr::version;
    report["command"] = "simulate";
    report["config"] = {{"pool_size", cfg.pool_size},
                        {"winner_count", cfg.winner_count},
                        {"r", cfg.r},
                        {"coupling", opt.coupling},
                        {"replications", cfg.replications},
                        {"seed", cfg.seed},
                        {"kernel_isa", prizecorr::kernels::isa_name(
                                           prizecorr::kernels::active_isa())}};
    report["mean_overlap"] = result.mean_overlap;
    report["histogram_csv"] = opt.out_hist;

    if (opt.observed_overlap) {
        const std::uint64_t k = *opt.observed_overlap;
        if (k >= result.overlap_histogram.size())
            throw prizecorr::data_error("--observed-overlap exceeds winner count");
        report["observed_overlap"] = k;
        report["fraction_at_observed"] =
            static_cast<double>(result.overlap_histogram[k]) /
            static_cast<double>(result.replications);
    }

    if (!opt.scan.empty()) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        if (std::sscanf(opt.scan.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
            throw prizecorr::domain_error("--scan expects LO:HI:STEP");
        const auto points = prizecorr::profile_likelihood_scan(
            cfg.pool_size, cfg.winner_count, *opt.observed_overlap, lo, hi, step,
            cfg.replications, cfg.seed, opt.threads);
        std::string scan_csv = "r,fraction_matching\n";
        double best_r = points.front().r;
        double best_f = -1.0;
        for (const auto& pt : points) {
            scan_csv += prizecorr::format_g17(pt.r);
            scan_csv += ',';
            scan_csv += prizecorr::format_g17(pt.fraction_matching);
            scan_csv += '\n';
            if (pt.fraction_matching > best_f) {
                best_f = pt.fraction_matching;
                best_r = pt.r;
            }
        }
        write_file(opt.out_scan, scan_csv);
        report["scan"] = {{"csv", opt.out_scan},
                          {"r_lo", lo},
                          {"r_hi", hi},
                          {"step", step},
                          {"argmax_r", best_r},
                          {"max_fraction", best_f}};
    }

    std::cout << report.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latent correlation between prize-committee ratings and citation ranks"};
    app.set_version_flag("--version", std::string("prizecorr ") + prizecorr::version);
    app.require_subcommand(1);

    EstimateOpts est;
    auto* cmd_est = app.add_subcommand(
        "estimate", "estimate r from a dataset descriptor (mle, posterior, or exceedance)");
    cmd_est->add_option("descriptor", est.descriptor, "descriptor JSON path")->required();
    cmd_est->add_option("--method", est.method, "estimation method")
        ->required()
        ->check(CLI::IsMember({"mle", "posterior", "exceedance"}));
    cmd_est->add_option("--grid-step", est.grid_step, "r grid step (0, 0.01]")
        ->check(CLI::Range(1e-6, 0.01));
    cmd_est->add_option("--credible-level", est.credible_level, "credible level in (0, 1)")
        ->check(CLI::Range(1e-6, 1.0 - 1e-6));
    cmd_est->add_option("--out-posterior", est.out_posterior,
                        "write the posterior grid CSV here (posterior method only)");

    std::string thr_descriptor;
    auto* cmd_thr = app.add_subcommand("thresholds",
                                       "derive z-score thresholds (x_c, y_c) from a descriptor");
    cmd_thr->add_option("descriptor", thr_descriptor, "descriptor JSON path")->required();

    SimulateOpts sim;
    auto* cmd_sim =
        app.add_subcommand("simulate", "top-M overlap Monte Carlo and profile scan");
    cmd_sim->add_option("--pool", sim.pool, "pool size")->required();
    cmd_sim->add_option("--winners", sim.winners, "winner count (= top-M cutoff)")->required();
    cmd_sim->add_option("--r", sim.r, "correlation coefficient")->required();
    cmd_sim->add_option("--coupling", sim.coupling, "coupling kind")
        ->check(CLI::IsMember({"gaussian", "mixture"}));
    cmd_sim->add_option("--reps", sim.reps, "replications (per scan point when scanning)")
        ->required();
    cmd_sim->add_option("--seed", sim.seed, "RNG seed (reports echo it)");
    cmd_sim->add_option("--threads", sim.threads, "worker threads (0 = hardware)");
    auto* obs_opt = cmd_sim->add_option("--observed-overlap", sim.observed_overlap,
                                        "report the fraction of replications at this overlap");
    cmd_sim->add_option("--scan", sim.scan, "profile scan grid LO:HI:STEP")->needs(obs_opt);
    cmd_sim->add_option("--out-hist", sim.out_hist, "overlap histogram CSV path");
    cmd_sim->add_option("--out-scan", sim.out_scan, "profile scan CSV path");

    try {
        app.parse(argc, argv);
        if (*cmd_est) return run_estimate(est);
        if (*cmd_thr) return run_thresholds(thr_descriptor);
        if (*cmd_sim) return run_simulate(sim);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("E_USAGE", e.what());
        return 2;
    } catch (const prizecorr::parse_error& e) {
        print_error(prizecorr::errc_code(e.code()), e.what());
        return 2;
    } catch (const prizecorr::domain_error& e) {
        print_error(prizecorr::errc_code(e.code()), e.what());
        return 2;
    } catch (const prizecorr::data_error& e) {
        print_error(prizecorr::errc_code(e.code()), e.what());
        return 3;
    } catch (const prizecorr::error& e) {
        // convergence, no-solution, estimation failures
        print_error(prizecorr::errc_code(e.code()), e.what());
        return 4;
    } catch (const std::exception& e) {
        print_error("E_INTERNAL", e.what());
        return 4;
    }
}
