#include <otfs/experiments.hpp>
#include <otfs/rng.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

using namespace otfs;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int trials = 0;
    int workers = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override the base seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--trials", args.trials, "override the trial count");
    cmd->add_option("--workers", args.workers, "worker threads");
}

RunSpec load_spec(const CommonArgs& args) {
    RunSpec spec = parse_config_file(args.config_path);
    if (args.seed_set) spec.exp.seed = args.seed;
    if (args.trials > 0) spec.exp.trials = args.trials;
    if (args.workers > 0) spec.exp.workers = args.workers;
    std::filesystem::create_directories(args.out_dir);
    return spec;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    return (std::filesystem::path(args.out_dir) / name).string();
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int run_capacity(const CommonArgs& args) {
    RunSpec spec = load_spec(args);
    Stopwatch timer;
    if (spec.exp.kind == ExperimentKind::capacity_vs_velocity) {
        VelocityCurve curve = run_capacity_vs_velocity(spec);
        std::vector<std::vector<double>> rows;
        for (size_t i = 0; i < curve.velocities.size(); ++i)
            rows.push_back({curve.velocities[i], static_cast<double>(curve.doppler_taps[i]),
                            curve.otfs_bits[i], curve.ofdm_bits[i]});
        write_csv(out_path(args, "capacity_vs_velocity.csv"),
                  {"velocity_mps", "doppler_tap", "otfs_bits_per_sample", "ofdm_bits_per_sample"},
                  rows);
    } else {
        CapacityCurve curve = run_capacity_bound(spec);
        std::vector<double> ofdm = run_ofdm_baseline(spec);
        std::vector<std::vector<double>> rows;
        for (size_t i = 0; i < curve.snr_db.size(); ++i)
            rows.push_back({curve.snr_db[i], curve.matrix_bits[i], curve.scalar_bits[i], ofdm[i]});
        write_csv(out_path(args, "capacity_bound.csv"),
                  {"snr_db", "otfs_matrix_bits_per_sample", "otfs_scalar_bits_per_sample",
                   "ofdm_bits_per_sample"},
                  rows);
    }
    write_manifest(out_path(args, "manifest.json"), spec, timer.seconds());
    return 0;
}

int run_optimize_cmd(const CommonArgs& args) {
    RunSpec spec = load_spec(args);
    Stopwatch timer;
    Scenario sc = build_scenario(spec);
    OptimizeOutcome out = run_optimize(spec, sc);
    std::vector<std::vector<double>> rows;
    for (const auto& r : out.ao.trace)
        rows.push_back({static_cast<double>(r.iteration), r.objective, r.sinr, r.isl,
                        r.power_residual, r.mainlobe_residual});
    write_csv(out_path(args, "trace.csv"),
              {"iteration", "objective", "sinr", "isl", "power_residual", "mainlobe_residual"},
              rows);
    DesignPoint best = out.ao.best;
    best.x_p = canonicalize(best.x_p);
    export_power_pattern(best, sc.arr, sc.frame, out_path(args, "power_pattern.csv"));
    std::cout << "converged=" << out.ao.converged << " iterations=" << out.ao.iterations
              << " p_d=" << best.p_d << " peak_fraction=" << peak_energy_fraction(best.x_p)
              << "\n";
    write_manifest(out_path(args, "manifest.json"), spec, timer.seconds());
    return 0;
}

int run_region_cmd(const CommonArgs& args) {
    RunSpec spec = load_spec(args);
    Stopwatch timer;
    RegionResult res = run_region(spec);
    std::ofstream out(out_path(args, "region.csv"));
    out << std::setprecision(12) << "label,param,sinr_db,isl_db\n";
    for (const auto& p : res.points)
        out << p.label << "," << p.param << "," << p.sinr_db << "," << p.isl_db << "\n";
    std::cout << "dominates=" << res.dominates << " isl_gap_db=" << res.isl_gap_db
              << " sinr_gap_db=" << res.sinr_gap_db << "\n";
    write_manifest(out_path(args, "manifest.json"), spec, timer.seconds());
    return res.dominates ? 0 : 1;
}

int run_af(const CommonArgs& args) {
    RunSpec spec = load_spec(args);
    Stopwatch timer;
    Scenario sc = build_scenario(spec);
    OptimizeOutcome out = run_optimize(spec, sc);
    auto rng = make_rng(spec.exp.seed, 0xAF);
    EmpiricalAf af = empirical_af(out.ao.best.x_p, out.ao.best.p_d, sc.arr, sc.frame,
                                  spec.exp.l_hat, spec.exp.q_hat, rng, spec.exp.af_trials);
    export_af_csv(af, out_path(args, "af.csv"));
    write_manifest(out_path(args, "manifest.json"), spec, timer.seconds());
    return 0;
}

int run_throughput_cmd(const CommonArgs& args) {
    RunSpec spec = load_spec(args);
    Stopwatch timer;
    Scenario sc = build_scenario(spec);
    int bps = bits_per_symbol(spec.exp.modulation);
    OptimizeOutcome opt = run_optimize(spec, sc);

    std::ofstream out(out_path(args, "throughput.csv"));
    out << std::setprecision(12) << "label,snr_db,ber,rate_bps,ceiling_bps\n";
    auto emit = [&](const std::string& label, const DesignPoint& dp) {
        ThroughputCurve curve = run_throughput(spec, sc, dp, bps);
        for (size_t i = 0; i < curve.snr_db.size(); ++i)
            out << label << "," << curve.snr_db[i] << "," << curve.ber[i] << "," << curve.rate[i]
                << "," << curve.ceiling << "\n";
    };
    emit("optimized", opt.ao.best);
    emit("cluster", baseline_design(spec, sc, InitPattern::cluster, spec.opt.p0));
    emit("flat", baseline_design(spec, sc, InitPattern::flat, spec.opt.p0));
    write_manifest(out_path(args, "manifest.json"), spec, timer.seconds());
    return 0;
}

int run_power_pattern(const CommonArgs& args) {
    RunSpec spec = load_spec(args);
    Stopwatch timer;
    Scenario sc = build_scenario(spec);
    OptimizeOutcome out = run_optimize(spec, sc);
    DesignPoint best = out.ao.best;
    best.x_p = canonicalize(best.x_p);
    export_power_pattern(best, sc.arr, sc.frame, out_path(args, "power_pattern.csv"));
    write_manifest(out_path(args, "manifest.json"), spec, timer.seconds());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OTFS dual-function radar-communication signal design toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    int (*handler)(const CommonArgs&) = nullptr;
    auto bind = [&](const char* name, const char* desc, int (*fn)(const CommonArgs&)) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        add_common(cmd, args);
        cmd->callback([&handler, fn]() { handler = fn; });
        return cmd;
    };
    bind("capacity-bound", "Monte Carlo capacity lower bound vs SNR or velocity", run_capacity);
    bind("optimize", "joint pilot/data-power optimization run", run_optimize_cmd);
    bind("region", "ISL-SINR achievable region sweep", run_region_cmd);
    bind("af", "empirical ambiguity function of the optimized design", run_af);
    bind("throughput", "frame-level throughput comparison", run_throughput_cmd);
    bind("power-pattern", "export the optimized DD power pattern", run_power_pattern);

    CLI11_PARSE(app, argc, argv);
    try {
        return handler ? handler(args) : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
