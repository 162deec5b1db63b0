#include "otfs/experiments.hpp"

#include "otfs/comm_metrics.hpp"
#include "otfs/rng.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

namespace otfs {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kLn2 = 0.6931471805599453;

// Fixed stream tags keeping the independent random streams of one run apart.
constexpr std::uint64_t kTagPilot = 0xA110C;
constexpr std::uint64_t kTagOfdmPilot = 0x0FD0;
constexpr std::uint64_t kTagThroughput = 0x7410;

void parallel_for_index(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    int count = std::min(workers, n);
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

/// Mean of a fixed-width row per trial; summation is sequential in trial
/// order so results do not depend on the worker count.
RVec parallel_rows(int trials, int workers, int width, const std::function<RVec(int)>& fn) {
    std::vector<RVec> rows(static_cast<size_t>(trials));
    parallel_for_index(trials, workers, [&](int t) { rows[static_cast<size_t>(t)] = fn(t); });
    RVec mean = RVec::Zero(width);
    for (const auto& r : rows) mean += r;
    return mean / trials;
}

/// Channel draw shared between OTFS and baselines (identical RNG consumption).
CVec draw_h(std::mt19937_64& rng, const ChannelParams& ch) {
    const int kh = (ch.L + 1) * (ch.Q + 1);
    if (ch.paths <= 0 || ch.paths >= kh) return cscg_vector(rng, kh, ch.sigma_h2);
    return draw_channel(rng, ch.L, ch.Q, ch.sigma_h2, ch.paths).response_vector();
}

CMat lmmse_weight(const CMat& omega_p, double sigma_h2, double sigma_n2) {
    const auto kh = omega_p.cols();
    const double g = sigma_h2 / sigma_n2;
    CMat normal = CMat::Identity(kh, kh) + g * (omega_p.adjoint() * omega_p);
    return g * Eigen::LDLT<CMat>(normal).solve(CMat(omega_p.adjoint()));
}

// Circulant convolution matrix: y_i = sum_l g_l x_{(i-l) mod m}.
CMat circulant_from_taps(const CVec& g, int m) {
    CMat h = CMat::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < g.size(); ++l) h(i, ((i - l) % m + m) % m) += g(l);
    return h;
}

struct OfdmGeometry {
    int m = 0, ncp = 0, slots = 0, slot_len = 0, stride = 0, l_taps = 0;
};

OfdmGeometry ofdm_geometry(const RunSpec& spec, const Arrangement& arr) {
    OfdmGeometry geo;
    geo.m = spec.frame.M;
    geo.ncp = static_cast<int>(
        std::lround(static_cast<double>(spec.frame.n_cp) * spec.frame.M / spec.frame.mn()));
    geo.slots = spec.frame.N;
    geo.slot_len = geo.m + geo.ncp;
    geo.stride = std::max(
        2, static_cast<int>(std::lround(static_cast<double>(arr.k_p() + arr.k_d()) / arr.k_p())));
    geo.l_taps = spec.channel.L + 1;
    if (spec.channel.L > geo.m - 1)
        throw std::invalid_argument("ofdm baseline: delay spread exceeds the OFDM slot length");
    return geo;
}

/// Time-varying tap vector of the shared DD channel at absolute sample n.
CVec taps_at(const CVec& h, const ChannelParams& ch, int n_abs, int mn) {
    CVec g = CVec::Zero(ch.L + 1);
    for (int l = 0; l <= ch.L; ++l)
        for (int k = 0; k <= ch.Q; ++k) {
            double phase = 2.0 * M_PI * static_cast<double>(k) * n_abs / mn;
            g(l) += h(l * (ch.Q + 1) + k) * cd(std::cos(phase), std::sin(phase));
        }
    return g;
}

double ofdm_trial_bound(const CVec& h, const RunSpec& spec, const OfdmGeometry& geo,
                        const std::vector<CVec>& pilot_syms, double p_d, double sigma_n2,
                        std::mt19937_64& rng) {
    const int mn = spec.frame.mn();
    const double sigma_g2 = (spec.channel.Q + 1) * spec.channel.sigma_h2;

    // Static tap estimate from the comb pilot slots (LMMSE, stacked normal form).
    const auto n_pilot = static_cast<Eigen::Index>(pilot_syms.size());
    CMat c_stack(n_pilot * geo.m, geo.l_taps);
    CVec y_stack(n_pilot * geo.m);
    Eigen::Index row = 0;
    int p_idx = 0;
    for (int t = 0; t < geo.slots; ++t) {
        if (t % geo.stride != 0) continue;
        const CVec& p = pilot_syms[static_cast<size_t>(p_idx++)];
        int n_abs = t * geo.slot_len + geo.ncp;
        CMat h_t = circulant_from_taps(taps_at(h, spec.channel, n_abs, mn), geo.m);
        CVec y = h_t * p + cscg_vector(rng, geo.m, sigma_n2);
        for (int i = 0; i < geo.m; ++i)
            for (int l = 0; l < geo.l_taps; ++l)
                c_stack(row + i, l) = p(((i - l) % geo.m + geo.m) % geo.m);
        y_stack.segment(row, geo.m) = y;
        row += geo.m;
    }
    CMat normal = c_stack.adjoint() * c_stack +
                  (sigma_n2 / sigma_g2) * CMat::Identity(geo.l_taps, geo.l_taps);
    CVec g_hat = Eigen::LDLT<CMat>(normal).solve(CVec(c_stack.adjoint() * y_stack));
    CMat h_hat = circulant_from_taps(g_hat, geo.m);

    // Data-slot bound: the true per-slot channel degrades the effective noise.
    double rate = 0.0;
    for (int t = 0; t < geo.slots; ++t) {
        if (t % geo.stride == 0) continue;
        int n_abs = t * geo.slot_len + geo.ncp;
        CMat h_t = circulant_from_taps(taps_at(h, spec.channel, n_abs, mn), geo.m);
        CMat diff = h_t - h_hat;
        CMat c_v = p_d * (diff * diff.adjoint()) + sigma_n2 * CMat::Identity(geo.m, geo.m);
        rate += logdet_hpd(c_v + p_d * (h_hat * h_hat.adjoint())) - logdet_hpd(c_v);
    }
    return rate / (static_cast<double>(geo.slots) * geo.slot_len) / kLn2;
}

/// Resolve the optimizer config: noise from the fixed SNR, auto xi_min, and
/// normalization references bootstrapped from an eta = 1 run if left at 1.
OptimizerConfig resolve_opt(const RunSpec& spec, const Scenario& sc) {
    OptimizerConfig cfg = spec.opt;
    cfg.sigma_h2 = spec.channel.sigma_h2;
    cfg.sigma_n2 = spec.sigma_n2_at(spec.exp.snr_db_fixed, sc.arr);
    if (cfg.xi_min == 0.0) cfg.xi_min = 0.5 * sc.frame.frame_len() * cfg.p_max;
    if (cfg.sinr_ref == 1.0 && cfg.isl_ref == 1.0) {
        OptimizerConfig boot = cfg;
        boot.eta = 1.0;
        boot.init = InitPattern::spike;
        DesignPoint dp0 = make_init(sc.arr, sc.frame, sc.consts, sc.dicts, boot);
        DesignPoint best = run_ao(dp0, sc.consts, sc.dicts, boot).best;
        cfg.sinr_ref = std::max(sinr_relaxed(std::max(best.p_d, 1e-12), best.s1, boot.sigma_n2),
                                1e-12);
        cfg.isl_ref = std::max(expected_isl(best.p_d, best.x_p, sc.consts), 1e-12);
    }
    return cfg;
}

RegionPoint measure_point(double param, const DesignPoint& dp, const Scenario& sc,
                          const OptimizerConfig& cfg, const std::string& label) {
    double sinr = dp.p_d > 0.0 ? sinr_relaxed(dp.p_d, dp.s1, cfg.sigma_n2) : 1e-30;
    double isl = std::max(expected_isl(dp.p_d, dp.x_p, sc.consts), 1e-30);
    return {param, 10.0 * std::log10(sinr), 10.0 * std::log10(isl), label};
}

}  // namespace

Scenario build_scenario(const RunSpec& spec, bool with_sensing) {
    Scenario sc;
    sc.frame = spec.frame;
    sc.arr = build_arrangement(spec.frame, spec.plan);
    sc.dicts = build_dictionaries(sc.arr, spec.frame, spec.channel.L, spec.channel.Q);
    if (with_sensing)
        sc.consts = build_sensing_constants(sc.arr, spec.frame, spec.exp.l_hat, spec.exp.q_hat);
    return sc;
}

int velocity_to_doppler(double v_mps, const FrameConfig& cfg) {
    if (v_mps < 0.0) throw std::invalid_argument("velocity_to_doppler: v must be nonnegative");
    double nu = v_mps * cfg.f_c / kSpeedOfLight;
    long tap = std::lround(nu * cfg.N / cfg.delta_f);
    if (tap > cfg.N / 2)
        std::cerr << "warning: Doppler tap " << tap << " exceeds N/2 = " << cfg.N / 2
                  << " (aliasing)\n";
    return static_cast<int>(tap);
}

double parallel_mean(int trials, int workers, const std::function<double(int)>& fn) {
    if (trials < 1) throw std::invalid_argument("parallel_mean: trials must be >= 1");
    return parallel_rows(trials, workers, 1, [&](int t) {
        RVec r(1);
        r(0) = fn(t);
        return r;
    })(0);
}

CapacityCurve run_capacity_bound(const RunSpec& spec) {
    Scenario sc = build_scenario(spec, false);
    const double e_s = spec.symbol_power(sc.arr);
    const double sigma_h2 = spec.channel.sigma_h2;

    auto rng_pilot = make_rng(spec.exp.seed, kTagPilot);
    CVec x_p = cscg_vector(rng_pilot, sc.arr.k_p(), e_s);
    CMat omega_p = sc.dicts.pilot_dictionary(x_p);

    CapacityCurve curve;
    curve.snr_db = spec.exp.snr_db;
    for (size_t i = 0; i < spec.exp.snr_db.size(); ++i) {
        const double sigma_n2 = spec.sigma_n2_at(spec.exp.snr_db[i], sc.arr);
        CMat w = lmmse_weight(omega_p, sigma_h2, sigma_n2);
        CMat c_eps = lmmse_error_covariance(omega_p, sigma_h2, sigma_n2);
        CMat s_cov = effective_noise_covariance(e_s, sigma_n2, c_eps, sc.dicts);
        double sinr = sinr_metric(e_s, omega_p, sigma_h2, sigma_n2);
        CommMetricInputs in{e_s, sigma_n2, sigma_h2, sc.frame.cp_factor(), sc.frame.mn()};
        const auto rd = sc.dicts.data_blocks[0].rows();

        RVec mean = parallel_rows(spec.exp.trials, spec.exp.workers, 2, [&](int trial) {
            auto rng = make_rng(spec.exp.seed, i + 1, static_cast<std::uint64_t>(trial));
            CVec h = draw_h(rng, spec.channel);
            CVec y_p = omega_p * h + cscg_vector(rng, sc.arr.r_p(), sigma_n2);
            CVec h_hat = w * y_p;
            CMat h_d = estimated_data_channel(h_hat, sc.dicts);
            RVec out(2);
            out(0) = capacity_lb_matrix_given_noise(in, h_d, s_cov) / kLn2;
            CMat arg = CMat::Identity(rd, rd) + sinr * (h_d * h_d.adjoint());
            out(1) = in.f_cp / in.mn * logdet_hpd(arg) / kLn2;
            return out;
        });
        curve.matrix_bits.push_back(mean(0));
        curve.scalar_bits.push_back(mean(1));
    }
    return curve;
}

std::vector<double> run_ofdm_baseline(const RunSpec& spec) {
    Scenario sc = build_scenario(spec, false);
    const double e_s = spec.symbol_power(sc.arr);
    OfdmGeometry geo = ofdm_geometry(spec, sc.arr);

    auto rng_pilot = make_rng(spec.exp.seed, kTagOfdmPilot);
    std::vector<CVec> pilot_syms;
    for (int t = 0; t < geo.slots; ++t)
        if (t % geo.stride == 0) pilot_syms.push_back(cscg_vector(rng_pilot, geo.m, e_s));

    std::vector<double> bits;
    for (size_t i = 0; i < spec.exp.snr_db.size(); ++i) {
        const double sigma_n2 = spec.sigma_n2_at(spec.exp.snr_db[i], sc.arr);
        bits.push_back(parallel_mean(spec.exp.trials, spec.exp.workers, [&](int trial) {
            auto rng = make_rng(spec.exp.seed, i + 1, static_cast<std::uint64_t>(trial));
            CVec h = draw_h(rng, spec.channel);  // identical to the OTFS draw
            return ofdm_trial_bound(h, spec, geo, pilot_syms, e_s, sigma_n2, rng);
        }));
    }
    return bits;
}

VelocityCurve run_capacity_vs_velocity(const RunSpec& spec) {
    VelocityCurve curve;
    curve.velocities = spec.exp.velocities;
    for (size_t i = 0; i < spec.exp.velocities.size(); ++i) {
        RunSpec point = spec;
        point.channel.Q = velocity_to_doppler(spec.exp.velocities[i], spec.frame);
        point.exp.snr_db = {spec.exp.snr_db_fixed};
        // Distinct stream per velocity point, still shared OTFS/OFDM.
        point.exp.seed = derive_seed(spec.exp.seed, 0xCE0 + i, 0);
        curve.doppler_taps.push_back(point.channel.Q);
        curve.otfs_bits.push_back(run_capacity_bound(point).matrix_bits.at(0));
        curve.ofdm_bits.push_back(run_ofdm_baseline(point).at(0));
    }
    return curve;
}

OptimizeOutcome run_optimize(const RunSpec& spec, const Scenario& sc) {
    OptimizeOutcome out;
    out.resolved = resolve_opt(spec, sc);
    DesignPoint dp0 = make_init(sc.arr, sc.frame, sc.consts, sc.dicts, out.resolved);
    out.ao = run_ao(dp0, sc.consts, sc.dicts, out.resolved);
    return out;
}

DesignPoint baseline_design(const RunSpec& spec, const Scenario& sc, InitPattern pattern,
                            double split) {
    OptimizerConfig cfg = spec.opt;
    cfg.sigma_h2 = spec.channel.sigma_h2;
    cfg.sigma_n2 = spec.sigma_n2_at(spec.exp.snr_db_fixed, sc.arr);
    cfg.init = pattern;
    cfg.p0 = split;
    return make_init(sc.arr, sc.frame, sc.consts, sc.dicts, cfg);
}

RegionResult run_region(const RunSpec& spec) {
    Scenario sc = build_scenario(spec);
    RegionResult res;
    OptimizerConfig base = resolve_opt(spec, sc);
    res.sinr_ref = base.sinr_ref;
    res.isl_ref = base.isl_ref;

    std::vector<RegionPoint> optimized(spec.exp.etas.size());
    std::vector<char> valid(spec.exp.etas.size(), 0);
    parallel_for_index(static_cast<int>(spec.exp.etas.size()), spec.exp.workers, [&](int i) {
        OptimizerConfig cfg = base;
        cfg.eta = spec.exp.etas[static_cast<size_t>(i)];
        cfg.init = InitPattern::spike;
        try {
            DesignPoint dp0 = make_init(sc.arr, sc.frame, sc.consts, sc.dicts, cfg);
            DesignPoint best = run_ao(dp0, sc.consts, sc.dicts, cfg).best;
            optimized[static_cast<size_t>(i)] = measure_point(cfg.eta, best, sc, cfg, "optimized");
            valid[static_cast<size_t>(i)] = 1;
        } catch (const std::exception& e) {
            std::cerr << "region: skipping eta = " << cfg.eta << ": " << e.what() << "\n";
        }
    });
    for (size_t i = 0; i < optimized.size(); ++i)
        if (valid[i]) res.points.push_back(optimized[i]);

    for (double split : spec.exp.splits)
        for (InitPattern pattern : {InitPattern::flat, InitPattern::cluster}) {
            try {
                DesignPoint dp = baseline_design(spec, sc, pattern, split);
                res.points.push_back(measure_point(
                    split, dp, sc, base, pattern == InitPattern::flat ? "flat" : "cluster"));
            } catch (const std::exception& e) {
                std::cerr << "region: skipping baseline split = " << split << ": " << e.what()
                          << "\n";
            }
        }

    double opt_best_sinr = -1e300, opt_best_isl = 1e300;
    double clu_best_sinr = -1e300, clu_best_isl = 1e300;
    bool dominated_all = true;
    for (const auto& p : res.points) {
        if (p.label == "optimized") {
            opt_best_sinr = std::max(opt_best_sinr, p.sinr_db);
            opt_best_isl = std::min(opt_best_isl, p.isl_db);
        }
    }
    for (const auto& p : res.points) {
        if (p.label == "optimized") continue;
        if (p.label == "cluster") {
            clu_best_sinr = std::max(clu_best_sinr, p.sinr_db);
            clu_best_isl = std::min(clu_best_isl, p.isl_db);
        }
        bool dominated = false;
        for (const auto& q : res.points)
            if (q.label == "optimized" && q.sinr_db >= p.sinr_db - 1e-9 &&
                q.isl_db <= p.isl_db + 1e-9) {
                dominated = true;
                break;
            }
        dominated_all = dominated_all && dominated;
    }
    res.dominates = dominated_all;
    res.isl_gap_db = clu_best_isl - opt_best_isl;
    res.sinr_gap_db = opt_best_sinr - clu_best_sinr;
    return res;
}

CVec gray_modulate(const std::vector<std::uint8_t>& bits, int bps) {
    if (bps != 2 && bps != 4) throw std::invalid_argument("gray_modulate: bps must be 2 or 4");
    if (bits.size() % static_cast<size_t>(bps) != 0)
        throw std::invalid_argument("gray_modulate: bit count not a multiple of bps");
    const auto n = static_cast<Eigen::Index>(bits.size()) / bps;
    CVec sym(n);
    auto pam4 = [](std::uint8_t b0, std::uint8_t b1) {
        // Gray: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
        double mag = b1 ? 1.0 : 3.0;
        return b0 ? mag : -mag;
    };
    for (Eigen::Index s = 0; s < n; ++s) {
        const auto* b = &bits[static_cast<size_t>(s * bps)];
        if (bps == 2) {
            sym(s) = cd(b[0] ? -1.0 : 1.0, b[1] ? -1.0 : 1.0) / std::sqrt(2.0);
        } else {
            sym(s) = cd(pam4(b[0], b[1]), pam4(b[2], b[3])) / std::sqrt(10.0);
        }
    }
    return sym;
}

std::vector<std::uint8_t> gray_demodulate(const CVec& symbols, int bps) {
    if (bps != 2 && bps != 4) throw std::invalid_argument("gray_demodulate: bps must be 2 or 4");
    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<size_t>(symbols.size()) * static_cast<size_t>(bps));
    for (Eigen::Index s = 0; s < symbols.size(); ++s) {
        double re = symbols(s).real(), im = symbols(s).imag();
        if (bps == 2) {
            bits.push_back(re < 0.0 ? 1 : 0);
            bits.push_back(im < 0.0 ? 1 : 0);
        } else {
            for (double axis : {re, im}) {
                double v = axis * std::sqrt(10.0);
                bits.push_back(v >= 0.0 ? 1 : 0);
                bits.push_back(std::abs(v) < 2.0 ? 1 : 0);
            }
        }
    }
    return bits;
}

int bits_per_symbol(const std::string& modulation) {
    if (modulation == "qpsk" || modulation == "QPSK") return 2;
    if (modulation == "16qam" || modulation == "16QAM") return 4;
    throw std::invalid_argument("unknown modulation: " + modulation);
}

ThroughputCurve run_throughput(const RunSpec& spec, const Scenario& sc, const DesignPoint& dp,
                               int bps) {
    if (dp.p_d <= 0.0) throw std::invalid_argument("run_throughput: design must carry data power");
    const double sigma_h2 = spec.channel.sigma_h2;
    const int kd = sc.arr.k_d();
    const int total_bits = kd * bps;
    CMat omega_p = sc.dicts.pilot_dictionary(dp.x_p);

    ThroughputCurve curve;
    curve.snr_db = spec.exp.snr_db;
    curve.ceiling = kd * bps * sc.frame.delta_f / sc.frame.N;
    for (size_t i = 0; i < spec.exp.snr_db.size(); ++i) {
        const double sigma_n2 = spec.sigma_n2_at(spec.exp.snr_db[i], sc.arr);
        CMat w = lmmse_weight(omega_p, sigma_h2, sigma_n2);
        double ber = parallel_mean(spec.exp.trials, spec.exp.workers, [&](int trial) {
            auto rng = make_rng(spec.exp.seed, kTagThroughput + i, static_cast<std::uint64_t>(trial));
            CVec h = draw_h(rng, spec.channel);
            CMat h_true = estimated_data_channel(h, sc.dicts);  // exact data-block channel
            CVec y_p = omega_p * h + cscg_vector(rng, sc.arr.r_p(), sigma_n2);
            CMat h_hat = estimated_data_channel(CVec(w * y_p), sc.dicts);
            Eigen::LDLT<CMat> eq(h_hat.adjoint() * h_hat +
                                 (sigma_n2 / dp.p_d) * CMat::Identity(kd, kd));
            long errors = 0;
            std::uniform_int_distribution<int> coin(0, 1);
            for (int nt = 0; nt < spec.exp.noise_trials; ++nt) {
                std::vector<std::uint8_t> bits(static_cast<size_t>(total_bits));
                for (auto& b : bits) b = static_cast<std::uint8_t>(coin(rng));
                CVec x = std::sqrt(dp.p_d) * gray_modulate(bits, bps);
                CVec y = h_true * x + cscg_vector(rng, sc.arr.r_d(), sigma_n2);
                CVec x_eq = eq.solve(CVec(h_hat.adjoint() * y)) / std::sqrt(dp.p_d);
                auto decoded = gray_demodulate(x_eq, bps);
                for (size_t b = 0; b < bits.size(); ++b) errors += bits[b] != decoded[b];
            }
            return static_cast<double>(errors) /
                   (static_cast<double>(total_bits) * spec.exp.noise_trials);
        });
        curve.ber.push_back(ber);
        curve.rate.push_back(curve.ceiling * std::pow(1.0 - ber, total_bits));
    }
    return curve;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << std::setprecision(12);
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width does not match header");
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_manifest(const std::string& path, const RunSpec& spec, double wall_seconds) {
    nlohmann::json j;
    j["kind"] = to_string(spec.exp.kind);
    j["seed"] = spec.exp.seed;
    j["trials"] = spec.exp.trials;
    j["workers"] = spec.exp.workers;
    j["config"] = spec.source_text;
    j["wall_seconds"] = wall_seconds;
    j["version"] = "1.0.0";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

void export_power_pattern(const DesignPoint& dp, const Arrangement& arr, const FrameConfig& cfg,
                          const std::string& path) {
    RVec power = RVec::Zero(cfg.mn());
    RVec region = RVec::Zero(cfg.mn());  // 0 guard, 1 pilot, 2 data
    for (int j = 0; j < arr.k_p(); ++j) {
        int idx = arr.pilot_tx_idx[static_cast<size_t>(j)];
        power(idx) = std::norm(dp.x_p(j));
        region(idx) = 1.0;
    }
    for (int idx : arr.data_tx_idx) {
        power(idx) = dp.p_d;
        region(idx) = 2.0;
    }
    std::vector<std::vector<double>> rows;
    for (int idx = 0; idx < cfg.mn(); ++idx)
        rows.push_back({static_cast<double>(idx % cfg.M), static_cast<double>(idx / cfg.M),
                        power(idx), region(idx)});
    write_csv(path, {"delay", "doppler", "power", "region"}, rows);
}

void export_af_csv(const EmpiricalAf& af, const std::string& path) {
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < af.bins.size(); ++i)
        rows.push_back({static_cast<double>(af.bins[i].first),
                        static_cast<double>(af.bins[i].second), af.mean_sq[i]});
    write_csv(path, {"l", "k", "mean_sq"}, rows);
}

}  // namespace otfs
