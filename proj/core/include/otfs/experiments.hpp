#pragma once

#include "otfs/config.hpp"
#include "otfs/optimizer.hpp"
#include "otfs/sensing.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace otfs {

/// Everything derived from a RunSpec that experiments share.
struct Scenario {
    FrameConfig frame;
    Arrangement arr;
    Dictionaries dicts;
    SensingConstants consts;
};
Scenario build_scenario(const RunSpec& spec, bool with_sensing = true);

/// Nearest integer DD Doppler tap for a radial velocity [m/s]:
/// nu = v f_c / c, tap = round(nu * N * T).
int velocity_to_doppler(double v_mps, const FrameConfig& cfg);

/// Deterministic parallel Monte Carlo: fn(trial) evaluated for
/// trial = 0..trials-1 on `workers` threads, averaged in trial order so the
/// result is bit-identical for any worker count.
double parallel_mean(int trials, int workers, const std::function<double(int)>& fn);

// ---------------------------------------------------------------- capacity

struct CapacityCurve {
    std::vector<double> snr_db;
    std::vector<double> matrix_bits;  // mean matrix bound [bits / time sample]
    std::vector<double> scalar_bits;  // mean scalar bound [bits / time sample]
};

/// Monte Carlo capacity lower bound vs SNR for one fixed Gaussian pilot.
CapacityCurve run_capacity_bound(const RunSpec& spec);

/// OFDM baseline on the same channel realizations (shared seeds): per-slot
/// frames, comb pilot slots, static LMMSE tap estimate, true time-varying
/// channel folded into the effective noise. Returns bits per time sample
/// aligned with spec.exp.snr_db.
std::vector<double> run_ofdm_baseline(const RunSpec& spec);

struct VelocityCurve {
    std::vector<double> velocities;
    std::vector<int> doppler_taps;
    std::vector<double> otfs_bits, ofdm_bits;
};
/// Both bounds at spec.exp.snr_db_fixed while the channel Doppler extent
/// follows each velocity.
VelocityCurve run_capacity_vs_velocity(const RunSpec& spec);

// ------------------------------------------------------------------ region

struct RegionPoint {
    double param = 0.0;  // eta (optimized) or power split (baselines)
    double sinr_db = 0.0;
    double isl_db = 0.0;
    std::string label;   // optimized | flat | cluster
};

struct RegionResult {
    std::vector<RegionPoint> points;
    double sinr_ref = 1.0, isl_ref = 1.0;  // normalization used by the optimizer
    double isl_gap_db = 0.0;               // cluster best ISL minus optimized best ISL
    double sinr_gap_db = 0.0;              // optimized best SINR minus cluster best SINR
    bool dominates = false;                // every baseline point Pareto-dominated
};

/// Fills in normalization references from a preliminary eta = 1 run when the
/// spec leaves them at 1.0, then sweeps eta (optimized) and power splits
/// (flat/cluster baselines). A zero xi_min is replaced by half the mainlobe
/// attainable at full power so every point keeps a finite SINR.
RegionResult run_region(const RunSpec& spec);

/// Single optimization run (spike init unless configured otherwise) with
/// normalization bootstrapped as in run_region.
struct OptimizeOutcome {
    AoResult ao;
    OptimizerConfig resolved;  // config actually used (refs, xi_min, sigma_n2)
};
OptimizeOutcome run_optimize(const RunSpec& spec, const Scenario& sc);

/// Baseline (unoptimized) design for a given pattern and power split.
DesignPoint baseline_design(const RunSpec& spec, const Scenario& sc, InitPattern pattern,
                            double split);

// -------------------------------------------------------------- throughput

/// Gray-coded modulation helpers; bps = 2 (QPSK) or 4 (16QAM), unit average
/// symbol power.
CVec gray_modulate(const std::vector<std::uint8_t>& bits, int bps);
std::vector<std::uint8_t> gray_demodulate(const CVec& symbols, int bps);
int bits_per_symbol(const std::string& modulation);

struct ThroughputCurve {
    std::vector<double> snr_db;
    std::vector<double> ber;
    std::vector<double> rate;  // R(gamma) [bits/s]
    double ceiling = 0.0;      // K_d log2(M_order) delta_f / N
};

/// Frame-level throughput R = (K_d b df / N)(1 - BER)^(K_d b) with LMMSE
/// channel estimation and LMMSE equalization + hard demapping.
ThroughputCurve run_throughput(const RunSpec& spec, const Scenario& sc, const DesignPoint& dp,
                               int bps);

// ---------------------------------------------------------------- exports

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_manifest(const std::string& path, const RunSpec& spec, double wall_seconds);

/// Per-cell expected DD power (|x_p|^2 on pilots, p_d on data, 0 on guard).
void export_power_pattern(const DesignPoint& dp, const Arrangement& arr, const FrameConfig& cfg,
                          const std::string& path);

void export_af_csv(const EmpiricalAf& af, const std::string& path);

}  // namespace otfs
