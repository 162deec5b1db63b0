#pragma once

#include "otfs/arrangement.hpp"
#include "otfs/optimizer.hpp"
#include "otfs/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace otfs {

enum class ExperimentKind {
    capacity_vs_snr,
    capacity_vs_velocity,
    optimize_sweep,
    region,
    af_slices,
    throughput,
};
ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ChannelParams {
    int L = 7;
    int Q = 3;
    double sigma_h2 = 0.5;
    int paths = 0;  // 0 = dense (all (L+1)(Q+1) taps)
};

struct ExperimentParams {
    ExperimentKind kind = ExperimentKind::capacity_vs_snr;
    std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30};
    std::vector<double> velocities;       // m/s
    std::vector<double> etas = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> splits = {0.1, 0.3, 0.5, 0.7, 0.9};
    int trials = 100;
    int noise_trials = 100;               // AWGN draws per channel draw (throughput)
    std::uint64_t seed = 1;
    int l_hat = 7;
    int q_hat = 5;
    int af_trials = 10000;
    std::string modulation = "qpsk";      // qpsk | 16qam
    int workers = 1;
    double snr_db_fixed = 30.0;           // velocity sweeps run at one SNR
};

/// One fully parsed run description (all config sections).
struct RunSpec {
    FrameConfig frame;
    ChannelParams channel;
    GuardPlan plan;
    OptimizerConfig opt;
    ExperimentParams exp;
    std::string source_text;  // raw config echo for the run manifest

    /// Per-symbol energy when the budget P_max is spread over all K_p + K_d
    /// occupied cells of the CP-extended frame.
    double symbol_power(const Arrangement& arr) const;
    double sigma_n2_at(double snr_db, const Arrangement& arr) const;
};

/// Parse the INI-style config text. Sections: [frame], [channel],
/// [arrangement], [optimizer], [experiment]. Unknown sections or keys are
/// rejected; missing keys keep their defaults.
RunSpec parse_config_text(const std::string& text);
RunSpec parse_config_file(const std::string& path);

}  // namespace otfs
