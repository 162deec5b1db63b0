#pragma once

#include "otfs/channel.hpp"
#include "otfs/comm_metrics.hpp"
#include "otfs/qp.hpp"
#include "otfs/sensing.hpp"

#include <string>
#include <vector>

namespace otfs {

enum class InitPattern { spike, flat, cluster };
InitPattern parse_init_pattern(const std::string& name);

struct OptimizerConfig {
    double eta = 0.5;          // trade-off weight, in [0, 1]
    double rho = 1.0;          // ADMM consensus penalty
    double zeta = 1.0;         // slack (A) penalty
    double eps1 = 1e-3;        // ADMM consensus tolerance (relative)
    double eps2 = 1e-4;        // AO relative-objective tolerance
    int max_ao_iters = 50;
    int max_admm_iters = 200;
    double p_max = 1.0;        // average transmit power budget
    double xi_min = 0.0;       // mainlobe floor
    double sinr_ref = 1.0;     // normalization references for the objective
    double isl_ref = 1.0;
    InitPattern init = InitPattern::spike;
    double p0 = 0.5;           // pilot share of the power budget at init
    double sigma_h2 = 0.5;
    double sigma_n2 = 1.0;

    void validate() const;
};

struct DesignPoint {
    double p_d = 0.0;
    CVec x_p;
    double s1 = 1.0;
};

struct AdmmState {
    CVec x1, x2;
    CMat a;    // K_h x K_h slack matrix
    CVec d;    // dual/step vector
    double s1 = 1.0;
    int m = 0;  // iteration counter
};

/// Quantities fixed for a given (arrangement, channel-extent) pair that the
/// ADMM subproblem assembly reuses across iterations.
struct PilotContext {
    CMat t_full;   // Omega~_p^H Omega~_p, (K_h K_p) x (K_h K_p)
    CMat b_sum;    // sum over bins of the pilot-data interaction kernels
    CMat c_sum;    // sum over bins of conj(b_lk) A_p,lk
    int k_h = 0, k_p = 0;
};
PilotContext build_pilot_context(const SensingConstants& consts, const Dictionaries& dicts);

/// Normalized scalarized objective eta*SINR'/SINR_ref - (1-eta)*ISL/ISL_ref.
double design_objective(const DesignPoint& dp, const SensingConstants& consts,
                        const OptimizerConfig& cfg);

/// Data-power subproblem: 1-D concave maximization over the feasible power
/// interval implied by the budget and mainlobe constraints.
double solve_p_d(const CVec& x_p, double s1, const SensingConstants& consts,
                 const OptimizerConfig& cfg);

/// One ADMM-SCA cycle: s1 elimination, x1-QP, x2-QP, A-update, d-update.
void admm_sca_step(double p_d, AdmmState& state, const SensingConstants& consts,
                   const PilotContext& ctx, const OptimizerConfig& cfg);

/// Full pilot subproblem: cycles admm_sca_step until the consensus residual
/// ||x1 - x2|| <= eps1 ||x1|| or the iteration cap; the consensus pilot is
/// (x1 + x2)/2.
AdmmState solve_pilot(double p_d, const DesignPoint& start, const SensingConstants& consts,
                      const PilotContext& ctx, const OptimizerConfig& cfg);

struct TraceRow {
    int iteration = 0;
    double objective = 0.0;
    double sinr = 0.0;
    double isl = 0.0;
    double power_residual = 0.0;     // transmit_power - P_max (<= 0 when feasible)
    double mainlobe_residual = 0.0;  // xi_min - mainlobe (<= 0 when feasible)
};

struct AoResult {
    DesignPoint best;
    std::vector<TraceRow> trace;
    int iterations = 0;
    bool converged = false;
};

/// Alternating optimization over (p_d) and (x_p, s1); monotone by
/// construction with a safeguard that rejects non-improving pilot updates.
AoResult run_ao(const DesignPoint& init, const SensingConstants& consts, const Dictionaries& dicts,
                const OptimizerConfig& cfg);

/// Initial design: pilot shaped per pattern carrying fraction p0 of the power
/// budget, data power making the total transmit power exactly P_max, s1 at
/// its exact lower bound.
DesignPoint make_init(const Arrangement& arr, const FrameConfig& frame,
                      const SensingConstants& consts, const Dictionaries& dicts,
                      const OptimizerConfig& cfg);

/// Remove the global phase (largest-magnitude entry made real-positive); all
/// reported metrics are phase-invariant, so this is purely cosmetic.
CVec canonicalize(const CVec& x_p);

/// Fraction of pilot energy on the single strongest DD cell.
double peak_energy_fraction(const CVec& x_p);

/// Throws std::runtime_error naming the first violated DesignPoint constraint.
void check_feasible(const DesignPoint& dp, const SensingConstants& consts,
                    const OptimizerConfig& cfg, double tol = 1e-6);

}  // namespace otfs
