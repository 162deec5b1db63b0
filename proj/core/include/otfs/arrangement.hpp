#pragma once

#include "otfs/types.hpp"

#include <string>
#include <vector>

namespace otfs {

/// Index sets placing pilot/data symbols on the DD grid and selecting the
/// pilot/data observation regions at the receiver. Indices address the
/// vectorized M x N grid (delay fastest).
struct Arrangement {
    std::vector<int> pilot_tx_idx;  // columns of Phi_p
    std::vector<int> data_tx_idx;   // columns of Phi_d
    std::vector<int> pilot_rx_idx;  // columns of Psi_p
    std::vector<int> data_rx_idx;   // columns of Psi_d

    int k_p() const { return static_cast<int>(pilot_tx_idx.size()); }
    int k_d() const { return static_cast<int>(data_tx_idx.size()); }
    int r_p() const { return static_cast<int>(pilot_rx_idx.size()); }
    int r_d() const { return static_cast<int>(data_rx_idx.size()); }

    double pilot_ratio() const { return static_cast<double>(k_p()) / (k_p() + k_d()); }
    double guard_ratio(const FrameConfig& cfg) const {
        return static_cast<double>(cfg.mn() - k_p() - k_d()) / cfg.mn();
    }

    void validate(const FrameConfig& cfg) const;
};

/// Rectangular pilot block plus guard margins, mirroring the usual
/// pilot-in-the-middle DD layout. Doppler coordinates wrap modulo N and
/// delay coordinates modulo M (the channel shifts are cyclic on the grid).
struct GuardPlan {
    int delay0 = 0, doppler0 = 0;      // pilot block corner
    int delay_extent = 1, doppler_extent = 1;
    int delay_margin = 0;              // guard width in delay, each side
    int doppler_margin = 0;            // guard width in Doppler, each side
    int data_limit = -1;               // cap on K_d; -1 = fill the remainder
};

/// Lay out pilot, guard and data cells per the plan. The pilot receive
/// region is the pilot block dilated by (delay_margin, doppler_margin);
/// the data receive region is its complement.
Arrangement build_arrangement(const FrameConfig& cfg, const GuardPlan& plan);

struct DecouplingReport {
    bool ok = false;
    double max_leakage = 0.0;
};

/// Check the pilot/data decoupling condition: for every single-path
/// unit-gain channel with delay in [0, L] and Doppler in [0, Q],
/// Psi_p^H H_DD Phi_d and Psi_d^H H_DD Phi_p must both vanish.
DecouplingReport verify_decoupling(const Arrangement& arr, const FrameConfig& cfg, int L, int Q,
                                   double tol = 1e-9);

/// Place `values` at `idx` on an all-zero MN vector.
CVec scatter(const CVec& values, const std::vector<int>& idx, const FrameConfig& cfg);

/// Extract the entries of `x` at `idx`.
CVec gather(const CVec& x, const std::vector<int>& idx);

/// Materialize the 0/1 selection matrix with columns e_idx (oracle/test use).
CMat selection_matrix(const std::vector<int>& idx, int rows);

/// Round-trip with the CLI config: "M N | d0 de dd0 dde | Lm Qm [limit]".
std::string describe(const Arrangement& arr, const FrameConfig& cfg);

}  // namespace otfs
