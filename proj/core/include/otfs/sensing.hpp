#pragma once

#include "otfs/arrangement.hpp"
#include "otfs/types.hpp"

#include <random>
#include <vector>

namespace otfs {

// Ambiguity-function machinery over the CP-extended transmit frame.
// Delay mismatches use the linear (non-cyclic) shift J_l with J_{-l} = J_l^T;
// Doppler mismatches use D_k = diag(exp(-j 2 pi n k / (MN+N_cp))).

/// Linear down-shift by l (up-shift for negative l) of the given size.
CMat delay_matrix(int l, int size);

/// Unit-modulus diagonal Doppler mismatch matrix.
CMat doppler_matrix(int k, int size);

/// A_lk = (F_N kron I_M) Gamma^H J_l D_k Gamma (F_N^H kron I_M), MN x MN.
CMat build_A_lk(int l, int k, const FrameConfig& cfg);

/// AF sample f_lk = x^H A_lk x for a concrete DD vector.
cd cross_correlation(const CVec& x_dd, int l, int k, const FrameConfig& cfg);

/// Per-bin constants of the closed-form expected ISL, plus the mainlobe
/// matrices. Bin order: l = -L_hat..L_hat (outer), k = -Q_hat..Q_hat, with
/// (0,0) skipped.
struct SensingConstants {
    int l_hat = 0, q_hat = 0;
    std::vector<std::pair<int, int>> bins;
    std::vector<CMat> a_p;      // Phi_p^H A_lk Phi_p, K_p x K_p
    std::vector<double> a_lk;   // Tr(M_d M_d^H), M_d = Phi_d^H A_lk Phi_d
    std::vector<cd> b_lk;       // Tr(M_d)
    std::vector<CMat> b_mat;    // pilot-data interaction kernel, K_p x K_p, Hermitian PSD
    CMat g_p;                   // Phi_p^H B^H B Phi_p (mainlobe, pilots)
    double g_d = 0.0;           // Tr(Phi_d^H B^H B Phi_d) (mainlobe, data)
    int frame_len = 0;          // MN + N_cp
    int k_p = 0, k_d = 0;

    int bin_count() const { return static_cast<int>(bins.size()); }
};

SensingConstants build_sensing_constants(const Arrangement& arr, const FrameConfig& cfg,
                                         int l_hat, int q_hat);

/// Analytic E[sum_bins |f_lk|^2] over CSCG data with per-symbol power p_d.
double expected_isl(double p_d, const CVec& x_p, const SensingConstants& consts);

/// Expected AF mainlobe f00_bar = p_d * g_d + x_p^H G_p x_p.
double expected_mainlobe(double p_d, const CVec& x_p, const SensingConstants& consts);

/// Emitted power f00_bar / (MN + N_cp).
double transmit_power(double p_d, const CVec& x_p, const SensingConstants& consts);

/// Decomposition of the expected ISL as a polynomial in p_d for a fixed
/// pilot: isl(p_d) = c1*p_d^2 + c2*p_d + c3 (feeds the data-power subproblem).
struct IslPolynomial {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
};
IslPolynomial isl_polynomial(const CVec& x_p, const SensingConstants& consts);

struct EmpiricalAf {
    std::vector<std::pair<int, int>> bins;  // includes (0,0)
    std::vector<double> mean_sq;            // per-bin average |f_lk|^2
};

/// Monte Carlo AF over random CSCG data draws at power p_d.
EmpiricalAf empirical_af(const CVec& x_p, double p_d, const Arrangement& arr,
                         const FrameConfig& cfg, int l_hat, int q_hat, std::mt19937_64& rng,
                         int trials);

}  // namespace otfs
