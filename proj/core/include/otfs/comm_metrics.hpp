#pragma once

#include "otfs/channel.hpp"
#include "otfs/types.hpp"

namespace otfs {

/// LMMSE channel estimate with its closed-form error covariance.
struct LmmseResult {
    CVec h_hat;  // K_h
    CMat c_eps;  // K_h x K_h Hermitian PSD, sigma_h2 (I + (sigma_h2/sigma_n2) Omega^H Omega)^{-1}
    CMat w;      // K_h x R_p weighting matrix
};

LmmseResult lmmse_estimate(const CVec& y_p, const CMat& omega_p, double sigma_h2, double sigma_n2);

/// Error covariance alone (pilot design metric; no observation needed).
CMat lmmse_error_covariance(const CMat& omega_p, double sigma_h2, double sigma_n2);

/// Dual form of the LMMSE weighting via the Woodbury identity
/// (test hook: must agree with LmmseResult::w to machine-level tolerance).
CMat lmmse_weight_dual(const CMat& omega_p, double sigma_h2, double sigma_n2);

struct CommMetricInputs {
    double p_d = 1.0;
    double sigma_n2 = 1.0;
    double sigma_h2 = 0.5;
    double f_cp = 1.0;
    int mn = 0;
};

/// Estimated data-block channel sum_t h_hat(t) * data_blocks[t] (R_d x K_d).
CMat estimated_data_channel(const CVec& h_hat, const Dictionaries& dicts);

/// Single-realization term of the matrix capacity lower bound [nats/channel use]:
/// (f_cp/MN) log det(I + M_OTFS Hd Hd^H) with the exact effective-noise
/// covariance built from c_eps.
double capacity_lb_matrix(const CommMetricInputs& in, const CMat& h_d_hat, const CMat& c_eps,
                          const Dictionaries& dicts);

/// Looser scalar-SINR bound of the same realization [nats/channel use].
double capacity_lb_scalar(const CommMetricInputs& in, const CMat& h_d_hat, const CMat& omega_p);

/// Effective-noise covariance p_d * Omega~_d (C_eps kron I) Omega~_d^H + sigma_n2 I.
CMat effective_noise_covariance(double p_d, double sigma_n2, const CMat& c_eps,
                                const Dictionaries& dicts);

/// Same bound with a caller-precomputed effective-noise covariance (Monte
/// Carlo fast path: the covariance is trial-invariant for a fixed pilot).
double capacity_lb_matrix_given_noise(const CommMetricInputs& in, const CMat& h_d_hat,
                                      const CMat& s_cov);

/// log det of a Hermitian positive definite matrix (Cholesky; throws if not HPD).
double logdet_hpd(const CMat& a);

/// Scalar SINR folding the estimation-error trace into the interference term.
double sinr_metric(double p_d, const CMat& omega_p, double sigma_h2, double sigma_n2);

/// Relaxed SINR' with auxiliary s1 replacing the error trace.
double sinr_relaxed(double p_d, double s1, double sigma_n2);

/// First-order (tangent) majorizer of SINR' in s1 around s1_ref.
double sinr_sca(double p_d, double s1_ref, double s1, double sigma_n2);

/// Tr(sigma_h2 (I + (sigma_h2/sigma_n2) Omega^H Omega)^{-1}), the tight
/// lower bound for s1 at a given pilot.
double s1_lower_bound(const CMat& omega_p, double sigma_h2, double sigma_n2);

}  // namespace otfs
