#pragma once

#include "otfs/types.hpp"

namespace otfs {

// Matrix-form OTFS modem chain. The DD grid is M x N (delay along rows,
// Doppler along columns) and vectorization is column-major, so the entry
// at (delay m, Doppler n) sits at index m + M*n of the DD vector.
//
// All transforms here are unitary; dense DFT products are used since the
// target scales keep MN <= 256.

/// DD -> TF: X_TF = F_M * X_DD * F_N^H.
CMat isfft_to_tf(const CMat& grid, const FrameConfig& cfg);

/// TF -> DD: Y_DD = F_M^H * Y_TF * F_N. Inverse of isfft_to_tf.
CMat sfft_to_dd(const CMat& grid_tf, const FrameConfig& cfg);

/// DD vector -> delay-time samples: s = (F_N^H kron I_M) x, rectangular pulses.
CVec dd_to_time(const CVec& x_dd, const FrameConfig& cfg);

/// Delay-time samples -> DD vector: x = (F_N kron I_M) s.
CVec time_to_dd(const CVec& s, const FrameConfig& cfg);

/// Prepend the reduced cyclic prefix (last n_cp samples of s).
CVec add_cp(const CVec& s, const FrameConfig& cfg);

/// Drop the first n_cp samples.
CVec remove_cp(const CVec& s_tilde, const FrameConfig& cfg);

/// Apply (F_N kron I_M) (forward=true) or its adjoint to an MN vector.
/// Shared by the modem and the channel/sensing matrix builders.
CVec apply_doppler_dft(const CVec& x, const FrameConfig& cfg, bool forward);

}  // namespace otfs
