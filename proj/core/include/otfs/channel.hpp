#pragma once

#include "otfs/arrangement.hpp"
#include "otfs/types.hpp"

#include <random>
#include <vector>

namespace otfs {

struct Path {
    cd gain;
    int delay_tap = 0;    // in [0, L]
    int doppler_tap = 0;  // in [0, Q]
};

/// Sparse delay-Doppler channel description. The dense channel response
/// vector h has K_h = (L+1)(Q+1) entries ordered delay-major:
/// tap index = l*(Q+1) + k.
struct ChannelSpec {
    std::vector<Path> paths;
    int L = 0;
    int Q = 0;
    double sigma_h2 = 0.5;  // prior variance per DD coefficient
    double sigma_n2 = 1.0;  // AWGN variance

    int k_h() const { return (L + 1) * (Q + 1); }
    int tap_index(int l, int k) const { return l * (Q + 1) + k; }
    void validate() const;

    /// Dense K_h response vector with the path gains at their tap slots.
    CVec response_vector() const;
};

/// Effective DD channel H_DD = sum_i alpha_i (F_N kron I_M) Pi^l Delta^k (F_N^H kron I_M).
CMat dd_channel_matrix(const ChannelSpec& spec, const FrameConfig& cfg);

/// Apply the single-tap DD channel basis G_{l,k} to a DD vector without
/// forming the MN x MN matrix.
CVec apply_dd_tap(const CVec& x_dd, int l, int k, const FrameConfig& cfg);

/// Draw a P-path channel: tap positions uniform without replacement over
/// the (L+1)(Q+1) grid, gains CSCG with variance sigma_h2. P == K_h gives
/// the dense (all-tap) mode.
ChannelSpec draw_channel(std::mt19937_64& rng, int L, int Q, double sigma_h2, int paths);

struct RxSignal {
    CVec y_dd;  // full MN observation
    CVec y_p;   // gather on Psi_p
    CVec y_d;   // gather on Psi_d
};

/// y_DD = H_DD x_DD + n_DD with n_DD = (F_N kron I_M) n, n ~ CN(0, sigma_n2 I).
RxSignal simulate_rx(const CVec& x_dd, const ChannelSpec& spec, const Arrangement& arr,
                     const FrameConfig& cfg, std::mt19937_64& rng, double sigma_n2);

/// Pilot-independent dictionary blocks. Block t (t = l*(Q+1)+k) of the
/// pilot form is Psi_p^H G_{l,k} Phi_p; of the data form, Psi_d^H G_{l,k} Phi_d.
/// The pilot dictionary for a concrete pilot vector is
/// Omega_p = Omega~_p (I kron x_p), realized by pilot_dictionary().
struct Dictionaries {
    int L = 0, Q = 0;
    std::vector<CMat> pilot_blocks;  // K_h blocks, each R_p x K_p
    std::vector<CMat> data_blocks;   // K_h blocks, each R_d x K_d

    int k_h() const { return (L + 1) * (Q + 1); }

    /// Omega_DD,p for a given pilot vector: column t = pilot_blocks[t] * x_p.
    CMat pilot_dictionary(const CVec& x_p) const;

    /// Dense R_p x (K_h*K_p) extended pilot dictionary (oracle/test use).
    CMat extended_pilot_dictionary() const;
};

Dictionaries build_dictionaries(const Arrangement& arr, const FrameConfig& cfg, int L, int Q);

}  // namespace otfs
