#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace otfs {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// OTFS grid geometry and carrier parameters.
///
/// M subcarriers (delay bins), N time slots (Doppler bins), a reduced
/// cyclic prefix of n_cp samples prepended to the MN-sample frame.
struct FrameConfig {
    int M = 8;            // subcarriers / delay bins
    int N = 16;           // time slots / Doppler bins
    int n_cp = 16;        // reduced CP length in samples
    double delta_f = 15e3;  // subcarrier spacing [Hz]
    double f_c = 3.5e9;     // carrier frequency [Hz]

    int mn() const { return M * N; }
    int frame_len() const { return M * N + n_cp; }
    double slot_duration() const { return 1.0 / delta_f; }
    double bandwidth() const { return M * delta_f; }
    /// MN / (MN + N_cp), the rate loss from the CP.
    double cp_factor() const { return static_cast<double>(mn()) / frame_len(); }

    void validate() const {
        if (M < 1 || N < 1) throw std::invalid_argument("FrameConfig: M and N must be >= 1");
        if (n_cp < 0 || n_cp >= mn()) throw std::invalid_argument("FrameConfig: need 0 <= n_cp < M*N");
        if (delta_f <= 0.0) throw std::invalid_argument("FrameConfig: delta_f must be positive");
    }
};

/// Unitary DFT matrix, [F]_{m,n} = exp(-j 2 pi m n / n) / sqrt(n).
CMat dft_matrix(int n);

/// Cyclic down-shift of size n (ones on the subdiagonal plus top-right corner).
CMat cyclic_shift_matrix(int n);

/// diag(1, w, w^2, ...) with w = exp(j 2 pi / n).
CMat doppler_phase_matrix(int n);

/// CP insertion matrix, (MN + n_cp) x MN.
CMat cp_matrix(const FrameConfig& cfg);

}  // namespace otfs
