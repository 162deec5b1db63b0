#include "otfs/modem.hpp"

#include <cmath>

namespace otfs {

CMat dft_matrix(int n) {
    CMat f(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double phase = -2.0 * M_PI * static_cast<double>(r) * c / n;
            f(r, c) = s * cd(std::cos(phase), std::sin(phase));
        }
    return f;
}

CMat cyclic_shift_matrix(int n) {
    CMat p = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) p((j + 1) % n, j) = 1.0;
    return p;
}

CMat doppler_phase_matrix(int n) {
    CMat d = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double phase = 2.0 * M_PI * i / n;
        d(i, i) = cd(std::cos(phase), std::sin(phase));
    }
    return d;
}

CMat cp_matrix(const FrameConfig& cfg) {
    cfg.validate();
    const int mn = cfg.mn();
    CMat g = CMat::Zero(mn + cfg.n_cp, mn);
    for (int i = 0; i < cfg.n_cp; ++i) g(i, mn - cfg.n_cp + i) = 1.0;
    g.bottomRows(mn) = CMat::Identity(mn, mn);
    return g;
}

static void check_grid(const CMat& grid, const FrameConfig& cfg) {
    cfg.validate();
    if (grid.rows() != cfg.M || grid.cols() != cfg.N)
        throw std::invalid_argument("grid dimensions do not match FrameConfig");
}

CMat isfft_to_tf(const CMat& grid, const FrameConfig& cfg) {
    check_grid(grid, cfg);
    return dft_matrix(cfg.M) * grid * dft_matrix(cfg.N).adjoint();
}

CMat sfft_to_dd(const CMat& grid_tf, const FrameConfig& cfg) {
    check_grid(grid_tf, cfg);
    return dft_matrix(cfg.M).adjoint() * grid_tf * dft_matrix(cfg.N);
}

CVec apply_doppler_dft(const CVec& x, const FrameConfig& cfg, bool forward) {
    cfg.validate();
    if (x.size() != cfg.mn()) throw std::invalid_argument("vector length must be M*N");
    // (A kron I_M) vec(X) = vec(X A^T); F_N is symmetric, so A^T = A for
    // the forward map and A^T = conj(F_N) for the adjoint.
    Eigen::Map<const CMat> grid(x.data(), cfg.M, cfg.N);
    CMat f = dft_matrix(cfg.N);
    CMat out = forward ? CMat(grid * f) : CMat(grid * f.conjugate());
    return Eigen::Map<CVec>(out.data(), cfg.mn());
}

CVec dd_to_time(const CVec& x_dd, const FrameConfig& cfg) {
    return apply_doppler_dft(x_dd, cfg, /*forward=*/false);
}

CVec time_to_dd(const CVec& s, const FrameConfig& cfg) {
    return apply_doppler_dft(s, cfg, /*forward=*/true);
}

CVec add_cp(const CVec& s, const FrameConfig& cfg) {
    cfg.validate();
    if (s.size() != cfg.mn()) throw std::invalid_argument("add_cp: length must be M*N");
    CVec out(cfg.frame_len());
    out.head(cfg.n_cp) = s.tail(cfg.n_cp);
    out.tail(cfg.mn()) = s;
    return out;
}

CVec remove_cp(const CVec& s_tilde, const FrameConfig& cfg) {
    cfg.validate();
    if (s_tilde.size() != cfg.frame_len())
        throw std::invalid_argument("remove_cp: length must be M*N + n_cp");
    return s_tilde.tail(cfg.mn());
}

}  // namespace otfs
