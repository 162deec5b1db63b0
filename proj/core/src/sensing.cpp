#include "otfs/sensing.hpp"
#include "otfs/modem.hpp"
#include "otfs/rng.hpp"

#include <cmath>

namespace otfs {

namespace {

constexpr double kImagResidueTol = 1e-9;

double real_checked(cd z, double scale) {
    if (std::abs(z.imag()) > kImagResidueTol * std::max(1.0, scale))
        throw std::runtime_error("sensing: nominally real quadratic form has imaginary residue");
    return z.real();
}

/// Gamma^H applied to a frame-length vector.
CVec cp_adjoint(const CVec& y, const FrameConfig& cfg) {
    const int mn = cfg.mn();
    CVec out = y.tail(mn);
    for (int i = 0; i < cfg.n_cp; ++i) out(mn - cfg.n_cp + i) += y(i);
    return out;
}

/// One column-space application of A_lk.
CVec apply_A_lk(const CVec& x, int l, int k, const FrameConfig& cfg) {
    const int t = cfg.frame_len();
    CVec s = add_cp(dd_to_time(x, cfg), cfg);
    for (int n = 0; n < t; ++n) {
        double phase = -2.0 * M_PI * static_cast<double>(n) * k / t;
        s(n) *= cd(std::cos(phase), std::sin(phase));
    }
    CVec shifted = CVec::Zero(t);
    if (l >= 0) {
        for (int n = l; n < t; ++n) shifted(n) = s(n - l);
    } else {
        for (int n = 0; n < t + l; ++n) shifted(n) = s(n - l);
    }
    return time_to_dd(cp_adjoint(shifted, cfg), cfg);
}

CMat submatrix(const CMat& a, const std::vector<int>& rows, const std::vector<int>& cols) {
    CMat out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < cols.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(rows[r], cols[c]);
    return out;
}

}  // namespace

CMat delay_matrix(int l, int size) {
    if (std::abs(l) >= size) throw std::invalid_argument("delay_matrix: |l| must be < size");
    CMat j = CMat::Zero(size, size);
    for (int n = std::max(0, l); n < std::min(size, size + l); ++n) j(n, n - l) = 1.0;
    return j;
}

CMat doppler_matrix(int k, int size) {
    CMat d = CMat::Zero(size, size);
    for (int n = 0; n < size; ++n) {
        double phase = -2.0 * M_PI * static_cast<double>(n) * k / size;
        d(n, n) = cd(std::cos(phase), std::sin(phase));
    }
    return d;
}

CMat build_A_lk(int l, int k, const FrameConfig& cfg) {
    cfg.validate();
    if (std::abs(l) >= cfg.frame_len()) throw std::invalid_argument("build_A_lk: |l| too large");
    const int mn = cfg.mn();
    CMat a(mn, mn);
    CVec e = CVec::Zero(mn);
    for (int j = 0; j < mn; ++j) {
        e(j) = 1.0;
        a.col(j) = apply_A_lk(e, l, k, cfg);
        e(j) = 0.0;
    }
    return a;
}

cd cross_correlation(const CVec& x_dd, int l, int k, const FrameConfig& cfg) {
    if (x_dd.size() != cfg.mn()) throw std::invalid_argument("cross_correlation: length mismatch");
    return x_dd.dot(apply_A_lk(x_dd, l, k, cfg));
}

SensingConstants build_sensing_constants(const Arrangement& arr, const FrameConfig& cfg,
                                         int l_hat, int q_hat) {
    arr.validate(cfg);
    if (l_hat >= cfg.frame_len()) throw std::invalid_argument("build_sensing_constants: L_hat too large");
    SensingConstants c;
    c.l_hat = l_hat;
    c.q_hat = q_hat;
    c.frame_len = cfg.frame_len();
    c.k_p = arr.k_p();
    c.k_d = arr.k_d();

    for (int l = -l_hat; l <= l_hat; ++l)
        for (int k = -q_hat; k <= q_hat; ++k) {
            if (l == 0 && k == 0) continue;
            c.bins.emplace_back(l, k);
            CMat a = build_A_lk(l, k, cfg);
            CMat md = submatrix(a, arr.data_tx_idx, arr.data_tx_idx);
            c.a_lk.push_back(md.squaredNorm());  // Tr(M_d M_d^H)
            c.b_lk.push_back(md.trace());
            c.a_p.push_back(submatrix(a, arr.pilot_tx_idx, arr.pilot_tx_idx));
            // Pilot-data interaction kernel from the CSCG fourth-moment
            // expansion: only the |linear-in-data|^2 terms survive
            // (E[d d^T] = 0 kills the pseudo-covariance cross terms).
            CMat a_pd = submatrix(a, arr.pilot_tx_idx, arr.data_tx_idx);   // Phi_p^H A Phi_d
            CMat a_dp = submatrix(a, arr.data_tx_idx, arr.pilot_tx_idx);   // Phi_d^H A Phi_p
            c.b_mat.push_back(a_pd * a_pd.adjoint() + a_dp.adjoint() * a_dp);
        }

    // B^H B = I + (F kron I) diag(tail n_cp) (F^H kron I); build by columns.
    const int mn = cfg.mn();
    CMat bhb = CMat::Identity(mn, mn);
    CVec e = CVec::Zero(mn);
    for (int j = 0; j < mn; ++j) {
        e(j) = 1.0;
        CVec s = dd_to_time(e, cfg);
        s.head(mn - cfg.n_cp).setZero();
        bhb.col(j) += time_to_dd(s, cfg);
        e(j) = 0.0;
    }
    c.g_p = submatrix(bhb, arr.pilot_tx_idx, arr.pilot_tx_idx);
    c.g_p = 0.5 * (c.g_p + c.g_p.adjoint());
    c.g_d = real_checked(submatrix(bhb, arr.data_tx_idx, arr.data_tx_idx).trace(), 1.0);
    return c;
}

IslPolynomial isl_polynomial(const CVec& x_p, const SensingConstants& consts) {
    if (x_p.size() != consts.k_p) throw std::invalid_argument("isl_polynomial: x_p length must be K_p");
    IslPolynomial poly;
    const double scale = std::max(1.0, x_p.squaredNorm());
    for (int i = 0; i < consts.bin_count(); ++i) {
        const auto idx = static_cast<size_t>(i);
        cd q = x_p.dot(consts.a_p[idx] * x_p);  // x^H A_p x
        poly.c1 += consts.a_lk[idx] + std::norm(consts.b_lk[idx]);
        poly.c2 += real_checked(x_p.dot(consts.b_mat[idx] * x_p), scale * scale) +
                   2.0 * (consts.b_lk[idx] * std::conj(q)).real();
        poly.c3 += std::norm(q);
    }
    return poly;
}

double expected_isl(double p_d, const CVec& x_p, const SensingConstants& consts) {
    if (p_d < 0.0) throw std::invalid_argument("expected_isl: p_d must be nonnegative");
    IslPolynomial poly = isl_polynomial(x_p, consts);
    return poly.c1 * p_d * p_d + poly.c2 * p_d + poly.c3;
}

double expected_mainlobe(double p_d, const CVec& x_p, const SensingConstants& consts) {
    if (p_d < 0.0) throw std::invalid_argument("expected_mainlobe: p_d must be nonnegative");
    if (x_p.size() != consts.k_p) throw std::invalid_argument("expected_mainlobe: x_p length");
    double scale = std::max(1.0, x_p.squaredNorm());
    return p_d * consts.g_d + real_checked(x_p.dot(consts.g_p * x_p), scale);
}

double transmit_power(double p_d, const CVec& x_p, const SensingConstants& consts) {
    return expected_mainlobe(p_d, x_p, consts) / consts.frame_len;
}

EmpiricalAf empirical_af(const CVec& x_p, double p_d, const Arrangement& arr,
                         const FrameConfig& cfg, int l_hat, int q_hat, std::mt19937_64& rng,
                         int trials) {
    if (trials < 1) throw std::invalid_argument("empirical_af: trials must be >= 1");
    arr.validate(cfg);
    EmpiricalAf af;
    CVec pilot_full = scatter(x_p, arr.pilot_tx_idx, cfg);

    struct BinForms {
        cd c;
        CVec a1, a2;  // K_d
        CMat md;      // K_d x K_d
    };
    std::vector<BinForms> forms;
    for (int l = -l_hat; l <= l_hat; ++l)
        for (int k = -q_hat; k <= q_hat; ++k) {
            af.bins.emplace_back(l, k);
            CMat a = build_A_lk(l, k, cfg);
            BinForms f;
            f.c = pilot_full.dot(a * pilot_full);
            f.a1 = gather(CVec(a.adjoint() * pilot_full), arr.data_tx_idx);
            f.a2 = gather(CVec(a * pilot_full), arr.data_tx_idx);
            f.md = submatrix(a, arr.data_tx_idx, arr.data_tx_idx);
            forms.push_back(std::move(f));
        }

    af.mean_sq.assign(af.bins.size(), 0.0);
    for (int t = 0; t < trials; ++t) {
        CVec d = p_d > 0.0 ? cscg_vector(rng, arr.k_d(), p_d) : CVec(CVec::Zero(arr.k_d()));
        for (size_t b = 0; b < forms.size(); ++b) {
            const auto& f = forms[b];
            cd val = f.c + f.a1.dot(d) + std::conj(f.a2.dot(d)) + d.dot(f.md * d);
            af.mean_sq[b] += std::norm(val);
        }
        if (p_d == 0.0) {  // deterministic, no need to repeat
            for (auto& v : af.mean_sq) v *= trials;
            break;
        }
    }
    for (auto& v : af.mean_sq) v /= trials;
    return af;
}

}  // namespace otfs
