#pragma once

// Shared oracle builders for the test suite. Everything here recomputes the
// library's quantities from first principles (explicit dense matrices,
// projected-gradient optimization) so agreement is meaningful.

#include <otfs/arrangement.hpp>
#include <otfs/channel.hpp>
#include <otfs/modem.hpp>
#include <otfs/qp.hpp>
#include <otfs/rng.hpp>
#include <otfs/types.hpp>

#include <cmath>
#include <vector>

namespace testutil {

using otfs::cd;
using otfs::CMat;
using otfs::CVec;
using otfs::FrameConfig;
using otfs::RMat;
using otfs::RVec;

inline CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// (F_N kron I_M), the Doppler-DFT on the vectorized DD grid.
inline CMat doppler_kron(const FrameConfig& cfg) {
    return kron(otfs::dft_matrix(cfg.N), CMat::Identity(cfg.M, cfg.M));
}

/// Explicit linear (non-cyclic) shift of the given size.
inline CMat linear_shift(int l, int size) {
    CMat j = CMat::Zero(size, size);
    for (int n = 0; n < size; ++n) {
        int src = n - l;
        if (src >= 0 && src < size) j(n, src) = 1.0;
    }
    return j;
}

/// Explicit AF mismatch operator from its definition:
/// A_lk = (F kron I) Gamma^H J_l D_k Gamma (F^H kron I).
inline CMat dense_A_lk(int l, int k, const FrameConfig& cfg) {
    const int t = cfg.frame_len();
    CMat gamma = otfs::cp_matrix(cfg);
    CMat dk = CMat::Zero(t, t);
    for (int n = 0; n < t; ++n) {
        double phase = -2.0 * M_PI * static_cast<double>(n) * k / t;
        dk(n, n) = cd(std::cos(phase), std::sin(phase));
    }
    CMat fk = doppler_kron(cfg);
    return fk * gamma.adjoint() * linear_shift(l, t) * dk * gamma * fk.adjoint();
}

/// Explicit DD channel from its definition:
/// H = sum_i alpha_i (F kron I) Pi^l Delta^k (F^H kron I).
inline CMat dense_dd_channel(const otfs::ChannelSpec& spec, const FrameConfig& cfg) {
    const int mn = cfg.mn();
    CMat fk = doppler_kron(cfg);
    CMat pi = otfs::cyclic_shift_matrix(mn);
    CMat delta = otfs::doppler_phase_matrix(mn);
    CMat h = CMat::Zero(mn, mn);
    for (const auto& p : spec.paths) {
        CMat shift = CMat::Identity(mn, mn);
        for (int i = 0; i < p.delay_tap; ++i) shift = pi * shift;
        CMat phase = CMat::Identity(mn, mn);
        for (int i = 0; i < p.doppler_tap; ++i) phase = delta * phase;
        h += p.gain * fk * shift * phase * fk.adjoint();
    }
    return h;
}

// ------------------------------------------------------------------------
// Independent reference QP solver: projected gradient on the real embedding
// with Dykstra's algorithm for the halfspace-intersection projection.

struct Halfspace {
    RVec a;
    double b = 0.0;  // a^T u <= b
};

inline RVec project_halfspace(const RVec& u, const Halfspace& h) {
    double viol = h.a.dot(u) - h.b;
    if (viol <= 0.0) return u;
    return u - (viol / h.a.squaredNorm()) * h.a;
}

inline RVec dykstra_project(RVec u, const std::vector<Halfspace>& hs, int passes = 200) {
    if (hs.empty()) return u;
    std::vector<RVec> corr(hs.size(), RVec::Zero(u.size()));
    for (int pass = 0; pass < passes; ++pass) {
        double moved = 0.0;
        for (size_t i = 0; i < hs.size(); ++i) {
            RVec v = u + corr[i];
            RVec proj = project_halfspace(v, hs[i]);
            corr[i] = v - proj;
            moved += (proj - u).norm();
            u = proj;
        }
        if (moved < 1e-14 * (1.0 + u.norm())) break;
    }
    return u;
}

/// Minimize the real-embedded QP objective by projected gradient descent.
/// Returns the feasible optimizer; intended as a slow, simple reference.
inline CVec pg_reference(const otfs::ComplexQp& prob, int max_iter = 60000) {
    const int n = prob.n();
    RMat m = otfs::detail::real_embed_hermitian(prob.Q);
    RVec c = otfs::detail::real_embed(prob.q);
    std::vector<Halfspace> hs;
    for (const auto& in : prob.ineqs) {
        double sign = in.greater ? -1.0 : 1.0;
        hs.push_back({sign * otfs::detail::real_embed(in.a), sign * in.b});
    }
    Eigen::SelfAdjointEigenSolver<RMat> es(m);
    double lmax = std::max(es.eigenvalues().maxCoeff(), 1e-12);
    double step = 1.0 / (2.0 * lmax);

    RVec u = dykstra_project(RVec::Zero(2 * n), hs);
    for (int it = 0; it < max_iter; ++it) {
        RVec grad = 2.0 * (m * u) + 2.0 * c;
        RVec next = dykstra_project(u - step * grad, hs);
        double delta = (next - u).norm();
        u = next;
        if (delta < 1e-13 * (1.0 + u.norm())) break;
    }
    return otfs::detail::complex_lift(u);
}

/// Random strictly convex complex QP with a guaranteed-feasible region.
inline otfs::ComplexQp random_qp(std::mt19937_64& rng, int n, int n_cons) {
    otfs::ComplexQp qp;
    CMat b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = otfs::cscg(rng);
    qp.Q = b * b.adjoint() + 0.5 * CMat::Identity(n, n);
    qp.q = otfs::cscg_vector(rng, n);
    CVec z_feas = otfs::cscg_vector(rng, n);  // common interior point
    std::uniform_real_distribution<double> slack(0.1, 1.0);
    for (int i = 0; i < n_cons; ++i) {
        otfs::ComplexQp::Ineq in;
        in.a = otfs::cscg_vector(rng, n);
        in.greater = (i % 2 == 1);
        double at = in.a.dot(z_feas).real();
        in.b = in.greater ? at - slack(rng) : at + slack(rng);
        qp.ineqs.push_back(in);
    }
    return qp;
}

}  // namespace testutil
