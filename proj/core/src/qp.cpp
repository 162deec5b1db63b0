#include "otfs/qp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace otfs {

namespace detail {

RVec real_embed(const CVec& z) {
    RVec u(2 * z.size());
    u << z.real(), z.imag();
    return u;
}

CVec complex_lift(const RVec& u) {
    const auto n = u.size() / 2;
    CVec z(n);
    z.real() = u.head(n);
    z.imag() = u.tail(n);
    return z;
}

RMat real_embed_hermitian(const CMat& q) {
    const auto n = q.rows();
    RMat m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = q.real();
    m.topRightCorner(n, n) = -q.imag();
    m.bottomLeftCorner(n, n) = q.imag();
    m.bottomRightCorner(n, n) = q.real();
    return 0.5 * (m + m.transpose());
}

}  // namespace detail

namespace {

using detail::complex_lift;
using detail::real_embed;
using detail::real_embed_hermitian;

struct RealQp {
    RMat p;   // quadratic term, objective (1/2) u^T P u + c^T u
    RVec c;
    RMat g;   // G u <= h
    RVec h;
};

struct IpmResult {
    RVec u;
    RVec lambda;
    double kkt = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Infeasible-start primal-dual interior point for a dense convex QP.
IpmResult ipm_solve(const RealQp& qp, const RVec& u0, double tol, int max_iter) {
    const auto n = qp.p.rows();
    const auto m = qp.g.rows();
    IpmResult res;
    res.u = u0;

    if (m == 0) {
        Eigen::LDLT<RMat> ldlt(qp.p + 1e-12 * RMat::Identity(n, n));
        res.u = ldlt.solve(-qp.c);
        res.kkt = (qp.p * res.u + qp.c).cwiseAbs().maxCoeff();
        res.iterations = 1;
        res.converged = res.kkt < tol;
        return res;
    }

    RVec s = (qp.h - qp.g * res.u).cwiseMax(1.0);
    res.lambda = RVec::Ones(m);
    const double sigma = 0.1;  // barrier reduction factor 10

    for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
        RVec r_dual = qp.p * res.u + qp.c + qp.g.transpose() * res.lambda;
        RVec r_prim = qp.g * res.u + s - qp.h;
        double mu = s.dot(res.lambda) / static_cast<double>(m);
        res.kkt = std::max({r_dual.cwiseAbs().maxCoeff(), r_prim.cwiseAbs().maxCoeff(), mu});
        if (res.kkt < tol) {
            res.converged = true;
            return res;
        }

        RVec ls = res.lambda.cwiseQuotient(s);
        RMat kkt_mat = qp.p + qp.g.transpose() * ls.asDiagonal() * qp.g +
                       1e-12 * RMat::Identity(n, n);
        RVec rhs = -r_dual;
        for (Eigen::Index i = 0; i < m; ++i)
            rhs -= qp.g.row(i).transpose() * (sigma * mu / s(i) - res.lambda(i) + ls(i) * r_prim(i));
        RVec du = Eigen::LDLT<RMat>(kkt_mat).solve(rhs);
        RVec ds = -r_prim - qp.g * du;
        RVec dl(m);
        for (Eigen::Index i = 0; i < m; ++i)
            dl(i) = (sigma * mu - s(i) * res.lambda(i) - res.lambda(i) * ds(i)) / s(i);

        if (!du.allFinite() || !ds.allFinite() || !dl.allFinite()) return res;

        double alpha = 1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (ds(i) < 0.0) alpha = std::min(alpha, -0.99 * s(i) / ds(i));
            if (dl(i) < 0.0) alpha = std::min(alpha, -0.99 * res.lambda(i) / dl(i));
        }
        res.u += alpha * du;
        s += alpha * ds;
        res.lambda += alpha * dl;
    }
    return res;
}

RMat psd_floor(const RMat& p) {
    Eigen::SelfAdjointEigenSolver<RMat> es(p);
    if (es.eigenvalues().minCoeff() >= 0.0) return p;
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace

double ComplexQp::objective(const CVec& z) const {
    return (z.dot(Q * z)).real() + 2.0 * q.dot(z).real() + c0;
}

double ComplexQp::max_violation(const CVec& z) const {
    double v = 0.0;
    for (const auto& c : ineqs) {
        double lhs = c.a.dot(z).real();
        v = std::max(v, c.greater ? c.b - lhs : lhs - c.b);
    }
    return v;
}

Scalar1dResult maximize_concave_1d(const std::function<double(double)>& f,
                                   const std::function<double(double)>& fp, double lo, double hi,
                                   double tol) {
    if (lo > hi) throw std::invalid_argument("maximize_concave_1d: empty interval");
    if (hi - lo <= tol) {
        double x = 0.5 * (lo + hi);
        return {x, f(x)};
    }
    if (fp) {
        // Concavity: f' is nonincreasing, so a sign change brackets the argmax.
        if (fp(lo) <= 0.0) return {lo, f(lo)};
        if (fp(hi) >= 0.0) return {hi, f(hi)};
        double a = lo, b = hi;
        while (b - a > tol) {
            double mid = 0.5 * (a + b);
            (fp(mid) > 0.0 ? a : b) = mid;
        }
        double x = 0.5 * (a + b);
        return {x, f(x)};
    }
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    double x = 0.5 * (a + b);
    double fx = f(x);
    // Concave functions can still peak exactly at an endpoint of the original box.
    if (f(lo) > fx) return {lo, f(lo)};
    if (f(hi) > fx) return {hi, f(hi)};
    return {x, fx};
}

SolveReport solve_qp(const ComplexQp& prob, const CVec& z0, double tol, int max_iter) {
    const int n = prob.n();
    if (prob.q.size() != n) throw std::invalid_argument("solve_qp: q/Q dimension mismatch");
    RealQp qp;
    qp.p = 2.0 * psd_floor(real_embed_hermitian(prob.Q));
    qp.c = 2.0 * real_embed(prob.q);
    const auto m = static_cast<Eigen::Index>(prob.ineqs.size());
    qp.g.resize(m, 2 * n);
    qp.h.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& c = prob.ineqs[static_cast<size_t>(i)];
        if (c.a.size() != n) throw std::invalid_argument("solve_qp: constraint dimension mismatch");
        double sign = c.greater ? -1.0 : 1.0;
        qp.g.row(i) = sign * real_embed(c.a).transpose();
        qp.h(i) = sign * c.b;
    }

    RVec u0 = z0.size() == n ? real_embed(z0) : RVec(RVec::Zero(2 * n));
    SolveReport rep;

    if (m > 0 && ((qp.g * u0 - qp.h).maxCoeff() > 0.0)) {
        // Phase 1: min t s.t. G u - t <= h, t >= -1. Only the sign of the
        // optimum matters, so the lower bound on t keeps the problem bounded;
        // a strictly positive optimum certifies an empty feasible region
        // (Farkas dual in lambda).
        RealQp ph;
        ph.p = 1e-8 * RMat::Identity(2 * n + 1, 2 * n + 1);
        ph.c = RVec::Zero(2 * n + 1);
        ph.c(2 * n) = 1.0;
        ph.g = RMat::Zero(m + 1, 2 * n + 1);
        ph.g.topLeftCorner(m, 2 * n) = qp.g;
        ph.g.col(2 * n).head(m).setConstant(-1.0);
        ph.g(m, 2 * n) = -1.0;
        ph.h.resize(m + 1);
        ph.h.head(m) = qp.h;
        ph.h(m) = 1.0;
        RVec v0(2 * n + 1);
        v0 << u0, (qp.g * u0 - qp.h).maxCoeff() + 1.0;
        IpmResult ph_res = ipm_solve(ph, v0, 1e-10, std::max(max_iter, 200));
        if (ph_res.converged && ph_res.u(2 * n) > 1e-7) {
            rep.status = SolveStatus::infeasible;
            rep.z_star = complex_lift(RVec(ph_res.u.head(2 * n)));
            rep.certificate = ph_res.lambda.head(m);
            rep.iterations = ph_res.iterations;
            return rep;
        }
        u0 = ph_res.u.head(2 * n);
    }

    IpmResult res = ipm_solve(qp, u0, tol, max_iter);
    rep.z_star = complex_lift(res.u);
    rep.objective = prob.objective(rep.z_star);
    rep.kkt_residual = res.kkt;
    rep.iterations = res.iterations;
    rep.status = res.converged ? SolveStatus::optimal : SolveStatus::max_iter;
    return rep;
}

CMat solve_A_update(const CMat& xi, double s1, double sigma_h2, double zeta) {
    if (sigma_h2 <= 0.0 || zeta <= 0.0)
        throw std::invalid_argument("solve_A_update: sigma_h2 and zeta must be positive");
    const auto kh = xi.rows();
    CMat gram = xi * xi.adjoint();
    // Regularize only when badly conditioned (pre-condition of the update).
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (gram + gram.adjoint()));
    double emax = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() < emax / 1e12)
        gram += (emax / 1e12) * CMat::Identity(kh, kh);
    CMat gram_inv = gram.inverse();
    CMat a = xi.adjoint() * gram_inv;
    double tr_a = a.trace().real();
    if (sigma_h2 * tr_a <= s1) return a;
    // Re Tr(sigma_h2 A(lambda)) is affine and strictly decreasing in lambda,
    // so the KKT multiplier has an exact root.
    double tr_inv = gram_inv.trace().real();
    double lambda = zeta * (tr_a - s1 / sigma_h2) / (sigma_h2 * tr_inv);
    return (xi.adjoint() - (lambda * sigma_h2 / zeta) * CMat::Identity(kh, kh)) * gram_inv;
}

}  // namespace otfs
