#pragma once

#include "otfs/types.hpp"

#include <functional>
#include <vector>

namespace otfs {

/// Maximize a concave scalar function on [lo, hi]. Uses safeguarded bisection
/// on the derivative when one is supplied, golden section otherwise; boundary
/// optima are returned when the derivative does not change sign.
struct Scalar1dResult {
    double x_star = 0.0;
    double f_star = 0.0;
};
Scalar1dResult maximize_concave_1d(const std::function<double(double)>& f,
                                   const std::function<double(double)>& fp, double lo, double hi,
                                   double tol = 1e-10);

/// Convex QP over a complex vector z: minimize z^H Q z + 2 Re(q^H z) + c0
/// subject to affine constraints Re(a^H z) <= b (or >= b).
struct ComplexQp {
    CMat Q;      // Hermitian PSD n x n (symmetrized + eigenvalue-floored on solve)
    CVec q;      // linear term via 2 Re(q^H z)
    double c0 = 0.0;

    struct Ineq {
        CVec a;
        double b = 0.0;
        bool greater = false;  // false: Re(a^H z) <= b; true: >= b
    };
    std::vector<Ineq> ineqs;

    int n() const { return static_cast<int>(Q.rows()); }
    double objective(const CVec& z) const;
    double max_violation(const CVec& z) const;
};

enum class SolveStatus { optimal, max_iter, infeasible };

struct SolveReport {
    CVec z_star;
    double objective = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::max_iter;
    RVec certificate;  // Farkas-type dual direction when infeasible
};

/// Real-embedded (dimension 2n) primal-dual interior-point solve with dense
/// factorizations; infeasibility is detected via a phase-1 pass, not assumed away.
SolveReport solve_qp(const ComplexQp& prob, const CVec& z0, double tol = 1e-8, int max_iter = 100);

/// Trace-constrained least-squares slack update:
/// min ||A Xi - I||_F^2  s.t.  Re Tr(sigma_h2 A) <= s1.
/// Unconstrained minimizer Xi^H (Xi Xi^H)^{-1}; when the trace cap binds,
/// A(lambda) = (Xi^H - (lambda sigma_h2 / zeta) I)(Xi Xi^H)^{-1} with the
/// multiplier pinned so the trace equals s1 (affine in lambda, exact root).
CMat solve_A_update(const CMat& xi, double s1, double sigma_h2, double zeta);

namespace detail {
/// Stack a complex vector as [Re; Im].
RVec real_embed(const CVec& z);
CVec complex_lift(const RVec& u);
/// Real symmetric embedding of a Hermitian matrix (so u^T M u = z^H Q z).
RMat real_embed_hermitian(const CMat& q);
}  // namespace detail

}  // namespace otfs
