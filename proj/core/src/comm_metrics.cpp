#include "otfs/comm_metrics.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace otfs {

namespace {

void check_noise_params(double sigma_h2, double sigma_n2) {
    if (sigma_h2 <= 0.0) throw std::invalid_argument("sigma_h2 must be positive");
    if (sigma_n2 <= 0.0) throw std::invalid_argument("sigma_n2 must be positive");
}

}  // namespace

// log det of a Hermitian PD matrix via Cholesky; symmetrizes first and
// fails hard if the factorization does not go through.
double logdet_hpd(const CMat& a) {
    CMat sym = 0.5 * (a + a.adjoint());
    if ((a - sym).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()))
        throw std::runtime_error("logdet_hpd: matrix is not Hermitian within tolerance");
    Eigen::LLT<CMat> llt(sym);
    if (llt.info() != Eigen::Success) throw std::runtime_error("logdet_hpd: matrix is not positive definite");
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
}

CMat lmmse_error_covariance(const CMat& omega_p, double sigma_h2, double sigma_n2) {
    check_noise_params(sigma_h2, sigma_n2);
    const auto kh = omega_p.cols();
    CMat a = CMat::Identity(kh, kh) + (sigma_h2 / sigma_n2) * (omega_p.adjoint() * omega_p);
    return sigma_h2 * a.inverse();
}

LmmseResult lmmse_estimate(const CVec& y_p, const CMat& omega_p, double sigma_h2, double sigma_n2) {
    check_noise_params(sigma_h2, sigma_n2);
    if (y_p.size() != omega_p.rows()) throw std::invalid_argument("lmmse_estimate: y_p/omega_p mismatch");
    const auto kh = omega_p.cols();
    const double g = sigma_h2 / sigma_n2;
    CMat normal = CMat::Identity(kh, kh) + g * (omega_p.adjoint() * omega_p);
    Eigen::LDLT<CMat> ldlt(normal);
    LmmseResult res;
    res.w = g * ldlt.solve(omega_p.adjoint());
    res.h_hat = res.w * y_p;
    res.c_eps = sigma_h2 * ldlt.solve(CMat::Identity(kh, kh));
    return res;
}

CMat lmmse_weight_dual(const CMat& omega_p, double sigma_h2, double sigma_n2) {
    check_noise_params(sigma_h2, sigma_n2);
    const auto rp = omega_p.rows();
    const double g = sigma_h2 / sigma_n2;
    CMat gram = CMat::Identity(rp, rp) + g * (omega_p * omega_p.adjoint());
    return g * omega_p.adjoint() * gram.inverse();
}

CMat estimated_data_channel(const CVec& h_hat, const Dictionaries& dicts) {
    if (h_hat.size() != dicts.k_h()) throw std::invalid_argument("estimated_data_channel: h length");
    CMat h_d = CMat::Zero(dicts.data_blocks[0].rows(), dicts.data_blocks[0].cols());
    for (int t = 0; t < dicts.k_h(); ++t) h_d += h_hat(t) * dicts.data_blocks[static_cast<size_t>(t)];
    return h_d;
}

CMat effective_noise_covariance(double p_d, double sigma_n2, const CMat& c_eps,
                                const Dictionaries& dicts) {
    const auto rd = dicts.data_blocks[0].rows();
    const int kh = dicts.k_h();
    CMat cov = sigma_n2 * CMat::Identity(rd, rd);
    if (p_d <= 0.0) return cov;
    // Omega~_d (C kron I) Omega~_d^H = W W^H with W's t-th block
    // sum_r Omega~_r [C^{1/2}]_{r t}; cheaper than the K_h^2 pair sum.
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (c_eps + c_eps.adjoint()));
    CMat root = es.eigenvectors() *
                es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                es.eigenvectors().adjoint();
    const auto kd = dicts.data_blocks[0].cols();
    CMat w = CMat::Zero(rd, kh * kd);
    for (int t = 0; t < kh; ++t)
        for (int r = 0; r < kh; ++r) {
            cd c = root(r, t);
            if (std::abs(c) > 0.0) w.middleCols(t * kd, kd) += c * dicts.data_blocks[static_cast<size_t>(r)];
        }
    cov += p_d * (w * w.adjoint());
    return cov;
}

double capacity_lb_matrix(const CommMetricInputs& in, const CMat& h_d_hat, const CMat& c_eps,
                          const Dictionaries& dicts) {
    if (in.p_d < 0.0) throw std::invalid_argument("capacity_lb_matrix: p_d must be nonnegative");
    if (in.p_d == 0.0) return 0.0;
    CMat s = effective_noise_covariance(in.p_d, in.sigma_n2, c_eps, dicts);
    // log det(I + p S^{-1} H H^H) = log det(S + p H H^H) - log det(S),
    // keeping every factorization Hermitian.
    CMat shh = s + in.p_d * (h_d_hat * h_d_hat.adjoint());
    return in.f_cp / in.mn * (logdet_hpd(shh) - logdet_hpd(s));
}

double capacity_lb_matrix_given_noise(const CommMetricInputs& in, const CMat& h_d_hat,
                                      const CMat& s_cov) {
    if (in.p_d < 0.0) throw std::invalid_argument("capacity_lb_matrix_given_noise: p_d must be nonnegative");
    if (in.p_d == 0.0) return 0.0;
    CMat shh = s_cov + in.p_d * (h_d_hat * h_d_hat.adjoint());
    return in.f_cp / in.mn * (logdet_hpd(shh) - logdet_hpd(s_cov));
}

double capacity_lb_scalar(const CommMetricInputs& in, const CMat& h_d_hat, const CMat& omega_p) {
    if (in.p_d < 0.0) throw std::invalid_argument("capacity_lb_scalar: p_d must be nonnegative");
    if (in.p_d == 0.0) return 0.0;
    double sinr = sinr_metric(in.p_d, omega_p, in.sigma_h2, in.sigma_n2);
    const auto rd = h_d_hat.rows();
    CMat arg = CMat::Identity(rd, rd) + sinr * (h_d_hat * h_d_hat.adjoint());
    return in.f_cp / in.mn * logdet_hpd(arg);
}

double s1_lower_bound(const CMat& omega_p, double sigma_h2, double sigma_n2) {
    return lmmse_error_covariance(omega_p, sigma_h2, sigma_n2).trace().real();
}

double sinr_metric(double p_d, const CMat& omega_p, double sigma_h2, double sigma_n2) {
    if (p_d < 0.0) throw std::invalid_argument("sinr_metric: p_d must be nonnegative");
    return sinr_relaxed(p_d, s1_lower_bound(omega_p, sigma_h2, sigma_n2), sigma_n2);
}

double sinr_relaxed(double p_d, double s1, double sigma_n2) {
    if (s1 <= 0.0) throw std::invalid_argument("sinr_relaxed: s1 must be positive");
    double r = p_d / sigma_n2;
    return r / (r * s1 + 1.0);
}

double sinr_sca(double p_d, double s1_ref, double s1, double sigma_n2) {
    if (s1_ref <= 0.0) throw std::invalid_argument("sinr_sca: s1_ref must be positive");
    double r = p_d / sigma_n2;
    double denom = r * s1_ref + 1.0;
    return r / denom - (r * r) / (denom * denom) * (s1 - s1_ref);
}

}  // namespace otfs
