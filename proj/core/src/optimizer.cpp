#include "otfs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace otfs {

namespace {

CMat compute_xi(const CVec& x1, const CVec& x2, const PilotContext& ctx, double gamma) {
    const int kh = ctx.k_h, kp = ctx.k_p;
    CMat xi = CMat::Identity(kh, kh);
    for (int r = 0; r < kh; ++r) {
        Eigen::RowVectorXcd row = x2.adjoint() * ctx.t_full.middleRows(r * kp, kp);
        for (int c = 0; c < kh; ++c)
            xi(r, c) += gamma * (row.segment(c * kp, kp) * x1).value();
    }
    return xi;
}

void add_power_constraints(ComplexQp& qp, const CVec& v, double p_d,
                           const SensingConstants& consts, const OptimizerConfig& cfg) {
    double budget = consts.frame_len * cfg.p_max - p_d * consts.g_d;
    double floor = cfg.xi_min - p_d * consts.g_d;
    qp.ineqs.push_back({v, budget, false});
    qp.ineqs.push_back({v, floor, true});
}

CVec run_subproblem(const ComplexQp& qp, const CVec& z0, const char* which) {
    SolveReport rep = solve_qp(qp, z0);
    if (rep.status == SolveStatus::infeasible) {
        std::ostringstream msg;
        msg << "ADMM " << which << "-subproblem infeasible: the mainlobe floor xi_min is "
            << "unreachable against the power budget at the current data power";
        throw std::runtime_error(msg.str());
    }
    return rep.z_star;
}

}  // namespace

namespace {

/// Saddle escape for the alternating scheme: symmetric pilot layouts (several
/// equal-magnitude cells) can be fixed points of the block updates while the
/// objective still ascends along the ray that concentrates energy on the
/// dominant cell. Tests mainlobe-preserving mixes toward that spike with the
/// data power re-solved; returns true (and the candidate) only on a strict
/// improvement, so the outer loop stays monotone.
bool concentration_escape(const DesignPoint& dp, const SensingConstants& consts,
                          const Dictionaries& dicts, const OptimizerConfig& cfg, double obj_now,
                          DesignPoint& out) {
    if (dp.x_p.size() == 0) return false;
    const double target = dp.x_p.dot(consts.g_p * dp.x_p).real();
    if (target <= 0.0) return false;
    Eigen::Index imax = 0;
    dp.x_p.cwiseAbs().maxCoeff(&imax);
    if (std::abs(dp.x_p(imax)) == 0.0) return false;
    CVec spike = CVec::Zero(dp.x_p.size());
    spike(imax) = dp.x_p(imax) / std::abs(dp.x_p(imax));

    bool found = false;
    double best = obj_now;
    for (double t : {1.0, 0.5, 0.25, 0.1}) {
        CVec mix = (1.0 - t) * dp.x_p + (t * std::sqrt(target)) * spike;
        double cur = mix.dot(consts.g_p * mix).real();
        if (cur <= 0.0) continue;
        DesignPoint cand = dp;
        cand.x_p = mix * std::sqrt(target / cur);
        cand.s1 = s1_lower_bound(dicts.pilot_dictionary(cand.x_p), cfg.sigma_h2, cfg.sigma_n2);
        cand.p_d = solve_p_d(cand.x_p, cand.s1, consts, cfg);
        bool feasible = true;
        try {
            check_feasible(cand, consts, cfg);
        } catch (const std::runtime_error&) {
            feasible = false;
        }
        double o = design_objective(cand, consts, cfg);
        if (feasible && o > best + 1e-12) {
            best = o;
            out = cand;
            found = true;
        }
    }
    return found;
}

}  // namespace

InitPattern parse_init_pattern(const std::string& name) {
    if (name == "spike") return InitPattern::spike;
    if (name == "flat") return InitPattern::flat;
    if (name == "cluster") return InitPattern::cluster;
    throw std::invalid_argument("unknown init pattern: " + name);
}

void OptimizerConfig::validate() const {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("OptimizerConfig: eta must be in [0,1]");
    if (rho <= 0.0 || zeta <= 0.0) throw std::invalid_argument("OptimizerConfig: rho, zeta must be positive");
    if (eps1 <= 0.0 || eps2 <= 0.0) throw std::invalid_argument("OptimizerConfig: eps1, eps2 must be positive");
    if (max_ao_iters < 1 || max_admm_iters < 1) throw std::invalid_argument("OptimizerConfig: iteration caps must be >= 1");
    if (p_max <= 0.0) throw std::invalid_argument("OptimizerConfig: p_max must be positive");
    if (xi_min < 0.0) throw std::invalid_argument("OptimizerConfig: xi_min must be nonnegative");
    if (p0 < 0.0 || p0 > 1.0) throw std::invalid_argument("OptimizerConfig: p0 must be in [0,1]");
    if (sinr_ref <= 0.0 || isl_ref <= 0.0) throw std::invalid_argument("OptimizerConfig: normalization references must be positive");
    if (sigma_h2 <= 0.0 || sigma_n2 <= 0.0) throw std::invalid_argument("OptimizerConfig: noise variances must be positive");
}

PilotContext build_pilot_context(const SensingConstants& consts, const Dictionaries& dicts) {
    PilotContext ctx;
    ctx.k_h = dicts.k_h();
    ctx.k_p = consts.k_p;
    CMat ext = dicts.extended_pilot_dictionary();
    ctx.t_full = ext.adjoint() * ext;
    ctx.b_sum = CMat::Zero(consts.k_p, consts.k_p);
    ctx.c_sum = CMat::Zero(consts.k_p, consts.k_p);
    for (int i = 0; i < consts.bin_count(); ++i) {
        const auto idx = static_cast<size_t>(i);
        ctx.b_sum += consts.b_mat[idx];
        ctx.c_sum += std::conj(consts.b_lk[idx]) * consts.a_p[idx];
    }
    return ctx;
}

double design_objective(const DesignPoint& dp, const SensingConstants& consts,
                        const OptimizerConfig& cfg) {
    double comm = dp.p_d > 0.0 ? sinr_relaxed(dp.p_d, dp.s1, cfg.sigma_n2) : 0.0;
    return cfg.eta * comm / cfg.sinr_ref -
           (1.0 - cfg.eta) * expected_isl(dp.p_d, dp.x_p, consts) / cfg.isl_ref;
}

double solve_p_d(const CVec& x_p, double s1, const SensingConstants& consts,
                 const OptimizerConfig& cfg) {
    cfg.validate();
    IslPolynomial poly = isl_polynomial(x_p, consts);
    const double c4 = consts.g_d;
    const double c5 = x_p.dot(consts.g_p * x_p).real();
    const double lo = std::max(0.0, (cfg.xi_min - c5) / c4);
    const double hi = (consts.frame_len * cfg.p_max - c5) / c4;
    if (hi < lo) {
        std::ostringstream msg;
        msg << "solve_p_d: empty feasible interval, lower bound " << lo << " exceeds upper bound "
            << hi;
        throw std::runtime_error(msg.str());
    }
    const double wc = cfg.eta / cfg.sinr_ref;
    const double ws = (1.0 - cfg.eta) / cfg.isl_ref;
    auto f = [&](double p) {
        double r = p / cfg.sigma_n2;
        return wc * r / (r * s1 + 1.0) - ws * (poly.c1 * p * p + poly.c2 * p + poly.c3);
    };
    auto fp = [&](double p) {
        double denom = (p / cfg.sigma_n2) * s1 + 1.0;
        return wc / (cfg.sigma_n2 * denom * denom) - ws * (2.0 * poly.c1 * p + poly.c2);
    };
    return maximize_concave_1d(f, fp, lo, hi, 1e-12 * std::max(1.0, hi)).x_star;
}

void admm_sca_step(double p_d, AdmmState& state, const SensingConstants& consts,
                   const PilotContext& ctx, const OptimizerConfig& cfg) {
    const int kh = ctx.k_h, kp = ctx.k_p;
    const double gamma = cfg.sigma_h2 / cfg.sigma_n2;
    const double wisl = (1.0 - cfg.eta) / cfg.isl_ref;

    // SCA/elimination: the objective is monotone toward the trace bound, so
    // s1 sits exactly on Tr(sigma_h2 A^{(m)}).
    state.s1 = std::max(cfg.sigma_h2 * state.a.trace().real(), 1e-12);

    CMat e_mat = state.a - CMat::Identity(kh, kh);

    // --- x1 update ------------------------------------------------------
    {
        ComplexQp qp;
        qp.Q = 0.5 * cfg.rho * CMat::Identity(kp, kp);
        qp.q = 0.5 * cfg.rho * (state.d - state.x2);
        for (int i = 0; i < consts.bin_count(); ++i) {
            CVec u = consts.a_p[static_cast<size_t>(i)] * state.x2;
            qp.Q += wisl * (u * u.adjoint());
        }
        qp.q += wisl * p_d * (0.5 * (ctx.b_sum.adjoint() * state.x2) + ctx.c_sum * state.x2);

        // zeta/2 || A Xi(x1, x2) - I ||_F^2 as a quadratic in x1.
        CMat p_big(kh, kh * kp);
        for (int r = 0; r < kh; ++r)
            p_big.row(r) = gamma * (state.x2.adjoint() * ctx.t_full.middleRows(r * kp, kp));
        CMat w = state.a * p_big;
        for (int c = 0; c < kh; ++c) {
            auto mc = w.middleCols(c * kp, kp);
            qp.Q += 0.5 * cfg.zeta * (mc.adjoint() * mc);
            qp.q += 0.5 * cfg.zeta * (mc.adjoint() * e_mat.col(c));
        }
        add_power_constraints(qp, CVec(consts.g_p.adjoint() * state.x2), p_d, consts, cfg);
        state.x1 = run_subproblem(qp, state.x1, "x1");
    }

    // --- x2 update ------------------------------------------------------
    {
        ComplexQp qp;
        qp.Q = 0.5 * cfg.rho * CMat::Identity(kp, kp);
        qp.q = -0.5 * cfg.rho * (state.x1 + state.d);
        for (int i = 0; i < consts.bin_count(); ++i) {
            CVec u = consts.a_p[static_cast<size_t>(i)].adjoint() * state.x1;
            qp.Q += wisl * (u * u.adjoint());
        }
        qp.q += wisl * p_d * (0.5 * (ctx.b_sum * state.x1) + ctx.c_sum.adjoint() * state.x1);

        for (int c = 0; c < kh; ++c) {
            CVec ycol = ctx.t_full.middleCols(c * kp, kp) * state.x1;
            Eigen::Map<const CMat> yc(ycol.data(), kp, kh);
            CMat vc = gamma * (yc * state.a.transpose());
            qp.Q += 0.5 * cfg.zeta * (vc * vc.adjoint());
            qp.q += 0.5 * cfg.zeta * (vc * e_mat.col(c).conjugate());
        }
        add_power_constraints(qp, CVec(consts.g_p * state.x1), p_d, consts, cfg);
        state.x2 = run_subproblem(qp, state.x2, "x2");
    }

    state.a = solve_A_update(compute_xi(state.x1, state.x2, ctx, gamma), state.s1, cfg.sigma_h2,
                             cfg.zeta);
    state.d += state.x1 - state.x2;
    ++state.m;
}

AdmmState solve_pilot(double p_d, const DesignPoint& start, const SensingConstants& consts,
                      const PilotContext& ctx, const OptimizerConfig& cfg) {
    AdmmState state;
    state.x1 = start.x_p;
    state.x2 = start.x_p;
    state.d = CVec::Zero(ctx.k_p);
    state.s1 = start.s1;
    double gamma = cfg.sigma_h2 / cfg.sigma_n2;
    state.a = solve_A_update(compute_xi(start.x_p, start.x_p, ctx, gamma), start.s1, cfg.sigma_h2,
                             cfg.zeta);
    for (int m = 0; m < cfg.max_admm_iters; ++m) {
        admm_sca_step(p_d, state, consts, ctx, cfg);
        if ((state.x1 - state.x2).norm() <= cfg.eps1 * state.x1.norm()) break;
    }
    return state;
}

void check_feasible(const DesignPoint& dp, const SensingConstants& consts,
                    const OptimizerConfig& cfg, double tol) {
    if (dp.p_d < -tol) throw std::runtime_error("infeasible design: negative data power");
    if (transmit_power(std::max(dp.p_d, 0.0), dp.x_p, consts) > cfg.p_max + tol)
        throw std::runtime_error("infeasible design: transmit power exceeds P_max");
    if (expected_mainlobe(std::max(dp.p_d, 0.0), dp.x_p, consts) < cfg.xi_min - tol)
        throw std::runtime_error("infeasible design: mainlobe below xi_min");
}

AoResult run_ao(const DesignPoint& init, const SensingConstants& consts, const Dictionaries& dicts,
                const OptimizerConfig& cfg) {
    cfg.validate();
    check_feasible(init, consts, cfg);
    PilotContext ctx = build_pilot_context(consts, dicts);

    AoResult res;
    DesignPoint dp = init;
    dp.s1 = s1_lower_bound(dicts.pilot_dictionary(dp.x_p), cfg.sigma_h2, cfg.sigma_n2);
    double obj = design_objective(dp, consts, cfg);
    auto record = [&](int iter, const DesignPoint& p, double o) {
        res.trace.push_back({iter, o,
                             p.p_d > 0.0 ? sinr_relaxed(p.p_d, p.s1, cfg.sigma_n2) : 0.0,
                             expected_isl(p.p_d, p.x_p, consts),
                             transmit_power(p.p_d, p.x_p, consts) - cfg.p_max,
                             cfg.xi_min - expected_mainlobe(p.p_d, p.x_p, consts)});
    };
    record(0, dp, obj);
    res.best = dp;
    double best_obj = obj;

    for (int n = 1; n <= cfg.max_ao_iters; ++n) {
        res.iterations = n;
        dp.p_d = solve_p_d(dp.x_p, dp.s1, consts, cfg);

        AdmmState st = solve_pilot(dp.p_d, dp, consts, ctx, cfg);
        DesignPoint cand = dp;
        cand.x_p = 0.5 * (st.x1 + st.x2);
        cand.s1 = s1_lower_bound(dicts.pilot_dictionary(cand.x_p), cfg.sigma_h2, cfg.sigma_n2);
        // Block-ascent safeguard: the averaged consensus pilot is not
        // guaranteed to improve, so reject steps that lose objective or
        // leave the feasible set.
        bool ok = true;
        try {
            check_feasible(cand, consts, cfg);
        } catch (const std::runtime_error&) {
            ok = false;
        }
        if (ok && design_objective(cand, consts, cfg) >= design_objective(dp, consts, cfg)) dp = cand;

        double new_obj = design_objective(dp, consts, cfg);
        bool stalled = std::abs(new_obj - obj) <= cfg.eps2 * std::abs(new_obj);
        if (stalled) {
            DesignPoint esc;
            if (concentration_escape(dp, consts, dicts, cfg, new_obj, esc)) {
                dp = esc;
                new_obj = design_objective(dp, consts, cfg);
                stalled = false;
            }
        }
        record(n, dp, new_obj);
        if (new_obj > best_obj) {
            best_obj = new_obj;
            res.best = dp;
        }
        if (stalled) {
            res.converged = true;
            obj = new_obj;
            break;
        }
        obj = new_obj;
    }
    return res;
}

DesignPoint make_init(const Arrangement& arr, const FrameConfig& frame,
                      const SensingConstants& consts, const Dictionaries& dicts,
                      const OptimizerConfig& cfg) {
    cfg.validate();
    const int kp = arr.k_p();
    CVec shape = CVec::Zero(kp);
    switch (cfg.init) {
        case InitPattern::spike:
            shape(0) = 1.0;
            break;
        case InitPattern::flat:
            shape.setOnes();
            break;
        case InitPattern::cluster: {
            // Contiguous sub-block: lowest 4 distinct delays x lowest 6
            // distinct Dopplers within the pilot region.
            std::set<int> delays, dopplers;
            for (int idx : arr.pilot_tx_idx) {
                delays.insert(idx % frame.M);
                dopplers.insert(idx / frame.M);
            }
            std::map<int, int> drank, krank;
            int r = 0;
            for (int d : delays) drank[d] = r++;
            r = 0;
            for (int k : dopplers) krank[k] = r++;
            for (int j = 0; j < kp; ++j) {
                int idx = arr.pilot_tx_idx[static_cast<size_t>(j)];
                if (drank[idx % frame.M] < 4 && krank[idx / frame.M] < 6) shape(j) = 1.0;
            }
            if (shape.norm() == 0.0) shape.setOnes();
            break;
        }
    }
    DesignPoint dp;
    const double total = consts.frame_len * cfg.p_max;
    double denom = shape.dot(consts.g_p * shape).real();
    dp.x_p = cfg.p0 > 0.0 ? CVec(shape * std::sqrt(cfg.p0 * total / denom)) : CVec(CVec::Zero(kp));
    dp.p_d = (1.0 - cfg.p0) * total / consts.g_d;
    dp.s1 = s1_lower_bound(dicts.pilot_dictionary(dp.x_p), cfg.sigma_h2, cfg.sigma_n2);
    return dp;
}

CVec canonicalize(const CVec& x_p) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < x_p.size(); ++i)
        if (std::abs(x_p(i)) > best) {
            best = std::abs(x_p(i));
            imax = i;
        }
    if (best <= 0.0) return x_p;
    cd phase = x_p(imax) / std::abs(x_p(imax));
    return x_p / phase;
}

double peak_energy_fraction(const CVec& x_p) {
    double total = x_p.squaredNorm();
    if (total == 0.0) return 0.0;
    return x_p.cwiseAbs2().maxCoeff() / total;
}

}  // namespace otfs
