// eps-subgradient verification and search for the quadratic-minorant family,
// local subgradients and their promotion to global ones, conversions to and
// from proximal form, constructors for smooth functions, a prox-regularity
// probe, and Dini/Clarke difference-quotient estimators.
//
// The defining inequality throughout, for a witness (a, v) at xbar:
//
//    f(x) - f(xbar) >= <v, x - xbar> - a|x|^2 + a|xbar|^2 - eps
//
// quantified over grid nodes. A witness verifies when the inequality holds
// within tol at every node; otherwise it is refuted with the worst node.

#pragma once

#include <functional>
#include <vector>

#include "qconv/core.hpp"
#include "qconv/hull.hpp"

namespace qconv {

inline std::vector<size_t> ball_nodes(const Grid& g, size_t center, double radius) {
    std::vector<size_t> out;
    Vec c = g.node(center);
    for (size_t i = 0; i < g.size(); ++i)
        if (norm(g.node(i) - c) < radius) out.push_back(i);
    return out;
}

namespace detail {

inline SubgradientWitness check_witness(const GridFunction& f, size_t xbar, double a,
                                        const Vec& v, double eps, double tol,
                                        WitnessScope scope, double delta) {
    if (!f.finite_at(xbar))
        throw std::invalid_argument("check subgradient: xbar not in dom(f)");
    const Grid& g = f.grid();
    Vec xb = g.node(xbar);
    double fxb = f.value(xbar);
    double qxb = sqnorm(xb);

    SubgradientWitness w(a, v, eps, scope, delta);
    double worst = kInf;
    size_t worst_node = xbar;
    bool local = scope == WitnessScope::Local;
    size_t checked = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        Vec x = g.node(i);
        if (local && !(norm(x - xb) < delta)) continue;
        ++checked;
        double fx = f.value(i);
        if (!std::isfinite(fx)) continue;
        double rhs = dot(v, x - xb) - a * sqnorm(x) + a * qxb - eps;
        double margin = fx - fxb - rhs;
        if (margin < worst) {
            worst = margin;
            worst_node = i;
        }
    }
    if (local && checked <= 1)
        throw std::invalid_argument("check_local_subgradient: no grid node inside the ball");
    if (worst >= -tol) {
        w.status = VerifyStatus::VerifiedOnGrid;
    } else {
        w.status = VerifyStatus::Refuted;
        w.worst_node = worst_node;
        w.worst_violation = -worst;
    }
    return w;
}

}  // namespace detail

inline SubgradientWitness check_eps_subgradient(const GridFunction& f, size_t xbar,
                                               double a, const Vec& v, double eps,
                                               double tol = 0.0) {
    return detail::check_witness(f, xbar, a, v, eps, tol, WitnessScope::Global, 0.0);
}

inline SubgradientWitness check_local_subgradient(const GridFunction& f, size_t xbar,
                                                  double a, const Vec& v, double delta,
                                                  double tol = 0.0) {
    if (!(delta > 0.0))
        throw std::invalid_argument("check_local_subgradient: delta must be > 0");
    return detail::check_witness(f, xbar, a, v, 0.0, tol, WitnessScope::Local, delta);
}

// Sweeps the schedule; for each curvature a the witness (a, v) exists iff
// v supports f + a|.|^2 at xbar with slack eps, which is decided by
// support_slope_at. First contact wins; the slope choice is min-norm.
namespace detail {

// 1-d contact test for f + a|.|^2 at a node with slack, streamed without
// materializing the shifted values.
inline std::optional<SupportSlope> support_slope_shifted_1d(const GridFunction& f, double a,
                                                            size_t node, double eps,
                                                            double tol) {
    const auto& xs = f.grid().axis(0).coords;
    double xb = xs[node];
    double base = f.value(node) + a * xb * xb - eps;
    double lo = -kInf, hi = kInf;
    for (size_t j = 0; j < xs.size(); ++j) {
        if (j == node) continue;
        double fv = f.value(j);
        if (!std::isfinite(fv)) continue;
        double gv = fv + a * xs[j] * xs[j];
        if (xs[j] < xb)
            lo = std::max(lo, (base - gv) / (xb - xs[j]));
        else
            hi = std::min(hi, (gv - base) / (xs[j] - xb));
    }
    if (lo > hi + tol) return std::nullopt;
    if (lo > hi) lo = hi;
    SupportSlope s;
    s.lo = lo;
    s.hi = hi;
    s.v = vec1(ConvexHull::pick_min_norm(lo, hi));
    return s;
}

}  // namespace detail

inline std::optional<SubgradientWitness> find_eps_subgradient(
    const GridFunction& f, size_t xbar, double eps, const CurvatureSchedule& sched,
    double tol = 1e-12) {
    if (!f.finite_at(xbar))
        throw std::invalid_argument("find_eps_subgradient: xbar not in dom(f)");
    const Grid& g = f.grid();
    double scale_tol = tol * (1.0 + f.max_abs_finite());
    for (double a : sched.values()) {
        std::optional<SupportSlope> s;
        if (g.dim() == 1) {
            s = detail::support_slope_shifted_1d(f, a, xbar, eps, scale_tol);
        } else {
            GridFunction shifted(g, detail::add_curvature(f, a));
            s = support_slope_at(shifted, xbar, eps, scale_tol);
        }
        if (!s) continue;
        SubgradientWitness w =
            check_eps_subgradient(f, xbar, a, s->v, eps, scale_tol + tol * (1.0 + a * sqnorm(g.node(xbar))));
        if (w.verified()) return w;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Global quadratic minorant bounds f(x) >= -a0|x|^2 + c0

struct GlobalMinorantBound {
    double a0 = 0.0;
    double c0 = 0.0;
};

inline GlobalMinorantBound make_global_bound(const GridFunction& f, double a0, double c0,
                                             double tol = 0.0) {
    if (!(a0 >= 0.0)) throw std::invalid_argument("GlobalMinorantBound: a0 must be >= 0");
    for (size_t i = 0; i < f.size(); ++i) {
        double fv = f.value(i);
        if (!std::isfinite(fv)) continue;
        if (fv < -a0 * sqnorm(f.grid().node(i)) + c0 - tol)
            throw std::invalid_argument("GlobalMinorantBound: bound fails on the grid");
    }
    return GlobalMinorantBound{a0, c0};
}

// Centered form of a general minorant via <v,x> >= -|v|^2/2 - |x|^2/2:
// -a|x|^2 + <v,x> + c >= -(a + 1/2)|x|^2 + (c - |v|^2/2).
inline GlobalMinorantBound center_minorant(const QuadraticMinorant& phi) {
    return GlobalMinorantBound{phi.a + 0.5, phi.c - 0.5 * sqnorm(phi.v)};
}

// A bound for f gives one for the tilted function h = f - <w, . - xbar>.
inline GlobalMinorantBound tilt_bound(const GlobalMinorantBound& b, const Vec& w,
                                      const Vec& xbar) {
    QuadraticMinorant shifted(b.a0, -1.0 * w, b.c0 + dot(w, xbar));
    return center_minorant(shifted);
}

// ---------------------------------------------------------------------------
// Globalization: a local witness (a, v) on B(delta, xbar) plus a global
// quadratic bound yields a global witness (rho, v - 2 a xbar + 2 rho xbar)
// with
//   rho = max{ a, (f(xbar) + ah |xbar|^2 - ch)/delta^2 + ah (1 + 2|xbar|/delta) }
// where (ah, ch) is the centered bound of the tilted function. The output is
// re-verified at eps = 0; if the grid tolerance bites, the curvature is
// doubled (at most ten times) before failing loudly.

inline SubgradientWitness globalize(const GridFunction& f, size_t xbar, double a,
                                    const Vec& v, double delta,
                                    const GlobalMinorantBound& bound, double tol = 0.0) {
    SubgradientWitness local = check_local_subgradient(f, xbar, a, v, delta, tol);
    if (!local.verified())
        throw VerificationError("globalize: input witness is not a local subgradient");

    const Vec xb = f.grid().node(xbar);
    const Vec w = v - 2.0 * a * xb;
    GlobalMinorantBound hb = tilt_bound(bound, w, xb);
    double fxb = f.value(xbar);
    double nxb = norm(xb);
    double abar = (fxb + hb.a0 * nxb * nxb - hb.c0) / (delta * delta) +
                  hb.a0 * (1.0 + 2.0 * nxb / delta);
    double rho = std::max({abar, a, 0.0});

    // try the unchanged curvature first (local witnesses are often already
    // global), then the lemma constant, then power-of-two bumps of it
    std::vector<double> candidates{a};
    double bump = rho > 0.0 ? rho : 1e-9 * (1.0 + std::abs(fxb) + norm(v));
    for (int j = 0; j <= 10; ++j) candidates.push_back(j == 0 ? rho : bump * std::ldexp(1.0, j));
    for (double r : candidates) {
        if (r < a) continue;
        Vec vg = w + 2.0 * r * xb;
        SubgradientWitness out = check_eps_subgradient(f, xbar, r, vg, 0.0, tol);
        if (out.verified()) return out;
    }
    throw VerificationError("globalize: output failed grid verification after curvature bumps");
}

// ---------------------------------------------------------------------------
// Proximal form

struct ProximalWitness {
    Vec v{};
    double rho = 0.0;
    std::optional<double> delta{};  // nullopt = holds on the whole grid

    ProximalWitness() = default;
    ProximalWitness(Vec v_, double rho_, std::optional<double> delta_)
        : v(v_), rho(rho_), delta(delta_) {
        if (!(rho >= 0.0)) throw std::invalid_argument("ProximalWitness: rho must be >= 0");
        if (delta && !(*delta > 0.0))
            throw std::invalid_argument("ProximalWitness: delta must be > 0 when bounded");
    }
};

// Exact algebra: (a, v) global at xbar  =>  v - 2 a xbar proximal with
// rho = 2a, valid at every node.
inline ProximalWitness phi_to_proximal(double a, const Vec& v, const Vec& xbar) {
    return ProximalWitness(v - 2.0 * a * xbar, 2.0 * a, std::nullopt);
}

inline ProximalWitness phi_to_proximal(const SubgradientWitness& w, const Vec& xbar) {
    return phi_to_proximal(w.a, w.v, xbar);
}

// Margin check of f(x) >= f(xbar) + <v, x-xbar> - rho/2 |x-xbar|^2 over the
// (possibly unbounded) ball; returns the worst margin.
inline double proximal_margin(const GridFunction& f, size_t xbar, const ProximalWitness& pw) {
    const Grid& g = f.grid();
    Vec xb = g.node(xbar);
    double fxb = f.value(xbar);
    double worst = kInf;
    for (size_t i = 0; i < g.size(); ++i) {
        double fx = f.value(i);
        if (!std::isfinite(fx)) continue;
        Vec d = g.node(i) - xb;
        if (pw.delta && !(norm(d) < *pw.delta)) continue;
        double rhs = fxb + dot(pw.v, d) - 0.5 * pw.rho * sqnorm(d);
        worst = std::min(worst, fx - rhs);
    }
    return worst;
}

inline SubgradientWitness proximal_to_phi(const GridFunction& f, size_t xbar,
                                          const ProximalWitness& pw,
                                          const GlobalMinorantBound& bound,
                                          double tol = 0.0) {
    if (proximal_margin(f, xbar, pw) < -tol)
        throw VerificationError("proximal_to_phi: proximal inequality fails on the ball");
    const Grid& g = f.grid();
    Vec xb = g.node(xbar);
    double a_loc = 0.5 * pw.rho;
    Vec v_loc = pw.v + pw.rho * xb;
    double delta = pw.delta ? *pw.delta : 2.0 * g.box_radius() + g.max_step() + 1.0;
    return globalize(f, xbar, a_loc, v_loc, delta, bound, tol);
}

// ---------------------------------------------------------------------------
// Constructors for smooth functions

using GradOracle = std::function<Vec(const Vec&)>;

// Lipschitz-gradient route: witness (lambda/2, grad f(y) + lambda y), local on
// B(delta, y). The claimed constant is screened against divided differences
// of the oracle along grid edges inside the ball.
inline SubgradientWitness smooth_local_subgradient(const GridFunction& f,
                                                   const GradOracle& grad, size_t y_idx,
                                                   double lambda, double delta,
                                                   double tol = 0.0) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("smooth_local_subgradient: lambda must be > 0");
    const Grid& g = f.grid();
    Vec y = g.node(y_idx);
    auto ball = ball_nodes(g, y_idx, delta);
    double slack = 1e-9 * (1.0 + lambda) + tol;
    for (size_t idx : ball) {
        auto ij = g.unflat(idx);
        for (int axis = 0; axis < g.dim(); ++axis) {
            std::array<int, 2> nb = ij;
            nb[static_cast<size_t>(axis)] += 1;
            if (nb[static_cast<size_t>(axis)] >= g.axis(axis).count) continue;
            size_t jdx = g.flat(nb[0], nb[1]);
            Vec p = g.node(idx), q = g.node(jdx);
            if (!(norm(q - y) < delta)) continue;
            double lhs = norm(grad(p) - grad(q));
            if (lhs > lambda * norm(p - q) + slack)
                throw std::invalid_argument(
                    "smooth_local_subgradient: sampled gradient violates the claimed Lipschitz constant");
        }
    }
    Vec v = grad(y) + lambda * y;
    return check_local_subgradient(f, y_idx, 0.5 * lambda, v, delta, tol);
}

// Bounded-Hessian route: witness (gamma/2, grad f(x) + gamma x). gamma is
// screened against sampled second differences of f inside the ball.
inline SubgradientWitness c2_local_subgradient(const GridFunction& f,
                                               const GradOracle& grad, size_t x_idx,
                                               double gamma, double delta,
                                               double tol = 0.0) {
    if (!(gamma > 0.0)) throw std::invalid_argument("c2_local_subgradient: gamma must be > 0");
    const Grid& g = f.grid();
    Vec x = g.node(x_idx);
    double slack = 1e-9 * (1.0 + gamma) + tol;
    auto ball = ball_nodes(g, x_idx, delta);
    for (size_t idx : ball) {
        auto ij = g.unflat(idx);
        std::array<std::array<int, 2>, 4> dirs{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
        for (auto d : dirs) {
            if (g.dim() == 1 && (d[0] == 0 || d[1] != 0)) continue;
            int ip = ij[0] + d[0], im = ij[0] - d[0];
            int jp = ij[1] + d[1], jm = ij[1] - d[1];
            if (im < 0 || ip >= g.axis(0).count) continue;
            if (g.dim() == 2 && (jm < 0 || jp >= g.axis(1).count || jm >= g.axis(1).count || jp < 0))
                continue;
            size_t pi = g.flat(ip, g.dim() == 2 ? jp : 0);
            size_t mi = g.flat(im, g.dim() == 2 ? jm : 0);
            if (!(norm(g.node(pi) - x) < delta) || !(norm(g.node(mi) - x) < delta)) continue;
            double fp = f.value(pi), f0 = f.value(idx), fm = f.value(mi);
            if (!std::isfinite(fp) || !std::isfinite(f0) || !std::isfinite(fm)) continue;
            double step2 = sqnorm(g.node(pi) - g.node(idx));
            double curv = std::abs(fp - 2.0 * f0 + fm) / step2;
            if (curv > gamma + slack)
                throw std::invalid_argument(
                    "c2_local_subgradient: sampled curvature exceeds the claimed bound");
        }
    }
    Vec v = grad(x) + gamma * x;
    return check_local_subgradient(f, x_idx, 0.5 * gamma, v, delta, tol);
}

// ---------------------------------------------------------------------------
// Prox-regularity probe (a semi-decision: candidate subgradients u are
// sampled on 5 shells x 8 directions around v, and only those passing a
// local proximal screen at their base point are quantified over).

inline bool check_prox_regular(const GridFunction& f, size_t xbar, const Vec& v,
                               double rho, double eps_radius, double tol = 0.0) {
    const Grid& g = f.grid();
    if (!f.finite_at(xbar)) throw std::invalid_argument("check_prox_regular: xbar not in dom(f)");
    auto ball = ball_nodes(g, xbar, eps_radius);
    if (ball.size() <= 1)
        throw std::invalid_argument("check_prox_regular: ball contains no nodes");

    std::vector<Vec> candidates{v};
    const int shells = 5;
    if (g.dim() == 1) {
        for (int s = 1; s <= shells; ++s)
            for (double sign : {-1.0, 1.0})
                candidates.push_back(vec1(v[0] + sign * eps_radius * s / shells));
    } else {
        for (int s = 1; s <= shells; ++s)
            for (int k = 0; k < 8; ++k) {
                double ang = 2.0 * 3.14159265358979323846 * k / 8.0;
                candidates.push_back(vec2(v[0] + eps_radius * s / shells * std::cos(ang),
                                          v[1] + eps_radius * s / shells * std::sin(ang)));
            }
    }

    double fxb = f.value(xbar);
    double r_loc = 2.0 * g.max_step();
    for (size_t xi : ball) {
        double fx = f.value(xi);
        if (!std::isfinite(fx) || !(std::abs(fx - fxb) < eps_radius)) continue;
        Vec x = g.node(xi);
        for (const Vec& u : candidates) {
            // local screen: u behaves like a proximal subgradient at x
            bool qualifies = true;
            for (size_t xj : ball_nodes(g, xi, r_loc)) {
                double fj = f.value(xj);
                if (!std::isfinite(fj)) continue;
                Vec d = g.node(xj) - x;
                if (fj < fx + dot(u, d) - 0.5 * rho * sqnorm(d) - tol) {
                    qualifies = false;
                    break;
                }
            }
            if (!qualifies) continue;
            for (size_t xj : ball) {
                double fj = f.value(xj);
                if (!std::isfinite(fj)) continue;
                Vec d = g.node(xj) - x;
                if (fj < fx + dot(u, d) - 0.5 * rho * sqnorm(d) - tol) return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Dini / Clarke difference-quotient estimators.
//
// Scales couple a step t with a direction-perturbation radius r that shrinks
// faster than t, so the double limit liminf_{t->0, u->h} is approached
// through nested neighbourhoods. Values are interpolated multilinearly;
// samples leaving the box (or hitting +inf) are skipped.

struct DerivativeEstimate {
    double value = 0.0;
    double error_proxy = 0.0;  // |last scale - previous scale|
};

struct DiniSchedule {
    std::vector<double> t_scales;
    std::vector<double> u_radii;
    int base_span = 8;  // Clarke base points start within base_span * h of xbar

    // Steps W/8, W/16, ..., snapped to exact node multiples and floored at h,
    // so samples along the unperturbed direction carry no interpolation error
    // and the scale-to-scale proxy measures pure truncation. The direction
    // perturbation radius shrinks much faster than t (nested neighbourhoods
    // for the double limit).
    static DiniSchedule default_for(const Grid& g) {
        DiniSchedule s;
        double W = g.box_width(0);
        if (g.dim() == 2) W = std::max(W, g.box_width(1));
        double h = g.max_step();
        for (int k = 0; k <= 9; ++k) {
            double t = W * std::ldexp(1.0, -(3 + k));
            t = std::max(1.0, std::round(t / h)) * h;
            if (!s.t_scales.empty() && t == s.t_scales.back()) continue;
            s.t_scales.push_back(t);
            s.u_radii.push_back(h * std::pow(0.125, k));
        }
        return s;
    }
};

namespace detail {

inline std::vector<Vec> perturbations(const Vec& h, double r) {
    std::vector<Vec> us{h};
    if (h.dim == 1) {
        us.push_back(vec1(h[0] - r));
        us.push_back(vec1(h[0] + r));
    } else {
        for (int k = 0; k < 8; ++k) {
            double ang = 2.0 * 3.14159265358979323846 * k / 8.0;
            us.push_back(vec2(h[0] + r * std::cos(ang), h[1] + r * std::sin(ang)));
        }
    }
    return us;
}

}  // namespace detail

inline DerivativeEstimate dini_derivative(const GridFunction& f, size_t xbar, const Vec& h,
                                          const DiniSchedule& sched) {
    if (!f.finite_at(xbar)) throw std::invalid_argument("dini_derivative: xbar not in dom(f)");
    Vec xb = f.grid().node(xbar);
    double fxb = f.value(xbar);
    std::vector<double> per_scale;
    for (size_t k = 0; k < sched.t_scales.size(); ++k) {
        double t = sched.t_scales[k];
        double q = kInf;
        for (const Vec& u : detail::perturbations(h, sched.u_radii[k])) {
            auto val = f.try_interp(xb + t * u);
            if (!val || !std::isfinite(*val)) continue;
            q = std::min(q, (*val - fxb) / t);
        }
        if (q != kInf) per_scale.push_back(q);
    }
    if (per_scale.empty())
        throw std::invalid_argument("dini_derivative: all samples leave the box");
    DerivativeEstimate e;
    e.value = per_scale.back();
    e.error_proxy = per_scale.size() >= 2
                        ? std::abs(per_scale.back() - per_scale[per_scale.size() - 2])
                        : 0.0;
    return e;
}

inline DerivativeEstimate clarke_derivative(const GridFunction& f, size_t xbar, const Vec& h,
                                            const DiniSchedule& sched) {
    if (!f.finite_at(xbar)) throw std::invalid_argument("clarke_derivative: xbar not in dom(f)");
    const Grid& g = f.grid();
    std::vector<double> per_scale;
    for (size_t k = 0; k < sched.t_scales.size(); ++k) {
        double t = sched.t_scales[k];
        // base points shrink with the scale but keep the nearest neighbours,
        // so one-sided behaviour at kinks stays visible
        double radius = std::max(sched.base_span * g.max_step() * std::ldexp(1.0, -static_cast<int>(k)),
                                 1.01 * g.max_step());
        double q = -kInf;
        for (size_t bi : ball_nodes(g, xbar, radius + 1e-12)) {
            double fb = f.value(bi);
            if (!std::isfinite(fb)) continue;
            auto val = f.try_interp(g.node(bi) + t * h);
            if (!val || !std::isfinite(*val)) continue;
            q = std::max(q, (*val - fb) / t);
        }
        if (q != -kInf) per_scale.push_back(q);
    }
    if (per_scale.empty())
        throw std::invalid_argument("clarke_derivative: all samples leave the box");
    DerivativeEstimate e;
    e.value = per_scale.back();
    e.error_proxy = per_scale.size() >= 2
                        ? std::abs(per_scale.back() - per_scale[per_scale.size() - 2])
                        : 0.0;
    return e;
}

struct Interval {
    double lo = 0.0, hi = 0.0;
};

// Numeric Dini subdifferential in 1-d: {v : v <= d(+1), -v <= d(-1)}.
// Endpoints are widened outward by four times the scale-to-scale error proxy
// so the inside-out approximation of singleton intervals cannot collapse to a
// false Empty: for quotients approaching their limit like t^s the proxy is
// (2^s - 1) times the remaining bias, and the factor covers s down to ~1/3
// (the cusp family approaches like sqrt(t)). Genuine kinks keep a jump far
// above any widening.
inline std::optional<Interval> dini_interval_1d(const GridFunction& f, size_t xbar,
                                                const DiniSchedule& sched) {
    if (f.grid().dim() != 1) throw std::invalid_argument("dini_interval_1d: 1-d only");
    // a direction whose samples all leave the box constrains nothing
    std::optional<DerivativeEstimate> dp, dm;
    try {
        dp = dini_derivative(f, xbar, vec1(1.0), sched);
    } catch (const std::invalid_argument&) {}
    try {
        dm = dini_derivative(f, xbar, vec1(-1.0), sched);
    } catch (const std::invalid_argument&) {}
    double slack = 1e-6 * (1.0 + (dp ? std::abs(dp->value) : 0.0) +
                           (dm ? std::abs(dm->value) : 0.0));
    double hi = dp ? dp->value + 4.0 * dp->error_proxy + slack : kInf;
    double lo = dm ? -(dm->value + 4.0 * dm->error_proxy + slack) : -kInf;
    if (lo > hi) return std::nullopt;
    return Interval{lo, hi};
}

inline std::optional<Interval> clarke_interval_1d(const GridFunction& f, size_t xbar,
                                                  const DiniSchedule& sched) {
    if (f.grid().dim() != 1) throw std::invalid_argument("clarke_interval_1d: 1-d only");
    std::optional<DerivativeEstimate> dp, dm;
    try {
        dp = clarke_derivative(f, xbar, vec1(1.0), sched);
    } catch (const std::invalid_argument&) {}
    try {
        dm = clarke_derivative(f, xbar, vec1(-1.0), sched);
    } catch (const std::invalid_argument&) {}
    double lo = dm ? -dm->value : -kInf;
    double hi = dp ? dp->value : kInf;
    if (lo > hi) return std::nullopt;
    return Interval{lo, hi};
}

}  // namespace qconv
