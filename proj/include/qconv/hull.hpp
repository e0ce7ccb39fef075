// Discrete conjugacy machinery: lower convex envelopes on grids, curvature
// schedules, the schedule-limited hull H(x) = max_a [conv(f + a|.|^2)(x) -
// a|x|^2], the hull-gap convexity test, and Moreau envelopes.
//
// 1-d envelopes are exact (lower hull of the finite sample points; nodes
// outside the finite span stay +inf, which is the pointwise supremum of all
// convex minorants there). 2-d envelopes use a two-pass discrete Legendre
// transform over a bounded slope grid; the result is a true convex minorant
// with O(h) error against the exact discrete envelope, and the conjugate
// table is kept so supporting slopes can be extracted at any node.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qconv/core.hpp"

namespace qconv {

// ---------------------------------------------------------------------------
// Curvature schedules: 0 = a0 < a1 < ... < am.

class CurvatureSchedule {
public:
    explicit CurvatureSchedule(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 2)
            throw std::invalid_argument("CurvatureSchedule: need a0 = 0 plus at least one curvature");
        if (values_.front() != 0.0)
            throw std::invalid_argument("CurvatureSchedule: a0 must be 0");
        for (size_t i = 1; i < values_.size(); ++i)
            if (!(values_[i] > values_[i - 1]) || !std::isfinite(values_[i]))
                throw std::invalid_argument("CurvatureSchedule: values must be strictly increasing and finite");
    }

    // {0, 1/2, 1, 2, 4, ..., first power of two >= a_top}
    static CurvatureSchedule geometric(double a_top) {
        std::vector<double> v{0.0, 0.5};
        double a = 1.0;
        for (int k = 0; k < 64; ++k) {
            v.push_back(a);
            if (a >= a_top) break;
            a *= 2.0;
        }
        return CurvatureSchedule(std::move(v));
    }

    // Default schedule for f: curvatures up to the largest negative second
    // difference of f measured at stride-8 resolution (divided by the step
    // squared), so the sweep resolves curvature visible at scale 8h while
    // kinks sharper than that stay unreachable and report as such.
    static CurvatureSchedule default_for(const GridFunction& f);

    const std::vector<double>& values() const { return values_; }
    double max_curvature() const { return values_.back(); }

private:
    std::vector<double> values_;
};

namespace detail {

// Required convexifying curvature along one strided line direction.
inline double second_difference_requirement(const GridFunction& f, int stride0,
                                            int stride1) {
    const Grid& g = f.grid();
    double step2;
    if (g.dim() == 1) {
        double d = stride0 * g.axis(0).step;
        step2 = d * d;
    } else {
        double d0 = stride0 * g.axis(0).step;
        double d1 = stride1 * g.axis(1).step;
        step2 = d0 * d0 + d1 * d1;
    }
    double req = 0.0;
    int m0 = g.axis(0).count;
    int m1 = g.dim() == 2 ? g.axis(1).count : 1;
    for (int i = 0; i < m0; ++i) {
        for (int j = 0; j < m1; ++j) {
            int ip = i + stride0, im = i - stride0;
            int jp = j + stride1, jm = j - stride1;
            if (im < 0 || ip >= m0 || jm < 0 || jp >= m1) continue;
            double fm = f.value(g.flat(im, jm));
            double f0 = f.value(g.flat(i, j));
            double fp = f.value(g.flat(ip, jp));
            if (!std::isfinite(fm) || !std::isfinite(f0) || !std::isfinite(fp)) continue;
            double d2 = fp - 2.0 * f0 + fm;
            if (d2 < 0.0) req = std::max(req, -d2 / (2.0 * step2));
        }
    }
    return req;
}

}  // namespace detail

inline CurvatureSchedule CurvatureSchedule::default_for(const GridFunction& f) {
    const Grid& g = f.grid();
    auto stride_for = [](int count) {
        int s = 8;
        while (s > 1 && 2 * s >= count) s /= 2;
        return s;
    };
    double need = 0.0;
    if (g.dim() == 1) {
        need = detail::second_difference_requirement(f, stride_for(g.axis(0).count), 0);
    } else {
        int s0 = stride_for(g.axis(0).count);
        int s1 = stride_for(g.axis(1).count);
        need = std::max({detail::second_difference_requirement(f, s0, 0),
                         detail::second_difference_requirement(f, 0, s1),
                         detail::second_difference_requirement(f, s0, s1),
                         detail::second_difference_requirement(f, s0, -s1)});
    }
    double a_top = 1.0;
    while (a_top < need && a_top < 1e12) a_top *= 2.0;
    return geometric(a_top);
}

// ---------------------------------------------------------------------------
// Convex envelopes

class ConvexHull {
public:
    const GridFunction& hull() const { return hull_; }
    double value(size_t idx) const { return hull_.value(idx); }

    // Supporting slope of the envelope at a node (min-norm tie break).
    // nullopt at nodes outside the finite span.
    std::optional<Vec> support_slope(size_t idx) const {
        if (!std::isfinite(hull_.value(idx))) return std::nullopt;
        if (hull_.grid().dim() == 1) {
            auto [lo, hi] = slope_interval_1d(idx);
            return vec1(pick_min_norm(lo, hi));
        }
        return support_slope_2d(idx);
    }

    // 1-d only: the closed interval of supporting slopes at a node of the
    // envelope; endpoints are +-inf at the ends of the finite span.
    std::pair<double, double> slope_interval_1d(size_t idx) const {
        const Grid& g = hull_.grid();
        int i = static_cast<int>(idx);
        double h = g.axis(0).step;
        double lo = -kInf, hi = kInf;
        if (i > 0 && std::isfinite(hull_.value(idx - 1)))
            lo = (hull_.value(idx) - hull_.value(idx - 1)) / h;
        if (i + 1 < g.axis(0).count && std::isfinite(hull_.value(idx + 1)))
            hi = (hull_.value(idx + 1) - hull_.value(idx)) / h;
        return {lo, hi};
    }

    static double pick_min_norm(double lo, double hi) {
        if (lo <= 0.0 && 0.0 <= hi) return 0.0;
        if (lo > 0.0) return lo;
        return hi;
    }

    // 2-d internals are exposed for slope-slice sampling.
    const std::vector<double>& slope_axis(int i) const { return slopes_[static_cast<size_t>(i)]; }
    double conjugate(size_t k0, size_t k1) const { return conj_[k0 * slopes_[1].size() + k1]; }

    friend ConvexHull compute_convex_hull(const GridFunction& f);

private:
    std::optional<Vec> support_slope_2d(size_t idx) const {
        const Vec x = hull_.grid().node(idx);
        const auto& s0 = slopes_[0];
        const auto& s1 = slopes_[1];
        double best = -kInf;
        for (size_t k0 = 0; k0 < s0.size(); ++k0)
            for (size_t k1 = 0; k1 < s1.size(); ++k1) {
                double c = conj_[k0 * s1.size() + k1];
                if (c == kInf) continue;
                best = std::max(best, s0[k0] * x[0] + s1[k1] * x[1] - c);
            }
        if (best == -kInf) return std::nullopt;
        double tie = 1e-12 * (1.0 + std::abs(best));
        double best_norm = kInf;
        Vec pick = vec2(0, 0);
        for (size_t k0 = 0; k0 < s0.size(); ++k0)
            for (size_t k1 = 0; k1 < s1.size(); ++k1) {
                double c = conj_[k0 * s1.size() + k1];
                if (c == kInf) continue;
                double val = s0[k0] * x[0] + s1[k1] * x[1] - c;
                if (val >= best - tie) {
                    double n = s0[k0] * s0[k0] + s1[k1] * s1[k1];
                    if (n < best_norm) {
                        best_norm = n;
                        pick = vec2(s0[k0], s1[k1]);
                    }
                }
            }
        return pick;
    }

    GridFunction hull_;
    std::array<std::vector<double>, 2> slopes_{};  // 2-d only
    std::vector<double> conj_;                     // 2-d only; +inf = no data
};

namespace detail {

inline std::vector<double> lower_hull_1d(const Grid& g, const std::vector<double>& vals) {
    int m = g.axis(0).count;
    const auto& xs = g.axis(0).coords;
    std::vector<int> hx;  // hull vertex indices
    hx.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        if (!std::isfinite(vals[static_cast<size_t>(i)])) continue;
        // pop while the previous vertex sits on or above the new chord
        while (hx.size() >= 2) {
            int i0 = hx[hx.size() - 2], i1 = hx.back();
            double x0 = xs[static_cast<size_t>(i0)], y0 = vals[static_cast<size_t>(i0)];
            double x1 = xs[static_cast<size_t>(i1)], y1 = vals[static_cast<size_t>(i1)];
            double x2 = xs[static_cast<size_t>(i)], y2 = vals[static_cast<size_t>(i)];
            if ((y1 - y0) * (x2 - x0) >= (y2 - y0) * (x1 - x0))
                hx.pop_back();
            else
                break;
        }
        hx.push_back(i);
    }
    std::vector<double> out(static_cast<size_t>(m), kInf);
    if (hx.empty()) return out;  // unreachable for proper inputs
    size_t seg = 0;
    for (int i = hx.front(); i <= hx.back(); ++i) {
        while (seg + 1 < hx.size() && hx[seg + 1] < i) ++seg;
        if (i == hx[seg]) {
            out[static_cast<size_t>(i)] = vals[static_cast<size_t>(i)];
        } else {
            int i0 = hx[seg], i1 = hx[seg + 1];
            double x0 = xs[static_cast<size_t>(i0)], x1 = xs[static_cast<size_t>(i1)];
            double t = (xs[static_cast<size_t>(i)] - x0) / (x1 - x0);
            out[static_cast<size_t>(i)] =
                vals[static_cast<size_t>(i0)] +
                t * (vals[static_cast<size_t>(i1)] - vals[static_cast<size_t>(i0)]);
        }
    }
    return out;
}

inline std::vector<double> slope_axis_for(const GridFunction& f, int axis_idx) {
    const Grid& g = f.grid();
    double R = 0.0;
    int m0 = g.axis(0).count;
    int m1 = g.dim() == 2 ? g.axis(1).count : 1;
    for (int i = 0; i < m0; ++i)
        for (int j = 0; j < m1; ++j) {
            int ip = i + (axis_idx == 0 ? 1 : 0);
            int jp = j + (axis_idx == 1 ? 1 : 0);
            if (ip >= m0 || jp >= m1) continue;
            double a = f.value(g.flat(i, j)), b = f.value(g.flat(ip, jp));
            if (std::isfinite(a) && std::isfinite(b))
                R = std::max(R, std::abs(b - a) / g.axis(axis_idx).step);
        }
    R = std::max(R, 1e-9) * (1.0 + 1e-9);
    int count = 2 * g.axis(axis_idx).count + 1;
    count = std::clamp(count, 17, 1031);
    std::vector<double> s(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k)
        s[static_cast<size_t>(k)] = -R + (2.0 * R) * k / (count - 1);
    return s;
}

}  // namespace detail

inline ConvexHull compute_convex_hull(const GridFunction& f) {
    ConvexHull r;
    const Grid& g = f.grid();
    if (g.dim() == 1) {
        r.hull_ = GridFunction(g, detail::lower_hull_1d(g, f.values()));
        return r;
    }

    r.slopes_[0] = detail::slope_axis_for(f, 0);
    r.slopes_[1] = detail::slope_axis_for(f, 1);
    const auto& s0 = r.slopes_[0];
    const auto& s1 = r.slopes_[1];
    const auto& x0 = g.axis(0).coords;
    const auto& x1 = g.axis(1).coords;
    size_t m0 = static_cast<size_t>(g.axis(0).count);
    size_t m1 = static_cast<size_t>(g.axis(1).count);
    size_t K0 = s0.size(), K1 = s1.size();

    // conj(s) = max_x <s,x> - f(x), split per axis. -inf (no finite data)
    // rows are carried as -inf and become +inf entries in the stored table.
    std::vector<double> T(m0 * K1, -kInf);
    for (size_t i0 = 0; i0 < m0; ++i0)
        for (size_t k1 = 0; k1 < K1; ++k1) {
            double best = -kInf;
            for (size_t i1 = 0; i1 < m1; ++i1) {
                double fv = f.value(g.flat(static_cast<int>(i0), static_cast<int>(i1)));
                if (!std::isfinite(fv)) continue;
                best = std::max(best, s1[k1] * x1[i1] - fv);
            }
            T[i0 * K1 + k1] = best;
        }
    r.conj_.assign(K0 * K1, kInf);
    for (size_t k0 = 0; k0 < K0; ++k0)
        for (size_t k1 = 0; k1 < K1; ++k1) {
            double best = -kInf;
            for (size_t i0 = 0; i0 < m0; ++i0) {
                double t = T[i0 * K1 + k1];
                if (t == -kInf) continue;
                best = std::max(best, s0[k0] * x0[i0] + t);
            }
            if (best != -kInf) r.conj_[k0 * K1 + k1] = best;
        }

    // hull(x) = max_s <s,x> - conj(s), again split per axis
    std::vector<double> U(K0 * m1, -kInf);
    for (size_t k0 = 0; k0 < K0; ++k0)
        for (size_t i1 = 0; i1 < m1; ++i1) {
            double best = -kInf;
            for (size_t k1 = 0; k1 < K1; ++k1) {
                double c = r.conj_[k0 * K1 + k1];
                if (c == kInf) continue;
                best = std::max(best, s1[k1] * x1[i1] - c);
            }
            U[k0 * m1 + i1] = best;
        }
    std::vector<double> hull(m0 * m1, kInf);
    for (size_t i0 = 0; i0 < m0; ++i0)
        for (size_t i1 = 0; i1 < m1; ++i1) {
            double best = -kInf;
            for (size_t k0 = 0; k0 < K0; ++k0) {
                double u = U[k0 * m1 + i1];
                if (u == -kInf) continue;
                best = std::max(best, s0[k0] * x0[i0] + u);
            }
            hull[i0 * m1 + i1] = best == -kInf ? kInf : best;
        }
    r.hull_ = GridFunction(g, std::move(hull));
    return r;
}

// Largest convex function <= g on the grid nodes.
inline GridFunction convex_hull_grid(const GridFunction& g) {
    return compute_convex_hull(g).hull();
}

namespace detail {

inline std::vector<double> add_curvature(const GridFunction& f, double a) {
    std::vector<double> out(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        double fv = f.value(i);
        out[i] = std::isfinite(fv) ? fv + a * sqnorm(f.grid().node(i)) : kInf;
    }
    return out;
}

}  // namespace detail

// Schedule-limited hull: H(x) = max_{a in sched} conv(f + a|.|^2)(x) - a|x|^2.
inline GridFunction phi_hull(const GridFunction& f, const CurvatureSchedule& sched) {
    const Grid& g = f.grid();
    std::vector<double> H(f.size(), -kInf);
    for (double a : sched.values()) {
        GridFunction shifted(g, detail::add_curvature(f, a));
        GridFunction conv = convex_hull_grid(shifted);
        for (size_t i = 0; i < f.size(); ++i) {
            double cv = conv.value(i);
            double val = std::isfinite(cv) ? cv - a * sqnorm(g.node(i)) : kInf;
            H[i] = std::max(H[i], val);
        }
    }
    return GridFunction(g, std::move(H));
}

// Nodewise f - phi_hull(f); 0 where both are +inf, +inf where only the hull
// fails to reach an infinite value.
inline std::vector<double> hull_gap(const GridFunction& f, const CurvatureSchedule& sched) {
    GridFunction H = phi_hull(f, sched);
    std::vector<double> gap(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        double fv = f.value(i), hv = H.value(i);
        if (!std::isfinite(fv))
            gap[i] = std::isfinite(hv) ? kInf : 0.0;
        else
            gap[i] = fv - hv;
    }
    return gap;
}

inline bool is_phi_convex(const GridFunction& f, const CurvatureSchedule& sched,
                          double tol) {
    for (double gpv : hull_gap(f, sched))
        if (gpv > tol) return false;
    return true;
}

// Moreau envelope over grid nodes: e(x) = min_y f(y) + |x-y|^2 / (2 lambda).
inline GridFunction moreau_envelope(const GridFunction& f, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("moreau_envelope: lambda must be > 0");
    const Grid& g = f.grid();
    double w = 1.0 / (2.0 * lambda);
    if (g.dim() == 1) {
        const auto& xs = g.axis(0).coords;
        size_t m = xs.size();
        std::vector<double> out(m, kInf);
        for (size_t i = 0; i < m; ++i) {
            double best = kInf;
            for (size_t j = 0; j < m; ++j) {
                double fv = f.value(j);
                if (!std::isfinite(fv)) continue;
                double d = xs[i] - xs[j];
                best = std::min(best, fv + w * d * d);
            }
            out[i] = best;
        }
        return GridFunction(g, std::move(out));
    }
    size_t m0 = static_cast<size_t>(g.axis(0).count);
    size_t m1 = static_cast<size_t>(g.axis(1).count);
    const auto& x0 = g.axis(0).coords;
    const auto& x1 = g.axis(1).coords;
    std::vector<double> pass1(m0 * m1, kInf);
    for (size_t i0 = 0; i0 < m0; ++i0)
        for (size_t i1 = 0; i1 < m1; ++i1) {
            double best = kInf;
            for (size_t j1 = 0; j1 < m1; ++j1) {
                double fv = f.value(g.flat(static_cast<int>(i0), static_cast<int>(j1)));
                if (!std::isfinite(fv)) continue;
                double d = x1[i1] - x1[j1];
                best = std::min(best, fv + w * d * d);
            }
            pass1[i0 * m1 + i1] = best;
        }
    std::vector<double> out(m0 * m1, kInf);
    for (size_t i0 = 0; i0 < m0; ++i0)
        for (size_t i1 = 0; i1 < m1; ++i1) {
            double best = kInf;
            for (size_t j0 = 0; j0 < m0; ++j0) {
                double pv = pass1[j0 * m1 + i1];
                if (!std::isfinite(pv)) continue;
                double d = x0[i0] - x0[j0];
                best = std::min(best, pv + w * d * d);
            }
            out[i0 * m1 + i1] = best;
        }
    return GridFunction(g, std::move(out));
}

// ---------------------------------------------------------------------------
// Supporting slopes of f + a|.|^2 at a single node, with slack.
//
// Feasibility of v with g(y) >= g(xbar) - eps + <v, y - xbar> over all nodes
// is decided exactly in 1-d by comparing extreme divided differences. In 2-d
// the slope grid of the envelope is scanned instead (an under-approximation,
// consistent with the 2-d envelope itself).

struct SupportSlope {
    Vec v;
    double lo = -kInf, hi = kInf;  // 1-d slope interval
};

inline std::optional<SupportSlope> support_slope_at(const GridFunction& g, size_t node,
                                                    double eps, double tol = 0.0) {
    double base = g.value(node);
    if (!std::isfinite(base)) throw std::invalid_argument("support_slope_at: node not in dom");
    base -= eps;
    if (g.grid().dim() == 1) {
        const auto& xs = g.grid().axis(0).coords;
        size_t m = xs.size();
        double xb = xs[node];
        double lo = -kInf, hi = kInf;
        for (size_t j = 0; j < m; ++j) {
            if (j == node) continue;
            double fv = g.value(j);
            if (!std::isfinite(fv)) continue;
            double q = (base - fv) / (xb - xs[j]);
            if (xs[j] < xb)
                lo = std::max(lo, q);
            else
                hi = std::min(hi, (fv - base) / (xs[j] - xb));
        }
        if (lo > hi + tol) return std::nullopt;
        if (lo > hi) lo = hi;  // tolerance closed the gap; keep a consistent interval
        SupportSlope s;
        s.lo = lo;
        s.hi = hi;
        s.v = vec1(ConvexHull::pick_min_norm(lo, hi));
        return s;
    }
    ConvexHull ch = compute_convex_hull(g);
    if (ch.value(node) < base - tol) return std::nullopt;
    // Recheck the min-norm slope against the eps-shifted base point.
    const Vec xb = g.grid().node(node);
    const auto& s0 = ch.slope_axis(0);
    const auto& s1 = ch.slope_axis(1);
    double best_norm = kInf;
    Vec pick{};
    bool found = false;
    for (size_t k0 = 0; k0 < s0.size(); ++k0)
        for (size_t k1 = 0; k1 < s1.size(); ++k1) {
            double c = ch.conjugate(k0, k1);
            if (c == kInf) continue;
            // <s,xbar> - conj(s) >= base  <=>  the affine piece clears base at xbar
            if (s0[k0] * xb[0] + s1[k1] * xb[1] - c >= base - tol) {
                double n = s0[k0] * s0[k0] + s1[k1] * s1[k1];
                if (n < best_norm) {
                    best_norm = n;
                    pick = vec2(s0[k0], s1[k1]);
                    found = true;
                }
            }
        }
    if (!found) return std::nullopt;
    SupportSlope s;
    s.v = pick;
    return s;
}

}  // namespace qconv
