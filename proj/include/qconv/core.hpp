// Core value types for the quadratic-minorant convexity toolkit: points in
// R^n (n = 1 or 2), uniform box grids, extended-real grid functions, the
// quadratic minorant family phi(x) = -a|x|^2 + <v,x> + c with a >= 0, and
// subgradient witness records shared by the higher-level modules.
//
// All types are immutable values after construction; every operation here is
// a pure function, so concurrent reads are safe.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qconv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an internal cross-check contradicts itself (e.g. a certificate
// that fails its independent recomputation). Never expected in normal runs.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Points

struct Vec {
    int dim = 1;
    std::array<double, 2> c{0.0, 0.0};

    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
};

inline Vec vec1(double x) { return Vec{1, {x, 0.0}}; }
inline Vec vec2(double x, double y) { return Vec{2, {x, y}}; }

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r[i] += b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r[i] -= b[i];
    return r;
}

inline Vec operator*(double s, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r[i] *= s;
    return r;
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a[i] * b[i];
    return s;
}

inline double sqnorm(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(sqnorm(a)); }

// ---------------------------------------------------------------------------
// Quadratic minorants phi(x) = -a|x|^2 + <v,x> + c, a >= 0.

struct QuadraticMinorant {
    double a = 0.0;
    Vec v{};
    double c = 0.0;

    QuadraticMinorant() = default;
    QuadraticMinorant(double a_, Vec v_, double c_) : a(a_), v(v_), c(c_) {
        if (!(a >= 0.0))
            throw std::invalid_argument("QuadraticMinorant: curvature must be >= 0");
        if (!std::isfinite(a) || !std::isfinite(c))
            throw std::invalid_argument("QuadraticMinorant: coefficients must be finite");
        for (int i = 0; i < v.dim; ++i)
            if (!std::isfinite(v[i]))
                throw std::invalid_argument("QuadraticMinorant: slope must be finite");
    }

    int dim() const { return v.dim; }

    double eval(const Vec& x) const {
        if (x.dim != v.dim)
            throw std::invalid_argument("QuadraticMinorant::eval: dimension mismatch");
        return -a * sqnorm(x) + dot(v, x) + c;
    }
};

inline double eval_minorant(const QuadraticMinorant& phi, const Vec& x) {
    return phi.eval(x);
}

// ---------------------------------------------------------------------------
// Uniform box grids

struct GridAxis {
    double lo = 0.0;
    double step = 0.0;
    int count = 0;
    std::vector<double> coords;
};

class Grid {
public:
    Grid() = default;

    // Nodes along axis i are lo + k*h for k = 0..count-1; count is derived
    // from (hi - lo)/h, rounded when within 1e-9 of an integer, floored
    // otherwise. Each axis must carry at least 3 nodes.
    static Grid make(int dim, const std::array<double, 2>& lo,
                     const std::array<double, 2>& hi,
                     const std::array<double, 2>& h) {
        if (dim < 1 || dim > 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
        Grid g;
        g.dim_ = dim;
        g.size_ = 1;
        for (int i = 0; i < dim; ++i) {
            auto ii = static_cast<size_t>(i);
            if (!(hi[ii] > lo[ii]))
                throw std::invalid_argument("Grid: box must satisfy lo < hi");
            if (!(h[ii] > 0.0)) throw std::invalid_argument("Grid: spacing must be > 0");
            double ratio = (hi[ii] - lo[ii]) / h[ii];
            double r = std::round(ratio);
            int segments;
            if (std::abs(ratio - r) <= 1e-9 * std::max(1.0, ratio))
                segments = static_cast<int>(r);
            else
                segments = static_cast<int>(std::floor(ratio));
            if (segments < 2)
                throw std::invalid_argument("Grid: need at least 3 nodes per axis");
            GridAxis ax;
            ax.lo = lo[ii];
            ax.step = h[ii];
            ax.count = segments + 1;
            ax.coords.resize(static_cast<size_t>(ax.count));
            for (int k = 0; k < ax.count; ++k)
                ax.coords[static_cast<size_t>(k)] = ax.lo + k * ax.step;
            g.axes_[ii] = std::move(ax);
            g.size_ *= static_cast<size_t>(segments + 1);
        }
        return g;
    }

    static Grid make1(double lo, double hi, double h) {
        return make(1, {lo, 0.0}, {hi, 0.0}, {h, 1.0});
    }
    static Grid make2(double lo0, double hi0, double h0, double lo1, double hi1,
                      double h1) {
        return make(2, {lo0, lo1}, {hi0, hi1}, {h0, h1});
    }

    int dim() const { return dim_; }
    size_t size() const { return size_; }
    const GridAxis& axis(int i) const { return axes_[static_cast<size_t>(i)]; }

    size_t flat(int i0, int i1 = 0) const {
        if (dim_ == 1) return static_cast<size_t>(i0);
        return static_cast<size_t>(i0) * static_cast<size_t>(axes_[1].count) +
               static_cast<size_t>(i1);
    }

    std::array<int, 2> unflat(size_t idx) const {
        if (dim_ == 1) return {static_cast<int>(idx), 0};
        int m1 = axes_[1].count;
        return {static_cast<int>(idx / static_cast<size_t>(m1)),
                static_cast<int>(idx % static_cast<size_t>(m1))};
    }

    Vec node(size_t idx) const {
        auto ij = unflat(idx);
        Vec p;
        p.dim = dim_;
        p[0] = axes_[0].coords[static_cast<size_t>(ij[0])];
        if (dim_ == 2) p[1] = axes_[1].coords[static_cast<size_t>(ij[1])];
        return p;
    }

    // Nearest node to an arbitrary point (clamped to the box).
    size_t nearest_node(const Vec& p) const {
        if (p.dim != dim_) throw std::invalid_argument("Grid::nearest_node: dimension mismatch");
        std::array<int, 2> ij{0, 0};
        for (int i = 0; i < dim_; ++i) {
            const GridAxis& ax = axes_[static_cast<size_t>(i)];
            double u = (p[i] - ax.lo) / ax.step;
            int k = static_cast<int>(std::lround(u));
            if (k < 0) k = 0;
            if (k >= ax.count) k = ax.count - 1;
            ij[static_cast<size_t>(i)] = k;
        }
        return flat(ij[0], ij[1]);
    }

    bool same_layout(const Grid& o) const {
        if (dim_ != o.dim_ || size_ != o.size_) return false;
        for (int i = 0; i < dim_; ++i) {
            auto ii = static_cast<size_t>(i);
            if (axes_[ii].count != o.axes_[ii].count) return false;
            if (axes_[ii].lo != o.axes_[ii].lo) return false;
            if (axes_[ii].step != o.axes_[ii].step) return false;
        }
        return true;
    }

    double max_step() const {
        double m = axes_[0].step;
        if (dim_ == 2) m = std::max(m, axes_[1].step);
        return m;
    }

    // Largest node norm, handy for far-field scale estimates.
    double box_radius() const {
        double r2 = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const GridAxis& ax = axes_[static_cast<size_t>(i)];
            double m = std::max(std::abs(ax.coords.front()), std::abs(ax.coords.back()));
            r2 += m * m;
        }
        return std::sqrt(r2);
    }

    double box_width(int i) const {
        const GridAxis& ax = axes_[static_cast<size_t>(i)];
        return ax.coords.back() - ax.coords.front();
    }

private:
    int dim_ = 1;
    size_t size_ = 0;
    std::array<GridAxis, 2> axes_{};
};

// ---------------------------------------------------------------------------
// Grid functions: values in R union {+inf}. -inf and NaN are rejected so the
// represented function is proper whenever at least one value is finite.

class GridFunction {
public:
    GridFunction() = default;

    GridFunction(Grid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw std::invalid_argument("GridFunction: value count does not match grid");
        bool any_finite = false;
        for (double v : values_) {
            if (std::isnan(v) || v == -kInf)
                throw std::invalid_argument("GridFunction: values must lie in R or +inf");
            if (std::isfinite(v)) any_finite = true;
        }
        if (!any_finite)
            throw std::invalid_argument("GridFunction: effective domain is empty");
    }

    template <class F>
    static GridFunction sample(const Grid& grid, F&& fn) {
        std::vector<double> vals(grid.size());
        for (size_t i = 0; i < grid.size(); ++i) vals[i] = fn(grid.node(i));
        return GridFunction(grid, std::move(vals));
    }

    const Grid& grid() const { return grid_; }
    size_t size() const { return values_.size(); }
    double value(size_t idx) const { return values_[idx]; }
    const std::vector<double>& values() const { return values_; }
    bool finite_at(size_t idx) const { return std::isfinite(values_[idx]); }

    double finite_min() const {
        double m = kInf;
        for (double v : values_)
            if (std::isfinite(v)) m = std::min(m, v);
        return m;
    }

    double max_abs_finite() const {
        double m = 0.0;
        for (double v : values_)
            if (std::isfinite(v)) m = std::max(m, std::abs(v));
        return m;
    }

    // Multilinear interpolation; nullopt outside the box. Cells touching a
    // +inf corner with positive weight evaluate to +inf.
    std::optional<double> try_interp(const Vec& p) const {
        if (p.dim != grid_.dim()) throw std::invalid_argument("GridFunction::try_interp: dimension mismatch");
        std::array<int, 2> cell{0, 0};
        std::array<double, 2> frac{0.0, 0.0};
        for (int i = 0; i < grid_.dim(); ++i) {
            const GridAxis& ax = grid_.axis(i);
            double span = ax.coords.back() - ax.coords.front();
            double tol = 1e-12 * std::max(1.0, std::abs(span));
            if (p[i] < ax.coords.front() - tol || p[i] > ax.coords.back() + tol)
                return std::nullopt;
            double u = (p[i] - ax.lo) / ax.step;
            int k = static_cast<int>(std::floor(u));
            if (k < 0) k = 0;
            if (k > ax.count - 2) k = ax.count - 2;
            cell[static_cast<size_t>(i)] = k;
            frac[static_cast<size_t>(i)] = u - k;
        }
        double acc = 0.0;
        bool hit_inf = false;
        int corners = grid_.dim() == 1 ? 2 : 4;
        for (int cbit = 0; cbit < corners; ++cbit) {
            int d0 = cbit & 1;
            int d1 = (cbit >> 1) & 1;
            double w = (d0 ? frac[0] : 1.0 - frac[0]);
            if (grid_.dim() == 2) w *= (d1 ? frac[1] : 1.0 - frac[1]);
            if (w <= 0.0) continue;
            double v = values_[grid_.flat(cell[0] + d0, cell[1] + d1)];
            if (!std::isfinite(v)) {
                hit_inf = true;
                continue;
            }
            acc += w * v;
        }
        if (hit_inf) return kInf;
        return acc;
    }

    // Largest first divided difference over adjacent finite pairs; a cheap
    // local Lipschitz estimate used by the default grid tolerance.
    double lipschitz_estimate() const {
        double L = 0.0;
        if (grid_.dim() == 1) {
            for (int i = 0; i + 1 < grid_.axis(0).count; ++i) {
                double f0 = values_[grid_.flat(i)], f1 = values_[grid_.flat(i + 1)];
                if (std::isfinite(f0) && std::isfinite(f1))
                    L = std::max(L, std::abs(f1 - f0) / grid_.axis(0).step);
            }
            return L;
        }
        for (int i = 0; i < grid_.axis(0).count; ++i)
            for (int j = 0; j < grid_.axis(1).count; ++j) {
                double f = values_[grid_.flat(i, j)];
                if (!std::isfinite(f)) continue;
                if (i + 1 < grid_.axis(0).count) {
                    double g = values_[grid_.flat(i + 1, j)];
                    if (std::isfinite(g))
                        L = std::max(L, std::abs(g - f) / grid_.axis(0).step);
                }
                if (j + 1 < grid_.axis(1).count) {
                    double g = values_[grid_.flat(i, j + 1)];
                    if (std::isfinite(g))
                        L = std::max(L, std::abs(g - f) / grid_.axis(1).step);
                }
            }
        return L;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

// Default tolerance for grid-scale equalities: 4*h*L plus a small absolute
// floor so constant functions do not degenerate to a zero tolerance.
inline double grid_tolerance(const GridFunction& f) {
    return 4.0 * f.grid().max_step() * f.lipschitz_estimate() +
           1e-12 * (1.0 + f.max_abs_finite());
}

// supp(f) membership: phi <= f at every node, +inf nodes pass trivially.
inline bool is_support(const QuadraticMinorant& phi, const GridFunction& f,
                       double tol = 0.0) {
    if (phi.dim() != f.grid().dim())
        throw std::invalid_argument("is_support: dimension mismatch");
    for (size_t i = 0; i < f.size(); ++i) {
        double fv = f.value(i);
        if (!std::isfinite(fv)) continue;
        if (phi.eval(f.grid().node(i)) > fv + tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Subgradient witnesses

enum class WitnessScope { Global, Local };
enum class VerifyStatus { Unverified, VerifiedOnGrid, Refuted };

struct SubgradientWitness {
    double a = 0.0;    // curvature, >= 0
    Vec v{};           // slope
    double eps = 0.0;  // slack, >= 0
    WitnessScope scope = WitnessScope::Global;
    double delta = 0.0;  // ball radius when scope == Local
    VerifyStatus status = VerifyStatus::Unverified;
    size_t worst_node = 0;      // meaningful when Refuted
    double worst_violation = 0.0;

    SubgradientWitness() = default;
    SubgradientWitness(double a_, Vec v_, double eps_ = 0.0,
                       WitnessScope scope_ = WitnessScope::Global,
                       double delta_ = 0.0)
        : a(a_), v(v_), eps(eps_), scope(scope_), delta(delta_) {
        if (!(a >= 0.0)) throw std::invalid_argument("SubgradientWitness: curvature must be >= 0");
        if (!(eps >= 0.0)) throw std::invalid_argument("SubgradientWitness: slack must be >= 0");
        if (scope == WitnessScope::Local && !(delta > 0.0))
            throw std::invalid_argument("SubgradientWitness: local scope requires delta > 0");
    }

    bool verified() const { return status == VerifyStatus::VerifiedOnGrid; }
};

}  // namespace qconv
