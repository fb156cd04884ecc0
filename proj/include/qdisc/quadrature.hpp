#pragma once

/**
 * @file quadrature.hpp
 * @brief Integration on the disc, on Carleson boxes and on the circle.
 *
 * Disc integrals use the normalised area measure dA = r dr dtheta / pi on a
 * polar product mesh:
 *
 *   radial   geometric shells 1-r in [(1-r0) rho^{j+1}, (1-r0) rho^j], each
 *            carrying `radial_levels` Gauss-Legendre nodes, down to eps_min,
 *            followed by one midpoint tail cell [1 - g_J, 1);
 *   angular  midpoint cells, uniform, optionally graded geometrically towards
 *            focus angles where an integrand concentrates (Moebius kernels,
 *            test functions with a pole just outside the disc).
 *
 * Every rule has positive weights and never samples |z| = 1. Values are
 * reported with the relative change under one uniform refinement step.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "qdisc/parallel.hpp"
#include "qdisc/series.hpp"

namespace qdisc {

class quadrature_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadConfig {
    int radial_levels = 8;      // Gauss-Legendre nodes per geometric shell
    int angular_count = 128;    // base angular cells (full circle or per box)
    double grade_ratio = 0.5;   // rho
    double eps_min = 1e-6;      // smallest resolved 1-r
    int refine_factor = 2;

    void check() const {
        if (radial_levels < 8) throw std::invalid_argument("QuadConfig: radial levels must be >= 8");
        if (angular_count < 16) throw std::invalid_argument("QuadConfig: angular count must be >= 16");
        if (!(grade_ratio > 0.0 && grade_ratio < 1.0)) throw std::invalid_argument("QuadConfig: grade ratio must lie in (0,1)");
        if (!(eps_min > 0.0 && eps_min < 0.5)) throw std::invalid_argument("QuadConfig: eps_min must lie in (0,1/2)");
        if (refine_factor < 2) throw std::invalid_argument("QuadConfig: refine factor must be >= 2");
    }

    QuadConfig refined() const {
        QuadConfig c = *this;
        c.radial_levels *= refine_factor;
        c.angular_count *= refine_factor;
        // The boundary tail cell is part of the discretisation, so it shrinks too.
        c.eps_min /= static_cast<double>(refine_factor) * refine_factor;
        return c;
    }
};

struct RefinedValue {
    double value = 0.0;
    double refinement_delta = 0.0;

    bool converged(double tol) const { return refinement_delta <= tol; }
};

inline double relative_change(double coarse, double fine) {
    const double scale = std::max(std::abs(coarse), std::abs(fine));
    if (scale == 0.0) return 0.0;
    return std::abs(fine - coarse) / scale;
}

/// Pairwise summation in index order.
template <class T>
T pairwise_sum(std::span<const T> xs) {
    if (xs.size() <= 8) {
        T acc{};
        for (const T& x : xs) acc += x;
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& xs) {
    return pairwise_sum(std::span<const T>(xs));
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Arc of the unit circle. `length` is in radians; |I| = length / 2 pi.
struct Arc {
    double center = 0.0;
    double length = two_pi;

    static Arc from_normalized(double center, double norm_length) { return Arc{center, norm_length * two_pi}; }
    double norm_length() const { return length / two_pi; }
    double start() const { return center - 0.5 * length; }
    double end() const { return center + 0.5 * length; }
};

/// Point where an integrand concentrates: angular position and width.
struct Focus {
    double angle = 0.0;
    double scale = 1.0;
};

/// Nonnegative density on the disc, integrated against dA.
struct Density {
    std::function<double(cd)> fn;
    std::vector<Focus> foci{};
    int bandwidth = 0;   // highest angular frequency on circles, 0 if unknown/smooth

    double operator()(cd z) const { return fn(z); }
};

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

struct Node {
    double x;
    double w;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::vector<Node> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    std::vector<Node> out(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[static_cast<std::size_t>(i)] = Node{-x, w};
        out[static_cast<std::size_t>(n - 1 - i)] = Node{x, w};
    }
    if (n % 2 == 1) out[static_cast<std::size_t>(n / 2)].x = 0.0;
    return out;
}

/// Radial nodes on [r_in, 1) with weights that include the Jacobian r.
inline std::vector<Node> radial_nodes(double r_in, const QuadConfig& cfg) {
    if (!(r_in >= 0.0 && r_in < 1.0)) throw std::invalid_argument("radial_nodes: inner radius must lie in [0,1)");
    const auto gl = gauss_legendre(cfg.radial_levels);
    std::vector<Node> out;
    double gap = 1.0 - r_in;
    int shells = 0;
    while (shells == 0 || gap * cfg.grade_ratio >= cfg.eps_min) {
        const double g_next = gap * cfg.grade_ratio;
        const double a = 1.0 - gap;
        const double b = 1.0 - g_next;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (const Node& n : gl) {
            const double r = mid + half * n.x;
            out.push_back(Node{r, n.w * half * r});
        }
        gap = g_next;
        ++shells;
    }
    const double r_tail = 1.0 - 0.5 * gap;
    out.push_back(Node{r_tail, gap * r_tail});
    return out;
}

/// Angular midpoint cells.
struct AngularMesh {
    std::vector<double> theta;   // cell midpoints
    std::vector<double> width;   // cell widths
    std::vector<cd> unit;        // e^{i theta}

    std::size_t size() const { return theta.size(); }

    static AngularMesh from_breaks(std::vector<double> breaks) {
        std::sort(breaks.begin(), breaks.end());
        AngularMesh m;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double w = breaks[i + 1] - breaks[i];
            if (w <= 1e-14) continue;
            const double t = 0.5 * (breaks[i] + breaks[i + 1]);
            m.theta.push_back(t);
            m.width.push_back(w);
            m.unit.push_back(std::polar(1.0, t));
        }
        return m;
    }
};

inline int focus_cells_per_level(const QuadConfig& cfg) { return std::max(4, cfg.angular_count / 8); }

namespace detail {

inline void append_focus_breaks(std::vector<double>& br, const Focus& f, int m) {
    double d = 0.5 * std::clamp(f.scale, 1e-12, pi);
    for (int i = 0; i <= 2 * m; ++i) br.push_back(f.angle - d + i * (d / m));
    double lo = d;
    while (lo < pi) {
        const double hi = std::min(2.0 * lo, pi);
        for (int i = 1; i <= m; ++i) {
            const double x = lo + i * (hi - lo) / m;
            br.push_back(f.angle + x);
            br.push_back(f.angle - x);
        }
        lo = hi;
    }
}

inline double wrap_into(double x, double start) {
    double y = std::fmod(x - start, two_pi);
    if (y < 0.0) y += two_pi;
    return start + y;
}

} // namespace detail

/// Full-circle mesh: `cells` uniform cells starting at 0, graded towards each focus.
inline AngularMesh circle_mesh(int cells, std::span<const Focus> foci, const QuadConfig& cfg) {
    std::vector<double> br;
    br.reserve(static_cast<std::size_t>(cells) + 1);
    for (int j = 0; j <= cells; ++j) br.push_back(two_pi * j / cells);
    if (!foci.empty()) {
        std::vector<double> extra;
        for (const Focus& f : foci) detail::append_focus_breaks(extra, f, focus_cells_per_level(cfg));
        for (double x : extra) br.push_back(detail::wrap_into(x, 0.0));
    }
    return AngularMesh::from_breaks(std::move(br));
}

/// Arc mesh on [theta0, theta1] with `cells` uniform cells plus focus grading.
inline AngularMesh arc_mesh(double theta0, double theta1, int cells, std::span<const Focus> foci, const QuadConfig& cfg) {
    std::vector<double> br;
    const double h = (theta1 - theta0) / cells;
    for (int j = 0; j <= cells; ++j) br.push_back(theta0 + j * h);
    if (!foci.empty()) {
        std::vector<double> extra;
        for (const Focus& f : foci) detail::append_focus_breaks(extra, f, focus_cells_per_level(cfg));
        for (double x : extra) {
            const double y = detail::wrap_into(x, theta0);
            if (y > theta0 && y < theta1) br.push_back(y);
        }
    }
    br.back() = theta1;
    return AngularMesh::from_breaks(std::move(br));
}

/// Smallest angular_count * 2^e that is >= need.
inline int scaled_cells(int base, double need) {
    int m = base;
    while (m < need) m *= 2;
    return m;
}

/// Angular cells for a box of normalised length |I| and an integrand of angular bandwidth bw.
inline int box_angular_cells(double norm_length, int bandwidth, const QuadConfig& cfg) {
    return scaled_cells(cfg.angular_count, 4.0 * bandwidth * norm_length);
}

/// Angular cells for a full-disc integral.
inline int disc_angular_cells(int bandwidth, const QuadConfig& cfg) {
    return scaled_cells(cfg.angular_count, bandwidth + 1.0);
}

// ---------------------------------------------------------------------------
// Polar product integration
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
bool finite_value(const T& v) {
    if constexpr (std::is_same_v<T, double>) return std::isfinite(v);
    else return std::isfinite(v.real()) && std::isfinite(v.imag());
}

inline std::string point_text(cd z) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

} // namespace detail

/// (1/pi) sum_r w_r sum_theta width * fn(r e^{i theta}); rows summed pairwise.
template <class T, class Fn>
T integrate_polar(Fn&& fn, std::span<const Node> radial, const AngularMesh& ang) {
    std::vector<T> rows(radial.size(), T{});
    parallel_for(radial.size(), [&](std::size_t i) {
        const Node rn = radial[i];
        T acc{};
        for (std::size_t j = 0; j < ang.size(); ++j) {
            const cd z = rn.x * ang.unit[j];
            const T v = fn(z);
            if (!detail::finite_value(v))
                throw quadrature_error("non-finite integrand sample at z = " + detail::point_text(z));
            acc += ang.width[j] * v;
        }
        rows[i] = rn.w * acc;
    });
    return pairwise_sum(rows) / pi;
}

/// Column-major variant: one sum over radii per angular cell, then pairwise over cells.
template <class T, class Fn>
T integrate_polar_by_columns(Fn&& fn, std::span<const Node> radial, const AngularMesh& ang) {
    std::vector<T> cols(ang.size(), T{});
    parallel_for(ang.size(), [&](std::size_t j) {
        T acc{};
        for (const Node& rn : radial) {
            const cd z = rn.x * ang.unit[j];
            const T v = fn(z);
            if (!detail::finite_value(v))
                throw quadrature_error("non-finite integrand sample at z = " + detail::point_text(z));
            acc += rn.w * v;
        }
        cols[j] = ang.width[j] * acc / pi;
    });
    return pairwise_sum(cols);
}

/// Raw disc integral at one configuration.
template <class T = double, class Fn>
T disc_integral_raw(Fn&& fn, const QuadConfig& cfg, std::span<const Focus> foci = {}, int bandwidth = 0) {
    const auto radial = radial_nodes(0.0, cfg);
    const auto ang = circle_mesh(disc_angular_cells(bandwidth, cfg), foci, cfg);
    return integrate_polar<T>(fn, radial, ang);
}

inline RefinedValue disc_integral(const Density& w, const QuadConfig& cfg) {
    cfg.check();
    const double v0 = disc_integral_raw<double>(w.fn, cfg, w.foci, w.bandwidth);
    const double v1 = disc_integral_raw<double>(w.fn, cfg.refined(), w.foci, w.bandwidth);
    return RefinedValue{v0, relative_change(v0, v1)};
}

/// Integral over the polar sector theta in [theta0, theta1], r in [r_in, 1).
template <class T = double, class Fn>
T sector_integral_raw(Fn&& fn, double theta0, double theta1, double r_in, int cells, const QuadConfig& cfg,
                      std::span<const Focus> foci = {}) {
    const auto radial = radial_nodes(r_in, cfg);
    const auto ang = arc_mesh(theta0, theta1, cells, foci, cfg);
    return integrate_polar_by_columns<T>(fn, radial, ang);
}

inline double box_integral_raw(const Density& w, const Arc& arc, const QuadConfig& cfg) {
    const double len = arc.norm_length();
    if (!(len > 0.0 && len <= 1.0 + 1e-15)) throw std::invalid_argument("Carleson box: |I| must lie in (0,1]");
    const int cells = box_angular_cells(len, w.bandwidth, cfg);
    return sector_integral_raw<double>(w.fn, arc.start(), arc.end(), std::max(0.0, 1.0 - len), cells, cfg, w.foci);
}

/// Integral of w over the Carleson box S(I) = {1-|I| <= |z| < 1, z/|z| in I}.
inline RefinedValue disc_integral_box(const Density& w, const Arc& arc, const QuadConfig& cfg) {
    cfg.check();
    const double v0 = box_integral_raw(w, arc, cfg);
    const double v1 = box_integral_raw(w, arc, cfg.refined());
    return RefinedValue{v0, relative_change(v0, v1)};
}

// ---------------------------------------------------------------------------
// Supremum grids
// ---------------------------------------------------------------------------

/// Arcs with centres phase + 2 pi i / centers and |I| = 2^{-k}, k = 0..k_max.
struct ArcGrid {
    int centers = 128;
    int k_max = 10;
    double phase = 0.0;

    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        out.reserve(static_cast<std::size_t>(centers) * static_cast<std::size_t>(k_max + 1));
        for (int k = 0; k <= k_max; ++k) {
            const double len = std::ldexp(1.0, -k);
            for (int i = 0; i < centers; ++i) out.push_back(Arc::from_normalized(phase + two_pi * i / centers, len));
        }
        return out;
    }
};

/// Disc points: a = 0 plus radii 1 - 2^{-k}, k = 1..k_max, times `angles` uniform angles.
struct PointGrid {
    int k_max = 10;
    int angles = 64;

    std::vector<cd> points() const {
        std::vector<cd> out{cd{0.0, 0.0}};
        for (int k = 1; k <= k_max; ++k) {
            const double r = 1.0 - std::ldexp(1.0, -k);
            for (int j = 0; j < angles; ++j) out.push_back(std::polar(r, two_pi * j / angles));
        }
        return out;
    }
};

struct ArcValue {
    Arc arc;
    double value;
};

struct ArcSup {
    double value = 0.0;
    Arc arg{};
    std::vector<ArcValue> table;
};

/// Max of h over the arc grid; ties resolve to the first arc in grid order.
template <class H>
ArcSup sup_over_arcs(H&& h, const ArcGrid& grid) {
    const auto arcs = grid.arcs();
    std::vector<double> vals(arcs.size());
    parallel_for(arcs.size(), [&](std::size_t i) { vals[i] = h(arcs[i]); });
    ArcSup out;
    out.table.reserve(arcs.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        out.table.push_back(ArcValue{arcs[i], vals[i]});
        if (vals[i] > vals[best]) best = i;
    }
    out.value = vals.empty() ? 0.0 : vals[best];
    out.arg = arcs.empty() ? Arc{} : arcs[best];
    return out;
}

/// Box integrals of w over every arc of the grid. Boxes of one length share
/// angular columns whenever the grid centres fall on column boundaries.
inline std::vector<double> box_integral_table(const Density& w, const ArcGrid& grid, const QuadConfig& cfg) {
    cfg.check();
    const auto arcs = grid.arcs();
    std::vector<double> out(arcs.size(), 0.0);
    const std::size_t per_level = static_cast<std::size_t>(grid.centers);
    for (int k = 0; k <= grid.k_max; ++k) {
        const double len = std::ldexp(1.0, -k);
        const int cells = box_angular_cells(len, w.bandwidth, cfg);
        const std::size_t offset = static_cast<std::size_t>(k) * per_level;

        bool aligned = w.foci.empty();
        const double total = static_cast<double>(cells) * std::ldexp(1.0, k);
        const long long G = static_cast<long long>(std::llround(total));
        const double delta = two_pi / static_cast<double>(G);
        std::vector<long long> starts(per_level);
        for (std::size_t i = 0; aligned && i < per_level; ++i) {
            const double s = arcs[offset + i].start() / delta;
            const double rs = std::round(s);
            if (std::abs(s - rs) > 1e-7) aligned = false;
            starts[i] = static_cast<long long>(rs);
        }
        if (!aligned) {
            parallel_for(per_level, [&](std::size_t i) { out[offset + i] = box_integral_raw(w, arcs[offset + i], cfg); });
            continue;
        }

        const auto radial = radial_nodes(1.0 - len, cfg);
        auto wrap = [G](long long g) { return ((g % G) + G) % G; };
        std::vector<char> needed(static_cast<std::size_t>(G), 0);
        for (long long s : starts)
            for (int j = 0; j < cells; ++j) needed[static_cast<std::size_t>(wrap(s + j))] = 1;
        std::vector<std::size_t> todo;
        for (long long g = 0; g < G; ++g)
            if (needed[static_cast<std::size_t>(g)]) todo.push_back(static_cast<std::size_t>(g));

        std::vector<double> col(static_cast<std::size_t>(G), 0.0);
        parallel_for(todo.size(), [&](std::size_t t) {
            const std::size_t g = todo[t];
            const double theta = (static_cast<double>(g) + 0.5) * delta;
            const cd u = std::polar(1.0, theta);
            double acc = 0.0;
            for (const Node& rn : radial) {
                const cd z = rn.x * u;
                const double v = w.fn(z);
                if (!std::isfinite(v)) throw quadrature_error("non-finite integrand sample at z = " + detail::point_text(z));
                acc += rn.w * v;
            }
            col[g] = delta * acc / pi;
        });

        std::vector<double> buf(static_cast<std::size_t>(cells));
        for (std::size_t i = 0; i < per_level; ++i) {
            for (int j = 0; j < cells; ++j) buf[static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(wrap(starts[i] + j))];
            out[offset + i] = pairwise_sum(buf);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Circle integrals
// ---------------------------------------------------------------------------

/// Nodes of the offset product rule on an arc: s at cell midpoints, t at
/// cell endpoints with trapezoid weights, so that s != t everywhere.
struct OffsetGrid {
    std::vector<double> s, ws, t, wt;

    OffsetGrid(double theta0, double length, int n) {
        const double h = length / n;
        for (int i = 0; i < n; ++i) {
            s.push_back(theta0 + (i + 0.5) * h);
            ws.push_back(h);
        }
        for (int j = 0; j <= n; ++j) {
            t.push_back(theta0 + j * h);
            wt.push_back((j == 0 || j == n) ? 0.5 * h : h);
        }
    }
};

template <class K>
double circle_double_raw(K&& kernel, double theta0, double length, int n) {
    const OffsetGrid g(theta0, length, n);
    std::vector<double> rows(g.s.size());
    parallel_for(g.s.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < g.t.size(); ++j) {
            const double v = kernel(g.s[i], g.t[j]);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "non-finite kernel sample at (s, t) = (" << g.s[i] << ", " << g.t[j] << ")";
                throw quadrature_error(os.str());
            }
            acc += g.wt[j] * v;
        }
        rows[i] = g.ws[i] * acc;
    });
    return pairwise_sum(rows);
}

/// Double integral of K(s,t) ds dt over I x I (raw d theta), full circle by default.
template <class K>
RefinedValue circle_double_integral(K&& kernel, const QuadConfig& cfg, const Arc& arc = Arc{0.0, two_pi}) {
    cfg.check();
    const double v0 = circle_double_raw(kernel, arc.start(), arc.length, cfg.angular_count);
    const double v1 = circle_double_raw(kernel, arc.start(), arc.length, cfg.angular_count * cfg.refine_factor);
    return RefinedValue{v0, relative_change(v0, v1)};
}

} // namespace qdisc
