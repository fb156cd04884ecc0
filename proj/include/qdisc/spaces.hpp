#pragma once

/**
 * @file spaces.hpp
 * @brief Norms, seminorms and Carleson constants of the Q-type spaces.
 *
 * Every supremum is a grid supremum (a lower bound for the true one). Results
 * carry the maximising arc or point, the full per-element table and the
 * relative change of the maximal entry under one refinement step.
 *
 * Measure conventions: dA has total mass 1; the boundary double integral and
 * the BMO-type integral use raw d theta; Morrey integrals and arc means use
 * d theta / 2 pi; |I| = arclength / 2 pi.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qdisc/families.hpp"
#include "qdisc/params.hpp"
#include "qdisc/quadrature.hpp"
#include "qdisc/series.hpp"

namespace qdisc {

template <class F>
concept AnalyticFunction = requires(const F& f, cd z) {
    { f.value(z) } -> std::convertible_to<cd>;
    { f.derivative(z) } -> std::convertible_to<cd>;
};

/// Angular bandwidth hint of |f'|^2, 0 when the function provides none.
template <AnalyticFunction F>
int bandwidth_of(const F& f) {
    if constexpr (requires { f.angular_bandwidth(); }) return f.angular_bandwidth();
    else return 0;
}

/// Concentration points of f (poles just outside the disc).
template <AnalyticFunction F>
std::vector<Focus> foci_of(const F& f) {
    if constexpr (requires { f.foci(); }) {
        return f.foci();
    } else if constexpr (requires { f.centre(); f.concentration_scale(); }) {
        const cd c = f.centre();
        if (std::abs(c) == 0.0) return {};
        return {Focus{std::arg(c), f.concentration_scale()}};
    } else {
        return {};
    }
}

struct Witness {
    enum class Kind { arc, point } kind = Kind::arc;
    Arc arc{};
    cd point{0.0, 0.0};
};

struct TableEntry {
    double x;      // arc centre or Re a
    double y;      // |I| or Im a
    double value;
};

struct NormResult {
    double value = 0.0;
    Witness witness{};
    std::vector<TableEntry> table;
    double refinement_delta = 0.0;
    double refined_value = 0.0;   // witness element recomputed at the refined configuration
    std::string x_name = "center";
    std::string y_name = "length";
    std::map<std::string, double> extras;
};

struct SupGrids {
    ArcGrid arcs{};
    PointGrid points{};
};

namespace detail {

inline NormResult from_arc_values(const std::vector<Arc>& arcs, const std::vector<double>& vals) {
    NormResult r;
    r.table.reserve(arcs.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        r.table.push_back(TableEntry{arcs[i].center, arcs[i].norm_length(), vals[i]});
        if (vals[i] > vals[best]) best = i;
    }
    if (!arcs.empty()) {
        r.value = vals[best];
        r.witness.kind = Witness::Kind::arc;
        r.witness.arc = arcs[best];
    }
    return r;
}

inline NormResult from_point_values(const std::vector<cd>& pts, const std::vector<double>& vals) {
    NormResult r;
    r.x_name = "re";
    r.y_name = "im";
    r.table.reserve(pts.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        r.table.push_back(TableEntry{pts[i].real(), pts[i].imag(), vals[i]});
        if (vals[i] > vals[best]) best = i;
    }
    if (!pts.empty()) {
        r.value = vals[best];
        r.witness.kind = Witness::Kind::point;
        r.witness.point = pts[best];
    }
    return r;
}

template <class Transform>
void apply_transform(NormResult& r, Transform&& tr) {
    for (auto& e : r.table) e.value = tr(e.value);
    r.value = tr(r.value);
    r.refined_value = tr(r.refined_value);
    r.refinement_delta = relative_change(r.value, r.refined_value);
}

inline void set_refined(NormResult& r, double fine) {
    r.refined_value = fine;
    r.refinement_delta = relative_change(r.value, fine);
}

inline double safe_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

} // namespace detail

// ---------------------------------------------------------------------------
// Carleson constants
// ---------------------------------------------------------------------------

/// Grid sup over arcs of mu(S(I)) / |I|^s for d mu = w dA.
inline NormResult carleson_box_constant(const Density& w, double s, const QuadConfig& cfg, const ArcGrid& grid = {}) {
    if (!(s > 0.0)) throw std::invalid_argument("carleson_box_constant: s must be positive");
    const auto arcs = grid.arcs();
    auto vals = box_integral_table(w, grid, cfg);
    for (std::size_t i = 0; i < arcs.size(); ++i) vals[i] /= std::pow(arcs[i].norm_length(), s);
    NormResult r = detail::from_arc_values(arcs, vals);
    const Arc& a = r.witness.arc;
    detail::set_refined(r, box_integral_raw(w, a, cfg.refined()) / std::pow(a.norm_length(), s));
    return r;
}

/// (1-|a|^2)^s int w(z) |1 - conj(a) z|^{-2s} dA(z) at one configuration.
inline double mobius_kernel_integral(const Density& w, cd a, double s, const QuadConfig& cfg) {
    const double ra2 = std::norm(a);
    if (!(ra2 < 1.0)) throw std::domain_error("mobius kernel: |a| must be < 1");
    std::vector<Focus> foci = w.foci;
    if (ra2 > 0.0) foci.push_back(Focus{std::arg(a), 1.0 - std::sqrt(ra2)});
    const cd ac = std::conj(a);
    const double scale = std::pow(1.0 - ra2, s);
    const bool unit_power = (s == 1.0);
    auto integrand = [&](cd z) {
        const double d = std::norm(1.0 - ac * z);
        const double k = unit_power ? 1.0 / d : std::pow(d, -s);
        return w.fn(z) * k;
    };
    return scale * disc_integral_raw<double>(integrand, cfg, foci, w.bandwidth);
}

/// Grid sup over a of the Moebius-kernel integral of w.
inline NormResult carleson_mobius_constant(const Density& w, double s, const QuadConfig& cfg, const PointGrid& grid = {}) {
    if (!(s > 0.0)) throw std::invalid_argument("carleson_mobius_constant: s must be positive");
    cfg.check();
    const auto pts = grid.points();
    std::vector<double> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { vals[i] = mobius_kernel_integral(w, pts[i], s, cfg); });
    NormResult r = detail::from_point_values(pts, vals);
    detail::set_refined(r, mobius_kernel_integral(w, r.witness.point, s, cfg.refined()));
    return r;
}

// ---------------------------------------------------------------------------
// Disc Q-norms
// ---------------------------------------------------------------------------

/// |f'(z)|^2 (1-|z|^2)^{weight_exp}.
template <AnalyticFunction F>
Density derivative_density(const F& f, double weight_exp) {
    Density d;
    d.fn = [f, weight_exp](cd z) {
        const double t = 1.0 - std::norm(z);
        return std::norm(f.derivative(z)) * std::pow(t, weight_exp);
    };
    d.foci = foci_of(f);
    d.bandwidth = bandwidth_of(f);
    return d;
}

template <AnalyticFunction F>
NormResult q_disc_box_seminorm(const F& f, const SpaceParams& params, const QuadConfig& cfg, const ArcGrid& grid = {}) {
    require_admissible(params, TheoremContext::base);
    NormResult r = carleson_box_constant(derivative_density(f, params.box_weight_exp()), params.box_scale_exp(), cfg, grid);
    detail::apply_transform(r, detail::safe_sqrt);
    return r;
}

/// sup_a ( int |f'|^2 (1-|z|^2)^{4beta-4} (1-|sigma_a(z)|^2)^{p+2-2beta} dA )^{1/2}.
template <AnalyticFunction F>
NormResult q_disc_mobius_seminorm(const F& f, const SpaceParams& params, const QuadConfig& cfg, const PointGrid& grid = {}) {
    require_admissible(params, TheoremContext::base);
    // (1-|sigma_a z|^2) = (1-|a|^2)(1-|z|^2)/|1-conj(a) z|^2, so the integrand is the
    // Moebius kernel of order p+2-2beta applied to |f'|^2 (1-|z|^2)^{p-2+2beta}.
    NormResult r = carleson_mobius_constant(derivative_density(f, params.box_weight_exp()), params.box_scale_exp(), cfg, grid);
    detail::apply_transform(r, detail::safe_sqrt);
    return r;
}

/// |f(0)| + Moebius seminorm.
template <AnalyticFunction F>
NormResult q_disc_mobius_norm(const F& f, const SpaceParams& params, const QuadConfig& cfg, const PointGrid& grid = {}) {
    NormResult r = q_disc_mobius_seminorm(f, params, cfg, grid);
    const double f0 = std::abs(f.value(cd{0.0, 0.0}));
    const double semi = r.value;
    detail::apply_transform(r, [f0](double v) { return f0 + v; });
    r.extras["f0"] = f0;
    r.extras["seminorm"] = semi;
    return r;
}

// ---------------------------------------------------------------------------
// Boundary (circle) norms
// ---------------------------------------------------------------------------

/// Midpoint cells used for an arc integral of a trigonometric polynomial of bandwidth bw.
inline int arc_cells(double norm_length, int bandwidth, const QuadConfig& cfg) {
    return scaled_cells(cfg.angular_count, 8.0 * bandwidth * norm_length);
}

/// int_I int_I |F(s)-F(t)|^2 / |e^{is}-e^{it}|^q ds dt with the offset rule.
inline double circle_difference_integral(const FourierSeries& F, const Arc& arc, double q, int n) {
    const OffsetGrid g(arc.start(), arc.length, n);
    const double h = arc.length / n;
    std::vector<cd> fs(g.s.size()), ft(g.t.size());
    for (std::size_t i = 0; i < fs.size(); ++i) fs[i] = F(g.s[i]);
    for (std::size_t j = 0; j < ft.size(); ++j) ft[j] = F(g.t[j]);
    // s_i - t_j = (i - j + 1/2) h depends on i - j only.
    std::vector<double> ker(static_cast<std::size_t>(2 * n + 1));
    for (int d = -n; d <= n; ++d) {
        const double delta = (d + 0.5) * h;
        ker[static_cast<std::size_t>(d + n)] = std::pow(std::abs(2.0 * std::sin(0.5 * delta)), -q);
    }
    std::vector<double> rows(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < ft.size(); ++j) {
            const long d = static_cast<long>(i) - static_cast<long>(j);
            acc += g.wt[j] * std::norm(fs[i] - ft[j]) * ker[static_cast<std::size_t>(d + n)];
        }
        rows[i] = g.ws[i] * acc;
    }
    return pairwise_sum(rows);
}

/// |I|^{2beta-2-p} times the boundary double integral over I.
inline double q_circle_arc_term(const FourierSeries& F, const SpaceParams& params, const Arc& arc, const QuadConfig& cfg) {
    const int n = arc_cells(arc.norm_length(), F.bandwidth(), cfg);
    return std::pow(arc.norm_length(), params.circle_scale_exp()) *
           circle_difference_integral(F, arc, params.circle_kernel_exp(), n);
}

inline NormResult q_circle_seminorm(const FourierSeries& F, const SpaceParams& params, const QuadConfig& cfg, const ArcGrid& grid = {}) {
    require_admissible(params, TheoremContext::circleTheorems);
    cfg.check();
    auto sup = sup_over_arcs([&](const Arc& a) { return q_circle_arc_term(F, params, a, cfg); }, grid);
    std::vector<Arc> arcs;
    std::vector<double> vals;
    for (const auto& e : sup.table) {
        arcs.push_back(e.arc);
        vals.push_back(detail::safe_sqrt(e.value));
    }
    NormResult r = detail::from_arc_values(arcs, vals);
    detail::set_refined(r, detail::safe_sqrt(q_circle_arc_term(F, params, r.witness.arc, cfg.refined())));
    return r;
}

/// |I|^{2beta-p-2} int_0^{|I| 2pi} ( int_I |F(s+t)-F(s)|^2 ds ) t^{-(4-p-2beta)} dt.
///
/// G(t) = int_I |F(s+t)-F(s)|^2 ds is sampled at multiples of the s-spacing; the
/// outer integral treats G(t)/t^2 as piecewise linear and integrates it exactly
/// against t^{p+2beta-2}, which absorbs the t -> 0 singularity.
inline double q_circle_difference_arc_term(const FourierSeries& F, const SpaceParams& params, const Arc& arc, const QuadConfig& cfg) {
    const int n = arc_cells(arc.norm_length(), F.bandwidth(), cfg);
    const double len = arc.length;
    const double h = len / n;
    const double alpha = 2.0 - params.circle_kernel_exp();
    std::vector<cd> vals(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) vals[static_cast<std::size_t>(i)] = F(arc.start() + (i + 0.5) * h);

    std::vector<double> phi(static_cast<std::size_t>(n + 1));
    {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += std::norm(F.theta_derivative(arc.start() + (i + 0.5) * h));
        phi[0] = acc * h;
    }
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += std::norm(vals[static_cast<std::size_t>(i + k)] - vals[static_cast<std::size_t>(i)]);
        const double t = k * h;
        phi[static_cast<std::size_t>(k)] = acc * h / (t * t);
    }
    std::vector<double> parts(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double t0 = k * h;
        const double t1 = t0 + h;
        const double m0 = (std::pow(t1, alpha + 1.0) - std::pow(t0, alpha + 1.0)) / (alpha + 1.0);
        const double m1 = (std::pow(t1, alpha + 2.0) - std::pow(t0, alpha + 2.0)) / (alpha + 2.0) - t0 * m0;
        const double p0 = phi[static_cast<std::size_t>(k)];
        const double p1 = phi[static_cast<std::size_t>(k + 1)];
        parts[static_cast<std::size_t>(k)] = p0 * m0 + (p1 - p0) / h * m1;
    }
    return std::pow(arc.norm_length(), -params.box_scale_exp()) * pairwise_sum(parts);
}

inline NormResult q_circle_difference_form(const FourierSeries& F, const SpaceParams& params, const QuadConfig& cfg, const ArcGrid& grid = {}) {
    require_admissible(params, TheoremContext::circleTheorems);
    cfg.check();
    auto sup = sup_over_arcs([&](const Arc& a) { return q_circle_difference_arc_term(F, params, a, cfg); }, grid);
    std::vector<Arc> arcs;
    std::vector<double> vals;
    for (const auto& e : sup.table) {
        arcs.push_back(e.arc);
        vals.push_back(e.value);
    }
    NormResult r = detail::from_arc_values(arcs, vals);
    detail::set_refined(r, q_circle_difference_arc_term(F, params, r.witness.arc, cfg.refined()));
    return r;
}

/// Midpoint samples of F on an arc.
inline std::vector<cd> arc_samples(const FourierSeries& F, const Arc& arc, int n) {
    std::vector<cd> out(static_cast<std::size_t>(n));
    const double h = arc.length / n;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = F(arc.start() + (i + 0.5) * h);
    return out;
}

/// int_I |F - F_I|^2 d theta (raw), F_I the mean over I.
inline double arc_oscillation(const FourierSeries& F, const Arc& arc, const QuadConfig& cfg) {
    const int n = arc_cells(arc.norm_length(), F.bandwidth(), cfg);
    const auto v = arc_samples(F, arc, n);
    cd mean{0.0, 0.0};
    for (cd x : v) mean += x;
    mean /= static_cast<double>(n);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = std::norm(v[i] - mean);
    return pairwise_sum(sq) * (arc.length / n);
}

inline double bmo_beta_arc_term(const FourierSeries& F, double beta, const Arc& arc, const QuadConfig& cfg) {
    return std::pow(arc.norm_length(), 4.0 * beta - 5.0) * arc_oscillation(F, arc, cfg);
}

inline NormResult bmo_beta_seminorm(const FourierSeries& F, double beta, const QuadConfig& cfg, const ArcGrid& grid = {}) {
    if (!(beta > 0.5 && beta < 1.0)) throw admissibility_error([] {
        Verdict v;
        v.require(false, "1/2<β<1");
        return v;
    }());
    cfg.check();
    auto sup = sup_over_arcs([&](const Arc& a) { return bmo_beta_arc_term(F, beta, a, cfg); }, grid);
    std::vector<Arc> arcs;
    std::vector<double> vals;
    for (const auto& e : sup.table) {
        arcs.push_back(e.arc);
        vals.push_back(detail::safe_sqrt(e.value));
    }
    NormResult r = detail::from_arc_values(arcs, vals);
    detail::set_refined(r, detail::safe_sqrt(bmo_beta_arc_term(F, beta, r.witness.arc, cfg.refined())));
    return r;
}

/// |I|^{-lambda} int_I |f - f_I|^2 d theta / 2 pi on the boundary trace.
inline double morrey_arc_term(const FourierSeries& F, double lambda, const Arc& arc, const QuadConfig& cfg) {
    return std::pow(arc.norm_length(), -lambda) * arc_oscillation(F, arc, cfg) / two_pi;
}

inline void require_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        Verdict v;
        v.require(false, "0<λ≤1");
        throw admissibility_error(v);
    }
}

inline NormResult morrey_norm(const TaylorSeries& f, double lambda, const QuadConfig& cfg, const ArcGrid& grid = {}) {
    require_lambda(lambda);
    cfg.check();
    const FourierSeries F = FourierSeries::trace(f);
    auto sup = sup_over_arcs([&](const Arc& a) { return morrey_arc_term(F, lambda, a, cfg); }, grid);
    std::vector<Arc> arcs;
    std::vector<double> vals;
    for (const auto& e : sup.table) {
        arcs.push_back(e.arc);
        vals.push_back(e.value);
    }
    NormResult r = detail::from_arc_values(arcs, vals);
    detail::set_refined(r, morrey_arc_term(F, lambda, r.witness.arc, cfg.refined()));
    r.extras["hardy2"] = hardy2_norm(f);
    return r;
}

/// Carleson constant of |f'|^2 (1-|z|^2) dA at exponent lambda.
template <AnalyticFunction F>
NormResult morrey_carleson_constant(const F& f, double lambda, const QuadConfig& cfg, const ArcGrid& grid = {}) {
    require_lambda(lambda);
    return carleson_box_constant(derivative_density(f, 1.0), lambda, cfg, grid);
}

/// Radii for pointwise suprema: uniform steps of 1/256 plus 1 - 2^{-k}, k <= 20.
inline std::vector<double> growth_radii() {
    std::vector<double> r;
    for (int i = 0; i < 256; ++i) r.push_back(i / 256.0);
    for (int k = 9; k <= 20; ++k) r.push_back(1.0 - std::ldexp(1.0, -k));
    return r;
}

/// sup_z (1-|z|^2)^{2beta-1} |f'(z)| on a polar point grid.
template <AnalyticFunction F>
NormResult growth_seminorm(const F& f, double beta, const QuadConfig& cfg) {
    if (!(beta > 0.5 && beta < 1.0)) throw admissibility_error([] {
        Verdict v;
        v.require(false, "1/2<β<1");
        return v;
    }());
    const int angles = std::max(64, scaled_cells(cfg.angular_count, 2.0 * bandwidth_of(f)));
    std::vector<cd> pts;
    for (double r : growth_radii()) {
        if (r == 0.0) {
            pts.push_back(cd{0.0, 0.0});
            continue;
        }
        for (int j = 0; j < angles; ++j) pts.push_back(std::polar(r, two_pi * j / angles));
    }
    std::vector<double> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        vals[i] = std::pow(1.0 - std::norm(pts[i]), 2.0 * beta - 1.0) * std::abs(f.derivative(pts[i]));
    });
    NormResult r = detail::from_point_values(pts, vals);
    r.refined_value = r.value;   // pointwise values involve no quadrature
    return r;
}

/// sup over the boundary samples of |g|; for a polynomial this is sup over the disc.
template <AnalyticFunction F>
double boundary_sup_modulus(const F& g, int samples = 4096) {
    double m = 0.0;
    for (int j = 0; j < samples; ++j) m = std::max(m, std::abs(g.value(std::polar(1.0, two_pi * j / samples))));
    return m;
}

} // namespace qdisc
