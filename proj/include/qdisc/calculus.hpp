#pragma once

/**
 * @file calculus.hpp
 * @brief Fractional nu-derivative (coefficient and integral forms), the
 *        weighted Bergman-type operator T_sigma and the operators T_g, I_g, M_g.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qdisc/quadrature.hpp"
#include "qdisc/series.hpp"

namespace qdisc {

struct FracDerivParams {
    double nu = 1.0;
    double b = 2.0;

    FracDerivParams() = default;
    FracDerivParams(double nu_, double b_) : nu(nu_), b(b_) { check(); }

    void check() const {
        if (!(nu > 0.0)) throw std::invalid_argument("fractional derivative: nu must be > 0");
        if (!(b > 1.0)) throw std::invalid_argument("fractional derivative: b must be > 1");
    }

    /// m = ceil(nu - 1); exactly nu - 1 for integer nu.
    int m() const {
        const double r = std::round(nu);
        if (std::abs(nu - r) < 1e-12) return static_cast<int>(r) - 1;
        return static_cast<int>(std::ceil(nu - 1.0));
    }

    bool integer_order() const { return std::abs(nu - std::round(nu)) < 1e-12; }
};

/// Gamma(j+b+nu) Gamma(j+m+2) / (Gamma(j+1) Gamma(j+m+b+1)).
inline double frac_coefficient_factor(std::size_t j, int m, double nu, double b) {
    const double jd = static_cast<double>(j);
    return std::exp(std::lgamma(jd + b + nu) + std::lgamma(jd + m + 2.0) - std::lgamma(jd + 1.0) -
                    std::lgamma(jd + m + b + 1.0));
}

/// f^{(nu)} = sum_j a_{j+m+1} Gamma(j+b+nu)Gamma(j+m+2)/(Gamma(j+1)Gamma(j+m+b+1)) z^j.
inline TaylorSeries frac_derivative(const TaylorSeries& f, const FracDerivParams& fp) {
    fp.check();
    const int m = fp.m();
    const std::size_t shift = static_cast<std::size_t>(m) + 1;
    if (f.degree() < shift) return TaylorSeries::constant(0.0);
    const std::size_t deg = f.degree() - shift;
    std::vector<cd> out(deg + 1);
    for (std::size_t j = 0; j <= deg; ++j) out[j] = f[j + shift] * frac_coefficient_factor(j, m, fp.nu, fp.b);
    return TaylorSeries(std::move(out));
}

/// Quadrature of the defining integral
///   (Gamma(b+nu)/Gamma(b)) int conj(w)^m f'(w) (1-|w|^2)^{b-1} (1 - conj(w) z)^{-(b+nu)} dA(w)
/// with the principal branch of the power (Re(1 - conj(w) z) > 0 on the disc).
inline cd frac_derivative_integral(const TaylorSeries& f, const FracDerivParams& fp, cd z, const QuadConfig& cfg = {}) {
    fp.check();
    cfg.check();
    if (!(std::abs(z) < 1.0)) throw std::domain_error("frac_derivative_integral: |z| must be < 1");
    if (f.is_constant()) return cd{0.0, 0.0};
    const int m = fp.m();
    const double e = fp.b + fp.nu;
    const double scale = std::exp(std::lgamma(e) - std::lgamma(fp.b));
    auto integrand = [&](cd w) {
        const cd wb = std::conj(w);
        const cd km = std::pow(wb, m);
        return km * f.derivative(w) * std::pow(1.0 - std::norm(w), fp.b - 1.0) * std::exp(-e * std::log(1.0 - wb * z));
    };
    // Kernel decays like |z|^n in frequency n; resolve frequencies up to where |z|^n < 1e-16.
    const double rz = std::abs(z);
    const int kernel_bw = rz > 0.0 ? static_cast<int>(std::ceil(std::log(1e-16) / std::log(rz))) : 0;
    const int bw = static_cast<int>(f.degree()) + m + std::min(kernel_bw, 4096);
    return scale * disc_integral_raw<cd>(integrand, cfg, {}, bw);
}

/// T_sigma psi(w) = int (1-|z|^2)^{b-1} |1 - conj(z) w|^{-(b+sigma)} psi(z) dA(z).
template <class Psi>
auto t_sigma_apply(Psi&& psi, double sigma, double b, cd w, const QuadConfig& cfg = {}) {
    using T = std::decay_t<decltype(psi(cd{}))>;
    if (!(sigma > 0.0)) throw std::invalid_argument("T_sigma: sigma must be > 0");
    if (!(b > 1.0)) throw std::invalid_argument("T_sigma: b must be > 1");
    if (!(std::abs(w) < 1.0)) throw std::domain_error("T_sigma: |w| must be < 1");
    const double e = b + sigma;
    const double rw = std::abs(w);
    std::vector<Focus> foci;
    if (rw > 0.0) foci.push_back(Focus{std::arg(w), 1.0 - rw});
    auto integrand = [&](cd z) -> T {
        const double k = std::pow(1.0 - std::norm(z), b - 1.0) * std::pow(std::abs(1.0 - std::conj(z) * w), -e);
        return k * psi(z);
    };
    return disc_integral_raw<T>(integrand, cfg, foci, 0);
}

/// T_sigma psi(w) with the relative change under one refinement step.
template <class Psi>
RefinedValue t_sigma_apply_refined(Psi&& psi, double sigma, double b, cd w, const QuadConfig& cfg = {}) {
    const double v0 = std::abs(t_sigma_apply(psi, sigma, b, w, cfg));
    const double v1 = std::abs(t_sigma_apply(psi, sigma, b, w, cfg.refined()));
    return RefinedValue{v0, relative_change(v0, v1)};
}

// ---------------------------------------------------------------------------
// T_g, I_g, M_g on truncated series. Products are truncated at budget - 1 so
// that primitives have degree <= budget and M_g = f(0)g(0) + I_g + T_g holds
// exactly at the same budget.
// ---------------------------------------------------------------------------

inline std::size_t inner_budget(std::size_t budget) { return budget == 0 ? 0 : budget - 1; }

/// T_g f(z) = int_0^z f(w) g'(w) dw.
inline TaylorSeries volterra_Tg(const TaylorSeries& f, const TaylorSeries& g, std::size_t budget) {
    if (budget == 0 || g.is_constant()) return TaylorSeries::constant(0.0);
    return antiderivative(cauchy_product(f, derivative(g), inner_budget(budget)));
}

/// I_g f(z) = int_0^z f'(w) g(w) dw.
inline TaylorSeries op_Ig(const TaylorSeries& f, const TaylorSeries& g, std::size_t budget) {
    if (budget == 0 || f.is_constant()) return TaylorSeries::constant(0.0);
    if (g.is_constant()) {
        // C (f - f(0)) without the k a_k / k round trip.
        std::vector<cd> out(std::min(f.degree(), budget) + 1, cd{0.0, 0.0});
        for (std::size_t k = 1; k < out.size(); ++k) out[k] = g[0] * f[k];
        return TaylorSeries(std::move(out));
    }
    return antiderivative(cauchy_product(derivative(f), g, inner_budget(budget)));
}

/// M_g f = f g.
inline TaylorSeries op_Mg(const TaylorSeries& f, const TaylorSeries& g, std::size_t budget) {
    return cauchy_product(f, g, budget);
}

/// f(0)g(0) + I_g f + T_g f, the three-term form of M_g.
inline TaylorSeries op_Mg_decomposed(const TaylorSeries& f, const TaylorSeries& g, std::size_t budget) {
    return TaylorSeries::constant(f[0] * g[0]) + op_Ig(f, g, budget) + volterra_Tg(f, g, budget);
}

/// Gauss-Legendre nodes on [0, 1] for segment integrals from 0 to z.
inline const std::vector<Node>& segment_rule() {
    static const std::vector<Node> rule = [] {
        auto gl = gauss_legendre(48);
        for (auto& n : gl) {
            n.x = 0.5 * (n.x + 1.0);
            n.w *= 0.5;
        }
        return gl;
    }();
    return rule;
}

/// I_g f for closed-form f: derivative f'(z) g(z), value by a segment integral
/// from 0 (exact to rounding for polynomial integrands of degree < 96).
template <class F, class G>
class IgImage {
public:
    IgImage(F f, G g) : f_(std::move(f)), g_(std::move(g)) {}

    cd derivative(cd z) const { return f_.derivative(z) * g_.value(z); }
    cd value(cd z) const {
        cd acc{0.0, 0.0};
        for (const Node& n : segment_rule()) acc += n.w * derivative(n.x * z);
        return acc * z;
    }
    cd centre() const
        requires requires(const F& f) { f.centre(); }
    {
        return f_.centre();
    }
    double concentration_scale() const
        requires requires(const F& f) { f.concentration_scale(); }
    {
        return f_.concentration_scale();
    }

private:
    F f_;
    G g_;
};

} // namespace qdisc
