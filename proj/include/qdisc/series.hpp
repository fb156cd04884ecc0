#pragma once

/**
 * @file series.hpp
 * @brief Finite Taylor and Fourier series with exact coefficient calculus.
 *
 * A TaylorSeries a_0 + a_1 z + ... + a_N z^N stands for an analytic function
 * on the disc; a FourierSeries sum_{|n|<=M} c_n e^{in theta} stands for an
 * L^2 boundary function and is extended to the disc by its Poisson integral
 *     hat f(r e^{i theta}) = sum_n c_n r^{|n|} e^{in theta}.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qdisc {

using cd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Disc automorphism sigma_a(z) = (a - z) / (1 - conj(a) z).
inline cd mobius(cd a, cd z) {
    if (!(std::abs(a) < 1.0)) throw std::domain_error("mobius: |a| must be < 1");
    return (a - z) / (1.0 - std::conj(a) * z);
}

class TaylorSeries {
public:
    TaylorSeries() : coeffs_{cd{0.0, 0.0}} {}
    explicit TaylorSeries(std::vector<cd> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(cd{0.0, 0.0});
    }
    TaylorSeries(std::initializer_list<cd> coeffs) : TaylorSeries(std::vector<cd>(coeffs)) {}

    static TaylorSeries constant(cd c) { return TaylorSeries({c}); }
    static TaylorSeries monomial(std::size_t k, cd c = 1.0) {
        std::vector<cd> a(k + 1, cd{0.0, 0.0});
        a[k] = c;
        return TaylorSeries(std::move(a));
    }

    std::size_t degree() const { return coeffs_.size() - 1; }
    std::span<const cd> coeffs() const { return coeffs_; }
    cd operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : cd{0.0, 0.0}; }

    cd value(cd z) const {
        cd acc{0.0, 0.0};
        for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
        return acc;
    }
    cd operator()(cd z) const { return value(z); }

    cd derivative(cd z) const {
        cd acc{0.0, 0.0};
        for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * coeffs_[k];
        return acc;
    }

    /// Highest angular frequency of |f'|^2 on circles |z| = r.
    int angular_bandwidth() const { return 2 * static_cast<int>(degree()); }

    bool is_constant() const {
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            if (coeffs_[k] != cd{0.0, 0.0}) return false;
        return true;
    }

    TaylorSeries& operator*=(cd c) {
        for (auto& a : coeffs_) a *= c;
        return *this;
    }
    friend TaylorSeries operator*(cd c, TaylorSeries f) { return f *= c; }
    friend TaylorSeries operator+(const TaylorSeries& f, const TaylorSeries& g) {
        std::vector<cd> out(std::max(f.coeffs_.size(), g.coeffs_.size()), cd{0.0, 0.0});
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = f[k] + g[k];
        return TaylorSeries(std::move(out));
    }
    friend TaylorSeries operator-(const TaylorSeries& f, const TaylorSeries& g) {
        std::vector<cd> out(std::max(f.coeffs_.size(), g.coeffs_.size()), cd{0.0, 0.0});
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = f[k] - g[k];
        return TaylorSeries(std::move(out));
    }
    friend bool operator==(const TaylorSeries&, const TaylorSeries&) = default;

    /// f(e^{i phi} z).
    TaylorSeries rotated(double phi) const {
        std::vector<cd> out(coeffs_);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::polar(1.0, phi * static_cast<double>(k));
        return TaylorSeries(std::move(out));
    }

private:
    std::vector<cd> coeffs_;
};

inline TaylorSeries derivative(const TaylorSeries& f) {
    if (f.degree() == 0) return TaylorSeries::constant(0.0);
    std::vector<cd> out(f.degree());
    for (std::size_t k = 1; k <= f.degree(); ++k) out[k - 1] = static_cast<double>(k) * f[k];
    return TaylorSeries(std::move(out));
}

/// Primitive F with F(0) = 0.
inline TaylorSeries antiderivative(const TaylorSeries& f) {
    std::vector<cd> out(f.degree() + 2, cd{0.0, 0.0});
    for (std::size_t k = 0; k <= f.degree(); ++k) out[k + 1] = f[k] / static_cast<double>(k + 1);
    return TaylorSeries(std::move(out));
}

/// Truncated product: c_k = sum_{i+j=k} a_i b_j for k <= budget.
inline TaylorSeries cauchy_product(const TaylorSeries& f, const TaylorSeries& g, std::size_t budget) {
    const std::size_t deg = std::min(budget, f.degree() + g.degree());
    std::vector<cd> out(deg + 1, cd{0.0, 0.0});
    for (std::size_t i = 0; i <= std::min(f.degree(), deg); ++i) {
        const cd ai = f[i];
        if (ai == cd{0.0, 0.0}) continue;
        for (std::size_t j = 0; j <= std::min(g.degree(), deg - i); ++j) out[i + j] += ai * g[j];
    }
    return TaylorSeries(std::move(out));
}

inline double hardy2_norm(const TaylorSeries& f) {
    double s = 0.0;
    for (cd a : f.coeffs()) s += std::norm(a);
    return std::sqrt(s);
}

/// Two-sided trigonometric polynomial sum_{|n|<=M} c_n e^{in theta}.
class FourierSeries {
public:
    FourierSeries() : FourierSeries(0) {}
    explicit FourierSeries(int bandwidth) : bandwidth_(bandwidth), coeffs_(2 * bandwidth + 1, cd{0.0, 0.0}) {
        if (bandwidth < 0) throw std::invalid_argument("FourierSeries: negative bandwidth");
    }

    /// Boundary trace of an analytic polynomial: c_n = a_n for n >= 0, c_n = 0 for n < 0.
    static FourierSeries trace(const TaylorSeries& f) {
        FourierSeries F(static_cast<int>(f.degree()));
        for (std::size_t k = 0; k <= f.degree(); ++k) F.set(static_cast<int>(k), f[k]);
        return F;
    }

    int bandwidth() const { return bandwidth_; }
    cd operator[](int n) const {
        return (n < -bandwidth_ || n > bandwidth_) ? cd{0.0, 0.0} : coeffs_[static_cast<std::size_t>(n + bandwidth_)];
    }
    void set(int n, cd c) {
        if (n < -bandwidth_ || n > bandwidth_) throw std::out_of_range("FourierSeries::set: index beyond bandwidth");
        coeffs_[static_cast<std::size_t>(n + bandwidth_)] = c;
        rebuild_terms();
    }

    /// Nonzero (n, c_n) pairs in increasing n.
    const std::vector<std::pair<int, cd>>& terms() const { return terms_; }

    cd value(double theta) const {
        if (sparse()) {
            cd acc{0.0, 0.0};
            for (const auto& [n, c] : terms_) acc += c * std::polar(1.0, n * theta);
            return acc;
        }
        const cd e = std::polar(1.0, theta);
        const cd ei = std::conj(e);
        cd pos{0.0, 0.0};
        for (int n = bandwidth_; n >= 0; --n) pos = pos * e + (*this)[n];
        cd neg{0.0, 0.0};
        for (int n = bandwidth_; n >= 1; --n) neg = (neg + (*this)[-n]) * ei;
        return pos + neg;
    }
    cd operator()(double theta) const { return value(theta); }

    /// d/dtheta of the boundary function.
    cd theta_derivative(double theta) const {
        cd acc{0.0, 0.0};
        for (const auto& [n, c] : terms_) acc += cd{0.0, static_cast<double>(n)} * c * std::polar(1.0, n * theta);
        return acc;
    }

    /// Poisson extension at z.
    cd harmonic_extension(cd z) const {
        const cd zb = std::conj(z);
        cd acc{0.0, 0.0};
        for (const auto& [n, c] : terms_) acc += c * (n >= 0 ? ipow(z, n) : ipow(zb, -n));
        return acc;
    }

    /// |grad hat f|^2 = 4(|d hat f/dz|^2 + |d hat f/d zbar|^2).
    double gradient_norm_sq(cd z) const {
        const cd zb = std::conj(z);
        cd dz{0.0, 0.0};
        cd dzb{0.0, 0.0};
        for (const auto& [n, c] : terms_) {
            if (n > 0) dz += static_cast<double>(n) * c * ipow(z, n - 1);
            else if (n < 0) dzb += static_cast<double>(-n) * c * ipow(zb, -n - 1);
        }
        return 4.0 * (std::norm(dz) + std::norm(dzb));
    }

    /// L^2 norm squared with the d theta / 2 pi convention (Parseval).
    double l2_norm_sq() const {
        double s = 0.0;
        for (const auto& [n, c] : terms_) s += std::norm(c);
        return s;
    }

    int angular_bandwidth() const { return 2 * bandwidth_; }

    FourierSeries& operator*=(cd s) {
        for (auto& c : coeffs_) c *= s;
        rebuild_terms();
        return *this;
    }
    friend FourierSeries operator*(cd s, FourierSeries F) { return F *= s; }

    bool is_constant() const {
        for (const auto& [n, c] : terms_)
            if (n != 0) return false;
        return true;
    }

private:
    static cd ipow(cd z, int k) {
        if (k == 0) return cd{1.0, 0.0};
        cd result{1.0, 0.0};
        cd base = z;
        unsigned e = static_cast<unsigned>(k);
        while (e) {
            if (e & 1u) result *= base;
            base *= base;
            e >>= 1u;
        }
        return result;
    }

    bool sparse() const { return terms_.size() * 8 < coeffs_.size(); }

    void rebuild_terms() {
        terms_.clear();
        for (int n = -bandwidth_; n <= bandwidth_; ++n) {
            const cd c = (*this)[n];
            if (c != cd{0.0, 0.0}) terms_.emplace_back(n, c);
        }
    }

    int bandwidth_;
    std::vector<cd> coeffs_;
    std::vector<std::pair<int, cd>> terms_;
};

/// |grad hat F(z)|^2 (1-|z|^2)^{weight_exp}; the condition-(3) density of the boundary theorems.
inline double poisson_gradient_density(const FourierSeries& F, double weight_exp, cd z) {
    const double t = 1.0 - std::norm(z);
    if (!(t > 0.0)) throw std::domain_error("poisson_gradient_density: |z| must be < 1");
    return F.gradient_norm_sq(z) * std::pow(t, weight_exp);
}

} // namespace qdisc
