#pragma once

/**
 * @file families.hpp
 * @brief Deterministic test-function families: monomials, seeded random
 *        polynomials, lacunary series (analytic and boundary) and the
 *        normalised Moebius test functions f_b.
 */

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qdisc/series.hpp"

namespace qdisc {

enum class FamilyKind { monomial, polynomial, lacunary, fbTest, boundaryLacunary };

inline const char* to_string(FamilyKind k) {
    switch (k) {
    case FamilyKind::monomial: return "monomial";
    case FamilyKind::polynomial: return "polynomial";
    case FamilyKind::lacunary: return "lacunary";
    case FamilyKind::fbTest: return "fbTest";
    case FamilyKind::boundaryLacunary: return "boundaryLacunary";
    }
    return "unknown";
}

struct FamilySpec {
    FamilyKind kind = FamilyKind::monomial;
    int k = 1;                  // monomial exponent
    std::uint64_t seed = 1;     // polynomial
    int degree = 16;            // polynomial
    double gamma = 2.0;         // lacunary decay exponent
    int K = 3;                  // lacunary term count - 1
    cd b{0.0, 0.0};             // fbTest centre
    double beta = 0.8;          // fbTest
    std::size_t N = 512;        // truncation degree

    static FamilySpec make_monomial(int k, std::size_t N = 512) {
        FamilySpec s;
        s.kind = FamilyKind::monomial;
        s.k = k;
        s.N = N;
        return s;
    }
    static FamilySpec make_polynomial(std::uint64_t seed, int degree) {
        FamilySpec s;
        s.kind = FamilyKind::polynomial;
        s.seed = seed;
        s.degree = degree;
        return s;
    }
    static FamilySpec make_lacunary(double gamma, int K, std::size_t N = 512) {
        FamilySpec s;
        s.kind = FamilyKind::lacunary;
        s.gamma = gamma;
        s.K = K;
        s.N = N;
        return s;
    }
    static FamilySpec make_boundary_lacunary(double gamma, int K, std::size_t N = 512) {
        FamilySpec s = make_lacunary(gamma, K, N);
        s.kind = FamilyKind::boundaryLacunary;
        return s;
    }
    static FamilySpec make_fb(cd b, double beta, std::size_t N = 512) {
        FamilySpec s;
        s.kind = FamilyKind::fbTest;
        s.b = b;
        s.beta = beta;
        s.N = N;
        return s;
    }
};

class truncation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform double in [0,1) from the top 53 bits, identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Coefficients i.i.d. uniform on the complex unit square [0,1) x [0,1).
inline TaylorSeries random_polynomial(std::uint64_t seed, int degree) {
    if (degree < 0) throw std::invalid_argument("random_polynomial: negative degree");
    std::mt19937_64 rng(seed);
    std::vector<cd> a(static_cast<std::size_t>(degree) + 1);
    for (auto& c : a) {
        const double re = uniform01(rng);
        const double im = uniform01(rng);
        c = cd{re, im};
    }
    return TaylorSeries(std::move(a));
}

inline TaylorSeries lacunary_series(double gamma, int K, std::size_t N) {
    if (K < 0 || K > 30) throw std::invalid_argument("lacunary: K out of range");
    const std::size_t top = std::size_t{1} << K;
    if (top > N) throw std::invalid_argument("lacunary: 2^K exceeds truncation degree N");
    std::vector<cd> a(top + 1, cd{0.0, 0.0});
    for (int k = 0; k <= K; ++k) a[std::size_t{1} << k] = std::pow(2.0, -k * gamma);
    return TaylorSeries(std::move(a));
}

inline FourierSeries boundary_lacunary_series(double gamma, int K, std::size_t N) {
    return FourierSeries::trace(lacunary_series(gamma, K, N));
}

inline constexpr double fb_tail_tolerance = 1e-12;
inline constexpr std::size_t fb_max_degree = std::size_t{1} << 20;

/// Degree needed so that |b|^N < tail tolerance, never below `requested`.
inline std::size_t fb_required_degree(cd b, std::size_t requested) {
    const double rb = std::abs(b);
    if (rb == 0.0) return std::max<std::size_t>(requested, 1);
    if (!(rb < 1.0)) throw std::domain_error("fbTest: |b| must be < 1");
    std::size_t need = static_cast<std::size_t>(std::ceil(std::log(fb_tail_tolerance) / std::log(rb))) + 1;
    if (need > fb_max_degree)
        throw truncation_error("fbTest: |b|^N tail cannot reach 1e-12 below degree " + std::to_string(fb_max_degree));
    return std::max(requested, need);
}

/// Taylor coefficients of f_b(z) = (1-|b|^2)^{2-2beta}(sigma_b(z) - b):
/// a_0 = 0, a_k = -(1-|b|^2)^{3-2beta} conj(b)^{k-1}.
inline TaylorSeries fb_series(cd b, double beta, std::size_t N) {
    const std::size_t deg = fb_required_degree(b, N);
    const double scale = std::pow(1.0 - std::norm(b), 3.0 - 2.0 * beta);
    std::vector<cd> a(deg + 1, cd{0.0, 0.0});
    cd term = -scale;
    for (std::size_t k = 1; k <= deg; ++k) {
        a[k] = term;
        term *= std::conj(b);
    }
    return TaylorSeries(std::move(a));
}

/// Closed-form f_b; exact (untruncated) companion of fb_series used where the
/// series would need thousands of terms.
class FbFunction {
public:
    FbFunction(cd b, double beta) : b_(b), scale_(std::pow(1.0 - std::norm(b), 3.0 - 2.0 * beta)) {
        if (!(std::abs(b) < 1.0)) throw std::domain_error("FbFunction: |b| must be < 1");
    }
    cd value(cd z) const { return -scale_ * z / (1.0 - std::conj(b_) * z); }
    cd derivative(cd z) const {
        const cd d = 1.0 - std::conj(b_) * z;
        return -scale_ / (d * d);
    }
    cd centre() const { return b_; }
    double concentration_scale() const { return 1.0 - std::abs(b_); }

private:
    cd b_;
    double scale_;
};

using FamilyMember = std::variant<TaylorSeries, FourierSeries>;

inline FamilyMember make_family(const FamilySpec& spec) {
    switch (spec.kind) {
    case FamilyKind::monomial:
        if (spec.k < 0) throw std::invalid_argument("monomial: negative exponent");
        return TaylorSeries::monomial(static_cast<std::size_t>(spec.k));
    case FamilyKind::polynomial:
        return random_polynomial(spec.seed, spec.degree);
    case FamilyKind::lacunary:
        return lacunary_series(spec.gamma, spec.K, spec.N);
    case FamilyKind::boundaryLacunary:
        return boundary_lacunary_series(spec.gamma, spec.K, spec.N);
    case FamilyKind::fbTest:
        return fb_series(spec.b, spec.beta, spec.N);
    }
    throw std::invalid_argument("make_family: unknown kind");
}

} // namespace qdisc
