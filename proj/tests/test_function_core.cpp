#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qdisc/families.hpp"
#include "qdisc/params.hpp"
#include "qdisc/series.hpp"

using namespace qdisc;

namespace {

TaylorSeries random_series(std::uint64_t seed, int degree) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cd> a(static_cast<std::size_t>(degree) + 1);
    for (auto& c : a) c = cd{nd(rng), nd(rng)};
    return TaylorSeries(std::move(a));
}

double max_coeff_diff(const TaylorSeries& f, const TaylorSeries& g) {
    double m = 0.0;
    for (std::size_t k = 0; k <= std::max(f.degree(), g.degree()); ++k) m = std::max(m, std::abs(f[k] - g[k]));
    return m;
}

} // namespace

TEST(Mobius, Examples) {
    EXPECT_NEAR(std::abs(mobius(0.5, 0.0) - cd(0.5, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(mobius(0.0, cd(0.3, 0.1)) - cd(-0.3, -0.1)), 0.0, 1e-15);
    const cd a{0.3, 0.4};
    const cd z{0.2, -0.1};
    EXPECT_NEAR(std::abs(mobius(a, mobius(a, z)) - z), 0.0, 1e-14);
}

TEST(Mobius, MapsCircleToCircleAndRejectsBoundaryCentre) {
    const cd a{-0.6, 0.7};
    for (int j = 0; j < 16; ++j) EXPECT_NEAR(std::abs(mobius(a, std::polar(1.0, 0.4 * j))), 1.0, 1e-13);
    EXPECT_LT(std::abs(mobius(a, cd(0.1, 0.2))), 1.0);
    EXPECT_THROW(mobius(cd(1.0, 0.0), 0.0), std::domain_error);
}

TEST(Validate, Examples) {
    EXPECT_TRUE(validate(SpaceParams{0.6, 0.8}, TheoremContext::circleTheorems).pass);
    const Verdict v = validate(SpaceParams{0.3, 0.8}, TheoremContext::circleTheorems);
    EXPECT_FALSE(v.pass);
    ASSERT_FALSE(v.violated.empty());
    EXPECT_EQ(v.violated.front(), "p+2β>2");
    const SpaceParams m{0.5, 0.8};
    EXPECT_TRUE(validate(m, TheoremContext::morreyTheorem).pass);
    EXPECT_NEAR(m.morrey_lambda(), 0.9, 1e-15);
    EXPECT_NEAR(m.nu_star(), 0.45, 1e-15);
}

TEST(Validate, BaseRanges) {
    EXPECT_FALSE(validate(SpaceParams{0.0, 0.8}, TheoremContext::base).pass);
    EXPECT_FALSE(validate(SpaceParams{0.6, 0.5}, TheoremContext::base).pass);
    EXPECT_FALSE(validate(SpaceParams{0.6, 0.8, 1.0}, TheoremContext::base).pass);
    EXPECT_TRUE(validate(SpaceParams{1.0, 1.0}, TheoremContext::base).pass);
    EXPECT_FALSE(validate(SpaceParams{1.0, 0.8}, TheoremContext::circleTheorems).pass);
    EXPECT_FALSE(validate(SpaceParams{0.6, 0.8, 2.0, 0.1}, TheoremContext::fracCharacterization).pass);
    EXPECT_TRUE(validate(SpaceParams{0.6, 0.8, 2.0, 0.9}, TheoremContext::fracCharacterization).pass);
}

TEST(SpaceParams, DerivedExponentsAndBetaOneCase) {
    const SpaceParams s{0.6, 0.8};
    EXPECT_NEAR(s.box_weight_exp(), 0.2, 1e-15);
    EXPECT_NEAR(s.box_scale_exp(), 1.0, 1e-15);
    EXPECT_NEAR(s.circle_kernel_exp(), 1.8, 1e-15);
    EXPECT_NEAR(s.circle_scale_exp(), -1.0, 1e-15);
    const SpaceParams one{0.7, 1.0};
    EXPECT_DOUBLE_EQ(one.box_weight_exp(), one.p);
    EXPECT_DOUBLE_EQ(one.box_scale_exp(), one.p);
}

TEST(CauchyProduct, Examples) {
    const TaylorSeries a{1.0, 1.0};
    const TaylorSeries b{1.0, -1.0};
    EXPECT_EQ(cauchy_product(a, a, 2), (TaylorSeries{1.0, 2.0, 1.0}));
    EXPECT_EQ(cauchy_product(a, b, 2), (TaylorSeries{1.0, 0.0, -1.0}));
    EXPECT_TRUE(cauchy_product(a, TaylorSeries::constant(0.0), 4).is_constant());
    EXPECT_EQ(cauchy_product(a, a, 1), (TaylorSeries{1.0, 2.0}));
}

TEST(CauchyProduct, CommutativeAndAssociative) {
    const auto f = random_series(1, 7), g = random_series(2, 9), h = random_series(3, 5);
    EXPECT_LT(max_coeff_diff(cauchy_product(f, g, 64), cauchy_product(g, f, 64)), 1e-13);
    EXPECT_LT(max_coeff_diff(cauchy_product(cauchy_product(f, g, 64), h, 64), cauchy_product(f, cauchy_product(g, h, 64), 64)),
              1e-12);
}

TEST(Antiderivative, Examples) {
    EXPECT_EQ(antiderivative(TaylorSeries::constant(1.0)), (TaylorSeries{0.0, 1.0}));
    EXPECT_EQ(antiderivative(TaylorSeries{0.0, 1.0}), (TaylorSeries{0.0, 0.0, 0.5}));
    const auto f = random_series(7, 32);
    const auto F = antiderivative(f);
    EXPECT_EQ(F.degree(), f.degree() + 1);
    EXPECT_EQ(F[0], cd(0.0, 0.0));
    EXPECT_LT(max_coeff_diff(derivative(F), f), 1e-14);
    EXPECT_EQ(derivative(f).degree(), f.degree() - 1);
}

TEST(TaylorSeries, EvaluationMatchesDirectSum) {
    const auto f = random_series(11, 20);
    const cd z{0.3, -0.55};
    cd direct{0.0, 0.0}, dd{0.0, 0.0};
    for (std::size_t k = 0; k <= f.degree(); ++k) {
        direct += f[k] * std::pow(z, static_cast<int>(k));
        if (k > 0) dd += static_cast<double>(k) * f[k] * std::pow(z, static_cast<int>(k) - 1);
    }
    EXPECT_NEAR(std::abs(f(z) - direct), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(f.derivative(z) - dd), 0.0, 1e-12);
}

TEST(Families, Examples) {
    const auto fb0 = std::get<TaylorSeries>(make_family(FamilySpec::make_fb(0.0, 0.8)));
    EXPECT_EQ(fb0[1], cd(-1.0, 0.0));
    for (std::size_t k = 2; k <= fb0.degree(); ++k) EXPECT_EQ(fb0[k], cd(0.0, 0.0));
    const auto fb = std::get<TaylorSeries>(make_family(FamilySpec::make_fb(0.5, 0.75)));
    EXPECT_NEAR(fb[1].real(), -std::pow(0.75, 1.5), 1e-15);
    EXPECT_NEAR(fb[1].real(), -0.649519, 1e-6);
    const auto lac = std::get<TaylorSeries>(make_family(FamilySpec::make_lacunary(2.0, 3)));
    EXPECT_EQ(lac, (TaylorSeries{0.0, 1.0, 0.25, 0.0, 0.0625, 0.0, 0.0, 0.0, 0.015625}));
}

TEST(Families, FbRecursionAndClosedForm) {
    const cd b{0.4, -0.7};
    const auto fb = fb_series(b, 0.8, 512);
    for (std::size_t k = 1; k < fb.degree(); ++k) EXPECT_EQ(fb[k + 1], std::conj(b) * fb[k]);
    const FbFunction closed(b, 0.8);
    const cd z{0.5, 0.3};
    EXPECT_NEAR(std::abs(fb(z) - closed.value(z)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(fb.derivative(z) - closed.derivative(z)), 0.0, 1e-12);
    // f_b = (1-|b|^2)^{2-2beta} (sigma_b(z) - b)
    const cd direct = std::pow(1.0 - std::norm(b), 2.0 - 1.6) * (mobius(b, z) - b);
    EXPECT_NEAR(std::abs(closed.value(z) - direct), 0.0, 1e-14);
}

TEST(Families, TruncationGuard) {
    EXPECT_GT(fb_series(0.99, 0.8, 512).degree(), 2700u);
    EXPECT_THROW(fb_series(1.0 - 1e-9, 0.8, 512), truncation_error);
    EXPECT_THROW(lacunary_series(2.0, 10, 512), std::invalid_argument);
}

TEST(Families, SeededPolynomialsAreDeterministic) {
    const auto a = random_polynomial(42, 16);
    const auto b = random_polynomial(42, 16);
    const auto c = random_polynomial(43, 16);
    EXPECT_EQ(a, b);
    EXPECT_FALSE(a == c);
    for (cd x : a.coeffs()) {
        EXPECT_GE(x.real(), 0.0);
        EXPECT_LT(x.real(), 1.0);
        EXPECT_GE(x.imag(), 0.0);
        EXPECT_LT(x.imag(), 1.0);
    }
}

TEST(Hardy2, Values) {
    EXPECT_NEAR(hardy2_norm(TaylorSeries{1.0, 1.0}), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(hardy2_norm(TaylorSeries{}), 0.0);
    double s = 0.0;
    for (int k = 0; k <= 3; ++k) s += std::pow(2.0, -4.0 * k);
    EXPECT_NEAR(hardy2_norm(lacunary_series(2.0, 3, 512)), std::sqrt(s), 1e-15);
}

TEST(Fourier, TraceParsevalAndEvaluation) {
    const auto f = random_series(5, 12);
    const auto F = FourierSeries::trace(f);
    EXPECT_NEAR(F.l2_norm_sq(), std::pow(hardy2_norm(f), 2), 1e-12);
    for (int j = 0; j < 7; ++j) {
        const double t = 0.9 * j;
        EXPECT_NEAR(std::abs(F(t) - f(std::polar(1.0, t))), 0.0, 1e-12);
    }
    // Parseval by direct quadrature of |F|^2 on a uniform grid (exact for trigonometric polynomials).
    const int n = 64;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += std::norm(F(two_pi * j / n));
    EXPECT_NEAR(acc / n, F.l2_norm_sq(), 1e-11);
}

TEST(Fourier, PoissonGradientDensity) {
    FourierSeries c0(0);
    c0.set(0, 3.0);
    EXPECT_EQ(poisson_gradient_density(c0, 0.2, cd(0.3, 0.2)), 0.0);
    FourierSeries e1(1);
    e1.set(1, 1.0);
    EXPECT_NEAR(poisson_gradient_density(e1, 0.2, 0.0), 4.0, 1e-15);
    FourierSeries em1(1);
    em1.set(-1, 1.0);
    EXPECT_NEAR(poisson_gradient_density(em1, 0.2, 0.0), 4.0, 1e-15);
}

TEST(Fourier, TraceDensityEqualsFourTimesDerivativeSquared) {
    const auto f = random_series(9, 10);
    const auto F = FourierSeries::trace(f);
    for (int j = 0; j < 10; ++j) {
        const cd z = std::polar(0.09 * j, 0.7 * j);
        const double lhs = poisson_gradient_density(F, 0.2, z);
        const double rhs = 4.0 * std::norm(f.derivative(z)) * std::pow(1.0 - std::norm(z), 0.2);
        EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
    }
}

TEST(Fourier, HarmonicExtensionMatchesPoissonIntegral) {
    FourierSeries F(3);
    F.set(-2, cd(0.5, 0.1));
    F.set(1, cd(-0.3, 0.2));
    F.set(3, cd(0.0, 1.0));
    const cd z = std::polar(0.6, 1.1);
    // Poisson kernel (1-r^2)/|e^{it}-z|^2, uniform rule is spectrally accurate here.
    const int n = 512;
    cd acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        const double t = two_pi * j / n;
        acc += F(t) * (1.0 - std::norm(z)) / std::norm(std::polar(1.0, t) - z);
    }
    EXPECT_NEAR(std::abs(acc / static_cast<double>(n) - F.harmonic_extension(z)), 0.0, 1e-12);
}

TEST(Linearity, SeriesOps) {
    const auto f = random_series(21, 9), g = random_series(22, 9);
    const cd c{0.3, -1.2};
    EXPECT_LT(max_coeff_diff(derivative(c * f + g), c * derivative(f) + derivative(g)), 1e-13);
    EXPECT_LT(max_coeff_diff(antiderivative(c * f + g), c * antiderivative(f) + antiderivative(g)), 1e-13);
}
