#include <gtest/gtest.h>

#include <cmath>

#include "qdisc/calculus.hpp"
#include "qdisc/families.hpp"

using namespace qdisc;

namespace {

double max_coeff_diff(const TaylorSeries& f, const TaylorSeries& g) {
    double m = 0.0;
    for (std::size_t k = 0; k <= std::max(f.degree(), g.degree()); ++k) m = std::max(m, std::abs(f[k] - g[k]));
    return m;
}

// Monomial oracle: (z^k)^{(nu)} coefficient via tgamma directly (small k only).
double monomial_factor(int k, double nu, double b, int m) {
    const int j = k - m - 1;
    return std::tgamma(j + b + nu) * std::tgamma(j + m + 2.0) / (std::tgamma(j + 1.0) * std::tgamma(j + m + b + 1.0));
}

} // namespace

TEST(FracDerivParams, OrderIndex) {
    EXPECT_EQ(FracDerivParams(1.0, 2.0).m(), 0);
    EXPECT_EQ(FracDerivParams(3.0, 2.0).m(), 2);
    EXPECT_EQ(FracDerivParams(0.45, 2.0).m(), 0);
    EXPECT_EQ(FracDerivParams(1.5, 2.0).m(), 1);
    EXPECT_EQ(FracDerivParams(2.0000000001, 2.0).m(), 2);
    EXPECT_THROW(FracDerivParams(0.0, 2.0), std::invalid_argument);
    EXPECT_THROW(FracDerivParams(1.0, 1.0), std::invalid_argument);
}

TEST(FracDerivative, Examples) {
    EXPECT_EQ(frac_derivative(TaylorSeries{0.0, 0.0, 1.0}, {1.0, 2.0}), (TaylorSeries{0.0, 2.0}));
    for (double nu : {0.3, 1.0, 2.5}) EXPECT_TRUE(frac_derivative(TaylorSeries::constant(1.0), {nu, 2.0}).is_constant());
    EXPECT_EQ(frac_derivative(TaylorSeries::constant(1.0), {0.5, 2.0})[0], cd(0.0, 0.0));
    const auto d = frac_derivative(TaylorSeries{0.0, 1.0}, {0.5, 2.0});
    EXPECT_EQ(d.degree(), 0u);
    const double oracle = std::tgamma(2.0) * std::tgamma(2.5) / (std::tgamma(3.0) * std::tgamma(1.0));
    EXPECT_NEAR(d[0].real(), oracle, 1e-14);
    EXPECT_NEAR(d[0].real(), 0.664670, 1e-6);
}

TEST(FracDerivative, MonomialFormula) {
    for (double nu : {0.3, 0.9, 1.7, 2.2}) {
        const FracDerivParams fp(nu, 2.5);
        const int m = fp.m();
        for (int k = 0; k <= 12; ++k) {
            const auto d = frac_derivative(TaylorSeries::monomial(static_cast<std::size_t>(k)), fp);
            if (k < m + 1) {
                EXPECT_TRUE(d.is_constant() && d[0] == cd(0.0, 0.0));
                continue;
            }
            const std::size_t j = static_cast<std::size_t>(k - m - 1);
            EXPECT_NEAR(d[j].real(), monomial_factor(k, nu, 2.5, m), 1e-12 * d[j].real());
        }
    }
}

TEST(FracDerivative, IntegerCollapse) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto f = random_polynomial(seed, 40);
        for (double b : {1.5, 2.0, 3.0}) {
            TaylorSeries sym = f;
            for (int n = 1; n <= 3; ++n) {
                sym = derivative(sym);
                const auto got = frac_derivative(f, {static_cast<double>(n), b});
                ASSERT_EQ(got.degree(), sym.degree());
                for (std::size_t k = 0; k <= sym.degree(); ++k)
                    EXPECT_LE(std::abs(got[k] - sym[k]), 1e-10 * std::abs(sym[k]));
            }
        }
    }
}

TEST(FracDerivative, LadderIdentity) {
    const auto f = random_polynomial(17, 48);
    for (double nu : {0.3, 0.45, 0.9, 1.5}) {
        const auto lhs = derivative(frac_derivative(f, {nu, 2.0}));
        const auto rhs = frac_derivative(f, {nu + 1.0, 2.0});
        ASSERT_EQ(lhs.degree(), rhs.degree());
        for (std::size_t k = 0; k <= rhs.degree(); ++k) EXPECT_LE(std::abs(lhs[k] - rhs[k]), 1e-10 * std::abs(rhs[k]));
    }
}

TEST(FracDerivative, Linearity) {
    const auto f = random_polynomial(1, 20), g = random_polynomial(2, 20);
    const cd c{0.7, -0.4};
    const FracDerivParams fp(0.65, 2.0);
    EXPECT_LT(max_coeff_diff(frac_derivative(c * f + g, fp), c * frac_derivative(f, fp) + frac_derivative(g, fp)), 1e-12);
}

TEST(FracDerivativeIntegral, Examples) {
    const QuadConfig cfg;
    EXPECT_EQ(frac_derivative_integral(TaylorSeries::constant(4.0), {0.5, 2.0}, 0.2, cfg), cd(0.0, 0.0));
    const cd v = frac_derivative_integral(TaylorSeries{0.0, 0.0, 1.0}, {1.0, 2.0}, 0.3, cfg);
    EXPECT_NEAR(std::abs(v - cd(0.6, 0.0)), 0.0, 1e-3);
    const cd w = frac_derivative_integral(TaylorSeries{0.0, 1.0}, {0.5, 2.0}, 0.0, cfg);
    EXPECT_NEAR(std::abs(w - cd(0.664670, 0.0)), 0.0, 1e-3);
}

TEST(FracDerivativeIntegral, OracleAgreement) {
    const QuadConfig cfg;
    const auto f = random_polynomial(5, 16);
    for (double nu : {0.5, 1.5}) {
        const FracDerivParams fp(nu, 2.0);
        const auto coeff = frac_derivative(f, fp);
        for (cd z : {cd(0.0, 0.0), std::polar(0.35, 2.0), std::polar(0.7, -0.6)}) {
            const cd a = coeff(z);
            const cd b = frac_derivative_integral(f, fp, z, cfg);
            EXPECT_LE(std::abs(a - b), 1e-3 * std::abs(a)) << "nu=" << nu << " z=" << z;
        }
    }
}

TEST(TSigma, Examples) {
    const QuadConfig cfg;
    EXPECT_EQ(t_sigma_apply([](cd) { return 0.0; }, 1.0, 2.0, 0.3, cfg), 0.0);
    EXPECT_NEAR(t_sigma_apply([](cd) { return 1.0; }, 1.0, 2.0, 0.0, cfg), 0.5, 1e-3);
    const auto r = t_sigma_apply_refined([](cd) { return 1.0; }, 1.0, 2.0, 0.5, cfg);
    EXPECT_LE(r.refinement_delta, 1e-3);
    // Radial oracle: int (1-|z|^2) |1 - conj(z) w|^{-3} dA with the angular average done by Simpson in 2-D.
    double acc = 0.0;
    const int nr = 400, nt = 400;
    for (int i = 0; i < nr; ++i) {
        const double r0 = (i + 0.5) / nr;
        double ang = 0.0;
        for (int j = 0; j < nt; ++j) ang += std::pow(std::abs(1.0 - std::polar(r0, two_pi * (j + 0.5) / nt) * 0.5), -3.0);
        acc += (1.0 - r0 * r0) * r0 * ang / nt;
    }
    acc *= 2.0 / nr;
    EXPECT_NEAR(r.value, acc, 1e-4);
}

TEST(TSigma, Linearity) {
    const QuadConfig cfg;
    auto p1 = [](cd z) { return std::real(z) + 1.0; };
    auto p2 = [](cd z) { return std::norm(z); };
    const cd w = std::polar(0.6, 0.4);
    const double a = t_sigma_apply(p1, 1.2, 2.0, w, cfg), b = t_sigma_apply(p2, 1.2, 2.0, w, cfg);
    const double c = t_sigma_apply([&](cd z) { return 2.0 * p1(z) - 3.0 * p2(z); }, 1.2, 2.0, w, cfg);
    EXPECT_NEAR(c, 2.0 * a - 3.0 * b, 1e-12);
}

TEST(Volterra, Examples) {
    const auto g = random_polynomial(8, 16);
    EXPECT_LT(max_coeff_diff(volterra_Tg(TaylorSeries::constant(1.0), g, 64), g - TaylorSeries::constant(g[0])), 1e-12);
    EXPECT_TRUE(volterra_Tg(g, TaylorSeries::constant(5.0), 64).is_constant());
    EXPECT_EQ(volterra_Tg(g, TaylorSeries::constant(5.0), 64)[0], cd(0.0, 0.0));
    EXPECT_EQ(volterra_Tg(TaylorSeries{0.0, 1.0}, TaylorSeries{0.0, 1.0}, 8), (TaylorSeries{0.0, 0.0, 0.5}));
    EXPECT_EQ(volterra_Tg(g, g, 64)[0], cd(0.0, 0.0));
}

TEST(OpIg, Examples) {
    const auto f = random_polynomial(9, 16);
    const cd C{2.0, -1.0};
    EXPECT_LT(max_coeff_diff(op_Ig(f, TaylorSeries::constant(C), 64), C * (f - TaylorSeries::constant(f[0]))), 1e-12);
    EXPECT_TRUE(op_Ig(TaylorSeries::constant(3.0), f, 64).is_constant());
    EXPECT_EQ(op_Ig(TaylorSeries{0.0, 0.0, 1.0}, TaylorSeries{0.0, 1.0}, 8), (TaylorSeries{0.0, 0.0, 0.0, 2.0 / 3.0}));
}

TEST(OpMg, ExamplesAndDecomposition) {
    EXPECT_EQ(op_Mg(TaylorSeries::constant(1.0), TaylorSeries{0.0, 1.0}, 8), (TaylorSeries{0.0, 1.0}));
    EXPECT_EQ(op_Mg(TaylorSeries{1.0, 1.0}, TaylorSeries{1.0, 1.0}, 8), (TaylorSeries{1.0, 2.0, 1.0}));
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const auto f = random_polynomial(s, 16), g = random_polynomial(1000 + s, 16);
        for (std::size_t budget : {8u, 20u, 64u})
            EXPECT_LE(max_coeff_diff(op_Mg(f, g, budget), op_Mg_decomposed(f, g, budget)), 1e-12);
    }
}

TEST(Operators, LinearInF) {
    const auto f = random_polynomial(31, 12), h = random_polynomial(32, 12), g = random_polynomial(33, 12);
    const cd c{-0.2, 1.1};
    EXPECT_LT(max_coeff_diff(volterra_Tg(c * f + h, g, 40), c * volterra_Tg(f, g, 40) + volterra_Tg(h, g, 40)), 1e-12);
    EXPECT_LT(max_coeff_diff(op_Ig(c * f + h, g, 40), c * op_Ig(f, g, 40) + op_Ig(h, g, 40)), 1e-12);
}

TEST(IgImage, MatchesSeriesOperator) {
    const TaylorSeries g{0.5, 0.5};
    const cd b = std::polar(0.5, 0.3);
    const FbFunction fb(b, 0.8);
    const IgImage img(fb, g);
    const auto series = op_Ig(fb_series(b, 0.8, 512), g, 600);
    for (cd z : {cd(0.0, 0.0), std::polar(0.4, 1.0), std::polar(0.85, -2.0)}) {
        EXPECT_NEAR(std::abs(img.value(z) - series(z)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(img.derivative(z) - series.derivative(z)), 0.0, 1e-11);
    }
}
