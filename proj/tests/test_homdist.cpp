#include <gtest/gtest.h>

#include <cmath>

#include "weylscope/error.hpp"
#include "weylscope/homdist.hpp"
#include "weylscope/testfunctions.hpp"

using namespace weylscope;

namespace {

TestFunction1D gauss(double alpha, std::vector<Complex> poly = {1.0}) {
    return GaussianPolynomial(std::move(poly), alpha).as_test_function();
}

HalfInteger hi(int twice) { return HalfInteger::from_twice(twice); }

}  // namespace

TEST(Pairing, DeltaDerivative) {
    EXPECT_NEAR(std::abs(regularized_pair(HomDistribution::delta(1), gauss(1.0, {0.0, 1.0})) - Complex(-1.0)), 0.0,
                1e-14);
}

TEST(Pairing, HalfIntegerPowersAgainstGaussian) {
    const auto phi = gauss(1.0);
    const Complex a = regularized_pair(HomDistribution::power(Side::plus, hi(-1)), phi);
    EXPECT_NEAR(a.real(), 0.5 * gamma_real(0.25), 1e-10);
    EXPECT_NEAR(a.real(), 1.8128050, 1e-7);
    const Complex b = regularized_pair(HomDistribution::power(Side::minus, hi(-3)), phi);
    EXPECT_NEAR(b.real(), 0.5 * gamma_real(-0.25), 1e-10);
    EXPECT_NEAR(b.real(), -2.4508334, 1e-7);
}

TEST(Pairing, AnalyticContinuationOracle) {
    // <x_+^s, e^{-x^2}> = Gamma((s+1)/2)/2 for every non-integer s.
    const auto phi = gauss(1.0);
    for (int twice : {-13, -11, -9, -7, -5, -3, -1, 1, 3}) {
        const double s = twice / 2.0;
        const Complex v = regularized_pair(HomDistribution::power(Side::plus, hi(twice)), phi);
        EXPECT_NEAR(v.real(), 0.5 * gamma_real((s + 1) / 2), 1e-9) << s;
        EXPECT_NEAR(v.imag(), 0.0, 1e-14);
    }
    // Real non-half-integer exponents through the low-level entry point.
    for (double s : {-3.3, -2.7, -1.2, -0.6}) EXPECT_NEAR(pair_plus_power(s, phi).real(), 0.5 * gamma_real((s + 1) / 2), 1e-9);
    // Even negative integers of |x|^s are regular: <|x|^{-2k}, e^{-x^2}> = Gamma((1-2k)/2).
    for (int k = 1; k <= 3; ++k) {
        const Complex v = regularized_pair(HomDistribution::abs_power(HalfInteger::integer(-2 * k)), phi);
        EXPECT_NEAR(v.real(), gamma_real((1.0 - 2 * k) / 2), 1e-9) << k;
    }
    // Odd test function against sign|x|^{-1}: <x^{-1}, x e^{-x^2}> = sqrt(pi).
    const Complex w = regularized_pair(HomDistribution::x_power(-1), gauss(1.0, {0.0, 1.0}));
    EXPECT_NEAR(w.real(), std::sqrt(kPi), 1e-10);
}

TEST(Pairing, SmoothnessAndTailErrors) {
    TestFunction1D::Support sup;  // unbounded, no decay flag
    auto f = [](double x) { return Complex(std::exp(-x * x)); };
    EXPECT_THROW(TestFunction1D(f, [f](int, double x) { return f(x); }, sup, 4, 1.0), Error);
    TestFunction1D::Support ok;
    ok.lo = -3;
    ok.hi = 3;
    auto d = [](int j, double x) {
        if (j == 0) return Complex(std::exp(-x * x));
        if (j == 1) return Complex(-2 * x * std::exp(-x * x));
        return Complex(0.0);
    };
    TestFunction1D rough(f, d, ok, 1, 1.0);
    try {
        regularized_pair(HomDistribution::power(Side::plus, hi(-5)), rough);
        FAIL() << "expected insufficient smoothness";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::insufficient_smoothness);
    }
    EXPECT_THROW(regularized_pair(HomDistribution::delta(3), rough), Error);
}

TEST(Pairing, FiniteDifferenceFallbackDerivatives) {
    TestFunction1D::Support sup;
    sup.schwartz = true;
    sup.decay_radius = 12;
    auto tf = TestFunction1D::from_values([](double x) { return Complex(std::exp(-x * x)); }, sup, 8, 1.0);
    const Complex v = regularized_pair(HomDistribution::power(Side::plus, hi(-3)), tf, PairingOptions{1e-7});
    EXPECT_NEAR(v.real(), 0.5 * gamma_real(-0.25), 1e-6);
}

TEST(Pairing, RejectsPoleCombinations) {
    EXPECT_THROW(HomDistribution::power(Side::plus, HalfInteger::integer(-1)), Error);
    EXPECT_THROW(HomDistribution::abs_power(HalfInteger::integer(-3)), Error);
    EXPECT_THROW(HomDistribution::sign_power(HalfInteger::integer(-2)), Error);
    EXPECT_NO_THROW(HomDistribution::abs_power(HalfInteger::integer(-2)));
    EXPECT_NO_THROW(HomDistribution::sign_power(HalfInteger::integer(-1)));
    // x^{-1} plus |x|^{-1}-like residue leaves a lone x_+^{-1}: pairing refuses it.
    HomDistribution bad = HomDistribution::x_power(-2) + HomDistribution::x_power(-2).reflected() * Complex(0.0);
    HomDistribution lone = HomDistribution::sign_power(HalfInteger::integer(-1)) * Complex(0.5);
    lone += HomDistribution::abs_power(HalfInteger::integer(-2)) * Complex(0.0);
    EXPECT_NO_THROW(regularized_pair(lone, gauss(1.0)));
    EXPECT_NO_THROW(regularized_pair(bad, gauss(1.0)));
}

TEST(Pairing, Homogeneity) {
    const auto phi = gauss(0.7, {1.0, 0.3, -0.2});
    for (double lambda : {0.5, 2.0, 3.0}) {
        const auto scaled = phi.dilated(lambda);
        for (int twice : {-7, -3, -1, 1}) {
            const auto d = HomDistribution::power(Side::plus, hi(twice)) +
                           HomDistribution::power(Side::minus, hi(twice), Complex(0.3, -1.0));
            const Complex lhs = regularized_pair(d, scaled);
            const Complex rhs = std::pow(lambda, twice / 2.0) * regularized_pair(d, phi);
            EXPECT_LT(std::abs(lhs - rhs), 1e-8 * (1 + std::abs(rhs))) << lambda << " " << twice;
        }
        const auto x2 = HomDistribution::x_power(-2);
        EXPECT_LT(std::abs(regularized_pair(x2, scaled) - std::pow(lambda, -2.0) * regularized_pair(x2, phi)), 1e-8);
    }
}

TEST(Pairing, Linearity) {
    const auto f = gauss(1.0, {1.0, 2.0});
    const auto g = gauss(0.5, {0.0, 0.0, 1.0});
    const Complex a(0.7, -0.2), b(-1.3, 0.4);
    const auto fg = TestFunction1D::combine(a, f, b, g);
    const auto d1 = chi(1, hi(-5)), d2 = chi(0, HalfInteger::integer(-3));
    for (const auto& d : {d1, d2, d1 + d2 * Complex(0, 2)}) {
        const Complex lhs = regularized_pair(d, fg);
        const Complex rhs = a * regularized_pair(d, f) + b * regularized_pair(d, g);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1 + std::abs(rhs)));
    }
    const Complex l2 = regularized_pair(d1 * a + d2 * b, f);
    const Complex r2 = a * regularized_pair(d1, f) + b * regularized_pair(d2, f);
    EXPECT_LT(std::abs(l2 - r2), 1e-12 * (1 + std::abs(r2)));
}

TEST(Chi, CaseSplit) {
    const auto c1 = chi(1, HalfInteger::integer(-1));
    EXPECT_NEAR(std::abs(c1.delta_coeff(0) - Complex(kPi)), 0.0, 1e-15);
    EXPECT_TRUE(c1.power_terms().empty());
    const auto c2 = chi(1, hi(-3));
    EXPECT_EQ(c2.power_coeff(Side::minus, hi(-3)), Complex(-1.0));
    EXPECT_EQ(c2.power_terms().size(), 1u);
    const auto c3 = chi(0, hi(-1));
    EXPECT_EQ(c3.power_coeff(Side::plus, hi(-1)), Complex(1.0));
    EXPECT_EQ(c3.power_terms().size(), 1u);
    // chi_0^{-2} = |x|^{-2}, chi_0^{-1} = sign|x|^{-1}, chi_1^{-2} = -pi delta'.
    EXPECT_EQ(chi(0, HalfInteger::integer(-2)).power_coeff(Side::minus, HalfInteger::integer(-2)), Complex(1.0));
    EXPECT_EQ(chi(0, HalfInteger::integer(-1)).power_coeff(Side::minus, HalfInteger::integer(-1)), Complex(-1.0));
    EXPECT_NEAR(chi(1, HalfInteger::integer(-2)).delta_coeff(1).real(), -kPi, 1e-15);
    EXPECT_THROW(chi(0, HalfInteger::integer(0)), Error);
    EXPECT_THROW(chi(1, hi(1)), Error);
}

TEST(Chi, PointValues) {
    EXPECT_EQ(chi_eval_pm1(0, hi(-1), +1), 1.0);
    EXPECT_EQ(chi_eval_pm1(1, hi(-1), +1), 0.0);
    EXPECT_EQ(chi_eval_pm1(1, hi(-3), -1), -1.0);
    EXPECT_EQ(chi_eval_pm1(0, HalfInteger::integer(-1), -1), -1.0);
    EXPECT_EQ(chi_eval_pm1(0, HalfInteger::integer(0), -1), 1.0);
    EXPECT_EQ(chi_eval_pm1(1, HalfInteger::integer(0), -1), 0.0);
    // Sign flip: chi_i^{s+1}(-1) = -chi_i^s(-1), exactly.
    for (int i = 0; i < 2; ++i)
        for (int twice = -12; twice <= -3; ++twice)
            EXPECT_EQ(chi_eval_pm1(i, hi(twice + 2), -1), -chi_eval_pm1(i, hi(twice), -1));
}

TEST(Chi, PointValuesMatchBumpPairings) {
    for (int i = 0; i < 2; ++i)
        for (int twice : {-1, -2, -3, -4, -5}) {
            for (int sign : {-1, 1}) {
                const auto b = bump_test_function(sign, 0.05);
                const double mass = regularized_pair(HomDistribution::x_power(0), b).real();
                const double v = regularized_pair(chi(i, hi(twice)), b).real() / mass;
                EXPECT_NEAR(v, chi_eval_pm1(i, hi(twice), sign), 0.02) << i << " " << twice << " " << sign;
            }
        }
}

TEST(Residue, Table) {
    const auto d1 = residue({FamilyKind::x_plus}, -1);
    EXPECT_EQ(d1.delta_coeff(0), Complex(1.0));
    const auto d2 = residue({FamilyKind::x_plus}, -2);
    EXPECT_EQ(d2.delta_coeff(1), Complex(-1.0));
    const auto d3 = residue({FamilyKind::abs_power}, -1);
    EXPECT_EQ(d3.delta_coeff(0), Complex(2.0));
    const auto d4 = residue({FamilyKind::x_minus}, -3);
    EXPECT_EQ(d4.delta_coeff(2), Complex(0.5));
    EXPECT_THROW(residue({FamilyKind::abs_power}, -2), Error);
    EXPECT_THROW(residue({FamilyKind::sign_power}, -1), Error);
    try {
        residue({FamilyKind::sign_power}, -3);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::not_a_pole);
    }
}

TEST(Residue, NumericLimits) {
    const auto g = gauss(1.0);
    const auto xg = gauss(1.0, {0.0, 1.0});
    auto r1 = residue_numeric_check({FamilyKind::x_plus}, -1, g);
    EXPECT_LT(r1.discrepancy, 1e-8);
    EXPECT_NEAR(r1.exact.real(), 1.0, 1e-15);
    auto r2 = residue_numeric_check({FamilyKind::abs_power}, -1, g);
    EXPECT_LT(r2.discrepancy, 1e-8);
    EXPECT_NEAR(r2.exact.real(), 2.0, 1e-15);
    auto r3 = residue_numeric_check({FamilyKind::sign_power}, -2, xg);
    EXPECT_LT(r3.discrepancy, 1e-8);
    EXPECT_NEAR(r3.exact.real(), 2.0, 1e-15);
    const auto rich = gauss(0.8, {1.0, -0.5, 0.7, 0.3});
    for (auto kind : {FamilyKind::x_plus, FamilyKind::x_minus})
        for (int k = 1; k <= 4; ++k) EXPECT_LT(residue_numeric_check({kind}, -k, rich).discrepancy, 1e-8) << k;
}

TEST(Fourier, Table) {
    const auto f1 = fourier(HomDistribution::delta(1));
    EXPECT_EQ(f1.power_coeff(Side::plus, HalfInteger::integer(1)), Complex(0, 1));
    EXPECT_EQ(f1.power_coeff(Side::minus, HalfInteger::integer(1)), Complex(0, -1));
    const auto f2 = fourier(chi(0, hi(-1)));
    const Complex alpha = std::sqrt(kPi) * std::exp(Complex(0, -kPi / 4));
    EXPECT_LT(std::abs(f2.power_coeff(Side::plus, hi(-1)) - alpha), 1e-14);
    EXPECT_LT(std::abs(f2.power_coeff(Side::minus, hi(-1)) - std::conj(alpha)), 1e-14);
    const auto f3 = fourier(HomDistribution::abs_power(hi(-1)));
    EXPECT_LT(f3.max_coeff_difference(HomDistribution::abs_power(hi(-1), std::sqrt(2 * kPi))), 1e-14);
    // alpha_1 = i alpha_0 for every half-integer s.
    for (int twice : {-1, -3, -5, -7}) {
        const Complex a0 = fourier(chi(0, hi(twice))).power_coeff(Side::plus, hi(-twice - 2));
        const Complex a1 = fourier(chi(1, hi(twice))).power_coeff(Side::plus, hi(-twice - 2));
        const Complex expect = kPi * half_turn_phase(hi(twice)) / gamma_real(-twice / 2.0);
        EXPECT_LT(std::abs(a0 - expect), 1e-13);
        EXPECT_LT(std::abs(a1 - Complex(0, 1) * expect), 1e-13);
    }
}

TEST(Fourier, DoubleTransformIsReflection) {
    std::vector<HomDistribution> cases;
    for (int i = 0; i < 2; ++i)
        for (int twice = -8; twice <= -1; ++twice) cases.push_back(chi(i, hi(twice)));
    for (int k = 0; k <= 4; ++k) {
        cases.push_back(HomDistribution::delta(k, Complex(0.3, k)));
        cases.push_back(HomDistribution::power(Side::plus, HalfInteger::integer(k)));
    }
    cases.push_back(HomDistribution::power(Side::minus, hi(3), Complex(1, -2)));
    for (const auto& d : cases) {
        const auto ff = fourier(fourier(d));
        const auto expect = d.reflected() * Complex(2 * kPi);
        EXPECT_LT(ff.max_coeff_difference(expect), 1e-12) << d.to_string();
    }
}

TEST(Fourier, DualityAgainstGaussianFamily) {
    const GaussianPolynomial g({1.0}, 0.5);
    const GaussianPolynomial xg({0.0, 1.0}, 0.5);
    const GaussianPolynomial mixed({1.0, 0.5, Complex(0, 0.25)}, 0.5);
    auto check = [](const HomDistribution& d, const GaussianPolynomial& phi) {
        const Complex lhs = regularized_pair(fourier(d), phi.as_test_function());
        const Complex rhs = regularized_pair(d, phi.fourier().as_test_function());
        return std::abs(lhs - rhs);
    };
    EXPECT_LT(check(HomDistribution::delta(0), g), 1e-10);
    EXPECT_LT(check(chi(0, hi(-1)), g), 1e-8);
    EXPECT_LT(check(chi(1, HalfInteger::integer(-2)), xg), 1e-8);
    for (int i = 0; i < 2; ++i)
        for (int twice : {-1, -2, -3, -4, -5, -6}) EXPECT_LT(check(chi(i, hi(twice)), mixed), 1e-8) << i << twice;
}

TEST(Serialization, JsonLayout) {
    const auto d = chi(1, hi(-3)) + HomDistribution::delta(2, Complex(0.5, 1));
    const auto j = d.to_json();
    ASSERT_EQ(j["power_terms"].size(), 1u);
    EXPECT_EQ(j["power_terms"][0]["side"], "minus");
    EXPECT_EQ(j["power_terms"][0]["exp_num"], -3);
    EXPECT_EQ(j["power_terms"][0]["exp_den"], 2);
    EXPECT_EQ(j["power_terms"][0]["coeff_re"], -1.0);
    EXPECT_EQ(j["delta_terms"][0]["order"], 2);
    EXPECT_EQ(j["delta_terms"][0]["coeff_im"], 1.0);
}
