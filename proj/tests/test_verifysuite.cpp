#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "weylscope/error.hpp"
#include "weylscope/specfun.hpp"
#include "weylscope/verifysuite.hpp"

using namespace weylscope;

namespace {

// Area of the unit sphere in R^n.
double sphere_area_closed(int n) { return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n); }

// Direct Simpson integral of the defining formula when sigma, rho > 0, so the
// argument never reaches the singularity.
double j_direct(int m, int a, int i, double sigma, double rho) {
    const HalfInteger s = HalfInteger::from_twice(-(m + 2));
    constexpr int n = 20000;
    const double h = 0.5 * kPi / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = k * h;
        const double c = std::cos(t), sn = std::sin(t);
        const double f = std::pow(sn, a) * std::pow(c, m - a) * chi_value(i, s, sigma * c * c + rho * sn * sn);
        acc += f * (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0));
    }
    return acc * h / 3.0;
}

}  // namespace

TEST(WeylConstant, MatchesSphereMoments) {
    for (int n = 2; n <= 7; ++n) EXPECT_NEAR(weyl_constant(n, 0), sphere_area_closed(n), 1e-12);
    // int_{S^2} y_1^2 = 4 pi / 3, int_{S^2} y_1^4 = 4 pi / 5.
    EXPECT_NEAR(weyl_constant(3, 2), 4 * kPi / 3, 1e-13);
    EXPECT_NEAR(weyl_constant(3, 4), 4 * kPi / 5, 1e-13);
    EXPECT_EQ(weyl_constant(4, 3), 0.0);
}

TEST(WeylLemma, EuclideanSpheres) {
    for (int p = 2; p <= 5; ++p) {
        const auto c = verify_weyl_lemma(p, 0, 2, 0);
        EXPECT_TRUE(c.pass) << c.to_json().dump();
    }
    const auto c = verify_weyl_lemma(2, 1, 0, 1);
    EXPECT_NEAR(c.lhs.real(), 4 * kPi, 1e-10);
}

TEST(WeylLemma, FullLatticePasses) {
    const auto cases = run_weyl_suite();
    EXPECT_EQ(cases.size(), 200u);
    int zeros = 0;
    for (const auto& c : cases) {
        EXPECT_TRUE(c.pass) << c.to_json().dump();
        if (c.params["structural_zero"].get<bool>()) {
            ++zeros;
            EXPECT_LT(c.abs_error, 1e-10);
        }
    }
    EXPECT_GT(zeros, 0);
}

TEST(WeylLemma, Preconditions) {
    EXPECT_THROW(verify_weyl_lemma(0, 3, 0, 0), Error);
    EXPECT_THROW(verify_weyl_lemma(1, 0, 0, 0), Error);
    EXPECT_THROW(verify_weyl_lemma(2, 1, -1, 0), Error);
}

TEST(JPointwise, AgreesWithDirectIntegralAwayFromCone) {
    for (int m = 0; m <= 3; ++m)
        for (int a = 0; a <= m; ++a)
            for (int i = 0; i < 2; ++i) {
                const Complex j = j_pointwise(m, a, i, 0.7, 1.9);
                const double ref = j_direct(m, a, i, 0.7, 1.9);
                EXPECT_NEAR(j.real(), ref, 1e-9 * (1 + std::abs(ref))) << m << a << i;
                EXPECT_NEAR(j.imag(), 0.0, 1e-12);
            }
}

TEST(JPointwise, SymmetricUnderSwap) {
    // Swapping sigma and rho exchanges the roles of sin and cos.
    EXPECT_NEAR(std::abs(j_pointwise(3, 1, 0, -0.4, 1.3) - j_pointwise(3, 2, 0, 1.3, -0.4)), 0.0, 1e-10);
}

TEST(JPointwise, SphereValue) { EXPECT_NEAR(std::abs(j_pointwise(1, 0, 1, 1.0, -1.0) - 1.0), 0.0, 1e-8); }

TEST(JPointwise, DiagonalIsConstantArgument) {
    const Complex j = j_pointwise(2, 1, 0, 0.5, 0.5);
    EXPECT_NEAR(j.real(), sine_integral_S(1, 1) * chi_value(0, HalfInteger::from_twice(-4), 0.5), 1e-14);
    EXPECT_THROW(chi_value(0, HalfInteger::from_twice(-3), 0.0), Error);
}

TEST(JFrozen, SampleCases) {
    for (double sigma : {-1.0, -0.5, 0.5, 1.0})
        for (int a = 0; a <= 3; ++a) {
            const auto c = verify_j_frozen(3, a, 1, sigma);
            EXPECT_TRUE(c.pass) << c.to_json().dump();
        }
}

TEST(JIdentity, BothTestFunctions) {
    const auto phis = default_test_functions_2d();
    ASSERT_EQ(phis.size(), 2u);
    const int picks[][3] = {{0, 0, 0}, {1, 0, 1}, {2, 1, 0}, {3, 2, 1}, {4, 2, 0}, {4, 4, 1}};
    for (const auto& f : phis)
        for (const auto& [m, a, i] : picks) {
            const auto c = verify_j_identity(m, a, i, f);
            EXPECT_TRUE(c.pass) << f.name << ' ' << c.to_json().dump();
            EXPECT_LT(c.rel_error, 1e-6);
        }
}

TEST(JSuite, AllCasesPass) {
    const auto cases = run_j_suite();
    EXPECT_EQ(cases.size(), 181u);
    for (const auto& c : cases) EXPECT_TRUE(c.pass) << c.to_json().dump();
}

TEST(TableSuite, AllCasesPass) {
    const auto cases = run_table_suite();
    int residue = 0, duality = 0, eval = 0, dbl = 0;
    for (const auto& c : cases) {
        EXPECT_TRUE(c.pass) << c.to_json().dump();
        residue += c.identity == "residue";
        duality += c.identity == "fourier_duality";
        eval += c.identity == "chi_eval";
        dbl += c.identity == "double_fourier";
    }
    EXPECT_EQ(residue, 6);
    EXPECT_EQ(duality, 8);
    EXPECT_EQ(eval, 8);
    EXPECT_EQ(dbl, 14);
}

TEST(Output, JsonAndCsv) {
    const std::vector<IdentityCase> cases{verify_j_frozen(2, 1, 0, 0.5), verify_weyl_lemma(2, 1, 1, 0)};
    const auto j = cases_to_json(cases);
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["identity"], "j_frozen_rho");
    EXPECT_TRUE(j[1].contains("pass"));

    std::ostringstream csv;
    write_cases_csv(csv, cases);
    std::istringstream in(csv.str());
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        // Commas outside quoted fields separate the 11 columns.
        int commas = 0;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') quoted = !quoted;
            commas += !quoted && ch == ',';
        }
        EXPECT_EQ(commas, 10) << line;
    }
    EXPECT_EQ(rows, 3);
}
