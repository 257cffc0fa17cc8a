#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "weylscope/homdist.hpp"
#include "weylscope/testfunctions.hpp"

namespace weylscope {

/// One numerical check of an analytic identity.
struct IdentityCase {
    std::string identity;
    nlohmann::json params = nlohmann::json::object();
    std::string test_function;
    double tolerance = 0.0;
    Complex lhs{0.0, 0.0};
    Complex rhs{0.0, 0.0};
    double abs_error = 0.0;
    double rel_error = 0.0;
    /// The error compared against the tolerance (absolute, relative or scaled).
    double error = 0.0;
    bool pass = false;

    nlohmann::json to_json() const;
};

/// Named 2D test function with closed-form partial derivatives.
struct TestFunction2D {
    std::string name;
    GaussianPolynomial2D phi;
};

/// exp(-(s^2 + r^2)/2) and a tilted, correlated Gaussian with a polynomial factor.
std::vector<TestFunction2D> default_test_functions_2d();

struct JIdentityConfig {
    double tolerance = 1e-6;
    /// Relative accuracy of the outer integral over t.
    double t_rel_tol = 1e-10;
};

/// Pairing of J_{m,a}(sigma, rho; chi_i^{-(m+2)/2}) with phi computed two
/// ways: through pushforwards along the lines sigma cos^2 t + rho sin^2 t = x,
/// and through the product formula as an iterated pairing (rho inside).
IdentityCase verify_j_identity(int m, int a, int i, const TestFunction2D& phi, const JIdentityConfig& cfg = {});

/// Pointwise J_{m,a}(sigma, rho; chi_i^{-(m+2)/2}) at sigma != rho, from the
/// substitution x = sigma cos^2 t + rho sin^2 t (a 1D regularized pairing).
Complex j_pointwise(int m, int a, int i, double sigma, double rho);

/// chi_i^s at x != 0.
double chi_value(int i, HalfInteger s, double x);

/// J(sigma, 1) against S(a, m-a) chi_i^{-(m+1-a)/2}(sigma).
IdentityCase verify_j_frozen(int m, int a, int i, double sigma, double tolerance = 1e-6);

/// Sphere integral of chi_i^{-(p+q+h)/2}(Q(y,y)) y_1^h against the closed form
/// c(p+q, h) chi_i^{-q/2}(-1). Requires p >= 1 and p + q >= 2.
IdentityCase verify_weyl_lemma(int p, int q, int h, int i);

/// The constant c(n, h); zero for odd h.
double weyl_constant(int n, int h);

/// Residue, Fourier duality, chi evaluation and double-Fourier cases.
std::vector<IdentityCase> run_table_suite();

/// Default lattices used by the CLI suites.
std::vector<IdentityCase> run_j_suite();
std::vector<IdentityCase> run_weyl_suite();

nlohmann::json cases_to_json(const std::vector<IdentityCase>& cases);
void write_cases_csv(std::ostream& out, const std::vector<IdentityCase>& cases);

}  // namespace weylscope
