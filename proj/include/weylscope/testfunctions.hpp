#pragma once

#include <map>
#include <utility>
#include <vector>

#include "weylscope/homdist.hpp"

namespace weylscope {

/// P(x) exp(-alpha x^2) with complex polynomial P. Closed under
/// differentiation and under the Fourier transform.
class GaussianPolynomial {
public:
    GaussianPolynomial(std::vector<Complex> poly, double alpha);

    Complex operator()(double x) const;
    GaussianPolynomial derivative() const;
    /// F f(xi) = int e^{-i x xi} f(x) dx, again in the family.
    GaussianPolynomial fourier() const;
    std::vector<Complex> taylor(int n) const;
    TestFunction1D as_test_function(int smoothness = 60) const;

    const std::vector<Complex>& poly() const { return poly_; }
    double alpha() const { return alpha_; }

private:
    std::vector<Complex> poly_;
    double alpha_;
};

/// coeff * prod_k (a_k + b_k x)^{g_k} on [lo, hi]; every factor is positive
/// on the open interval. Taylor data at 0 come from binomial series.
class PowerProductProfile {
public:
    struct Factor {
        double a, b, g;
    };
    PowerProductProfile(double coeff, std::vector<Factor> factors, double lo, double hi);

    double operator()(double x) const;
    std::vector<double> taylor(int n) const;
    TestFunction1D as_test_function() const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double coeff_;
    std::vector<Factor> factors_;
    double lo_, hi_;
};

/// Smooth bump exp(-1/(1-u^2)), u = (x - center)/width, as a test function.
TestFunction1D bump_test_function(double center, double width);

/// P(s, r) exp(-q(s, r)) with q(s,r) = (a s^2 + 2 b s r + c r^2)/2 + d s + e r.
class GaussianPolynomial2D {
public:
    using Poly = std::map<std::pair<int, int>, double>;
    struct Quadratic {
        double a = 1, b = 0, c = 1, d = 0, e = 0;
    };
    GaussianPolynomial2D(Poly poly, Quadratic q);

    double operator()(double s, double r) const;
    /// d^i/ds^i d^j/dr^j, again in the family.
    GaussianPolynomial2D partial(int i, int j) const;
    /// (u d/ds + v d/dr) applied once.
    GaussianPolynomial2D directional(double u, double v) const;
    const Quadratic& quadratic() const { return q_; }
    /// Radius beyond which the function is negligible (below ~1e-30 relative).
    double decay_radius() const;

private:
    GaussianPolynomial2D d_s() const;
    GaussianPolynomial2D d_r() const;
    Poly poly_;
    Quadratic q_;
};

}  // namespace weylscope
