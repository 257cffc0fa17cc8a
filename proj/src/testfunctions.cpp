#include "weylscope/testfunctions.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "weylscope/error.hpp"

namespace weylscope {

GaussianPolynomial::GaussianPolynomial(std::vector<Complex> poly, double alpha)
    : poly_(std::move(poly)), alpha_(alpha) {
    if (!(alpha_ > 0)) throw Error(ErrorKind::validation_error, "Gaussian width must be positive");
    if (poly_.empty()) poly_.push_back(0.0);
}

Complex GaussianPolynomial::operator()(double x) const {
    Complex p = 0.0;
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) p = p * x + *it;
    return p * std::exp(-alpha_ * x * x);
}

GaussianPolynomial GaussianPolynomial::derivative() const {
    // (P' - 2 alpha x P) e^{-alpha x^2}
    std::vector<Complex> q(poly_.size() + 1, 0.0);
    for (std::size_t n = 1; n < poly_.size(); ++n) q[n - 1] += static_cast<double>(n) * poly_[n];
    for (std::size_t n = 0; n < poly_.size(); ++n) q[n + 1] -= 2.0 * alpha_ * poly_[n];
    return {q, alpha_};
}

GaussianPolynomial GaussianPolynomial::fourier() const {
    // F[x^n g] = (i d/dxi)^n F[g], F[e^{-alpha x^2}] = sqrt(pi/alpha) e^{-xi^2/(4 alpha)}.
    const double beta = 1.0 / (4.0 * alpha_);
    GaussianPolynomial term({std::sqrt(kPi / alpha_)}, beta);
    std::vector<Complex> out(1, 0.0);
    for (std::size_t n = 0; n < poly_.size(); ++n) {
        if (out.size() < term.poly_.size()) out.resize(term.poly_.size(), 0.0);
        for (std::size_t k = 0; k < term.poly_.size(); ++k) out[k] += poly_[n] * term.poly_[k];
        GaussianPolynomial next = term.derivative();
        for (auto& c : next.poly_) c *= Complex(0.0, 1.0);
        term = next;
    }
    return {out, beta};
}

std::vector<Complex> GaussianPolynomial::taylor(int n) const {
    std::vector<Complex> e(n + 1, 0.0), out(n + 1, 0.0);
    double term = 1.0;
    for (int m = 0; 2 * m <= n; ++m) {
        e[2 * m] = term;
        term *= -alpha_ / (m + 1);
    }
    for (std::size_t i = 0; i < poly_.size() && static_cast<int>(i) <= n; ++i)
        for (int j = 0; j + static_cast<int>(i) <= n; ++j) out[i + j] += poly_[i] * e[j];
    return out;
}

TestFunction1D GaussianPolynomial::as_test_function(int smoothness) const {
    const GaussianPolynomial self = *this;
    TestFunction1D::Support sup;
    sup.schwartz = true;
    const double deg = static_cast<double>(poly_.size());
    sup.decay_radius = std::sqrt(90.0 / alpha_) + deg;
    auto deriv = [self](int j, double x) {
        GaussianPolynomial d = self;
        for (int k = 0; k < j; ++k) d = d.derivative();
        return d(x);
    };
    return TestFunction1D([self](double x) { return self(x); }, deriv, sup, smoothness,
                          std::numeric_limits<double>::infinity());
}

// ---------------------------------------------------------------------------

PowerProductProfile::PowerProductProfile(double coeff, std::vector<Factor> factors, double lo, double hi)
    : coeff_(coeff), factors_(std::move(factors)), lo_(lo), hi_(hi) {
    if (!(lo_ < hi_)) throw Error(ErrorKind::validation_error, "empty profile domain");
}

double PowerProductProfile::operator()(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    double v = coeff_;
    for (const auto& f : factors_) v *= std::pow(f.a + f.b * x, f.g);
    return v;
}

std::vector<double> PowerProductProfile::taylor(int n) const {
    std::vector<double> out(n + 1, 0.0);
    if (lo_ >= 0.0 || hi_ <= 0.0) return out;
    out[0] = coeff_;
    for (const auto& f : factors_) {
        if (!(f.a > 0)) throw Error(ErrorKind::validation_error, "profile factor not positive at 0");
        const double ratio = f.b / f.a, scale = std::pow(f.a, f.g);
        std::vector<double> series(n + 1);
        double r = 1.0;
        for (int k = 0; k <= n; ++k) {
            series[k] = binomial(f.g, k) * r;
            r *= ratio;
        }
        std::vector<double> prod(n + 1, 0.0);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; i + j <= n; ++j) prod[i + j] += out[i] * series[j];
        for (auto& c : prod) c *= scale;
        out = prod;
    }
    return out;
}

TestFunction1D PowerProductProfile::as_test_function() const {
    const PowerProductProfile self = *this;
    double radius = std::numeric_limits<double>::infinity();
    TestFunction1D::Support sup;
    sup.lo = lo_;
    sup.hi = hi_;
    for (const auto& f : factors_) {
        if (f.b != 0.0) radius = std::min(radius, std::abs(f.a / f.b));
        const bool smooth = f.g >= 0 && f.g == std::floor(f.g);
        if (smooth || f.b == 0.0) continue;
        const double root = -f.a / f.b;
        if (std::abs(root - lo_) < 1e-14 * (1 + std::abs(lo_))) sup.lo_singular = true;
        if (std::abs(root - hi_) < 1e-14 * (1 + std::abs(hi_))) sup.hi_singular = true;
    }
    constexpr int kOrder = 80;
    auto deriv = [self](int j, double x) -> Complex {
        if (x == 0.0) return self.taylor(j)[j] * factorial(j);
        // Away from 0 only the value is needed by the pairing machinery.
        if (j == 0) return self(x);
        const double h = 1e-5 * (1.0 + std::abs(x));
        if (j == 1) return (self(x + h) - self(x - h)) / (2 * h);
        throw Error(ErrorKind::insufficient_smoothness, "profile derivatives are provided at 0 only");
    };
    return TestFunction1D([self](double x) { return Complex(self(x)); }, deriv, sup, kOrder, radius);
}

TestFunction1D bump_test_function(double center, double width) {
    auto f = [center, width](double x) -> Complex {
        const double u = (x - center) / width;
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - u * u));
    };
    TestFunction1D::Support sup;
    sup.lo = center - width;
    sup.hi = center + width;
    auto d = [f, width](int j, double x) -> Complex {
        if (j == 0) return f(x);
        const double h = 1e-4 * width;
        if (j == 1) return (f(x + h) - f(x - h)) / (2 * h);
        throw Error(ErrorKind::insufficient_smoothness, "bump derivatives beyond first order are not tabulated");
    };
    // Away from its support the bump is identically zero, so its Taylor data at 0 vanish.
    return TestFunction1D(f, d, sup, 1000, std::abs(center) - width);
}

// ---------------------------------------------------------------------------

GaussianPolynomial2D::GaussianPolynomial2D(Poly poly, Quadratic q) : poly_(std::move(poly)), q_(q) {
    if (!(q_.a > 0 && q_.c > 0 && q_.a * q_.c - q_.b * q_.b > 0))
        throw Error(ErrorKind::validation_error, "quadratic form must be positive definite");
}

double GaussianPolynomial2D::operator()(double s, double r) const {
    std::array<double, 64> sp, rp;
    sp[0] = rp[0] = 1.0;
    int deg = 0;
    for (const auto& [e, c] : poly_) deg = std::max({deg, e.first, e.second});
    if (deg >= 64) throw Error(ErrorKind::validation_error, "polynomial degree too large");
    for (int k = 1; k <= deg; ++k) {
        sp[k] = sp[k - 1] * s;
        rp[k] = rp[k - 1] * r;
    }
    double p = 0.0;
    for (const auto& [e, c] : poly_) p += c * sp[e.first] * rp[e.second];
    const double q = 0.5 * (q_.a * s * s + 2 * q_.b * s * r + q_.c * r * r) + q_.d * s + q_.e * r;
    return p * std::exp(-q);
}

GaussianPolynomial2D GaussianPolynomial2D::d_s() const {
    // (P_s - P (a s + b r + d)) e^{-q}
    Poly out;
    for (const auto& [e, c] : poly_) {
        if (e.first > 0) out[{e.first - 1, e.second}] += c * e.first;
        out[{e.first + 1, e.second}] -= c * q_.a;
        out[{e.first, e.second + 1}] -= c * q_.b;
        out[{e.first, e.second}] -= c * q_.d;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
    return {out, q_};
}

GaussianPolynomial2D GaussianPolynomial2D::d_r() const {
    Poly out;
    for (const auto& [e, c] : poly_) {
        if (e.second > 0) out[{e.first, e.second - 1}] += c * e.second;
        out[{e.first + 1, e.second}] -= c * q_.b;
        out[{e.first, e.second + 1}] -= c * q_.c;
        out[{e.first, e.second}] -= c * q_.e;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
    return {out, q_};
}

GaussianPolynomial2D GaussianPolynomial2D::directional(double u, double v) const {
    Poly out = d_s().poly_;
    for (auto& [e, c] : out) c *= u;
    for (const auto& [e, c] : d_r().poly_) out[e] += v * c;
    std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
    return {out, q_};
}

GaussianPolynomial2D GaussianPolynomial2D::partial(int i, int j) const {
    GaussianPolynomial2D f = *this;
    for (int k = 0; k < i; ++k) f = f.d_s();
    for (int k = 0; k < j; ++k) f = f.d_r();
    return f;
}

double GaussianPolynomial2D::decay_radius() const {
    const double lam_min = 0.5 * (q_.a + q_.c - std::sqrt((q_.a - q_.c) * (q_.a - q_.c) + 4 * q_.b * q_.b));
    const double shift = std::hypot(q_.d, q_.e) / lam_min;
    int deg = 0;
    for (const auto& [e, c] : poly_) deg = std::max(deg, e.first + e.second);
    return shift + std::sqrt(2.0 * 80.0 / lam_min) + deg;
}

}  // namespace weylscope
