#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "weylscope/specfun.hpp"

namespace weylscope {

enum class Side { plus, minus };

struct PowerTerm {
    Side side;
    HalfInteger exponent;
    Complex coeff;
};

struct DeltaTerm {
    int order;
    Complex coeff;
};

/// Finite combination of one-sided powers x_+^s, x_-^s and delta derivatives.
/// Terms are kept in canonical form: one coefficient per (side, exponent)
/// and per delta order. At a negative integer -k only the combination
/// x_+^{-k} + (-1)^k x_-^{-k} (the x^{-k} convention) has a meaning; lone
/// one-sided terms there are rejected by the factories.
class HomDistribution {
public:
    HomDistribution() = default;

    static HomDistribution power(Side side, HalfInteger s, Complex coeff = 1.0);
    /// |x|^s; undefined (pole) at odd negative integers.
    static HomDistribution abs_power(HalfInteger s, Complex coeff = 1.0);
    /// sign(x)|x|^s; undefined (pole) at even negative integers.
    static HomDistribution sign_power(HalfInteger s, Complex coeff = 1.0);
    /// x^k for integer k: |x|^k for even k, sign(x)|x|^k for odd k.
    static HomDistribution x_power(std::int64_t k, Complex coeff = 1.0);
    static HomDistribution delta(int order, Complex coeff = 1.0);

    std::vector<PowerTerm> power_terms() const;
    std::vector<DeltaTerm> delta_terms() const;
    Complex power_coeff(Side side, HalfInteger s) const;
    Complex delta_coeff(int order) const;
    int max_delta_order() const;
    bool empty() const { return powers_.empty() && deltas_.empty(); }

    /// d(-x).
    HomDistribution reflected() const;
    /// Largest coefficient difference against another distribution.
    double max_coeff_difference(const HomDistribution& other) const;

    HomDistribution& operator+=(const HomDistribution& o);
    HomDistribution& operator-=(const HomDistribution& o) { return *this += o * Complex(-1.0); }
    HomDistribution& operator*=(Complex c);
    friend HomDistribution operator+(HomDistribution a, const HomDistribution& b) { return a += b; }
    friend HomDistribution operator-(HomDistribution a, const HomDistribution& b) { return a -= b; }
    friend HomDistribution operator*(HomDistribution a, Complex c) { return a *= c; }
    friend HomDistribution operator*(Complex c, HomDistribution a) { return a *= c; }

    nlohmann::json to_json() const;
    std::string to_string() const;

private:
    void add_power(Side side, HalfInteger s, Complex c);
    void add_delta(int order, Complex c);
    void prune();

    std::map<std::pair<int, std::int64_t>, Complex> powers_;  // (side, twice exponent)
    std::map<int, Complex> deltas_;
};

/// Test function on the real line with Taylor data at 0.
class TestFunction1D {
public:
    using Value = std::function<Complex(double)>;
    /// Derivative oracle f^{(j)}(x).
    using Derivative = std::function<Complex(int, double)>;

    struct Support {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        /// Rapid decay: an unbounded support is truncated at +-decay_radius.
        bool schwartz = false;
        double decay_radius = 0.0;
        /// Algebraic (non-smooth) behavior at a finite support end.
        bool lo_singular = false;
        bool hi_singular = false;
    };

    /// `smoothness` is the highest derivative order the oracle supports.
    /// `taylor_radius` bounds where the Taylor series at 0 is trusted.
    TestFunction1D(Value value, Derivative derivative, Support support, int smoothness, double taylor_radius,
                   std::vector<double> breakpoints = {});

    /// Derivatives from local Chebyshev fits of the value oracle.
    static TestFunction1D from_values(Value value, Support support, int smoothness, double taylor_radius,
                                      std::vector<double> breakpoints = {});

    Complex operator()(double x) const { return value_(x); }
    Complex derivative(int j, double x) const;
    /// Taylor coefficients c_0..c_n at 0 (zero when 0 is outside the support).
    std::vector<Complex> taylor(int n) const;
    int smoothness() const { return smoothness_; }
    double taylor_radius() const { return taylor_radius_; }
    const Support& support() const { return support_; }
    /// Effective finite support [lo, hi] used for quadrature.
    std::pair<double, double> effective_support() const;
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    /// x -> f(-x)
    TestFunction1D reflected() const;
    /// x -> f(x/lambda)/lambda for lambda > 0.
    TestFunction1D dilated(double lambda) const;
    /// a f + b g; the support is the hull, smoothness the minimum.
    static TestFunction1D combine(Complex a, const TestFunction1D& f, Complex b, const TestFunction1D& g);

private:
    bool zero_near_origin() const;

    Value value_;
    Derivative derivative_;
    Support support_;
    int smoothness_;
    double taylor_radius_;
    std::vector<double> breakpoints_;
};

struct PairingOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    /// Upper bound on the number of Taylor terms used near the origin.
    int max_taylor_terms = 40;
};

/// Finite-part pairing <d, phi>.
Complex regularized_pair(const HomDistribution& d, const TestFunction1D& phi, const PairingOptions& opt = {});

/// <x_+^s, phi> for real s that is not a negative integer (analytic continuation).
Complex pair_plus_power(double s, const TestFunction1D& phi, const PairingOptions& opt = {});
/// <x^{-k}, phi> in the x^k convention, k >= 1.
Complex pair_negative_integer_power(int k, const TestFunction1D& phi, const PairingOptions& opt = {});

/// chi_i^s for s < 0 (i compared mod 2).
HomDistribution chi(int i, HalfInteger s);
/// chi_i^s(+-1); Kronecker indices compared mod 2. Also valid at s = 0,
/// where it gives chi_i^0(-1) = delta_{i,0}.
double chi_eval_pm1(int i, HalfInteger s, int sign);

enum class FamilyKind { x_plus, x_minus, abs_power, sign_power };

/// One of the named meromorphic families s -> x_+^s, x_-^s, |x|^s, sign|x|^s.
struct MeromorphicFamily {
    FamilyKind kind;

    bool is_pole(std::int64_t s) const;
    /// The family's member at half-integer s (throws at a pole).
    HomDistribution at(HalfInteger s) const;
    /// <fam(s), phi> for real s off the poles.
    Complex pair_at(double s, const TestFunction1D& phi, const PairingOptions& opt = {}) const;
    std::string name() const;
};

HomDistribution residue(const MeromorphicFamily& fam, std::int64_t at);

struct ResidueCheck {
    Complex extrapolated;
    Complex exact;
    double discrepancy;
};
/// Compares the residue against lim (s+k) <fam(s), phi> obtained by symmetric
/// sampling and Richardson extrapolation in (s+k)^2.
ResidueCheck residue_numeric_check(const MeromorphicFamily& fam, std::int64_t at, const TestFunction1D& phi,
                                   const PairingOptions& opt = {});

/// Fourier transform with the convention F f(xi) = int e^{-i x xi} f(x) dx.
HomDistribution fourier(const HomDistribution& d);

}  // namespace weylscope
