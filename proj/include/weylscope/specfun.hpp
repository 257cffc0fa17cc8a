#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <string>

namespace weylscope {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Exact representation of n/2 for integer n. Integer/half-integer case
/// splits are decided on the stored integer, never on a floating value.
class HalfInteger {
public:
    constexpr HalfInteger() = default;

    static constexpr HalfInteger from_twice(std::int64_t twice) { return HalfInteger(twice); }
    static constexpr HalfInteger integer(std::int64_t n) { return HalfInteger(2 * n); }

    constexpr std::int64_t twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double value() const { return static_cast<double>(twice_) / 2.0; }

    /// Value as an integer; throws when the number is a proper half-integer.
    std::int64_t as_integer() const;
    /// floor(value)
    constexpr std::int64_t floor() const {
        return twice_ >= 0 ? twice_ / 2 : -((-twice_ + 1) / 2);
    }
    /// ceil(value)
    constexpr std::int64_t ceil() const { return -HalfInteger(-twice_).floor(); }

    constexpr HalfInteger operator-() const { return HalfInteger(-twice_); }
    constexpr HalfInteger operator+(HalfInteger o) const { return HalfInteger(twice_ + o.twice_); }
    constexpr HalfInteger operator-(HalfInteger o) const { return HalfInteger(twice_ - o.twice_); }
    constexpr HalfInteger operator+(std::int64_t n) const { return HalfInteger(twice_ + 2 * n); }
    constexpr HalfInteger operator-(std::int64_t n) const { return HalfInteger(twice_ - 2 * n); }
    constexpr auto operator<=>(const HalfInteger&) const = default;

    /// "-3/2", "-1", "0", "5/2"
    std::string to_string() const;
    /// Parses the format produced by to_string (also accepts decimals like -1.5).
    static HalfInteger parse(const std::string& text);

private:
    constexpr explicit HalfInteger(std::int64_t twice) : twice_(twice) {}
    std::int64_t twice_ = 0;
};

/// i^k, exact.
Complex i_pow(std::int64_t k);
/// exp(i*pi*e/4), exact on the eighth-turn lattice.
Complex eighth_turn(std::int64_t e);
/// exp(i*pi*s/2) for half-integer s.
inline Complex half_turn_phase(HalfInteger s) { return eighth_turn(s.twice()); }
/// (-1)^n
constexpr double sign_pow(std::int64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }

/// Complex Gamma via a Lanczos-type series; reflection for Re z < 1/2.
Complex gamma_complex(Complex z);
/// Real Gamma; pole check then std::tgamma.
double gamma_real(double x);
double beta(double a, double b);
double factorial(int n);
/// Generalized binomial coefficient C(g, n) for real g.
double binomial(double g, int n);

/// S(a,b) = integral over [0, pi/2] of sin^a cos^b.
double sine_integral_S(int a, int b);
/// Volume of the Euclidean unit k-ball.
double ball_volume(int k);
/// Area of the unit k-sphere in R^{k+1}; |S^0| = 2.
double sphere_area(int k);

}  // namespace weylscope
