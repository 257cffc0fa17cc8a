#include "weylscope/specfun.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "weylscope/error.hpp"

namespace weylscope {

std::int64_t HalfInteger::as_integer() const {
    if (!is_integer()) throw Error(ErrorKind::validation_error, to_string() + " is not an integer");
    return twice_ / 2;
}

std::string HalfInteger::to_string() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
}

HalfInteger HalfInteger::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            std::int64_t num = std::stoll(text.substr(0, slash));
            std::int64_t den = std::stoll(text.substr(slash + 1));
            if (den == 1) return integer(num);
            if (den == 2) return from_twice(num);
        } else {
            std::size_t used = 0;
            double v = std::stod(text, &used);
            double tw = 2.0 * v;
            if (used == text.size() && std::abs(tw - std::round(tw)) == 0.0)
                return from_twice(static_cast<std::int64_t>(std::llround(tw)));
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::validation_error, "not a half-integer: '" + text + "'");
}

Complex i_pow(std::int64_t k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

Complex eighth_turn(std::int64_t e) {
    const double h = std::sqrt(0.5);
    switch (((e % 8) + 8) % 8) {
        case 0: return {1.0, 0.0};
        case 1: return {h, h};
        case 2: return {0.0, 1.0};
        case 3: return {-h, h};
        case 4: return {-1.0, 0.0};
        case 5: return {-h, -h};
        case 6: return {0.0, -1.0};
        default: return {h, -h};
    }
}

namespace {

bool is_pole(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

Complex log_gamma_right(Complex z) {
    static constexpr std::array<double, 14> cof = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    Complex tmp = z + 5.24218750;
    tmp = (z + 0.5) * std::log(tmp) - tmp;
    Complex ser = 0.999999999999997092;
    for (std::size_t j = 0; j < cof.size(); ++j) ser += cof[j] / (z + static_cast<double>(j + 1));
    return tmp + std::log(2.5066282746310005 * ser / z);
}

}  // namespace

Complex gamma_complex(Complex z) {
    if (is_pole(z)) throw Error(ErrorKind::pole_of_gamma, "Gamma has a pole at " + std::to_string(z.real()));
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_complex(1.0 - z));
    return std::exp(log_gamma_right(z));
}

double gamma_real(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw Error(ErrorKind::pole_of_gamma, "Gamma has a pole at " + std::to_string(x));
    return std::tgamma(x);
}

double beta(double a, double b) { return gamma_real(a) * gamma_real(b) / gamma_real(a + b); }

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

double binomial(double g, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= (g - k) / (k + 1);
    return r;
}

double sine_integral_S(int a, int b) {
    if (a < 0 || b < 0) throw Error(ErrorKind::validation_error, "S(a,b) needs a,b >= 0");
    // Symmetric in (a,b) by construction: the Gamma product is evaluated in sorted order.
    const int lo = std::min(a, b), hi = std::max(a, b);
    return 0.5 * beta((lo + 1) / 2.0, (hi + 1) / 2.0);
}

double ball_volume(int k) {
    if (k < 0) throw Error(ErrorKind::validation_error, "ball dimension must be >= 0");
    return std::pow(kPi, k / 2.0) / gamma_real(k / 2.0 + 1.0);
}

double sphere_area(int k) { return (k + 1) * ball_volume(k + 1); }

}  // namespace weylscope
