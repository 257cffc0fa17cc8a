#include "weylscope/homdist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "weylscope/error.hpp"
#include "weylscope/quadrature.hpp"

namespace weylscope {

namespace {

int side_index(Side s) { return s == Side::plus ? 0 : 1; }

bool is_negative_integer(HalfInteger s) { return s.is_integer() && s.twice() < 0; }

}  // namespace

// ---------------------------------------------------------------------------
// HomDistribution

void HomDistribution::add_power(Side side, HalfInteger s, Complex c) {
    powers_[{side_index(side), s.twice()}] += c;
}

void HomDistribution::add_delta(int order, Complex c) {
    if (order < 0) throw Error(ErrorKind::validation_error, "delta order must be >= 0");
    deltas_[order] += c;
}

void HomDistribution::prune() {
    std::erase_if(powers_, [](const auto& kv) { return kv.second == Complex(0.0); });
    std::erase_if(deltas_, [](const auto& kv) { return kv.second == Complex(0.0); });
}

HomDistribution HomDistribution::power(Side side, HalfInteger s, Complex coeff) {
    if (is_negative_integer(s))
        throw Error(ErrorKind::pole_of_family, "x_" + std::string(side == Side::plus ? "+" : "-") + "^" +
                                                   s.to_string() +
                                                   " is a pole; use the x^k combination or a delta term");
    HomDistribution d;
    d.add_power(side, s, coeff);
    d.prune();
    return d;
}

HomDistribution HomDistribution::abs_power(HalfInteger s, Complex coeff) {
    if (is_negative_integer(s) && s.as_integer() % 2 != 0)
        throw Error(ErrorKind::pole_of_family, "|x|^" + s.to_string() + " is a pole");
    HomDistribution d;
    d.add_power(Side::plus, s, coeff);
    d.add_power(Side::minus, s, coeff);
    d.prune();
    return d;
}

HomDistribution HomDistribution::sign_power(HalfInteger s, Complex coeff) {
    if (is_negative_integer(s) && s.as_integer() % 2 == 0)
        throw Error(ErrorKind::pole_of_family, "sign(x)|x|^" + s.to_string() + " is a pole");
    HomDistribution d;
    d.add_power(Side::plus, s, coeff);
    d.add_power(Side::minus, s, -coeff);
    d.prune();
    return d;
}

HomDistribution HomDistribution::x_power(std::int64_t k, Complex coeff) {
    return (k % 2 == 0) ? abs_power(HalfInteger::integer(k), coeff) : sign_power(HalfInteger::integer(k), coeff);
}

HomDistribution HomDistribution::delta(int order, Complex coeff) {
    HomDistribution d;
    d.add_delta(order, coeff);
    d.prune();
    return d;
}

std::vector<PowerTerm> HomDistribution::power_terms() const {
    std::vector<PowerTerm> out;
    for (const auto& [key, c] : powers_)
        out.push_back({key.first == 0 ? Side::plus : Side::minus, HalfInteger::from_twice(key.second), c});
    return out;
}

std::vector<DeltaTerm> HomDistribution::delta_terms() const {
    std::vector<DeltaTerm> out;
    for (const auto& [k, c] : deltas_) out.push_back({k, c});
    return out;
}

Complex HomDistribution::power_coeff(Side side, HalfInteger s) const {
    auto it = powers_.find({side_index(side), s.twice()});
    return it == powers_.end() ? Complex(0.0) : it->second;
}

Complex HomDistribution::delta_coeff(int order) const {
    auto it = deltas_.find(order);
    return it == deltas_.end() ? Complex(0.0) : it->second;
}

int HomDistribution::max_delta_order() const { return deltas_.empty() ? -1 : deltas_.rbegin()->first; }

HomDistribution HomDistribution::reflected() const {
    HomDistribution r;
    for (const auto& [key, c] : powers_) r.powers_[{1 - key.first, key.second}] = c;
    for (const auto& [k, c] : deltas_) r.deltas_[k] = c * sign_pow(k);
    return r;
}

double HomDistribution::max_coeff_difference(const HomDistribution& other) const {
    const HomDistribution diff = *this - other;
    double m = 0.0;
    for (const auto& [key, c] : diff.powers_) m = std::max(m, std::abs(c));
    for (const auto& [k, c] : diff.deltas_) m = std::max(m, std::abs(c));
    return m;
}

HomDistribution& HomDistribution::operator+=(const HomDistribution& o) {
    for (const auto& [key, c] : o.powers_) powers_[key] += c;
    for (const auto& [k, c] : o.deltas_) deltas_[k] += c;
    prune();
    return *this;
}

HomDistribution& HomDistribution::operator*=(Complex c) {
    for (auto& kv : powers_) kv.second *= c;
    for (auto& kv : deltas_) kv.second *= c;
    prune();
    return *this;
}

nlohmann::json HomDistribution::to_json() const {
    nlohmann::json powers = nlohmann::json::array(), deltas = nlohmann::json::array();
    for (const auto& t : power_terms()) {
        const bool integral = t.exponent.is_integer();
        powers.push_back({{"side", t.side == Side::plus ? "plus" : "minus"},
                          {"exp_num", integral ? t.exponent.twice() / 2 : t.exponent.twice()},
                          {"exp_den", integral ? 1 : 2},
                          {"coeff_re", t.coeff.real()},
                          {"coeff_im", t.coeff.imag()}});
    }
    for (const auto& t : delta_terms())
        deltas.push_back({{"order", t.order}, {"coeff_re", t.coeff.real()}, {"coeff_im", t.coeff.imag()}});
    return {{"power_terms", powers}, {"delta_terms", deltas}};
}

std::string HomDistribution::to_string() const {
    std::ostringstream os;
    bool first = true;
    auto coeff = [](Complex c) {
        std::ostringstream s;
        s << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        return s.str();
    };
    for (const auto& t : power_terms()) {
        os << (first ? "" : " + ") << coeff(t.coeff) << "x_" << (t.side == Side::plus ? "+" : "-") << "^{"
           << t.exponent.to_string() << "}";
        first = false;
    }
    for (const auto& t : delta_terms()) {
        os << (first ? "" : " + ") << coeff(t.coeff) << "delta^(" << t.order << ")";
        first = false;
    }
    return first ? "0" : os.str();
}

// ---------------------------------------------------------------------------
// TestFunction1D

TestFunction1D::TestFunction1D(Value value, Derivative derivative, Support support, int smoothness,
                               double taylor_radius, std::vector<double> breakpoints)
    : value_(std::move(value)),
      derivative_(std::move(derivative)),
      support_(support),
      smoothness_(smoothness),
      taylor_radius_(taylor_radius),
      breakpoints_(std::move(breakpoints)) {
    if (!(support_.lo < support_.hi)) throw Error(ErrorKind::validation_error, "empty test-function support");
    const bool unbounded = std::isinf(support_.lo) || std::isinf(support_.hi);
    if (unbounded && !(support_.schwartz && support_.decay_radius > 0.0))
        throw Error(ErrorKind::nonconvergent_tail, "unbounded support without a decay radius");
    std::sort(breakpoints_.begin(), breakpoints_.end());
    // Cross-check the derivative oracle against centered differences of the values.
    const auto [lo, hi] = effective_support();
    double x0 = (lo < 0.0 && hi > 0.0) ? 0.0 : 0.5 * (lo + hi);
    const double reach = std::min({x0 - lo, hi - x0, taylor_radius_});
    bool near_break = false;
    for (double b : breakpoints_) near_break = near_break || std::abs(b - x0) < 0.5 * reach;
    if (smoothness_ >= 1 && reach > 0 && std::isfinite(reach) && !near_break) {
        const double h = std::min(1e-4, 0.25 * reach);
        const Complex fd = (value_(x0 + h) - value_(x0 - h)) / (2.0 * h);
        const Complex d1 = derivative_(1, x0);
        const Complex d0 = derivative_(0, x0), v0 = value_(x0);
        const double scale = 1.0 + std::abs(v0) + std::abs(d1);
        if (std::abs(fd - d1) > 1e-4 * scale || std::abs(d0 - v0) > 1e-8 * scale)
            throw Error(ErrorKind::validation_error, "derivative oracle disagrees with finite differences");
    }
}

namespace {

/// j-th derivative at x from a Chebyshev interpolant of f on [x - eps, x + eps].
Complex chebyshev_derivative(const TestFunction1D::Value& f, int j, double x, double eps, int m) {
    std::vector<Complex> fv(m), a(m);
    for (int k = 0; k < m; ++k) fv[k] = f(x + eps * std::cos(kPi * (k + 0.5) / m));
    for (int n = 0; n < m; ++n) {
        Complex s = 0.0;
        for (int k = 0; k < m; ++k) s += fv[k] * std::cos(kPi * n * (k + 0.5) / m);
        a[n] = s * (2.0 / m);
    }
    a[0] *= 0.5;
    // Differentiate the Chebyshev series j times.
    for (int d = 0; d < j; ++d) {
        std::vector<Complex> b(m + 1, 0.0);
        for (int n = m - 1; n >= 1; --n) b[n - 1] = b[n + 1] + 2.0 * n * a[n];
        b[0] *= 0.5;
        for (int n = 0; n < m; ++n) a[n] = b[n];
    }
    Complex s = 0.0;  // evaluate at u = 0: T_n(0) = cos(n pi/2)
    for (int n = 0; n < m; n += 2) s += a[n] * ((n / 2) % 2 == 0 ? 1.0 : -1.0);
    return s / std::pow(eps, j);
}

}  // namespace

TestFunction1D TestFunction1D::from_values(Value value, Support support, int smoothness, double taylor_radius,
                                           std::vector<double> breakpoints) {
    const int m = std::min(smoothness + 10, 28);
    const double eps = std::min(0.05, 0.5 * taylor_radius);
    Value v = value;
    Derivative d = [v, eps, m](int j, double x) { return j == 0 ? v(x) : chebyshev_derivative(v, j, x, eps, m); };
    return TestFunction1D(std::move(value), std::move(d), support, smoothness, taylor_radius, std::move(breakpoints));
}

std::pair<double, double> TestFunction1D::effective_support() const {
    double lo = support_.lo, hi = support_.hi;
    if (std::isinf(lo)) lo = -support_.decay_radius;
    if (std::isinf(hi)) hi = support_.decay_radius;
    return {lo, hi};
}

bool TestFunction1D::zero_near_origin() const {
    const auto [lo, hi] = effective_support();
    return lo > 0.0 || hi < 0.0;
}

Complex TestFunction1D::derivative(int j, double x) const {
    if (j > smoothness_)
        throw Error(ErrorKind::insufficient_smoothness,
                    "derivative of order " + std::to_string(j) + " exceeds smoothness " + std::to_string(smoothness_));
    return derivative_(j, x);
}

std::vector<Complex> TestFunction1D::taylor(int n) const {
    std::vector<Complex> c(n + 1, 0.0);
    if (zero_near_origin()) return c;
    double fact = 1.0;
    for (int j = 0; j <= n; ++j) {
        if (j > 0) fact *= j;
        c[j] = derivative(j, 0.0) / fact;
    }
    return c;
}

TestFunction1D TestFunction1D::reflected() const {
    Support s = support_;
    s.lo = -support_.hi;
    s.hi = -support_.lo;
    s.lo_singular = support_.hi_singular;
    s.hi_singular = support_.lo_singular;
    std::vector<double> bp;
    for (double b : breakpoints_) bp.push_back(-b);
    auto v = value_;
    auto d = derivative_;
    return TestFunction1D([v](double x) { return v(-x); },
                          [d](int j, double x) { return d(j, -x) * sign_pow(j); }, s, smoothness_, taylor_radius_,
                          std::move(bp));
}

TestFunction1D TestFunction1D::dilated(double lambda) const {
    if (!(lambda > 0)) throw Error(ErrorKind::validation_error, "dilation factor must be positive");
    Support s = support_;
    s.lo *= lambda;
    s.hi *= lambda;
    s.decay_radius *= lambda;
    std::vector<double> bp;
    for (double b : breakpoints_) bp.push_back(b * lambda);
    auto v = value_;
    auto d = derivative_;
    return TestFunction1D([v, lambda](double x) { return v(x / lambda) / lambda; },
                          [d, lambda](int j, double x) { return d(j, x / lambda) / std::pow(lambda, j + 1); }, s,
                          smoothness_, taylor_radius_ * lambda, std::move(bp));
}

TestFunction1D TestFunction1D::combine(Complex a, const TestFunction1D& f, Complex b, const TestFunction1D& g) {
    Support s;
    s.lo = std::min(f.support_.lo, g.support_.lo);
    s.hi = std::max(f.support_.hi, g.support_.hi);
    s.schwartz = f.support_.schwartz || g.support_.schwartz;
    s.decay_radius = std::max(f.support_.decay_radius, g.support_.decay_radius);
    std::vector<double> bp = f.breakpoints_;
    bp.insert(bp.end(), g.breakpoints_.begin(), g.breakpoints_.end());
    for (const auto* h : {&f, &g}) {
        const auto [lo, hi] = h->effective_support();
        if (lo > s.lo) bp.push_back(lo);
        if (hi < s.hi) bp.push_back(hi);
    }
    auto in = [](const TestFunction1D& h, double x) {
        const auto [lo, hi] = h.effective_support();
        return x >= lo && x <= hi;
    };
    return TestFunction1D(
        [a, b, f, g, in](double x) {
            Complex r = 0.0;
            if (in(f, x)) r += a * f(x);
            if (in(g, x)) r += b * g(x);
            return r;
        },
        [a, b, f, g, in](int j, double x) {
            Complex r = 0.0;
            if (in(f, x)) r += a * f.derivative_(j, x);
            if (in(g, x)) r += b * g.derivative_(j, x);
            return r;
        },
        s, std::min(f.smoothness_, g.smoothness_), std::min(f.taylor_radius_, g.taylor_radius_), std::move(bp));
}

// ---------------------------------------------------------------------------
// Pairing

namespace {

QuadOptions quad_options(const PairingOptions& opt) { return {0.01 * opt.abs_tol, opt.rel_tol, 20000}; }

/// Integral of g over [a, b] where algebraic endpoint behavior is tamed by
/// x = a + v^2 or x = b - v^2.
template <class G>
Complex integrate_segment(G&& g, double a, double b, bool sing_a, bool sing_b, const QuadOptions& q) {
    if (!(b > a)) return 0.0;
    if (sing_a && sing_b) {
        const double m = 0.5 * (a + b);
        return integrate_segment(g, a, m, true, false, q) + integrate_segment(g, m, b, false, true, q);
    }
    if (sing_a) {
        auto h = [&](double v) { return g(a + v * v) * (2.0 * v); };
        return integrate(h, 0.0, std::sqrt(b - a), q).value;
    }
    if (sing_b) {
        auto h = [&](double v) { return g(b - v * v) * (2.0 * v); };
        return integrate(h, 0.0, std::sqrt(b - a), q).value;
    }
    return integrate(g, a, b, q).value;
}

/// int_{max(delta, lo)}^{hi} x^s f(x) dx
Complex middle_integral(double s, const TestFunction1D& f, double delta, const QuadOptions& q) {
    const auto [lo, hi] = f.effective_support();
    const double start = std::max(delta, lo);
    if (!(hi > start)) return 0.0;
    const bool sing_start = lo >= delta && f.support().lo_singular;
    const bool sing_end = f.support().hi_singular && !std::isinf(f.support().hi);
    std::vector<double> pts{start};
    for (double x = 2.0 * start; x < std::min(hi, 1.0); x *= 2.0) pts.push_back(x);
    for (double b : f.breakpoints())
        if (b > start && b < hi) pts.push_back(b);
    if (start < 1.0 && hi > 1.0) pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.push_back(hi);
    auto g = [&](double x) { return std::pow(x, s) * f(x); };
    NeumaierSum<Complex> sum;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const bool first = i == 0, last = i + 2 == pts.size();
        sum += integrate_segment(g, pts[i], pts[i + 1], first && sing_start, last && sing_end, q);
    }
    return sum.value();
}

struct NearPlan {
    double delta;
    std::vector<Complex> taylor;  // empty when the function vanishes near 0
};

/// Radius of the near-origin region and the Taylor data used there.
/// `depth` is the Taylor-subtraction depth required by the exponent.
NearPlan plan_near(double s_min, int depth, const TestFunction1D& f, const TestFunction1D& g,
                   const PairingOptions& opt) {
    const auto [lo, hi] = f.effective_support();
    NearPlan plan;
    if (lo > 0.0 || hi < 0.0) {  // vanishes near 0
        plan.delta = 0.5 * std::min(std::abs(lo), std::abs(hi));
        return plan;
    }
    double delta = std::min({0.25, 0.5 * f.taylor_radius(), lo < 0 ? -0.5 * lo : 0.25, hi > 0 ? 0.5 * hi : 0.25});
    for (const auto* h : {&f, &g})
        for (double b : h->breakpoints())
            if (b != 0.0) delta = std::min(delta, 0.5 * std::abs(b));
    const int n = std::min(f.smoothness(), opt.max_taylor_terms - 1);
    if (n < depth)
        throw Error(ErrorKind::insufficient_smoothness,
                    "pairing needs " + std::to_string(depth) + " derivatives at 0, test function has " +
                        std::to_string(f.smoothness()));
    plan.taylor = f.taylor(n);
    // Shrink the near region until the last retained Taylor term is negligible.
    const double last = std::abs(plan.taylor[n]);
    for (int it = 0; it < 60; ++it) {
        const double p = s_min + n + 1;
        const double est = last * std::pow(delta, p) / std::max(std::abs(p), 1e-3);
        if (est < 0.01 * opt.abs_tol || delta < 1e-8) break;
        delta *= 0.5;
    }
    plan.delta = delta;
    return plan;
}

}  // namespace

Complex pair_plus_power(double s, const TestFunction1D& phi, const PairingOptions& opt) {
    if (s < 0 && s == std::floor(s))
        throw Error(ErrorKind::pole_of_family, "x_+^s is a pole at s = " + std::to_string(s));
    const int depth = s < -1 ? static_cast<int>(std::ceil(-s)) - 1 : 0;
    const NearPlan plan = plan_near(s, depth, phi, phi, opt);
    Complex near = 0.0;
    for (std::size_t i = 0; i < plan.taylor.size(); ++i) {
        const double p = s + static_cast<double>(i) + 1.0;
        near += plan.taylor[i] * (std::pow(plan.delta, p) / p);
    }
    return middle_integral(s, phi, plan.delta, quad_options(opt)) + near;
}

Complex pair_negative_integer_power(int k, const TestFunction1D& phi, const PairingOptions& opt) {
    if (k < 1) throw Error(ErrorKind::validation_error, "negative integer power needs k >= 1");
    const TestFunction1D mirror = phi.reflected();
    const auto [lo, hi] = phi.effective_support();
    NearPlan plan;
    if (lo > 0.0 || hi < 0.0) {
        plan.delta = 0.5 * std::min(std::abs(lo), std::abs(hi));
    } else {
        plan = plan_near(-k, k - 1, phi, mirror, opt);
        // The x_- side uses the same radius; keep it inside the mirrored support too.
        plan.delta = std::min(plan.delta, 0.5 * std::min(hi, -lo));
    }
    const double sign = sign_pow(k);
    Complex near = 0.0;
    for (std::size_t i = 0; i < plan.taylor.size(); ++i) {
        if ((static_cast<int>(i) - k) % 2 != 0) continue;  // psi = phi(x) + (-1)^k phi(-x) has only these
        const double p = static_cast<double>(i) - k + 1.0;
        near += 2.0 * plan.taylor[i] * (std::pow(plan.delta, p) / p);
    }
    const QuadOptions q = quad_options(opt);
    return middle_integral(-k, phi, plan.delta, q) + sign * middle_integral(-k, mirror, plan.delta, q) + near;
}

Complex regularized_pair(const HomDistribution& d, const TestFunction1D& phi, const PairingOptions& opt) {
    Complex total = 0.0;
    std::map<std::int64_t, std::pair<Complex, Complex>> groups;
    for (const auto& t : d.power_terms()) {
        auto& g = groups[t.exponent.twice()];
        (t.side == Side::plus ? g.first : g.second) += t.coeff;
    }
    std::optional<TestFunction1D> mirror;
    for (const auto& [twice, ab] : groups) {
        const auto [a, b] = ab;
        const HalfInteger s = HalfInteger::from_twice(twice);
        if (is_negative_integer(s)) {
            const int k = static_cast<int>(-s.as_integer());
            const Complex expected_b = a * sign_pow(k);
            if (std::abs(b - expected_b) > 1e-12 * (std::abs(a) + std::abs(b)))
                throw Error(ErrorKind::pole_of_family,
                            "power terms at s = " + s.to_string() + " are not the x^s combination");
            total += a * pair_negative_integer_power(k, phi, opt);
            continue;
        }
        if (a != Complex(0.0)) total += a * pair_plus_power(s.value(), phi, opt);
        if (b != Complex(0.0)) {
            if (!mirror) mirror = phi.reflected();
            total += b * pair_plus_power(s.value(), *mirror, opt);
        }
    }
    for (const auto& t : d.delta_terms()) total += t.coeff * sign_pow(t.order) * phi.derivative(t.order, 0.0);
    return total;
}

// ---------------------------------------------------------------------------
// chi families

HomDistribution chi(int i, HalfInteger s) {
    if (s.twice() >= 0) throw Error(ErrorKind::nonnegative_exponent, "chi needs s < 0, got " + s.to_string());
    const bool odd = (i % 2 + 2) % 2 == 1;
    if (!s.is_integer()) {
        if (!odd) return HomDistribution::power(Side::plus, s);
        // (-1)^{s+1/2}
        const std::int64_t e = HalfInteger::from_twice(s.twice() + 1).as_integer();
        return HomDistribution::power(Side::minus, s, sign_pow(e));
    }
    const std::int64_t n = s.as_integer();
    if (!odd) return HomDistribution::x_power(n);
    const int order = static_cast<int>(-n - 1);
    return HomDistribution::delta(order, sign_pow(n + 1) * kPi / factorial(order));
}

double chi_eval_pm1(int i, HalfInteger s, int sign) {
    if (s.twice() > 0) throw Error(ErrorKind::nonnegative_exponent, "chi evaluation needs s <= 0");
    const int parity = ((i % 2) + 2) % 2;
    if (sign > 0) return parity == 0 ? 1.0 : 0.0;
    const int twice_parity = static_cast<int>(((s.twice() % 2) + 2) % 2);
    if (twice_parity != parity) return 0.0;
    return sign_pow(HalfInteger::from_twice(s.twice() + 1).floor());
}

// ---------------------------------------------------------------------------
// Meromorphic families and residues

bool MeromorphicFamily::is_pole(std::int64_t s) const {
    if (s >= 0) return false;
    switch (kind) {
        case FamilyKind::x_plus:
        case FamilyKind::x_minus: return true;
        case FamilyKind::abs_power: return (-s) % 2 == 1;
        case FamilyKind::sign_power: return (-s) % 2 == 0;
    }
    return false;
}

std::string MeromorphicFamily::name() const {
    switch (kind) {
        case FamilyKind::x_plus: return "x_+^s";
        case FamilyKind::x_minus: return "x_-^s";
        case FamilyKind::abs_power: return "|x|^s";
        case FamilyKind::sign_power: return "sign(x)|x|^s";
    }
    return "?";
}

HomDistribution MeromorphicFamily::at(HalfInteger s) const {
    switch (kind) {
        case FamilyKind::x_plus: return HomDistribution::power(Side::plus, s);
        case FamilyKind::x_minus: return HomDistribution::power(Side::minus, s);
        case FamilyKind::abs_power: return HomDistribution::abs_power(s);
        case FamilyKind::sign_power: return HomDistribution::sign_power(s);
    }
    return {};
}

Complex MeromorphicFamily::pair_at(double s, const TestFunction1D& phi, const PairingOptions& opt) const {
    const bool integral = s == std::floor(s);
    if (integral && is_pole(static_cast<std::int64_t>(s)))
        throw Error(ErrorKind::pole_of_family, name() + " has a pole at s = " + std::to_string(s));
    if (integral && s < 0) {  // a regular negative integer of |x|^s or sign|x|^s is the x^s combination
        return pair_negative_integer_power(static_cast<int>(-s), phi, opt);
    }
    switch (kind) {
        case FamilyKind::x_plus: return pair_plus_power(s, phi, opt);
        case FamilyKind::x_minus: return pair_plus_power(s, phi.reflected(), opt);
        case FamilyKind::abs_power: return pair_plus_power(s, phi, opt) + pair_plus_power(s, phi.reflected(), opt);
        case FamilyKind::sign_power: return pair_plus_power(s, phi, opt) - pair_plus_power(s, phi.reflected(), opt);
    }
    return 0.0;
}

HomDistribution residue(const MeromorphicFamily& fam, std::int64_t at) {
    if (at >= 0 || !fam.is_pole(at))
        throw Error(ErrorKind::not_a_pole, fam.name() + " has no pole at s = " + std::to_string(at));
    const std::int64_t k = -at;
    const int order = static_cast<int>(k - 1);
    const double inv_fact = 1.0 / factorial(order);
    switch (fam.kind) {
        case FamilyKind::x_plus: return HomDistribution::delta(order, sign_pow(k - 1) * inv_fact);
        case FamilyKind::x_minus: return HomDistribution::delta(order, inv_fact);
        case FamilyKind::abs_power: return HomDistribution::delta(order, 2.0 * inv_fact);
        case FamilyKind::sign_power: return HomDistribution::delta(order, -2.0 * inv_fact);
    }
    return {};
}

ResidueCheck residue_numeric_check(const MeromorphicFamily& fam, std::int64_t at, const TestFunction1D& phi,
                                   const PairingOptions& opt) {
    const HomDistribution res = residue(fam, at);
    PairingOptions fine = opt;
    fine.abs_tol = std::min(opt.abs_tol, 1e-13);
    constexpr int levels = 5;
    std::array<double, levels> h2{};
    std::array<Complex, levels> table{};
    for (int j = 0; j < levels; ++j) {
        const double h = 0.1 / std::pow(2.0, j);
        const Complex gp = h * fam.pair_at(static_cast<double>(at) + h, phi, fine);
        const Complex gm = -h * fam.pair_at(static_cast<double>(at) - h, phi, fine);
        h2[j] = h * h;
        table[j] = 0.5 * (gp + gm);
    }
    // Neville extrapolation to h^2 = 0.
    Complex prev = table[levels - 1];
    for (int m = 1; m < levels; ++m) {
        prev = table[levels - 1];
        for (int j = levels - 1; j >= m; --j)
            table[j] = table[j] + (table[j] - table[j - 1]) * (h2[j] / (h2[j - m] - h2[j]));
    }
    const Complex extrapolated = table[levels - 1];
    const Complex exact = regularized_pair(res, phi, opt);
    if (!std::isfinite(std::abs(extrapolated)) || std::abs(extrapolated - prev) > 1e-4 * (1.0 + std::abs(extrapolated)))
        throw Error(ErrorKind::extrapolation_diverged, "residue extrapolation did not settle");
    return {extrapolated, exact, std::abs(extrapolated - exact)};
}

// ---------------------------------------------------------------------------
// Fourier table

namespace {

/// Image of a x_+^s + b x_-^s.
HomDistribution fourier_power(HalfInteger s, Complex a, Complex b) {
    HomDistribution out;
    const HalfInteger image = -s - 1;
    if (!s.is_integer()) {
        const double g = gamma_real(s.value() + 1.0);
        const Complex ip = half_turn_phase(s), im = std::conj(ip);
        const Complex I(0.0, 1.0);
        // F(x_+^s) = i G (e^{i pi s/2} xi_-^{-s-1} - e^{-i pi s/2} xi_+^{-s-1}); x_- mirrors it.
        const Complex to_minus = I * g * (a * ip - b * im);
        const Complex to_plus = I * g * (b * ip - a * im);
        out += HomDistribution::power(Side::minus, image, to_minus);
        out += HomDistribution::power(Side::plus, image, to_plus);
        return out;
    }
    const std::int64_t n = s.as_integer();
    const Complex even = 0.5 * (a + b), odd = 0.5 * (a - b);  // |x|^n and sign|x|^n parts
    if (n >= 0) {
        const double nf = factorial(static_cast<int>(n));
        const Complex phase = half_turn_phase(s);  // cos + i sin of n pi/2
        if (even != Complex(0.0)) {
            if (n % 2 == 0)
                out += HomDistribution::delta(static_cast<int>(n), 2.0 * kPi * i_pow(n) * even);
            else
                out += HomDistribution::abs_power(image, -2.0 * phase.imag() * nf * even);
        }
        if (odd != Complex(0.0)) {
            if (n % 2 != 0)
                out += HomDistribution::delta(static_cast<int>(n), 2.0 * kPi * i_pow(n) * odd);
            else
                out += HomDistribution::sign_power(image, Complex(0.0, -2.0 * phase.real() * nf) * odd);
        }
        return out;
    }
    const std::int64_t k = -n;
    const Complex convention = (k % 2 == 0) ? even : odd;
    const Complex other = (k % 2 == 0) ? odd : even;
    if (std::abs(other) > 1e-12 * std::abs(convention) + 1e-300)
        throw Error(ErrorKind::table_pole, "x_+-^" + s.to_string() + " outside the x^s combination");
    const Complex phase = half_turn_phase(s);
    const double g = gamma_real(static_cast<double>(k));
    if (k % 2 == 0)
        out += HomDistribution::abs_power(image, kPi / (phase.real() * g) * convention);
    else
        out += HomDistribution::sign_power(image, Complex(0.0, kPi / (phase.imag() * g)) * convention);
    return out;
}

}  // namespace

HomDistribution fourier(const HomDistribution& d) {
    HomDistribution out;
    std::map<std::int64_t, std::pair<Complex, Complex>> groups;
    for (const auto& t : d.power_terms()) {
        auto& g = groups[t.exponent.twice()];
        (t.side == Side::plus ? g.first : g.second) += t.coeff;
    }
    for (const auto& [twice, ab] : groups) out += fourier_power(HalfInteger::from_twice(twice), ab.first, ab.second);
    for (const auto& t : d.delta_terms()) out += HomDistribution::x_power(t.order, t.coeff * i_pow(t.order));
    return out;
}

}  // namespace weylscope
