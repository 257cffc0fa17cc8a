#include "weylscope/verifysuite.hpp"

#include <cmath>
#include <memory>
#include <ostream>

#include "weylscope/error.hpp"
#include "weylscope/parallel.hpp"
#include "weylscope/quadrature.hpp"
#include "weylscope/specfun.hpp"

namespace weylscope {

namespace {

constexpr int kSmoothness = 8;

nlohmann::json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

void finish(IdentityCase& c, bool relative) {
    c.abs_error = std::abs(c.lhs - c.rhs);
    c.rel_error = std::abs(c.rhs) > 0 ? c.abs_error / std::abs(c.rhs) : c.abs_error;
    c.error = relative ? c.rel_error : c.abs_error;
    c.pass = c.error < c.tolerance;
}

// Partial derivatives d_s^k d_r^l phi for k, l <= order, built once.
class PartialTable {
public:
    PartialTable(const GaussianPolynomial2D& phi, int order) : order_(order) {
        table_.reserve(static_cast<std::size_t>((order + 1) * (order + 1)));
        GaussianPolynomial2D row = phi;
        for (int k = 0; k <= order; ++k) {
            GaussianPolynomial2D cell = row;
            for (int l = 0; l <= order; ++l) {
                table_.push_back(cell);
                if (l < order) cell = cell.partial(0, 1);
            }
            if (k < order) row = row.partial(1, 0);
        }
    }
    const GaussianPolynomial2D& at(int k, int l) const { return table_[static_cast<std::size_t>(k * (order_ + 1) + l)]; }

private:
    int order_;
    std::vector<GaussianPolynomial2D> table_;
};

TestFunction1D::Support schwartz_support(double radius) {
    TestFunction1D::Support s;
    s.schwartz = true;
    s.decay_radius = radius;
    return s;
}

// (pi_t)_* phi as a function of x: integral of phi over the line
// cos^2 t sigma + sin^2 t rho = x, divided by the gradient length. The
// integrand is a Gaussian along the line, so a fixed rule centered on its
// peak and spanning +-14 widths is accurate to rounding.
TestFunction1D line_pushforward(const GaussianPolynomial2D& phi, double t, double radius) {
    static const GaussLegendreRule rule = gauss_legendre(96);
    const double c2 = std::cos(t) * std::cos(t), s2 = std::sin(t) * std::sin(t);
    const double len = std::hypot(c2, s2);
    const std::array<double, 2> e{c2 / (len * len), s2 / (len * len)};  // pi_t(x e) = x
    const std::array<double, 2> dir{s2 / len, -c2 / len};
    // Derivatives in x are derivatives of phi along e.
    auto chain = std::make_shared<std::vector<GaussianPolynomial2D>>(1, phi);
    for (int j = 1; j <= kSmoothness; ++j) chain->push_back(chain->back().directional(e[0], e[1]));
    const auto& q = phi.quadratic();
    const double curv = q.a * dir[0] * dir[0] + 2 * q.b * dir[0] * dir[1] + q.c * dir[1] * dir[1];
    const double width = 1.0 / std::sqrt(curv);
    auto derivative = [chain, e, dir, len, q, curv, width](int j, double x) -> Complex {
        if (j > kSmoothness) throw Error(ErrorKind::insufficient_smoothness, "line pushforward derivative order");
        const double s0 = x * e[0], r0 = x * e[1];
        const double slope = q.a * s0 * dir[0] + q.b * (s0 * dir[1] + r0 * dir[0]) + q.c * r0 * dir[1] + q.d * dir[0] +
                             q.e * dir[1];
        const double center = -slope / curv, half_span = 14.0 * width;
        const auto& f = (*chain)[static_cast<std::size_t>(j)];
        double sum = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double s = center + half_span * rule.nodes[k];
            sum += rule.weights[k] * f(s0 + s * dir[0], r0 + s * dir[1]);
        }
        return sum * half_span / len;
    };
    return TestFunction1D([derivative](double x) { return derivative(0, x); }, derivative, schwartz_support(radius),
                          kSmoothness, 10.0);
}

// rho -> d_s^k phi(sigma, rho).
TestFunction1D slice(const PartialTable& partials, int k, double sigma, double radius) {
    auto derivative = [&partials, k, sigma](int l, double r) -> Complex { return partials.at(k, l)(sigma, r); };
    return TestFunction1D([derivative](double r) { return derivative(0, r); }, derivative, schwartz_support(radius),
                          kSmoothness, 10.0);
}

HalfInteger half(int twice) { return HalfInteger::from_twice(twice); }

}  // namespace

nlohmann::json IdentityCase::to_json() const {
    return {{"identity", identity}, {"params", params},       {"test_function", test_function},
            {"tolerance", tolerance}, {"lhs", complex_json(lhs)}, {"rhs", complex_json(rhs)},
            {"abs_error", abs_error}, {"rel_error", rel_error}, {"error", error},
            {"pass", pass}};
}

std::vector<TestFunction2D> default_test_functions_2d() {
    return {
        {"gauss", GaussianPolynomial2D({{{0, 0}, 1.0}}, {})},
        {"tilted",
         GaussianPolynomial2D({{{0, 0}, 1.0}, {{1, 0}, 0.5}, {{0, 1}, -0.3}, {{1, 1}, 0.2}, {{0, 2}, 0.1}},
                              {1.2, 0.2, 0.8, -0.3, 0.2})},
    };
}

IdentityCase verify_j_identity(int m, int a, int i, const TestFunction2D& f, const JIdentityConfig& cfg) {
    if (m < 0 || a < 0 || a > m) throw Error(ErrorKind::validation_error, "J identity needs 0 <= a <= m");
    IdentityCase out;
    out.identity = "j_identity";
    out.params = {{"m", m}, {"a", a}, {"i", i}};
    out.test_function = f.name;
    out.tolerance = cfg.tolerance;

    const PartialTable partials(f.phi, kSmoothness);
    const double radius = f.phi.decay_radius();

    // Left side: pushforward per t, pairing, then the t integral.
    const HomDistribution top = chi(i, half(-(m + 2)));
    auto profile_pairing = [&](double t) {
        const double w = std::pow(std::sin(t), a) * std::pow(std::cos(t), m - a);
        if (w == 0.0) return Complex(0.0);
        return w * regularized_pair(top, line_pushforward(f.phi, t, radius));
    };
    QuadOptions tq;
    tq.abs_tol = 1e-13;
    tq.rel_tol = cfg.t_rel_tol;
    const auto lhs = integrate(profile_pairing, 0.0, kPi / 2, tq);
    if (!lhs.converged) throw Error(ErrorKind::endpoint_quadrature, "t integral did not converge");
    out.lhs = lhs.value;

    // Right side: iterated pairing, rho inside.
    Complex rhs = 0.0;
    for (int j = 0; j < 2; ++j) {
        const HomDistribution inner = chi(j, half(-(a + 1)));
        const HomDistribution outer = chi(i + j, half(-(m - a + 1)));
        auto g = [&](int k, double sigma) { return regularized_pair(inner, slice(partials, k, sigma, radius)); };
        const TestFunction1D outer_fn([g](double s) { return g(0, s); }, g, schwartz_support(radius), kSmoothness, 10.0);
        rhs += sign_pow(static_cast<std::int64_t>(i + 1) * j) * regularized_pair(outer, outer_fn);
    }
    out.rhs = sine_integral_S(a, m - a) * rhs;
    finish(out, true);
    return out;
}

double chi_value(int i, HalfInteger s, double x) {
    if (x == 0.0) throw Error(ErrorKind::validation_error, "chi has no point value at 0");
    return std::pow(std::abs(x), s.value()) * chi_eval_pm1(i, s, x > 0 ? 1 : -1);
}

Complex j_pointwise(int m, int a, int i, double sigma, double rho) {
    // On the diagonal the argument of chi is constant.
    if (sigma == rho) return sine_integral_S(a, m - a) * chi_value(i, half(-(m + 2)), sigma);
    // sin^2 t = (x - sigma)/(rho - sigma), cos^2 t = (rho - x)/(rho - sigma),
    // dt = dx / (2 |rho - sigma| sin t cos t).
    const double d = rho - sigma;
    const PowerProductProfile w(1.0 / (2.0 * std::abs(d)),
                                {{-sigma / d, 1.0 / d, 0.5 * (a - 1)}, {rho / d, -1.0 / d, 0.5 * (m - a - 1)}},
                                std::min(sigma, rho), std::max(sigma, rho));
    return regularized_pair(chi(i, half(-(m + 2))), w.as_test_function());
}

IdentityCase verify_j_frozen(int m, int a, int i, double sigma, double tolerance) {
    IdentityCase out;
    out.identity = "j_frozen_rho";
    out.params = {{"m", m}, {"a", a}, {"i", i}, {"sigma", sigma}};
    out.test_function = "point";
    out.tolerance = tolerance;
    out.lhs = j_pointwise(m, a, i, sigma, 1.0);
    out.rhs = sine_integral_S(a, m - a) * chi_value(i, half(-(m + 1 - a)), sigma);
    finish(out, false);
    return out;
}

double weyl_constant(int n, int h) {
    if (h % 2 != 0) return 0.0;
    return 2.0 * gamma_real(0.5 * (h + 1)) * std::pow(kPi, 0.5 * (n - 1)) / gamma_real(0.5 * (n + h));
}

IdentityCase verify_weyl_lemma(int p, int q, int h, int i) {
    if (p < 1 || q < 0 || p + q < 2 || h < 0)
        throw Error(ErrorKind::validation_error, "Weyl lemma check needs p >= 1, q >= 0, p + q >= 2, h >= 0");
    IdentityCase out;
    out.identity = "weyl_lemma";
    out.params = {{"p", p}, {"q", q}, {"h", h}, {"i", i}};
    out.test_function = "y1^h";

    // int_{S^{p-1}} y_1^h by quadrature in the polar angle from e_1's equator.
    double moment;
    if (p == 1) {
        moment = 1.0 + sign_pow(h);
    } else {
        auto f = [&](double th) { return std::pow(std::sin(th), h) * std::pow(std::cos(th), p - 2); };
        moment = sphere_area(p - 2) * integrate(f, -kPi / 2, kPi / 2, QuadOptions{1e-16, 1e-14, 4000}).value;
    }
    const HalfInteger s = half(-(p + q + h));
    if (q == 0) {
        out.lhs = chi_eval_pm1(i, s, 1) * moment;
    } else if (moment == 0.0) {
        out.lhs = 0.0;
    } else {
        // Coarea over u = Q(y, y): the level set at r is a product of spheres.
        const PowerProductProfile w(0.25 * moment * sphere_area(q - 1),
                                    {{0.5, 0.5, 0.5 * (p + h - 2)}, {0.5, -0.5, 0.5 * (q - 2)}}, -1.0, 1.0);
        out.lhs = regularized_pair(chi(i, s), w.as_test_function());
    }
    const double kronecker = chi_eval_pm1(i, half(-q), -1);
    out.rhs = weyl_constant(p + q, h) * kronecker;
    const bool structural_zero = h % 2 != 0 || kronecker == 0.0;
    out.params["structural_zero"] = structural_zero;
    out.abs_error = std::abs(out.lhs - out.rhs);
    out.rel_error = std::abs(out.rhs) > 0 ? out.abs_error / std::abs(out.rhs) : out.abs_error;
    out.tolerance = structural_zero ? 1e-10 : 1e-6;
    out.error = structural_zero ? out.abs_error : out.abs_error / (1.0 + std::abs(out.rhs));
    out.pass = out.error < out.tolerance;
    return out;
}

std::vector<IdentityCase> run_table_suite() {
    std::vector<IdentityCase> cases;
    const GaussianPolynomial rich({1.0, -0.5, 0.7, 0.3}, 0.8);
    const GaussianPolynomial mixed({1.0, 0.5, Complex(0, 0.25)}, 0.5);
    const HalfInteger lattice[] = {half(-1), half(-3), half(-5), half(-7), half(-2), half(-4), half(-6)};

    const std::pair<FamilyKind, int> residues[] = {{FamilyKind::x_plus, -1},  {FamilyKind::x_plus, -2},
                                                   {FamilyKind::x_minus, -1}, {FamilyKind::x_minus, -3},
                                                   {FamilyKind::abs_power, -1}, {FamilyKind::sign_power, -2}};
    for (const auto& [kind, at] : residues) {
        const MeromorphicFamily fam{kind};
        const auto r = residue_numeric_check(fam, at, rich.as_test_function());
        IdentityCase c;
        c.identity = "residue";
        c.params = {{"family", fam.name()}, {"at", at}};
        c.test_function = "gauss_poly";
        c.tolerance = 1e-8;
        c.lhs = r.extrapolated;
        c.rhs = r.exact;
        finish(c, false);
        cases.push_back(std::move(c));
    }

    for (int i = 0; i < 2; ++i)
        for (int twice : {-1, -2, -3, -4}) {
            const HomDistribution d = chi(i, half(twice));
            IdentityCase c;
            c.identity = "fourier_duality";
            c.params = {{"i", i}, {"s", half(twice).to_string()}};
            c.test_function = "gauss_poly_complex";
            c.tolerance = 1e-8;
            c.lhs = regularized_pair(fourier(d), mixed.as_test_function());
            c.rhs = regularized_pair(d, mixed.fourier().as_test_function());
            finish(c, false);
            cases.push_back(std::move(c));
        }

    // chi_i^s(-1) against the limit of bump averages, by Richardson in width^2.
    for (int i = 0; i < 2; ++i)
        for (int twice : {-1, -2, -3, -4}) {
            const HalfInteger s = half(twice);
            const HomDistribution d = chi(i, s);
            constexpr int kLevels = 6;
            std::array<double, kLevels> h{}, v{};
            for (int k = 0; k < kLevels; ++k) {
                const double width = 0.4 / std::pow(2.0, k);
                const auto b = bump_test_function(-1.0, width);
                h[k] = width * width;
                v[k] = (regularized_pair(d, b) / regularized_pair(HomDistribution::x_power(0), b)).real();
            }
            for (int level = 1; level < kLevels; ++level)
                for (int k = kLevels - 1; k >= level; --k)
                    v[k] = (h[k - level] * v[k] - h[k] * v[k - 1]) / (h[k - level] - h[k]);
            IdentityCase c;
            c.identity = "chi_eval";
            c.params = {{"i", i}, {"s", s.to_string()}, {"at", -1}};
            c.test_function = "bump_limit";
            c.tolerance = 1e-8;
            c.lhs = v[kLevels - 1];
            c.rhs = chi_eval_pm1(i, s, -1);
            finish(c, false);
            cases.push_back(std::move(c));
        }

    for (int i = 0; i < 2; ++i)
        for (const HalfInteger s : lattice) {
            const HomDistribution d = chi(i, s);
            IdentityCase c;
            c.identity = "double_fourier";
            c.params = {{"i", i}, {"s", s.to_string()}};
            c.test_function = "coefficients";
            c.tolerance = 1e-12;
            c.lhs = fourier(fourier(d)).max_coeff_difference(d.reflected() * Complex(2 * kPi));
            c.rhs = 0.0;
            finish(c, false);
            cases.push_back(std::move(c));
        }
    return cases;
}

std::vector<IdentityCase> run_j_suite() {
    struct Job {
        int kind;  // 0 identity, 1 frozen, 2 sphere value
        int m, a, i;
        double sigma;
        std::size_t phi;
    };
    std::vector<Job> jobs;
    const auto phis = default_test_functions_2d();
    for (int m = 0; m <= 4; ++m)
        for (int a = 0; a <= m; ++a)
            for (int i = 0; i < 2; ++i)
                for (std::size_t f = 0; f < phis.size(); ++f) jobs.push_back({0, m, a, i, 0.0, f});
    for (int m = 0; m <= 4; ++m)
        for (int a = 0; a <= m; ++a)
            for (int i = 0; i < 2; ++i)
                for (double sigma : {-1.0, -0.5, 0.5, 1.0}) jobs.push_back({1, m, a, i, sigma, 0});
    jobs.push_back({2, 1, 0, 1, 1.0, 0});
    std::vector<IdentityCase> out(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t k) {
        const Job& j = jobs[k];
        if (j.kind == 0) {
            out[k] = verify_j_identity(j.m, j.a, j.i, phis[j.phi]);
        } else if (j.kind == 1) {
            out[k] = verify_j_frozen(j.m, j.a, j.i, j.sigma);
        } else {
            IdentityCase c;
            c.identity = "j_sphere_value";
            c.params = {{"m", 1}, {"a", 0}, {"i", 1}, {"sigma", 1.0}, {"rho", -1.0}};
            c.test_function = "point";
            c.tolerance = 1e-8;
            c.lhs = j_pointwise(1, 0, 1, 1.0, -1.0);
            c.rhs = 1.0;
            finish(c, false);
            out[k] = std::move(c);
        }
    });
    return out;
}

std::vector<IdentityCase> run_weyl_suite() {
    std::vector<std::array<int, 4>> params;
    for (int n = 2; n <= 6; ++n)
        for (int p = 1; p <= n; ++p)
            for (int h = 0; h <= 4; ++h)
                for (int i = 0; i < 2; ++i) params.push_back({p, n - p, h, i});
    std::vector<IdentityCase> out(params.size());
    parallel_for(params.size(), [&](std::size_t k) {
        const auto& [p, q, h, i] = params[k];
        out[k] = verify_weyl_lemma(p, q, h, i);
    });
    return out;
}

nlohmann::json cases_to_json(const std::vector<IdentityCase>& cases) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cases) arr.push_back(c.to_json());
    return arr;
}

void write_cases_csv(std::ostream& out, const std::vector<IdentityCase>& cases) {
    out << "identity,params,test_function,lhs_re,lhs_im,rhs_re,rhs_im,abs_error,rel_error,tolerance,pass\n";
    out.precision(17);
    for (const auto& c : cases) {
        // Quoted, with embedded quotes doubled.
        std::string params = "\"";
        for (char ch : c.params.dump()) {
            if (ch == '"') params += '"';
            params += ch;
        }
        params += '"';
        out << c.identity << ',' << params << ',' << c.test_function << ',' << c.lhs.real() << ',' << c.lhs.imag()
            << ',' << c.rhs.real() << ',' << c.rhs.imag() << ',' << c.abs_error << ',' << c.rel_error << ','
            << c.tolerance << ',' << (c.pass ? "true" : "false") << '\n';
    }
}

}  // namespace weylscope
