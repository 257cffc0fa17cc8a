#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace weylscope {

/// Compensated (Neumaier) accumulator for real or complex sums.
template <class T = double>
class NeumaierSum {
public:
    void add(T x) {
        if constexpr (std::is_same_v<T, double>) {
            add_real(sum_, comp_, x);
        } else {
            double sr = sum_.real(), si = sum_.imag(), cr = comp_.real(), ci = comp_.imag();
            add_real(sr, cr, x.real());
            add_real(si, ci, x.imag());
            sum_ = T(sr, si);
            comp_ = T(cr, ci);
        }
    }
    NeumaierSum& operator+=(T x) {
        add(x);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    static void add_real(double& sum, double& comp, double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    T sum_{};
    T comp_{};
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    int intervals = 0;
    bool converged = true;
};

struct QuadOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    .995657163025808080735527280689003, .973906528517171720077964012084452,
    .930157491355708226001207180059508, .865063366688984510732096688423493,
    .780817726586416897063717578345042, .679409568299024406234327365114874,
    .562757134668604683339000099272694, .433395394129247190799265943165784,
    .294392862701460198131126603103866, .148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    .011694638867371874278064396062192, .032558162307964727478818972459390,
    .054755896574351996031381300244580, .075039674810919952767043140916190,
    .093125454583697605535065465083366, .109387158802297641899210590325805,
    .123491976262065851077958109831074, .134709217311473325928054001771707,
    .142775938577060080797094273138717, .147739104901338491374841515972068,
    .149445554002916905664936468389821};
// Gauss weights for the 10-point rule; they pair with kXgk[1], [3], [5], [7], [9].
inline constexpr std::array<double, 5> kWg = {
    .066671344308688137593568809893332, .149451349150580593145776339657697,
    .219086362515982043995534934228163, .269266719309996355091226921569469,
    .295524224714752870173892994651338};

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
};

/// One Gauss-Kronrod 10/21 panel with the QUADPACK error heuristic.
template <class F, class T>
Segment<T> gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fc = f(c);
    T resk = fc * kWgk[10];
    T resg{};
    double resabs = std::abs(fc) * kWgk[10];
    std::array<T, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        resk += (f1[j] + f2[j]) * kWgk[j];
        resabs += (std::abs(f1[j]) + std::abs(f2[j])) * kWgk[j];
        if (j % 2 == 1) resg += (f1[j] + f2[j]) * kWg[j / 2];
    }
    const T mean = resk * 0.5;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    const double ah = std::abs(h);
    resasc *= ah;
    resabs *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk * h, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over consecutive breakpoints.
/// Works for real- or complex-valued integrands.
template <class F>
auto integrate(F&& f, std::span<const double> breakpoints, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
    using T = std::decay_t<decltype(f(0.0))>;
    using Seg = detail::Segment<T>;
    QuadResult<T> out;
    if (breakpoints.size() < 2) return out;
    auto cmp = [](const Seg& x, const Seg& y) { return x.error < y.error; };
    std::vector<Seg> heap;
    double total_err = 0.0;
    T total{};
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i]) continue;
        heap.push_back(detail::gk21<F, T>(f, breakpoints[i], breakpoints[i + 1]));
        total_err += heap.back().error;
        total += heap.back().value;
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
    while (!heap.empty() && total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= opt.max_intervals) {
            out.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Seg worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {  // interval exhausted at machine precision
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), cmp);
            out.converged = false;
            break;
        }
        Seg left = detail::gk21<F, T>(f, worst.a, mid);
        Seg right = detail::gk21<F, T>(f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        total += left.value + right.value - worst.value;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    // Deterministic final reduction: order segments by position.
    std::sort(heap.begin(), heap.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
    NeumaierSum<T> sum;
    double err = 0.0;
    for (const auto& s : heap) {
        sum += s.value;
        err += s.error;
    }
    out.value = sum.value();
    out.error = err;
    out.intervals = static_cast<int>(heap.size());
    return out;
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    const std::array<double, 2> bp = {a, b};
    return integrate(std::forward<F>(f), std::span<const double>(bp), opt);
}

/// Fixed n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

/// Fixed-rule integration over [a, b] split into `panels` equal panels.
template <class F>
auto integrate_fixed(F&& f, double a, double b, const GaussLegendreRule& rule, int panels = 1) {
    using T = std::decay_t<decltype(f(0.0))>;
    NeumaierSum<T> sum;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w, c = lo + 0.5 * w;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += f(c + 0.5 * w * rule.nodes[k]) * (0.5 * w * rule.weights[k]);
    }
    return sum.value();
}

/// Bisection root of a sign-changing function on [a, b].
template <class F>
double bisect_root(F&& f, double a, double b, double fa, double fb, int iterations = 200) {
    for (int it = 0; it < iterations; ++it) {
        const double m = 0.5 * (a + b);
        if (!(m > a && m < b)) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

/// Golden-section minimizer of a unimodal function on [a, b]; returns argmin.
template <class F>
double golden_min(F&& f, double a, double b, int iterations = 120) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < iterations && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

}  // namespace weylscope
