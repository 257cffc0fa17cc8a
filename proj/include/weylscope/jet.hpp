#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace weylscope {

namespace jet_detail {

constexpr int binom(int n, int k) {
    int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Monomials in V variables of total degree <= O, ordered by degree then
/// lexicographically (descending in the first variable).
template <int V, int O>
struct Layout {
    static constexpr int size = binom(V + O, O);
    using Exps = std::array<std::array<int, V>, size>;

    static constexpr Exps make_exps() {
        Exps out{};
        int idx = 0;
        for (int d = 0; d <= O; ++d) {
            std::array<int, V> e{};
            // Enumerate compositions of d into V parts.
            auto rec = [&](auto&& self, int var, int left) -> void {
                if (var == V - 1) {
                    e[var] = left;
                    out[idx++] = e;
                    return;
                }
                for (int k = left; k >= 0; --k) {
                    e[var] = k;
                    self(self, var + 1, left - k);
                }
            };
            rec(rec, 0, d);
        }
        return out;
    }
    static constexpr Exps exps = make_exps();

    static constexpr int degree(int i) {
        int d = 0;
        for (int v = 0; v < V; ++v) d += exps[i][v];
        return d;
    }
    static constexpr int index_of(const std::array<int, V>& e) {
        for (int i = 0; i < size; ++i) {
            bool eq = true;
            for (int v = 0; v < V; ++v) eq = eq && exps[i][v] == e[v];
            if (eq) return i;
        }
        return -1;
    }

    static constexpr int pair_count() {
        int n = 0;
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j)
                if (degree(i) + degree(j) <= O) ++n;
        return n;
    }
    struct Triple {
        int a, b, out;
    };
    static constexpr std::array<Triple, pair_count()> make_pairs() {
        std::array<Triple, pair_count()> t{};
        int n = 0;
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j)
                if (degree(i) + degree(j) <= O) {
                    std::array<int, V> e{};
                    for (int v = 0; v < V; ++v) e[v] = exps[i][v] + exps[j][v];
                    t[n++] = {i, j, index_of(e)};
                }
        return t;
    }
    static constexpr auto pairs = make_pairs();

    /// partial_map[v][i]: index of the monomial obtained by lowering variable v
    /// of monomial i (or -1).
    static constexpr std::array<std::array<int, size>, V> make_partial() {
        std::array<std::array<int, size>, V> m{};
        for (int v = 0; v < V; ++v)
            for (int i = 0; i < size; ++i) {
                if (exps[i][v] == 0) {
                    m[v][i] = -1;
                    continue;
                }
                auto e = exps[i];
                e[v] -= 1;
                m[v][i] = index_of(e);
            }
        return m;
    }
    static constexpr auto partial_map = make_partial();
};

}  // namespace jet_detail

/// Truncated multivariate Taylor polynomial: coefficients of u^alpha for
/// |alpha| <= Order around a base point. Arithmetic propagates derivatives
/// exactly up to the truncation order.
template <int V, int Order>
class Jet {
public:
    using L = jet_detail::Layout<V, Order>;
    static constexpr int size = L::size;
    static constexpr int vars = V;
    static constexpr int order = Order;

    constexpr Jet() = default;
    constexpr Jet(double c) { c_[0] = c; }  // NOLINT: implicit constants are intended

    /// Independent variable `v` with base value `x`.
    static Jet variable(int v, double x) {
        Jet j(x);
        if constexpr (Order >= 1) {
            std::array<int, V> e{};
            e[v] = 1;
            j.c_[L::index_of(e)] = 1.0;
        }
        return j;
    }

    double value() const { return c_[0]; }
    double coeff(int i) const { return c_[i]; }
    double& coeff(int i) { return c_[i]; }
    double coeff(const std::array<int, V>& e) const { return c_[L::index_of(e)]; }
    /// Mixed partial derivative d^alpha f at the base point.
    double derivative(const std::array<int, V>& alpha) const {
        double f = 1.0;
        for (int v = 0; v < V; ++v)
            for (int k = 2; k <= alpha[v]; ++k) f *= k;
        return f * coeff(alpha);
    }
    /// First partial d/du_v; the result is exact up to degree Order-1.
    Jet partial(int v) const {
        Jet r(0.0);
        for (int i = 0; i < size; ++i) {
            const int lower = L::partial_map[v][i];
            if (lower >= 0) r.c_[lower] += c_[i] * L::exps[i][v];
        }
        return r;
    }

    Jet operator-() const {
        Jet r;
        for (int i = 0; i < size; ++i) r.c_[i] = -c_[i];
        return r;
    }
    Jet& operator+=(const Jet& o) {
        for (int i = 0; i < size; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int i = 0; i < size; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(double s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(0.0);
        for (const auto& t : L::pairs) r.c_[t.out] += a.c_[t.a] * b.c_[t.b];
        return r;
    }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
    friend Jet operator+(Jet a, double s) {
        a.c_[0] += s;
        return a;
    }
    friend Jet operator+(double s, Jet a) { return a + s; }
    friend Jet operator-(Jet a, double s) {
        a.c_[0] -= s;
        return a;
    }
    friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

    /// f(a) given the derivatives f^(n)(a0), n = 0..Order, at the base value.
    static Jet compose(const Jet& a, const std::array<double, Order + 1>& derivs) {
        Jet d = a;
        d.c_[0] = 0.0;
        Jet r(derivs[0]);
        Jet power(1.0);
        double fact = 1.0;
        for (int n = 1; n <= Order; ++n) {
            power = power * d;
            fact *= n;
            r += power * (derivs[n] / fact);
        }
        return r;
    }

    friend Jet reciprocal(const Jet& a) { return pow(a, -1.0); }
    friend Jet pow(const Jet& a, double p) {
        std::array<double, Order + 1> d{};
        const double x = a.value();
        double coef = 1.0;
        for (int n = 0; n <= Order; ++n) {
            d[n] = coef * std::pow(x, p - n);
            coef *= (p - n);
        }
        return compose(a, d);
    }
    friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }
    friend Jet exp(const Jet& a) {
        std::array<double, Order + 1> d{};
        d.fill(std::exp(a.value()));
        return compose(a, d);
    }
    friend Jet log(const Jet& a) {
        std::array<double, Order + 1> d{};
        const double x = a.value();
        d[0] = std::log(x);
        double f = 1.0;
        for (int n = 1; n <= Order; ++n) {
            d[n] = ((n % 2 == 1) ? 1.0 : -1.0) * f / std::pow(x, n);
            f *= n;
        }
        return compose(a, d);
    }
    friend Jet sin(const Jet& a) { return trig(a, std::sin(a.value()), std::cos(a.value()), -1.0); }
    friend Jet cos(const Jet& a) { return trig(a, std::cos(a.value()), -std::sin(a.value()), -1.0); }
    friend Jet sinh(const Jet& a) { return trig(a, std::sinh(a.value()), std::cosh(a.value()), 1.0); }
    friend Jet cosh(const Jet& a) { return trig(a, std::cosh(a.value()), std::sinh(a.value()), 1.0); }

private:
    // f'' = sign * f, with f(a0) = f0 and f'(a0) = f1.
    static Jet trig(const Jet& a, double f0, double f1, double sign) {
        std::array<double, Order + 1> d{};
        for (int n = 0; n <= Order; ++n) {
            const double base = (n % 2 == 0) ? f0 : f1;
            d[n] = base * std::pow(sign, n / 2);
        }
        return compose(a, d);
    }

    std::array<double, size> c_{};
};

inline double value_of(double x) { return x; }
template <int V, int O>
double value_of(const Jet<V, O>& x) {
    return x.value();
}

}  // namespace weylscope
