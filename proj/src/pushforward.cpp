#include "weylscope/pushforward.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "weylscope/error.hpp"
#include "weylscope/parallel.hpp"
#include "weylscope/quadrature.hpp"

namespace weylscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRowsPerChunk = 16;

double patch_weight(const ScalarFieldOnDomain& f, int p, ChartPoint u) { return f.weight ? f.weight(p, u) : 1.0; }

int vertex_count(const DomainPatch& patch, int axis, int cells) {
    if (patch.dim == 1 && axis == 1) return 1;
    return patch.periodic[axis] ? cells : cells + 1;
}

double max_extent(const std::vector<DomainPatch>& patches) {
    double e = 0.0;
    for (const auto& p : patches)
        for (int a = 0; a < p.dim; ++a) e = std::max(e, p.hi[a] - p.lo[a]);
    return e;
}

void validate_field(const ScalarFieldOnDomain& f) {
    if (f.patches.empty() || !f.value || !f.gradient)
        throw Error(ErrorKind::validation_error, "scalar field needs patches, a value oracle and a gradient oracle");
    constexpr std::array<ChartPoint, 5> probes{{{0.23, 0.37}, {0.61, 0.29}, {0.41, 0.73}, {0.83, 0.66}, {0.5, 0.5}}};
    for (int p = 0; p < static_cast<int>(f.patches.size()); ++p) {
        const auto& patch = f.patches[p];
        if (patch.dim != 1 && patch.dim != 2)
            throw Error(ErrorKind::validation_error, "patch dimension must be 1 or 2");
        for (const auto& frac : probes) {
            ChartPoint u{};
            for (int a = 0; a < 2; ++a) u[a] = patch.lo[a] + frac[a] * (patch.hi[a] - patch.lo[a]);
            if (patch.dim == 1) u[1] = patch.lo[1];
            const ChartPoint g = f.gradient(p, u);
            const double s0 = f.value(p, u);
            for (int a = 0; a < patch.dim; ++a) {
                const double h = 1e-5 * (patch.hi[a] - patch.lo[a]);
                ChartPoint up = u, dn = u;
                up[a] += h;
                dn[a] -= h;
                const double fd = (f.value(p, up) - f.value(p, dn)) / (2 * h);
                const double tol = 1e-4 * std::max(std::abs(g[a]), std::abs(fd)) + 1e-6 * (1 + std::abs(s0)) / h * 1e-3;
                if (!(std::abs(fd - g[a]) <= tol)) {
                    std::ostringstream msg;
                    msg << "gradient oracle disagrees with finite differences on patch " << p << " (axis " << a
                        << ": " << g[a] << " vs " << fd << ")";
                    throw Error(ErrorKind::validation_error, msg.str());
                }
            }
        }
        if (!f.transition) continue;
        for (int i = 1; i <= 6; ++i)
            for (int j = 1; j <= 6; ++j) {
                ChartPoint u{patch.lo[0] + (patch.hi[0] - patch.lo[0]) * i / 7.0,
                             patch.lo[1] + (patch.hi[1] - patch.lo[1]) * j / 7.0};
                if (patch_weight(f, p, u) <= 0.0) continue;
                const auto other = f.transition(p, u);
                if (!other) continue;
                const double a = f.value(p, u);
                const double b = f.value(other->first, other->second);
                if (std::abs(a - b) > 1e-8 * (1 + std::abs(a)))
                    throw Error(ErrorKind::chart_seam, "patches " + std::to_string(p) + " and " +
                                                           std::to_string(other->first) + " disagree on the overlap");
            }
    }
}

std::vector<double> distances_from_start(double extent, double step, int levels) {
    std::vector<double> d;
    for (int j = levels; j >= 1; --j) {
        const double x = std::ldexp(step, -j);
        if (x < 0.5 * extent) d.push_back(x);
    }
    for (int k = 1; k * step < extent - 0.5 * step; ++k) d.push_back(k * step);
    for (int j = 1; j <= levels; ++j) {
        const double x = extent - std::ldexp(step, -j);
        if (x > (d.empty() ? 0.0 : d.back()) + 1e-12 * extent) d.push_back(x);
    }
    d.push_back(extent);
    return d;
}

std::vector<double> build_edges(double lo, double hi, const GridConfig& c) {
    const double step = (hi - lo) / c.t_samples;
    std::vector<double> e;
    if (lo < 0.0 && hi > 0.0) {
        const auto neg = distances_from_start(-lo, step, c.refine_levels);
        for (auto it = neg.rbegin(); it != neg.rend(); ++it) e.push_back(-*it);
        e.push_back(0.0);
        for (double x : distances_from_start(hi, step, c.refine_levels)) e.push_back(x);
    } else {
        e.push_back(lo);
        for (double x : distances_from_start(hi - lo, step, c.refine_levels)) e.push_back(lo + x);
        e.back() = hi;
    }
    return e;
}

struct Accumulator {
    std::vector<Complex> mass;
    std::vector<Complex> node;
    double margin = kInf;
};

class Binner {
public:
    explicit Binner(const std::vector<double>& edges) : edges_(edges) {}

    std::size_t bin_of(double t) const {
        const auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
        const auto idx = static_cast<std::ptrdiff_t>(it - edges_.begin()) - 1;
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(nbins()) - 1));
    }
    std::size_t nbins() const { return edges_.size() - 1; }

    // Deposits a piece with cumulative mass `cum(t)` and density `dens(t)` on [s0, s2].
    template <class Cum, class Dens>
    void deposit(double s0, double s2, Cum&& cum, Dens&& dens, Accumulator& acc) const {
        // Node k sits at edges_[k+1]. A node on an end of [s0, s2] gets half the
        // one-sided density, i.e. the mean of both limits once neighbors add theirs.
        std::size_t b = bin_of(s0);
        if (edges_[b] == s0 && b > 0) acc.node[b - 1] += 0.5 * dens(s0);
        Complex below = 0.0;
        for (; b < nbins(); ++b) {
            const double top = std::min(edges_[b + 1], s2);
            const Complex upto = top >= s2 ? cum(s2) : cum(top);
            acc.mass[b] += upto - below;
            below = upto;
            if (edges_[b + 1] > s2) break;
            if (edges_[b + 1] == s2) {
                acc.node[b] += 0.5 * dens(s2);
                break;
            }
            if (edges_[b + 1] > s0) acc.node[b] += dens(edges_[b + 1]);
        }
    }

private:
    const std::vector<double>& edges_;
};

// Piecewise-linear sigma and density on a triangle with parameter area `area`.
void add_triangle(std::array<double, 3> s, std::array<Complex, 3> f, double area, const Binner& binner,
                  Accumulator& acc) {
    std::array<int, 3> ord{0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return s[a] < s[b]; });
    const double s0 = s[ord[0]], s1 = s[ord[1]], s2 = s[ord[2]];
    const Complex f0 = f[ord[0]], f1 = f[ord[1]], f2 = f[ord[2]];
    if (!(s2 > s0)) {
        acc.mass[binner.bin_of(s0)] += area * (f0 + f1 + f2) / 3.0;
        return;
    }
    const double span = s2 - s0;
    const double lower = s1 - s0, upper = s2 - s1;
    const double k1 = lower > 0 ? 2 * area / (span * lower) : 0.0;
    const double k2 = upper > 0 ? 2 * area / (span * upper) : 0.0;
    const Complex g_lo = lower > 0 ? ((f1 - f0) / lower + (f2 - f0) / span) : Complex(0.0);
    const Complex g_hi = upper > 0 ? ((f1 - f2) / upper + (f0 - f2) / span) : Complex(0.0);
    auto p1 = [&](double tau) { return k1 * tau * tau * (f0 / 2.0 + g_lo * tau / 6.0); };
    auto p2 = [&](double tau) { return k2 * tau * tau * (f2 / 2.0 + g_hi * tau / 6.0); };
    const Complex total = p1(lower) + p2(upper);
    auto cum = [&](double t) -> Complex {
        if (t <= s0) return 0.0;
        if (t <= s1) return p1(t - s0);
        if (t < s2) return total - p2(s2 - t);
        return total;
    };
    auto dens = [&](double t) -> Complex {
        if (t <= s1 && lower > 0) {
            const double tau = t - s0;
            return k1 * tau * (f0 + g_lo * tau / 2.0);
        }
        const double tau = s2 - t;
        return k2 * tau * (f2 + g_hi * tau / 2.0);
    };
    binner.deposit(s0, s2, cum, dens, acc);
}

// `level_density(t, lam)` returns h's contribution at level t given the linear
// guess lam for the crossing position along the original segment direction.
template <class LevelDensity>
void add_segment(double sa, double sb, Complex fa, Complex fb, double length, const Binner& binner,
                 Accumulator& acc, LevelDensity&& level_density) {
    const double orig_a = sa, orig_b = sb;
    if (sb < sa) {
        std::swap(sa, sb);
        std::swap(fa, fb);
    }
    if (!(sb > sa)) {
        acc.mass[binner.bin_of(sa)] += length * (fa + fb) / 2.0;
        return;
    }
    const double span = sb - sa;
    const double k = length / span;
    const Complex slope = (fb - fa) / span;
    auto cum = [&](double t) -> Complex {
        const double tau = std::clamp(t, sa, sb) - sa;
        return k * tau * (fa + slope * tau / 2.0);
    };
    auto dens = [&](double t) -> Complex { return level_density(t, (t - orig_a) / (orig_b - orig_a)); };
    binner.deposit(sa, sb, cum, dens, acc);
}

struct PatchSamples {
    int nu = 0, nv = 0;  // vertex counts
    std::vector<FieldSample> v;
    const FieldSample& at(int i, int j) const { return v[static_cast<std::size_t>((j % nv) * nu + (i % nu))]; }
};

PatchSamples sample_patch(const ScalarFieldOnDomain& field, const JointSampler& sampler, int p, int cells) {
    const auto& patch = field.patches[p];
    PatchSamples out;
    out.nu = vertex_count(patch, 0, cells);
    out.nv = vertex_count(patch, 1, cells);
    out.v.resize(static_cast<std::size_t>(out.nu) * out.nv);
    const double du = (patch.hi[0] - patch.lo[0]) / cells;
    const double dv = patch.dim == 2 ? (patch.hi[1] - patch.lo[1]) / cells : 0.0;
    const std::size_t chunks = (out.nv + kRowsPerChunk - 1) / kRowsPerChunk;
    parallel_for(chunks, [&](std::size_t c) {
        const int j_end = std::min<int>(out.nv, static_cast<int>(c + 1) * kRowsPerChunk);
        for (int j = static_cast<int>(c) * kRowsPerChunk; j < j_end; ++j)
            for (int i = 0; i < out.nu; ++i) {
                const ChartPoint u{patch.lo[0] + i * du, patch.lo[1] + j * dv};
                FieldSample s = sampler(p, u);
                const double w = patch_weight(field, p, u);
                s.density = w == 0.0 ? Complex(0.0) : s.density * w;
                if (!std::isfinite(s.sigma) || !std::isfinite(s.density.real()) || !std::isfinite(s.density.imag()))
                    throw Error(ErrorKind::degenerate_field, "non-finite sample on patch " + std::to_string(p));
                out.v[static_cast<std::size_t>(j) * out.nu + i] = s;
            }
    });
    return out;
}

// Zero crossing along a grid edge: update the margin from the gradient oracle.
void visit_crossing(const ScalarFieldOnDomain& field, int p, ChartPoint a, ChartPoint b, double sa, double sb,
                    double& margin) {
    if (!((sa < 0 && sb > 0) || (sa > 0 && sb < 0) || sa == 0.0)) return;
    const double lam = sa == 0.0 ? 0.0 : sa / (sa - sb);
    const ChartPoint u{a[0] + lam * (b[0] - a[0]), a[1] + lam * (b[1] - a[1])};
    if (patch_weight(field, p, u) <= 0.0) return;
    const ChartPoint g = field.gradient(p, u);
    const double norm = field.patches[p].dim == 1 ? std::abs(g[0]) : std::hypot(g[0], g[1]);
    margin = std::min(margin, norm);
}

Accumulator accumulate_patch(const ScalarFieldOnDomain& field, const JointSampler& sampler, int p,
                             const PatchSamples& s, int cells, const std::vector<double>& edges) {
    const auto& patch = field.patches[p];
    const Binner binner(edges);
    const std::size_t nb = edges.size() - 1;
    const double du = (patch.hi[0] - patch.lo[0]) / cells;
    auto make = [&] {
        Accumulator a;
        a.mass.assign(nb, 0.0);
        a.node.assign(nb, 0.0);
        return a;
    };
    if (patch.dim == 1) {
        Accumulator acc = make();
        const double v = patch.lo[1];
        for (int i = 0; i < cells; ++i) {
            const auto& a = s.at(i, 0);
            const auto& b = s.at(i + 1, 0);
            const double x0 = patch.lo[0] + i * du;
            // Crossings in 1D are located on the field itself rather than its chord.
            auto level_density = [&](double t, double lam) -> Complex {
                double x = x0 + std::clamp(lam, 0.0, 1.0) * du;
                for (int it = 0; it < 4; ++it) {
                    const double g = field.gradient(p, {x, v})[0];
                    if (g == 0.0) break;
                    x = std::clamp(x - (field.value(p, {x, v}) - t) / g, x0, x0 + du);
                }
                const double g = std::abs(field.gradient(p, {x, v})[0]);
                if (g == 0.0) return 0.0;
                const Complex f = sampler(p, {x, v}).density * patch_weight(field, p, {x, v});
                return f / g;
            };
            add_segment(a.sigma, b.sigma, a.density, b.density, du, binner, acc, level_density);
            visit_crossing(field, p, {patch.lo[0] + i * du, v}, {patch.lo[0] + (i + 1) * du, v}, a.sigma, b.sigma,
                           acc.margin);
        }
        return acc;
    }
    const double dv = (patch.hi[1] - patch.lo[1]) / cells;
    const double quarter = du * dv / 4.0;
    const std::size_t chunks = (cells + kRowsPerChunk - 1) / kRowsPerChunk;
    std::vector<Accumulator> parts(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        Accumulator acc = make();
        const int j_end = std::min<int>(cells, static_cast<int>(c + 1) * kRowsPerChunk);
        for (int j = static_cast<int>(c) * kRowsPerChunk; j < j_end; ++j) {
            const double v0 = patch.lo[1] + j * dv;
            for (int i = 0; i < cells; ++i) {
                const std::array<const FieldSample*, 4> q{&s.at(i, j), &s.at(i + 1, j), &s.at(i + 1, j + 1),
                                                          &s.at(i, j + 1)};
                // The center carries the bilinear value, which also fixes saddle cells.
                double sc = 0.0;
                Complex fc = 0.0;
                for (const auto* x : q) {
                    sc += x->sigma;
                    fc += x->density;
                }
                sc /= 4.0;
                fc /= 4.0;
                for (int k = 0; k < 4; ++k) {
                    const auto* a = q[k];
                    const auto* b = q[(k + 1) % 4];
                    add_triangle({a->sigma, b->sigma, sc}, {a->density, b->density, fc}, quarter, binner, acc);
                }
                const double u0 = patch.lo[0] + i * du;
                visit_crossing(field, p, {u0, v0}, {u0 + du, v0}, q[0]->sigma, q[1]->sigma, acc.margin);
                visit_crossing(field, p, {u0, v0}, {u0, v0 + dv}, q[0]->sigma, q[3]->sigma, acc.margin);
            }
        }
        parts[c] = std::move(acc);
    });
    Accumulator total = make();
    for (const auto& part : parts) {
        for (std::size_t b = 0; b < nb; ++b) {
            total.mass[b] += part.mass[b];
            total.node[b] += part.node[b];
        }
        total.margin = std::min(total.margin, part.margin);
    }
    return total;
}

double power_integral(double p, double a, double b) {
    if (a == 0.0) return std::pow(b, p + 1) / (p + 1);
    const double r = std::log1p((b - a) / a);
    if (p == -1.0) return r;
    return std::pow(a, p + 1) * std::expm1((p + 1) * r) / (p + 1);
}

// Bins mapped to the positive half-line: [a, b] with mean density and slope.
struct HalfLineBin {
    double a, b;
    Complex density, slope;
};

std::vector<HalfLineBin> half_line_bins(const PushforwardProfile& h, bool reflect, double from) {
    const auto& e = h.edges();
    const auto& m = h.bin_masses();
    const std::size_t nb = m.size();
    std::vector<double> mid(nb);
    std::vector<Complex> dens(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        mid[i] = 0.5 * (e[i] + e[i + 1]);
        dens[i] = m[i] / (e[i + 1] - e[i]);
    }
    std::vector<HalfLineBin> out;
    for (std::size_t i = 0; i < nb; ++i) {
        double a = e[i], b = e[i + 1];
        if (reflect) std::tie(a, b) = std::pair{-b, -a};
        if (a < from - 1e-15 * std::abs(from) || b <= 0.0) continue;
        Complex slope = 0.0;
        if (nb > 1) {
            const std::size_t lo = i == 0 ? 0 : i - 1;
            const std::size_t hi = i + 1 == nb ? nb - 1 : i + 1;
            slope = (dens[hi] - dens[lo]) / (mid[hi] - mid[lo]);
        }
        out.push_back({std::max(a, 0.0), b, dens[i], reflect ? -slope : slope});
    }
    return out;
}

Complex integrate_bins(double s, const std::vector<HalfLineBin>& bins) {
    NeumaierSum<Complex> sum;
    for (const auto& bin : bins) {
        const double mid = 0.5 * (bin.a + bin.b);
        sum += (bin.density - bin.slope * mid) * power_integral(s, bin.a, bin.b) +
               bin.slope * power_integral(s + 1, bin.a, bin.b);
    }
    return sum.value();
}

int subtraction_depth(double s) { return static_cast<int>(std::ceil(-s - 1 - 1e-12)); }

enum class ZeroPlacement { outside, boundary, interior };

ZeroPlacement zero_placement(const PushforwardProfile& h) {
    if (h.t_min() < 0.0 && h.t_max() > 0.0) return ZeroPlacement::interior;
    if (h.t_min() == 0.0 || h.t_max() == 0.0) return ZeroPlacement::boundary;
    return ZeroPlacement::outside;
}

void require_singular_ok(const PushforwardProfile& h, int depth, const std::string& what) {
    if (!h.model().valid)
        throw Error(ErrorKind::profile_excludes_singularity, what + ": no usable local model around 0");
    if (!h.margin_ok()) {
        std::ostringstream msg;
        msg << what << ": regular-value margin " << h.margin() << " below threshold";
        throw Error(ErrorKind::degenerate_field, msg.str());
    }
    if (depth > static_cast<int>(h.model().coeffs.size()) - 1)
        throw Error(ErrorKind::smoothness_deficit, what + ": local model order too low");
}

struct Contribution {
    Complex value;
    double model_error;
};

Complex model_coeff(const PushforwardProfile& h, int i, bool reflect) {
    const auto& c = h.model().coeffs;
    if (i >= static_cast<int>(c.size())) return 0.0;
    return reflect && (i % 2) ? -c[i] : c[i];
}

// One-sided <x_+^s, h(+-x)> for non-integer or nonnegative s.
Contribution pair_side(const PushforwardProfile& h, double s, bool reflect) {
    const auto place = zero_placement(h);
    const bool present = reflect ? h.t_min() < 0.0 : h.t_max() > 0.0;
    if (!present) return {0.0, 0.0};
    if (s >= 0.0 || place == ZeroPlacement::outside) return {integrate_bins(s, half_line_bins(h, reflect, 0.0)), 0.0};
    if (place == ZeroPlacement::boundary) {
        if (s > -1.0) return {integrate_bins(s, half_line_bins(h, reflect, 0.0)), 0.0};
        throw Error(ErrorKind::profile_excludes_singularity, "profile ends at 0 where the power is not integrable");
    }
    require_singular_ok(h, subtraction_depth(s), "power x^" + std::to_string(s));
    const double delta = h.split();
    Complex value = integrate_bins(s, half_line_bins(h, reflect, delta));
    double bound = 0.0;
    for (std::size_t i = 0; i < h.model().coeffs.size(); ++i) {
        const double p = s + static_cast<double>(i) + 1;
        const double w = std::pow(delta, p) / p;
        value += model_coeff(h, static_cast<int>(i), reflect) * w;
        if (i == 0) bound = std::abs(w);
    }
    return {value, h.model().residual_rms * bound};
}

// a x_+^{-k} + b x_-^{-k}; only the x^{-k} combination is meaningful at 0.
Contribution pair_negative_integer(const PushforwardProfile& h, int k, Complex a, Complex b) {
    const double s = -k;
    const auto place = zero_placement(h);
    if (place == ZeroPlacement::outside) {
        Complex v = 0.0;
        if (h.t_max() > 0.0) v += a * integrate_bins(s, half_line_bins(h, false, 0.0));
        if (h.t_min() < 0.0) v += b * integrate_bins(s, half_line_bins(h, true, 0.0));
        return {v, 0.0};
    }
    if (place == ZeroPlacement::boundary)
        throw Error(ErrorKind::profile_excludes_singularity, "profile ends at 0 under a negative integer power");
    const double sign = (k - 1) % 2 ? -1.0 : 1.0;
    if (std::abs(a + sign * b) > 1e-12 * (std::abs(a) + std::abs(b)))
        throw Error(ErrorKind::pole_of_family, "x_+^{-k} and x_-^{-k} do not combine to x^{-k}");
    require_singular_ok(h, k - 1, "power x^-" + std::to_string(k));
    const double delta = h.split();
    Complex value = a * integrate_bins(s, half_line_bins(h, false, delta)) +
                    b * integrate_bins(s, half_line_bins(h, true, delta));
    double bound = 0.0;
    for (std::size_t i = 0; i < h.model().coeffs.size(); ++i) {
        const int p = static_cast<int>(i) - k + 1;
        if (p == 0) continue;
        const double w = std::pow(delta, p) / p;
        value += model_coeff(h, static_cast<int>(i), false) * (a + b * ((i % 2) ? -1.0 : 1.0)) * w;
        bound = std::max(bound, std::abs(w));
    }
    return {value, h.model().residual_rms * bound * (std::abs(a) + std::abs(b))};
}

Contribution pair_raw(const HomDistribution& d, const PushforwardProfile& h) {
    Complex value = 0.0;
    double model_error = 0.0;
    std::map<std::int64_t, std::pair<Complex, Complex>> integer_poles;
    for (const auto& term : d.power_terms()) {
        const HalfInteger s = term.exponent;
        if (s.is_integer() && s.as_integer() < 0) {
            auto& slot = integer_poles[s.as_integer()];
            (term.side == Side::plus ? slot.first : slot.second) += term.coeff;
            continue;
        }
        const auto c = pair_side(h, s.value(), term.side == Side::minus);
        value += term.coeff * c.value;
        model_error += std::abs(term.coeff) * c.model_error;
    }
    for (const auto& [s, ab] : integer_poles) {
        const auto c = pair_negative_integer(h, static_cast<int>(-s), ab.first, ab.second);
        value += c.value;
        model_error += c.model_error;
    }
    for (const auto& term : d.delta_terms()) {
        const auto place = zero_placement(h);
        if (place == ZeroPlacement::outside) continue;
        if (place == ZeroPlacement::boundary)
            throw Error(ErrorKind::profile_excludes_singularity, "delta term at the end of the profile");
        require_singular_ok(h, term.order, "delta of order " + std::to_string(term.order));
        const double fact = factorial(term.order);
        const double sign = term.order % 2 ? -1.0 : 1.0;
        value += term.coeff * sign * fact * h.model().coeffs[term.order];
        model_error += std::abs(term.coeff) * fact * h.model().residual_rms / std::pow(h.model().window, term.order);
    }
    return {value, model_error};
}

}  // namespace

PushforwardProfile::PushforwardProfile(std::vector<double> edges, std::vector<Complex> masses,
                                       std::vector<Complex> node_values, double margin, double field_scale,
                                       const GridConfig& config)
    : edges_(std::move(edges)),
      masses_(std::move(masses)),
      node_values_(std::move(node_values)),
      margin_(margin),
      field_scale_(field_scale),
      config_(config) {
    if (edges_.size() < 2 || masses_.size() + 1 != edges_.size() || node_values_.size() + 2 != edges_.size())
        throw Error(ErrorKind::validation_error, "inconsistent profile arrays");
    fit_model();
}

std::vector<double> PushforwardProfile::nodes() const { return {edges_.begin() + 1, edges_.end() - 1}; }

bool PushforwardProfile::margin_ok() const { return margin_ >= config_.margin_threshold * field_scale_; }

Complex PushforwardProfile::total_mass() const {
    NeumaierSum<Complex> s;
    for (const auto& m : masses_) s += m;
    return s.value();
}

void PushforwardProfile::fit_model() {
    model_ = LocalModel{};
    split_ = 0.0;
    if (!(t_min() < 0.0 && t_max() > 0.0)) return;
    const double window = std::min(config_.window_fraction * (t_max() - t_min()), 0.95 * std::min(-t_min(), t_max()));
    const double blend = config_.blend_fraction * window;
    const auto t = nodes();
    std::vector<std::size_t> use;
    int neg = 0, pos = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double a = std::abs(t[i]);
        if (a >= blend && a <= window) {
            use.push_back(i);
            (t[i] < 0 ? neg : pos)++;
        }
    }
    const int degree = config_.model_degree;
    if (neg < degree + 1 || pos < degree + 1) return;
    Eigen::MatrixXd a(use.size(), degree + 1);
    Eigen::MatrixXd rhs(use.size(), 2);
    for (std::size_t r = 0; r < use.size(); ++r) {
        const double x = t[use[r]] / window;
        double p = 1.0;
        for (int c = 0; c <= degree; ++c, p *= x) a(r, c) = p;
        rhs(r, 0) = node_values_[use[r]].real();
        rhs(r, 1) = node_values_[use[r]].imag();
    }
    const Eigen::MatrixXd sol = a.colPivHouseholderQr().solve(rhs);
    const Eigen::MatrixXd resid = a * sol - rhs;
    model_.valid = true;
    model_.window = window;
    model_.blend = blend;
    model_.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(use.size()));
    for (int c = 0; c <= degree; ++c)
        model_.coeffs.emplace_back(sol(c, 0) / std::pow(window, c), sol(c, 1) / std::pow(window, c));
    // The split point is the positive edge nearest to the blend radius; edges are symmetric about 0.
    double best = kInf;
    for (double e : edges_)
        if (e > 0 && std::abs(e - blend) < std::abs(best - blend)) best = e;
    split_ = best;
}

Complex PushforwardProfile::value(double t) const {
    if (model_.valid && std::abs(t) < model_.blend) {
        Complex v = 0.0;
        for (auto it = model_.coeffs.rbegin(); it != model_.coeffs.rend(); ++it) v = v * t + *it;
        return v;
    }
    const auto t_nodes = nodes();
    if (t_nodes.empty() || t < t_min() || t > t_max()) return 0.0;
    if (t <= t_nodes.front()) return node_values_.front();
    if (t >= t_nodes.back()) return node_values_.back();
    const auto it = std::upper_bound(t_nodes.begin(), t_nodes.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - t_nodes.begin());
    const double lam = (t - t_nodes[i - 1]) / (t_nodes[i] - t_nodes[i - 1]);
    return node_values_[i - 1] * (1 - lam) + node_values_[i] * lam;
}

PushforwardProfile PushforwardProfile::coarsened() const {
    const double keep = split_;
    // A bin may merge when it lies wholly outside [-keep, keep] on one side of 0.
    auto side = [&](std::size_t i) {
        if (edges_[i] >= keep && edges_[i + 1] > keep && edges_[i] >= 0.0) return 1;
        if (edges_[i + 1] <= -keep && edges_[i] < -keep && edges_[i + 1] <= 0.0) return -1;
        return 0;
    };
    const std::size_t nb = masses_.size();
    std::vector<double> e{edges_[0]};
    std::vector<Complex> m;
    std::vector<Complex> n;
    for (std::size_t i = 0; i < nb;) {
        const bool merge = i + 1 < nb && side(i) != 0 && side(i) == side(i + 1);
        m.push_back(merge ? masses_[i] + masses_[i + 1] : masses_[i]);
        i += merge ? 2 : 1;
        e.push_back(edges_[i]);
        if (i < nb) n.push_back(node_values_[i - 1]);
    }
    return PushforwardProfile(std::move(e), std::move(m), std::move(n), margin_, field_scale_, config_);
}

void PushforwardProfile::write_csv(std::ostream& out) const {
    out << "t,re,im\n" << std::setprecision(17);
    const auto t = nodes();
    for (std::size_t i = 0; i < t.size(); ++i)
        out << t[i] << ',' << node_values_[i].real() << ',' << node_values_[i].imag() << '\n';
}

PushforwardProfile coarea_profile(const ScalarFieldOnDomain& sigma, const JointSampler& sampler,
                                  const GridConfig& grid) {
    validate_field(sigma);
    if (grid.resolution < 2 || grid.t_samples < 4 || grid.model_degree < 0)
        throw Error(ErrorKind::validation_error, "grid resolution and t-samples too small");
    std::vector<PatchSamples> samples;
    double lo = kInf, hi = -kInf;
    for (int p = 0; p < static_cast<int>(sigma.patches.size()); ++p) {
        samples.push_back(sample_patch(sigma, sampler, p, grid.resolution));
        for (const auto& s : samples.back().v) {
            lo = std::min(lo, s.sigma);
            hi = std::max(hi, s.sigma);
        }
    }
    if (!(hi - lo > 1e-12 * (1 + std::max(std::abs(lo), std::abs(hi)))))
        throw Error(ErrorKind::degenerate_field, "scalar field is constant on the domain");
    const auto edges = build_edges(lo, hi, grid);
    const std::size_t nb = edges.size() - 1;
    std::vector<Complex> mass(nb, 0.0), node(nb, 0.0);
    double margin = kInf;
    for (int p = 0; p < static_cast<int>(sigma.patches.size()); ++p) {
        const auto acc = accumulate_patch(sigma, sampler, p, samples[p], grid.resolution, edges);
        for (std::size_t b = 0; b < nb; ++b) {
            mass[b] += acc.mass[b];
            node[b] += acc.node[b];
        }
        margin = std::min(margin, acc.margin);
    }
    node.pop_back();  // the last slot would be the t_max edge
    const double scale = (hi - lo) / max_extent(sigma.patches);
    return PushforwardProfile(edges, std::move(mass), std::move(node), margin, scale, grid);
}

PushforwardProfile coarea_profile(const ScalarFieldOnDomain& sigma, const DensityOnDomain& density,
                                  const GridConfig& grid) {
    if (!density.value) throw Error(ErrorKind::validation_error, "density needs a value oracle");
    if (!density.integrable) throw Error(ErrorKind::validation_error, "density is flagged as not integrable");
    return coarea_profile(
        sigma, [&](int p, ChartPoint u) { return FieldSample{sigma.value(p, u), density.value(p, u)}; }, grid);
}

Complex pair_profile(const HomDistribution& d, const PushforwardProfile& h) { return pair_raw(d, h).value; }

ProfilePairing pair_profile_with_error(const HomDistribution& d, const PushforwardProfile& h) {
    const auto fine = pair_raw(d, h);
    const auto coarse = pair_raw(d, h.coarsened());
    return {fine.value, std::abs(fine.value - coarse.value) + fine.model_error};
}

}  // namespace weylscope
