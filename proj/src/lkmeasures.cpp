#include "weylscope/lkmeasures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "weylscope/error.hpp"
#include "weylscope/parallel.hpp"
#include "weylscope/quadrature.hpp"

namespace weylscope {

namespace {

constexpr int kRuleOrder = 8;

nlohmann::json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

// sum over the charts of int w_c(u) f(c, u) du, by tensor Gauss-Legendre panels.
template <class F>
Complex integrate_weighted(const ParametricManifold& m, int panels, F&& f) {
    static const GaussLegendreRule rule = gauss_legendre(kRuleOrder);
    Complex total = 0.0;
    for (int c = 0; c < static_cast<int>(m.charts().size()); ++c) {
        const auto& patch = m.charts()[c].patch;
        const int rows = m.dim() == 2 ? panels : 1;
        std::vector<Complex> row_sums(static_cast<std::size_t>(rows));
        parallel_for(row_sums.size(), [&](std::size_t row) {
            NeumaierSum<Complex> sum;
            const double hx = (patch.hi[0] - patch.lo[0]) / panels;
            const double hy = m.dim() == 2 ? (patch.hi[1] - patch.lo[1]) / panels : 0.0;
            const int ny = m.dim() == 2 ? kRuleOrder : 1;
            for (int px = 0; px < panels; ++px)
                for (int ix = 0; ix < kRuleOrder; ++ix)
                    for (int iy = 0; iy < ny; ++iy) {
                        ChartPoint u{patch.lo[0] + hx * (px + 0.5 * (1 + rule.nodes[ix])), patch.lo[1]};
                        double w = 0.5 * hx * rule.weights[ix];
                        if (m.dim() == 2) {
                            u[1] = patch.lo[1] + hy * (static_cast<double>(row) + 0.5 * (1 + rule.nodes[iy]));
                            w *= 0.5 * hy * rule.weights[iy];
                        }
                        const double pw = m.weight(c, u);
                        if (pw == 0.0) continue;
                        sum += f(c, u) * (w * pw);
                    }
            row_sums[row] = sum.value();
        });
        NeumaierSum<Complex> chart_sum;
        for (const auto& s : row_sums) chart_sum += s;
        total += chart_sum.value();
    }
    return total;
}

double nearest_integer_distance(double x) { return std::abs(x - std::round(x)); }

struct TargetName {
    std::string name;
    std::vector<double> numbers;
    std::string first_word;
};

TargetName split_name(const std::string& text) {
    TargetName out;
    const auto colon = text.find(':');
    out.name = text.substr(0, colon);
    if (colon == std::string::npos) return out;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    bool first = true;
    while (std::getline(rest, item, ',')) {
        try {
            out.numbers.push_back(std::stod(item));
        } catch (const std::exception&) {
            if (first) out.first_word = item;
        }
        first = false;
    }
    return out;
}

// Tangent signature, required to be constant and nondegenerate.
std::pair<int, int> tangent_signature(const ParametricManifold& m) {
    std::optional<std::pair<int, int>> found;
    for (int c = 0; c < static_cast<int>(m.charts().size()); ++c) {
        const auto& patch = m.charts()[c].patch;
        const int ny = m.dim() == 2 ? 9 : 1;
        for (int ix = 0; ix < 9; ++ix)
            for (int iy = 0; iy < ny; ++iy) {
                const ChartPoint u{patch.lo[0] + (patch.hi[0] - patch.lo[0]) * (ix + 0.5) / 9,
                                   patch.lo[1] + (patch.hi[1] - patch.lo[1]) * (iy + 0.5) / ny};
                if (m.weight(c, u) == 0.0) continue;
                const auto s = signature_at(m.induced_metric(c, u));
                if (s.kernel_dim > 0)
                    throw Error(ErrorKind::degenerate_point, m.name() + ": induced metric degenerates");
                const std::pair<int, int> here{s.positive, s.negative};
                if (found && *found != here)
                    throw Error(ErrorKind::degenerate_point, m.name() + ": induced metric changes signature");
                found = here;
            }
    }
    return *found;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Complex kappa_density(const MetricField& g, int k, ChartPoint u) {
    const int d = g.dim();
    if (k < 0 || k > d) throw Error(ErrorKind::validation_error, "kappa index out of range");
    if ((d - k) % 2 != 0) return 0.0;
    const MetricJet j = g.jet(u, 1);
    const auto sig = signature_at(j.g);
    if (sig.kernel_dim > 0) throw Error(ErrorKind::degenerate_point, "metric is degenerate at the sample point");
    const double vol = std::sqrt(std::abs(j.g.determinant()));
    if (k == d) return i_pow(sig.negative) * vol;
    // d = 2, k = 0: alternating sum of frame curvature components.
    const auto t = curvature_tensor(g, u);
    double sum = 0.0;
    for (int a = 0; a < 2; ++a) {
        const int b = 1 - a;
        sum += t.mixed[a][b][a][b] - t.mixed[a][b][b][a];
    }
    return i_pow(t.negative) * (sum / (8.0 * kPi) * vol);
}

Complex kappa_total(const ParametricManifold& m, int k, int panels) {
    return integrate_weighted(m, panels, [&](int c, ChartPoint u) { return kappa_density(InducedMetric(m, c), k, u); });
}

nlohmann::json LKReport::to_json() const {
    nlohmann::json j;
    j["target"] = target;
    j["k"] = k;
    j["value"] = complex_json(value);
    j["error_est"] = error_est;
    j["margin"] = std::isfinite(margin) ? nlohmann::json(margin) : nlohmann::json(nullptr);
    j["verdict"] = pass ? "pass" : "fail";
    j["grid"] = grid;
    j["seed"] = seed;
    if (!details.empty()) j["details"] = details;
    return j;
}

HomDistribution gauss_bonnet_distribution(int n, int q) {
    const double c = 2.0 * factorial(n) / (factorial(n + 1) * ball_volume(n + 1));
    const HalfInteger s = HalfInteger::from_twice(-(n + 1));
    return (chi(0, s) - chi(1, s) * Complex(0.0, 1.0)) * (i_pow(q) * c);
}

GaussBonnetResult gauss_bonnet_hypersurface(const ParametricManifold& m, const GaussBonnetConfig& cfg) {
    const auto& amb = m.ambient();
    if (m.dim() != 2 || amb.dim() != 3)
        throw Error(ErrorKind::validation_error, "Gauss-Bonnet pairing needs a surface in a 3-dimensional ambient");
    if (!m.closed()) throw Error(ErrorKind::validation_error, m.name() + " is not closed");
    const int n = 2;
    GaussBonnetResult out;
    if (amb.definite()) {
        // sigma is constant, so the pushforward is a point mass.
        const int sigma0 = amb.q() == 0 ? 1 : -1;
        const HalfInteger s = HalfInteger::from_twice(-(n + 1));
        const double c = 2.0 * factorial(n) / (factorial(n + 1) * ball_volume(n + 1));
        const Complex at =
            i_pow(amb.q()) * c * (chi_eval_pm1(0, s, sigma0) - Complex(0.0, 1.0) * chi_eval_pm1(1, s, sigma0));
        auto curvature_mass = [&](int panels) {
            return integrate_weighted(m, panels, [&](int ch, ChartPoint u) {
                const auto h = hypersurface_data(m, ch, u);
                return Complex(h.gauss_kronecker * h.area_density);
            });
        };
        const Complex fine = curvature_mass(cfg.panels);
        out.chi = fine * at;
        out.error_estimate = std::abs((fine - curvature_mass(std::max(1, cfg.panels / 2))) * at);
        out.margin = std::numeric_limits<double>::infinity();
    } else {
        const auto verdict = lc_transversal_hypersurface_check(m, cfg.scan);
        if (!verdict.regular) {
            std::ostringstream msg;
            msg << m.name() << ": light-cone contact is not transverse (margin " << verdict.min_margin << ")";
            throw Error(ErrorKind::transversality_failure, msg.str());
        }
        ScalarFieldOnDomain field;
        field.patches = m.patches();
        field.value = [&](int c, ChartPoint u) { return hypersurface_data(m, c, u).sigma; };
        field.gradient = [&](int c, ChartPoint u) { return hypersurface_data(m, c, u).sigma_gradient; };
        field.weight = [&](int c, ChartPoint u) { return m.weight(c, u); };
        field.transition = [&](int c, ChartPoint u) -> std::optional<std::pair<int, ChartPoint>> {
            const auto& t = m.charts()[c].transition;
            return t ? t(u) : std::nullopt;
        };
        const JointSampler sampler = [&](int c, ChartPoint u) {
            const auto h = hypersurface_data(m, c, m.jet(c, u, 2));
            return FieldSample{h.sigma, Complex(h.gauss_kronecker * h.area_density)};
        };
        auto profile = coarea_profile(field, sampler, cfg.grid);
        const auto paired = pair_profile_with_error(gauss_bonnet_distribution(n, amb.q()), profile);
        out.chi = paired.value;
        out.error_estimate = paired.error_estimate;
        out.margin = std::min(verdict.min_margin, profile.margin());
        out.profile = std::move(profile);
    }
    out.pass = nearest_integer_distance(out.chi.real()) < cfg.tol;
    return out;
}

LKReport GaussBonnetResult::report(const ParametricManifold& m, const GaussBonnetConfig& cfg) const {
    LKReport r;
    r.target = m.name();
    r.k = 0;
    r.value = chi;
    r.error_est = error_estimate;
    r.margin = margin;
    r.pass = pass;
    r.grid = cfg.grid.resolution;
    r.details["ambient"] = m.ambient().to_string();
    r.details["chi_re"] = chi.real();
    r.details["chi_im"] = chi.imag();
    r.details["t_samples"] = cfg.grid.t_samples;
    if (profile) {
        const auto& model = profile->model();
        r.details["profile"] = {{"t_min", profile->t_min()},
                                {"t_max", profile->t_max()},
                                {"bins", profile->bin_masses().size()},
                                {"split", profile->split()},
                                {"model_degree", model.coeffs.size() ? model.coeffs.size() - 1 : 0},
                                {"model_residual_rms", model.residual_rms},
                                {"total_mass", complex_json(profile->total_mass())}};
    }
    return r;
}

M11Result euler_intersection_m11(const PlanarDomain& domain, int resolution) {
    M11Result out;
    out.min_margin = std::numeric_limits<double>::infinity();
    ScanConfig scan;
    scan.resolution = resolution;
    for (int c = 0; c < static_cast<int>(domain.boundary.size()); ++c) {
        const auto& curve = domain.boundary[c];
        if (curve.ambient().p() != 1 || curve.ambient().q() != 1)
            throw Error(ErrorKind::validation_error, "intersection count needs the plane R^{1,1}");
        const auto verdict = lc_transversal_hypersurface_check(curve, scan);
        if (!verdict.regular) {
            std::ostringstream msg;
            msg << curve.name() << ": tangential light-cone contact (margin " << verdict.min_margin << ")";
            throw Error(ErrorKind::non_simple_zero, msg.str());
        }
        double extent = 0.0;
        for (int k = 0; k <= 16; ++k) {
            const auto& p = curve.charts()[0].patch;
            extent = std::max(extent, curve.point(0, {p.lo[0] + (p.hi[0] - p.lo[0]) * k / 16, 0.0}).norm());
        }
        std::vector<Vec> seen;
        for (const auto& hit : verdict.degenerate_points) {
            const auto j = curve.jet(hit.chart, hit.u, 2);
            const Vec x = j.point();
            if (std::any_of(seen.begin(), seen.end(), [&](const Vec& y) { return (x - y).norm() < 1e-7 * extent; }))
                continue;
            seen.push_back(x);
            // The normal turns with the tangent: sign of det(f', f'').
            const Vec& t = j.first(0);
            const Vec& a = j.second(0, 0);
            const double turn = t[0] * a[1] - t[1] * a[0];
            if (turn == 0.0) throw Error(ErrorKind::non_simple_zero, curve.name() + ": inflection at a lightlike normal");
            LightlikeCrossing lc;
            lc.curve = c;
            lc.s = hit.u[0];
            lc.point = x;
            lc.slope = hypersurface_data(curve, hit.chart, j).sigma_gradient[0];
            lc.sign = turn > 0 ? 1 : -1;
            out.signed_count += lc.sign;
            out.min_margin = std::min(out.min_margin, std::abs(lc.slope));
            out.crossings.push_back(std::move(lc));
        }
    }
    out.chi = out.signed_count / 4.0;
    return out;
}

LKReport M11Result::report(const PlanarDomain& d, int resolution) const {
    LKReport r;
    r.target = d.name;
    r.k = 0;
    r.value = chi;
    r.margin = min_margin;
    r.pass = signed_count % 4 == 0;
    r.grid = resolution;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : crossings)
        list.push_back({{"curve", c.curve}, {"s", c.s}, {"x", c.point[0]}, {"t", c.point[1]}, {"slope", c.slope},
                        {"sign", c.sign}});
    r.details["crossings"] = list;
    r.details["signed_count"] = signed_count;
    return r;
}

TubeFormulaResult tube_volume_formula(const TubeSpec& spec, int panels) {
    if (!(spec.radius > 0)) throw Error(ErrorKind::validation_error, "tube radius must be positive");
    const auto m = parse_manifold(spec.target, spec.ambient);
    const auto [tp, tq] = tangent_signature(m);
    const int p = spec.ambient.p(), q = spec.ambient.q();
    if (tp != p && tq != q)
        throw Error(ErrorKind::unbounded_tube, spec.target + ": the normal bundle is indefinite");
    const int n = spec.ambient.dim(), d = m.dim();
    TubeFormulaResult out;
    for (int k = 0; k <= d; ++k) out.lambdas.push_back(kappa_total(m, k, panels));
    Complex vol = 0.0;
    for (int nu = 0; d - 2 * nu >= 0; ++nu) {
        const int e = n - d + 2 * nu;
        vol += sign_pow(static_cast<std::int64_t>(nu) * (q - tq)) * ball_volume(e) * out.lambdas[d - 2 * nu] *
               std::pow(spec.radius, e);
    }
    vol *= i_pow(-tq);
    out.volume = vol.real();
    out.imag_residue = std::abs(vol.imag());
    return out;
}

MonteCarloEstimate tube_volume_oracle(const TubeSpec& spec, std::uint64_t samples, std::uint64_t seed) {
    const auto t = split_name(spec.target);
    const int n = spec.ambient.dim(), p = spec.ambient.p(), q = spec.ambient.q();
    const double r = spec.radius;
    if (!(r > 0)) throw Error(ErrorKind::validation_error, "tube radius must be positive");
    if (samples == 0) throw Error(ErrorKind::validation_error, "sample count must be positive");
    std::vector<double> lo(n), hi(n);
    std::function<bool(const std::vector<double>&)> inside;
    if (t.name == "segment" && (t.first_word == "timelike" || t.first_word == "spacelike") && t.numbers.size() == 1) {
        const int axis = t.first_word == "spacelike" ? 0 : p;
        const bool bounded = t.first_word == "spacelike" ? p == 1 : q == 1;
        if (!bounded) throw Error(ErrorKind::unbounded_tube, spec.target + ": the normal bundle is indefinite");
        const double len = t.numbers[0];
        for (int i = 0; i < n; ++i) {
            lo[i] = i == axis ? 0.0 : -r;
            hi[i] = i == axis ? len : r;
        }
        // The normal space is definite, so Q-length is Euclidean length there.
        inside = [=](const std::vector<double>& x) {
            if (x[axis] < 0.0 || x[axis] > len) return false;
            double w = 0.0;
            for (int i = 0; i < n; ++i)
                if (i != axis) w += x[i] * x[i];
            return w <= r * r;
        };
    } else if (t.name == "circle" && q == 0 && n >= 2 && t.numbers.size() == 1) {
        const double radius = t.numbers[0];
        if (!(r < radius)) throw Error(ErrorKind::validation_error, "tube radius must be below the circle radius");
        for (int i = 0; i < n; ++i) {
            lo[i] = i < 2 ? -radius - r : -r;
            hi[i] = -lo[i];
        }
        inside = [=](const std::vector<double>& x) {
            const double rho = std::hypot(x[0], x[1]) - radius;
            double w = rho * rho;
            for (int i = 2; i < n; ++i) w += x[i] * x[i];
            return w <= r * r;
        };
    } else if (t.name == "sphere" && q == 0 && n == 3 && t.numbers.size() == 1) {
        const double radius = t.numbers[0];
        if (!(r < radius)) throw Error(ErrorKind::validation_error, "tube radius must be below the sphere radius");
        for (int i = 0; i < n; ++i) {
            lo[i] = -radius - r;
            hi[i] = radius + r;
        }
        inside = [=](const std::vector<double>& x) {
            const double rho = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            return std::abs(rho - radius) <= r;
        };
    } else {
        throw Error(ErrorKind::no_membership_test, spec.target + " in R^{" + spec.ambient.to_string() + "}");
    }
    // Padding keeps the acceptance rate below one even when the tube fills
    // its tight box, so the standard error stays informative.
    double box = 1.0;
    for (int i = 0; i < n; ++i) {
        const double pad = 0.1 * (hi[i] - lo[i]);
        lo[i] -= pad;
        hi[i] += pad;
        box *= hi[i] - lo[i];
    }

    // Fixed shard layout, so the estimate depends only on (samples, seed).
    constexpr std::size_t kShards = 64;
    std::vector<std::uint64_t> hits(kShards, 0);
    parallel_for(kShards, [&](std::size_t shard) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(shard)));
        const std::uint64_t count = samples / kShards + (shard < samples % kShards ? 1 : 0);
        std::vector<double> x(n);
        std::uint64_t h = 0;
        for (std::uint64_t s = 0; s < count; ++s) {
            for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit_uniform(rng);
            h += inside(x) ? 1 : 0;
        }
        hits[shard] = h;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    const double frac = static_cast<double>(total) / static_cast<double>(samples);
    MonteCarloEstimate out;
    out.samples = samples;
    out.estimate = box * frac;
    out.stderr_ = box * std::sqrt(frac * (1 - frac) / static_cast<double>(samples));
    return out;
}

double scaling_check(const std::shared_ptr<const MetricField>& g, double lambda, int k, int samples_per_axis) {
    if (lambda == 0.0) throw Error(ErrorKind::validation_error, "scale factor must be nonzero");
    const ScaledMetric scaled(g, lambda);
    const auto dom = g->domain();
    const int ny = g->dim() == 2 ? samples_per_axis : 1;
    const double factor = std::pow(std::abs(lambda), 0.5 * k);
    double worst = 0.0;
    int used = 0;
    for (int ix = 0; ix < samples_per_axis; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const ChartPoint u{dom.lo[0] + (dom.hi[0] - dom.lo[0]) * (ix + 0.5) / samples_per_axis,
                               dom.lo[1] + (dom.hi[1] - dom.lo[1]) * (iy + 0.5) / ny};
            Complex base;
            try {
                base = kappa_density(*g, k, u);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::degenerate_point) continue;
                throw;
            }
            const Complex expected = lambda > 0 ? factor * base : factor * i_pow(k) * std::conj(base);
            const Complex got = kappa_density(scaled, k, u);
            const double diff = std::abs(got - expected);
            worst = std::max(worst, diff == 0.0 ? 0.0 : diff / std::max(std::abs(expected), 1e-12));
            ++used;
        }
    if (used == 0) throw Error(ErrorKind::degenerate_point, "no nondegenerate sample point");
    return worst;
}

}  // namespace weylscope
