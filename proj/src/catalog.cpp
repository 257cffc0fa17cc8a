#include "weylscope/catalog.hpp"

#include <cmath>
#include <sstream>

#include "weylscope/error.hpp"
#include "weylscope/specfun.hpp"

namespace weylscope {

namespace {

constexpr double kChartHalfWidth = 1.8;

struct ParsedName {
    std::string name;
    std::vector<std::string> args;
};

ParsedName split_target(const std::string& text) {
    ParsedName out;
    const auto colon = text.find(':');
    out.name = text.substr(0, colon);
    if (colon == std::string::npos) return out;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) out.args.push_back(item);
    return out;
}

double number(const ParsedName& p, std::size_t i, double fallback = std::nan("")) {
    if (i >= p.args.size()) {
        if (std::isnan(fallback))
            throw Error(ErrorKind::validation_error, p.name + ": missing argument " + std::to_string(i + 1));
        return fallback;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(p.args[i], &used);
        if (used != p.args[i].size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::validation_error, p.name + ": argument '" + p.args[i] + "' is not a number");
    }
}

void need_positive(const ParsedName& p, double v, const char* what) {
    if (!(v > 0)) throw Error(ErrorKind::validation_error, p.name + ": " + what + " must be positive");
}

void need_components(const ParsedName& p, const AmbientSpace& amb, int components) {
    if (amb.dim() < components)
        throw Error(ErrorKind::validation_error,
                    p.name + " needs an ambient of dimension at least " + std::to_string(components));
}

// Unit sphere through two stereographic charts, scaled per axis.
ParametricManifold ellipsoid(const std::string& name, const AmbientSpace& amb, double a, double b, double c) {
    const DomainPatch patch{2, {-kChartHalfWidth, -kChartHalfWidth}, {kChartHalfWidth, kChartHalfWidth}, {false, false}};
    std::vector<Chart> charts;
    for (int side = 0; side < 2; ++side) {
        const double pole = side == 0 ? 1.0 : -1.0;
        auto map = [=](const auto& u) {
            using T = std::decay_t<decltype(u[0])>;
            const T s = u[0] * u[0] + u[1] * u[1];
            const T inv = 1.0 / (1.0 + s);
            return std::array<T, 6>{a * 2.0 * u[0] * inv, b * 2.0 * u[1] * inv, c * pole * (1.0 - s) * inv, T(0.0),
                                    T(0.0), T(0.0)};
        };
        Chart ch = make_chart(patch, 3, amb.dim(), map);
        ch.orientation = pole;
        ch.weight = [pole](ChartPoint u) {
            const double s = u[0] * u[0] + u[1] * u[1];
            const double z = pole * (1 - s) / (1 + s);
            const double north = smooth_step(z + 0.5);
            return pole > 0 ? north : 1.0 - north;
        };
        ch.transition = [side](ChartPoint u) -> std::optional<std::pair<int, ChartPoint>> {
            const double s = u[0] * u[0] + u[1] * u[1];
            if (s == 0.0) return std::nullopt;
            const ChartPoint w{u[0] / s, u[1] / s};
            if (std::abs(w[0]) > kChartHalfWidth || std::abs(w[1]) > kChartHalfWidth) return std::nullopt;
            return std::pair{1 - side, w};
        };
        charts.push_back(std::move(ch));
    }
    return {amb, 2, name, std::move(charts), true};
}

ParametricManifold torus(const ParsedName& p, const AmbientSpace& amb) {
    const double big = number(p, 0), small = number(p, 1);
    need_positive(p, small, "tube radius");
    if (!(big > small)) throw Error(ErrorKind::validation_error, "torus: need R > r");
    const std::string axis = p.args.size() > 2 ? p.args[2] : "x";
    int shift = 0;  // cyclic shift placing the symmetry axis
    bool tilted = false;  // axis along (1, 0, 1), lightlike in R^{2,1}
    if (axis == "z")
        shift = 0;
    else if (axis == "null")
        tilted = true;
    else if (axis == "x")
        shift = 1;
    else if (axis == "y")
        shift = 2;
    else
        throw Error(ErrorKind::validation_error, "torus: axis must be x, y, z or null");
    auto map = [=](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        using std::cos;
        using std::sin;
        const T rho = big + small * cos(u[1]);
        const std::array<T, 3> base{rho * cos(u[0]), rho * sin(u[0]), small * sin(u[1])};
        std::array<T, 6> out{T(0.0), T(0.0), T(0.0), T(0.0), T(0.0), T(0.0)};
        for (int i = 0; i < 3; ++i) out[(i + shift) % 3] = base[i];
        if (tilted) {
            const double h = std::sqrt(0.5);
            out[0] = h * (base[0] + base[2]);
            out[2] = h * (base[2] - base[0]);
        }
        return out;
    };
    const DomainPatch patch{2, {0.0, 0.0}, {2 * kPi, 2 * kPi}, {true, true}};
    std::vector<Chart> charts{make_chart(patch, 3, amb.dim(), map)};
    return {amb, 2, "torus:" + p.args[0] + "," + p.args[1] + "," + axis, std::move(charts), true};
}

ParametricManifold pseudosphere(const ParsedName& p, const AmbientSpace& amb) {
    const double extent = number(p, 0, 1.5);
    need_positive(p, extent, "extent");
    auto map = [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        using std::cos;
        using std::cosh;
        using std::sin;
        using std::sinh;
        return std::array<T, 6>{cosh(u[1]) * cos(u[0]), cosh(u[1]) * sin(u[0]), sinh(u[1]), T(0.0), T(0.0), T(0.0)};
    };
    const DomainPatch patch{2, {0.0, -extent}, {2 * kPi, extent}, {true, false}};
    return {amb, 2, "pseudosphere", {make_chart(patch, 3, amb.dim(), map)}, false};
}

// A smooth odd function vanishing on [-w, w]: sign(x) (|x| - w)^4 outside.
template <class T>
T band_bump(const T& x, double w) {
    const double v = value_of(x);
    if (v > w) {
        const T d = x - w;
        return d * d * d * d;
    }
    if (v < -w) {
        const T d = x + w;
        return -(d * d * d * d);
    }
    return T(0.0);
}

ParametricManifold graph(const ParsedName& p, const AmbientSpace& amb) {
    const std::string id = p.args.empty() ? "" : p.args[0];
    auto build = [&](auto height, int components, double half) {
        auto map = [height](const auto& u) {
            using T = std::decay_t<decltype(u[0])>;
            const auto h = height(u);
            std::array<T, 6> out{u[0], u[1], T(0.0), T(0.0), T(0.0), T(0.0)};
            for (std::size_t i = 0; i < h.size(); ++i) out[2 + i] = h[i];
            return out;
        };
        need_components(p, amb, components);
        const DomainPatch patch{2, {-half, -half}, {half, half}, {false, false}};
        return ParametricManifold(amb, 2, "graph:" + id, {make_chart(patch, components, amb.dim(), map)}, false);
    };
    if (id == "saddle")
        return build([](const auto& u) { return std::array{u[0] * u[0] - u[1] * u[1]}; }, 3, 1.0);
    if (id == "paraboloid")
        return build([](const auto& u) { return std::array{0.5 * (u[0] * u[0] + u[1] * u[1])}; }, 3, 1.5);
    if (id == "cubic")
        return build([](const auto& u) { return std::array{u[0] + 0.25 * u[0] * u[0] * u[0] * u[0]}; }, 3, 1.5);
    if (id == "band")
        return build([](const auto& u) { return std::array{u[0] + 0.5 * band_bump(u[0], 0.2)}; }, 3, 1.0);
    if (id == "saddle4")
        return build([](const auto& u) { return std::array{u[0] * u[0] - u[1] * u[1], u[0] * u[1]}; }, 4, 1.0);
    throw Error(ErrorKind::unknown_target, "graph: unknown id '" + id + "'");
}

// Closed curve r(theta) (a cos, b sin) scaled by 1 + eps sin(k theta + phase),
// traversed counterclockwise or clockwise.
ParametricManifold planar_loop(const std::string& name, const AmbientSpace& amb, double a, double b, double eps,
                               double k, double phase, bool clockwise) {
    const double dir = clockwise ? -1.0 : 1.0;
    auto map = [=](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        using std::cos;
        using std::sin;
        const T th = dir * u[0];
        const T scale = 1.0 + eps * sin(k * th + phase);
        return std::array<T, 6>{a * scale * cos(th), b * scale * sin(th), T(0.0), T(0.0), T(0.0), T(0.0)};
    };
    const DomainPatch patch{1, {0.0, 0.0}, {2 * kPi, 0.0}, {true, false}};
    Chart ch = make_chart(patch, 2, amb.dim(), map);
    // The positive normal of a loop with the interior on its left points inward.
    ch.orientation = -1.0;
    return {amb, 1, name, {std::move(ch)}, true};
}

ParametricManifold segment(const ParsedName& p, const AmbientSpace& amb) {
    const std::string type = p.args.empty() ? "" : p.args[0];
    const double length = number(p, 1);
    need_positive(p, length, "length");
    Vec dir = Vec::Zero(amb.dim());
    if (type == "spacelike") {
        if (amb.p() < 1) throw Error(ErrorKind::validation_error, "segment: no spacelike direction in this ambient");
        dir[0] = 1.0;
    } else if (type == "timelike") {
        if (amb.q() < 1) throw Error(ErrorKind::validation_error, "segment: no timelike direction in this ambient");
        dir[amb.p()] = 1.0;
    } else if (type == "null") {
        if (amb.p() < 1 || amb.q() < 1) throw Error(ErrorKind::validation_error, "segment: no null direction");
        dir[0] = dir[amb.p()] = std::sqrt(0.5);
    } else {
        throw Error(ErrorKind::validation_error, "segment: type must be timelike, spacelike or null");
    }
    std::array<double, 6> d{};
    for (int i = 0; i < amb.dim(); ++i) d[i] = dir[i];
    auto map = [d](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        std::array<T, 6> out{};
        for (int i = 0; i < 6; ++i) out[i] = d[i] * u[0];
        return out;
    };
    const DomainPatch patch{1, {0.0, 0.0}, {length, 0.0}, {false, false}};
    return {amb, 1, "segment:" + type + "," + p.args[1], {make_chart(patch, amb.dim(), amb.dim(), map)}, false};
}

}  // namespace

double smooth_step(double t) {
    auto psi = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    const double a = psi(t), b = psi(1 - t);
    return a / (a + b);
}

std::shared_ptr<const MetricField> parse_metric(const std::string& text) {
    using J = Jet<2, 2>;
    using Components = std::array<J, 3>;
    const auto p = split_target(text);
    if (p.name != "metric" || p.args.size() != 1)
        throw Error(ErrorKind::unknown_target, "expected metric:linear|quadratic|minkowski|euclidean, got '" + text + "'");
    const DomainPatch square{2, {-1.0, -1.0}, {1.0, 1.0}, {false, false}};
    ComponentMetric::Components c;
    const std::string& kind = p.args[0];
    if (kind == "linear")
        c = [](const std::array<J, 2>& u) { return Components{J(1.0), J(0.0), u[1]}; };
    else if (kind == "quadratic")
        c = [](const std::array<J, 2>& u) { return Components{J(1.0), J(0.0), u[1] * u[1]}; };
    else if (kind == "minkowski")
        c = [](const std::array<J, 2>&) { return Components{J(1.0), J(0.0), J(-1.0)}; };
    else if (kind == "euclidean")
        c = [](const std::array<J, 2>&) { return Components{J(1.0), J(0.0), J(1.0)}; };
    else
        throw Error(ErrorKind::unknown_target, "unknown metric '" + kind + "'");
    return std::make_shared<ComponentMetric>(2, square, std::move(c));
}

std::vector<std::string> catalog_names() {
    return {"sphere:R",          "ellipsoid:a,b,c",       "torus:R,r[,x|y|z|null]", "pseudosphere[:V]",
            "graph:saddle",      "graph:cubic",           "graph:band",        "graph:paraboloid",
            "graph:saddle4",     "circle:R",              "ellipse:a,b",       "segment:timelike|spacelike|null,L",
            "disc:R[,eps,k[,phase]]", "annulus:R1,R2[,eps,k[,phase]]",
            "metric:linear|quadratic|minkowski|euclidean"};
}

CatalogTarget parse_target(const std::string& text, const AmbientSpace& amb) {
    const auto p = split_target(text);
    if (p.name == "sphere" || p.name == "ellipsoid") {
        need_components(p, amb, 3);
        if (p.name == "sphere") {
            const double r = number(p, 0);
            need_positive(p, r, "radius");
            return ellipsoid(text, amb, r, r, r);
        }
        const double a = number(p, 0), b = number(p, 1), c = number(p, 2);
        need_positive(p, std::min({a, b, c}), "semi-axes");
        return ellipsoid(text, amb, a, b, c);
    }
    if (p.name == "torus") {
        need_components(p, amb, 3);
        return torus(p, amb);
    }
    if (p.name == "pseudosphere") {
        need_components(p, amb, 3);
        return pseudosphere(p, amb);
    }
    if (p.name == "graph") return graph(p, amb);
    if (p.name == "circle" || p.name == "ellipse") {
        need_components(p, amb, 2);
        const double a = number(p, 0);
        const double b = p.name == "circle" ? a : number(p, 1);
        need_positive(p, std::min(a, b), "radius");
        return planar_loop(text, amb, a, b, 0.0, 0.0, 0.0, false);
    }
    if (p.name == "segment") return segment(p, amb);
    if (p.name == "disc") {
        need_components(p, amb, 2);
        const double r = number(p, 0), eps = number(p, 1, 0.0), k = number(p, 2, 3.0), phase = number(p, 3, 0.0);
        need_positive(p, r, "radius");
        if (!(std::abs(eps) < 1)) throw Error(ErrorKind::validation_error, "disc: |eps| must be below 1");
        return PlanarDomain{text, {planar_loop(text, amb, r, r, eps, k, phase, false)}};
    }
    if (p.name == "annulus") {
        need_components(p, amb, 2);
        const double r1 = number(p, 0), r2 = number(p, 1);
        const double eps = number(p, 2, 0.0), k = number(p, 3, 3.0), phase = number(p, 4, 0.0);
        need_positive(p, r1, "inner radius");
        if (!(r2 > r1)) throw Error(ErrorKind::validation_error, "annulus: need R1 < R2");
        // Both boundaries get the same relative wobble, so they cannot touch.
        if (!(std::abs(eps) < (r2 - r1) / (r2 + r1)))
            throw Error(ErrorKind::validation_error, "annulus: |eps| must be below (R2 - R1) / (R2 + R1)");
        return PlanarDomain{text,
                            {planar_loop(text + "/outer", amb, r2, r2, eps, k, phase, false),
                             planar_loop(text + "/inner", amb, r1, r1, eps, k, phase, true)}};
    }
    throw Error(ErrorKind::unknown_target, "unknown target '" + p.name + "'");
}

ParametricManifold parse_manifold(const std::string& text, const AmbientSpace& amb) {
    auto t = parse_target(text, amb);
    if (auto* m = std::get_if<ParametricManifold>(&t)) return std::move(*m);
    throw Error(ErrorKind::validation_error, "'" + text + "' is a planar domain, not a curve or surface");
}

}  // namespace weylscope
