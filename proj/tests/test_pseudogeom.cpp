#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "weylscope/catalog.hpp"
#include "weylscope/error.hpp"
#include "weylscope/pseudogeom.hpp"

using namespace weylscope;

namespace {

const AmbientSpace kLorentz3(2, 1);
const AmbientSpace kEuclid3(3, 0);
const AmbientSpace kPlane11(1, 1);

std::shared_ptr<ComponentMetric> metric(ComponentMetric::Components c, double lo = -1, double hi = 1) {
    return std::make_shared<ComponentMetric>(2, DomainPatch{2, {lo, lo}, {hi, hi}, {false, false}}, std::move(c));
}

using J = Jet<2, 2>;

// Random parameter in a chart, restricted to where the chart's weight is positive.
ChartPoint random_point(const ParametricManifold& m, int chart, std::mt19937_64& rng) {
    const auto& p = m.charts()[chart].patch;
    std::uniform_real_distribution<double> ux(p.lo[0], p.hi[0]), uy(p.lo[1], p.hi[1]);
    for (;;) {
        ChartPoint u{ux(rng), uy(rng)};
        if (m.weight(chart, u) > 0) return u;
    }
}

}  // namespace

TEST(Ambient, FormsAndParsing) {
    const auto a = AmbientSpace::parse("2,1");
    EXPECT_EQ(a.p(), 2);
    EXPECT_EQ(a.q(), 1);
    EXPECT_TRUE((a.q_matrix() * a.involution()).isApprox(a.p_matrix()));
    Vec v(3);
    v << 1, 2, 3;
    EXPECT_DOUBLE_EQ(a.norm2(v), 1 + 4 - 9);
    EXPECT_THROW(AmbientSpace::parse("2;1"), Error);
    EXPECT_THROW(AmbientSpace(0, 0), Error);
    EXPECT_THROW(AmbientSpace(4, 3), Error);
}

TEST(InducedMetric, Examples) {
    const auto circle = parse_manifold("circle:1", kPlane11);
    for (double th : {0.0, 0.3, kPi / 4, 2.0}) EXPECT_NEAR(circle.induced_metric(0, {th, 0})(0, 0), -std::cos(2 * th), 1e-14);
    const auto saddle = parse_manifold("graph:saddle", kLorentz3);
    EXPECT_TRUE(saddle.induced_metric(0, {0, 0}).isApprox(Mat::Identity(2, 2)));
    const auto ds = parse_manifold("pseudosphere", kLorentz3);
    EXPECT_NEAR((ds.point(0, {0, 0}) - Vec::Unit(3, 0)).norm(), 0.0, 1e-15);
    const auto sig = signature_at(ds.induced_metric(0, {0, 0}));
    EXPECT_EQ(sig.positive, 1);
    EXPECT_EQ(sig.negative, 1);
    EXPECT_EQ(sig.kernel_dim, 0);
}

TEST(Signature, Examples) {
    Mat g(2, 2);
    g << 1, 0, 0, 0;
    auto s = signature_at(g, 1e-9);
    EXPECT_EQ(s.positive, 1);
    EXPECT_EQ(s.negative, 0);
    ASSERT_EQ(s.kernel_dim, 1);
    EXPECT_NEAR(std::abs(s.kernel(1, 0)), 1.0, 1e-15);
    g << 1, 0, 0, -1;
    s = signature_at(g);
    EXPECT_EQ(s.positive, 1);
    EXPECT_EQ(s.negative, 1);
    EXPECT_EQ(s.kernel_dim, 0);
    const auto circle = parse_manifold("circle:1", kPlane11);
    s = signature_at(circle.induced_metric(0, {kPi / 4, 0}), 1e-9);
    EXPECT_EQ(s.positive + s.negative, 0);
    EXPECT_EQ(s.kernel_dim, 1);
}

TEST(Signature, SylvesterInvariance) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        Mat d = Mat::Zero(n, n);
        int pos = 0, neg = 0, zero = 0;
        for (int i = 0; i < n; ++i) {
            const int kind = (trial + i) % 3;
            d(i, i) = kind == 0 ? 1.0 + i : (kind == 1 ? -1.0 - i : 0.0);
            (kind == 0 ? pos : (kind == 1 ? neg : zero))++;
        }
        Mat a(n, n);
        do {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a(i, j) = n01(rng);
        } while (std::abs(a.determinant()) < 0.2);
        const Mat g = a.transpose() * d * a;
        const auto s = signature_at(g, 1e-9 * g.cwiseAbs().maxCoeff());
        EXPECT_EQ(s.positive, pos);
        EXPECT_EQ(s.negative, neg);
        EXPECT_EQ(s.kernel_dim, zero);
    }
}

TEST(Frames, PivotedGramSchmidt) {
    // A basis with a null first vector still orthonormalizes in R^{1,1}.
    Mat basis(2, 2);
    basis << 1, 1, 1, 0;
    const auto f = orthonormalize(basis, kPlane11.q_matrix());
    const Mat gram = f.vectors.transpose() * kPlane11.q_matrix() * f.vectors;
    EXPECT_NEAR(gram(0, 1), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(gram(0, 0)), 1.0, 1e-14);
    EXPECT_NEAR(f.eps[0] * f.eps[1], -1.0, 0.0);
    Mat null(2, 1);
    null << 1, 1;
    EXPECT_THROW(orthonormalize(null, kPlane11.q_matrix()), Error);
}

TEST(LcRegularity, ExplicitMetrics) {
    auto linear = metric([](const std::array<J, 2>& u) { return std::array<J, 3>{J(1.0), J(0.0), u[1]}; });
    const auto v1 = lc_regular_check(*linear);
    EXPECT_TRUE(v1.regular);
    ASSERT_FALSE(v1.degenerate_points.empty());
    for (const auto& p : v1.degenerate_points) {
        EXPECT_NEAR(p.u[1], 0.0, 1e-9);
        EXPECT_NEAR(p.margin, 1.0, 1e-9);
    }
    auto square = metric([](const std::array<J, 2>& u) { return std::array<J, 3>{J(1.0), J(0.0), u[1] * u[1]}; });
    const auto v2 = lc_regular_check(*square);
    EXPECT_FALSE(v2.regular);
    ASSERT_FALSE(v2.violations.empty());
    for (const auto& p : v2.violations) EXPECT_LT(std::abs(p.u[1]), 1e-3);
    auto riemann = metric([](const std::array<J, 2>& u) {
        return std::array<J, 3>{1.0 + u[0] * u[0], J(0.3), 2.0 + u[1] * u[1]};
    });
    const auto v3 = lc_regular_check(*riemann);
    EXPECT_TRUE(v3.regular);
    EXPECT_TRUE(v3.degenerate_points.empty());
}

TEST(Hypersurface, SphereAndEllipsoid) {
    const auto s2 = parse_manifold("sphere:1", kLorentz3);
    const auto north = hypersurface_data(s2, 0, {0, 0});
    EXPECT_NEAR((north.normal - Vec::Unit(3, 2)).norm(), 0.0, 1e-15);
    EXPECT_NEAR(north.sigma, -1.0, 1e-15);
    EXPECT_NEAR(north.gauss_kronecker, 1.0, 1e-14);
    const auto equator = hypersurface_data(s2, 0, {1, 0});
    EXPECT_NEAR((equator.normal - Vec::Unit(3, 0)).norm(), 0.0, 1e-15);
    EXPECT_NEAR(equator.sigma, 1.0, 1e-15);
    EXPECT_NEAR(equator.gauss_kronecker, 1.0, 1e-14);
    // Pole of the (1,1,2) ellipsoid: principal curvatures c/a^2 and c/b^2.
    const auto ell = parse_manifold("ellipsoid:1,1,2", kLorentz3);
    const auto pole = hypersurface_data(ell, 0, {0, 0});
    EXPECT_NEAR(pole.gauss_kronecker, 4.0, 1e-13);
    EXPECT_NEAR(pole.sigma, -1.0, 1e-15);
}

TEST(Hypersurface, InvariantsAtRandomPoints) {
    std::mt19937_64 rng(11);
    const double a = 1.0, b = 1.3, c = 2.1;
    const auto ell = parse_manifold("ellipsoid:1,1.3,2.1", kLorentz3);
    for (int trial = 0; trial < 200; ++trial) {
        const int chart = trial % 2;
        const auto u = random_point(ell, chart, rng);
        const auto s = hypersurface_data(ell, chart, u);
        const auto j = ell.jet(chart, u, 2);
        EXPECT_NEAR(s.normal.norm(), 1.0, 1e-12);
        EXPECT_LT(std::abs(s.normal.dot(j.first(0))), 1e-10 * j.first(0).norm());
        EXPECT_LT(std::abs(s.normal.dot(j.first(1))), 1e-10 * j.first(1).norm());
        // Outward normal and the closed-form Gauss curvature of an ellipsoid.
        const Vec x = j.point();
        EXPECT_GT(s.normal.dot(x), 0.0);
        const double w = x[0] * x[0] / std::pow(a, 4) + x[1] * x[1] / std::pow(b, 4) + x[2] * x[2] / std::pow(c, 4);
        EXPECT_NEAR(s.gauss_kronecker, 1.0 / (a * a * b * b * c * c * w * w), 1e-10);
        // Gradient of sigma against central differences.
        const double h = 1e-6;
        for (int k = 0; k < 2; ++k) {
            ChartPoint up = u, dn = u;
            up[k] += h;
            dn[k] -= h;
            const double fd =
                (hypersurface_data(ell, chart, up).sigma - hypersurface_data(ell, chart, dn).sigma) / (2 * h);
            EXPECT_NEAR(s.sigma_gradient[k], fd, 1e-6 * (1 + std::abs(fd)));
        }
    }
}

TEST(Transversality, Catalog) {
    ScanConfig cfg;
    cfg.resolution = 48;
    const auto s2 = parse_manifold("sphere:1", kLorentz3);
    const auto v = lc_transversal_hypersurface_check(s2, cfg);
    EXPECT_TRUE(v.regular);
    ASSERT_FALSE(v.degenerate_points.empty());
    for (const auto& p : v.degenerate_points) {
        const Vec x = s2.point(p.chart, p.u);
        EXPECT_NEAR(std::abs(x[2]), std::sqrt(0.5), 1e-8);
    }
    const auto round = lc_transversal_hypersurface_check(parse_manifold("sphere:1", kEuclid3), cfg);
    EXPECT_TRUE(round.regular);
    EXPECT_TRUE(round.degenerate_points.empty());
    EXPECT_FALSE(lc_transversal_hypersurface_check(parse_manifold("graph:band", kLorentz3), cfg).regular);
    EXPECT_FALSE(lc_transversal_hypersurface_check(parse_manifold("graph:cubic", kLorentz3), cfg).regular);
}

TEST(Transversality, AgreesWithInducedMetricRegularity) {
    ScanConfig cfg;
    cfg.resolution = 48;
    const std::vector<std::pair<std::string, AmbientSpace>> cases{
        {"sphere:1", kLorentz3},          {"sphere:1", kEuclid3},         {"sphere:1", AmbientSpace(1, 2)},
        {"ellipsoid:1,1.3,2.1", kLorentz3}, {"torus:2,0.5,x", kLorentz3}, {"torus:2,0.5,z", kLorentz3},
        {"pseudosphere", kLorentz3},      {"graph:saddle", kLorentz3},    {"graph:paraboloid", kLorentz3},
        {"graph:cubic", kLorentz3},       {"graph:band", kLorentz3},      {"circle:1", kPlane11},
        {"ellipse:1,2", kPlane11},        {"circle:1", AmbientSpace(2, 0)}};
    for (const auto& [name, amb] : cases) {
        const auto m = parse_manifold(name, amb);
        const bool transversal = lc_transversal_hypersurface_check(m, cfg).regular;
        const bool regular = lc_regular_check(m, cfg).regular;
        EXPECT_EQ(transversal, regular) << name << " in " << amb.to_string();
    }
}

TEST(Curvature, IntrinsicExamples) {
    const auto s2 = parse_manifold("sphere:1", kEuclid3);
    EXPECT_NEAR(curvature_tensor(InducedMetric(s2, 0), {0.3, -0.2}).gauss, 1.0, 1e-12);
    auto hyperbolic = metric(
        [](const std::array<J, 2>& u) {
            const J w = 1.0 / (u[1] * u[1]);
            return std::array<J, 3>{w, J(0.0), w};
        },
        0.5, 2.0);
    EXPECT_NEAR(curvature_tensor(*hyperbolic, {1.0, 1.3}).gauss, -1.0, 1e-12);
    const auto ds = parse_manifold("pseudosphere", kLorentz3);
    const auto t = curvature_tensor(InducedMetric(ds, 0), {0.7, 0.4});
    EXPECT_NEAR(t.gauss, 1.0, 1e-12);
    EXPECT_EQ(t.positive, 1);
    EXPECT_EQ(t.negative, 1);
    EXPECT_NEAR(t.mixed[0][1][0][1], t.gauss, 1e-12);
}

TEST(Curvature, SymmetriesAndBianchi) {
    std::mt19937_64 rng(3);
    for (const auto& [name, amb] : std::vector<std::pair<std::string, AmbientSpace>>{
             {"ellipsoid:1,1.3,2.1", kEuclid3}, {"pseudosphere", kLorentz3}, {"graph:saddle4", AmbientSpace(2, 2)}}) {
        const auto m = parse_manifold(name, amb);
        for (int trial = 0; trial < 20; ++trial) {
            const auto u = random_point(m, 0, rng);
            if (std::abs(m.induced_metric(0, u).determinant()) < 1e-3) continue;
            const auto t = curvature_tensor(InducedMetric(m, 0), u);
            double scale = 1e-300;
            for (auto& a : t.lower)
                for (auto& b : a)
                    for (auto& c : b)
                        for (double x : c) scale = std::max(scale, std::abs(x));
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l) {
                            const auto& R = t.lower;
                            EXPECT_NEAR(R[i][j][k][l], -R[j][i][k][l], 1e-6 * scale);
                            EXPECT_NEAR(R[i][j][k][l], -R[i][j][l][k], 1e-6 * scale);
                            EXPECT_NEAR(R[i][j][k][l], R[k][l][i][j], 1e-6 * scale);
                            EXPECT_NEAR(R[i][j][k][l] + R[i][k][l][j] + R[i][l][j][k], 0.0, 1e-6 * scale);
                        }
        }
    }
}

TEST(Egregium, Examples) {
    const auto s2 = parse_manifold("sphere:1", kEuclid3);
    auto r = egregium_check(s2, 0, {0.2, 0.1});
    EXPECT_NEAR(r.intrinsic, 1.0, 1e-12);
    EXPECT_NEAR(r.extrinsic, 1.0, 1e-12);
    const auto ds = parse_manifold("pseudosphere", kLorentz3);
    r = egregium_check(ds, 0, {0, 0});
    EXPECT_NEAR(r.intrinsic, 1.0, 1e-12);
    EXPECT_NEAR(r.extrinsic, 1.0, 1e-12);
    const auto saddle = parse_manifold("graph:saddle", kLorentz3);
    r = egregium_check(saddle, 0, {0, 0});
    EXPECT_NEAR(r.intrinsic, 4.0, 1e-12);
    EXPECT_NEAR(r.extrinsic, 4.0, 1e-12);
    // On the light-cone circle of the saddle the metric degenerates.
    EXPECT_THROW(egregium_check(saddle, 0, {0.5, 0.0}), Error);
}

TEST(Egregium, RandomPointsOnCatalogSurfaces) {
    std::mt19937_64 rng(2024);
    const std::vector<std::pair<std::string, AmbientSpace>> cases{
        {"sphere:1", kEuclid3},   {"sphere:1", kLorentz3},        {"pseudosphere", kLorentz3},
        {"graph:saddle", kLorentz3}, {"graph:saddle4", AmbientSpace(2, 2)}, {"ellipsoid:1,1.3,2.1", kLorentz3}};
    for (const auto& [name, amb] : cases) {
        const auto m = parse_manifold(name, amb);
        int done = 0;
        while (done < 200) {
            const int chart = done % static_cast<int>(m.charts().size());
            const auto u = random_point(m, chart, rng);
            const Mat g = m.induced_metric(chart, u);
            if (std::abs(g.determinant()) < 1e-2 * g.squaredNorm()) continue;
            const auto r = egregium_check(m, chart, u);
            EXPECT_LT(r.discrepancy, 1e-6 * (1 + std::abs(r.intrinsic))) << name;
            ++done;
        }
    }
}

TEST(Isometry, BoostPreservesInducedMetric) {
    const double eta = 0.7;
    Mat boost = Mat::Identity(3, 3);
    boost(0, 0) = boost(2, 2) = std::cosh(eta);
    boost(0, 2) = boost(2, 0) = std::sinh(eta);
    const auto s2 = parse_manifold("ellipsoid:1,1.3,2.1", kLorentz3);
    const auto moved = s2.transformed(boost, "boosted");
    for (ChartPoint u : {ChartPoint{0.1, 0.2}, ChartPoint{-0.7, 0.4}}) {
        EXPECT_TRUE(moved.induced_metric(0, u).isApprox(s2.induced_metric(0, u), 1e-12));
        const auto a = egregium_check(moved, 0, u);
        const auto b = egregium_check(s2, 0, u);
        EXPECT_NEAR(a.intrinsic, b.intrinsic, 1e-9);
    }
}

TEST(Catalog, ParsingAndErrors) {
    EXPECT_NO_THROW(parse_target("disc:1", kPlane11));
    EXPECT_NO_THROW(parse_target("annulus:1,2", kPlane11));
    EXPECT_EQ(std::get<PlanarDomain>(parse_target("annulus:1,2", kPlane11)).boundary.size(), 2u);
    try {
        parse_target("klein:1", kLorentz3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unknown_target);
    }
    EXPECT_THROW(parse_target("sphere:-1", kLorentz3), Error);
    EXPECT_THROW(parse_target("sphere:abc", kLorentz3), Error);
    EXPECT_THROW(parse_target("sphere:1", kPlane11), Error);
    EXPECT_THROW(parse_target("torus:1,2", kLorentz3), Error);
    EXPECT_THROW(parse_target("segment:timelike,1", AmbientSpace(3, 0)), Error);
    EXPECT_THROW(parse_manifold("disc:1", kPlane11), Error);
    const auto s2 = parse_manifold("sphere:1", kLorentz3);
    try {
        s2.jet(0, {5.0, 0.0}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::out_of_domain);
    }
}
