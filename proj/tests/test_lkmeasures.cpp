#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "weylscope/catalog.hpp"
#include "weylscope/error.hpp"
#include "weylscope/lkmeasures.hpp"

using namespace weylscope;

namespace {

const AmbientSpace kLorentz3(2, 1);
const AmbientSpace kEuclid3(3, 0);
const AmbientSpace kPlane11(1, 1);

GaussBonnetConfig coarse_gb() {
    GaussBonnetConfig cfg;
    cfg.grid.resolution = 512;
    cfg.grid.t_samples = 256;
    return cfg;
}

PlanarDomain domain(const std::string& name) { return std::get<PlanarDomain>(parse_target(name, kPlane11)); }

}  // namespace

TEST(Kappa, DensityExamples) {
    const auto s2 = parse_manifold("sphere:1", kEuclid3);
    // Stereographic chart at the pole: g = 4 I, K = 1.
    EXPECT_NEAR(std::abs(kappa_density(InducedMetric(s2, 0), 0, {0, 0}) - Complex(4.0 / (2 * kPi))), 0.0, 1e-13);
    EXPECT_EQ(kappa_density(InducedMetric(s2, 0), 1, {0.2, 0.1}), Complex(0.0));

    ComponentMetric flat(2, DomainPatch{}, [](const auto&) {
        using J = Jet<2, 2>;
        return std::array<J, 3>{J(1.0), J(0.0), J(1.0)};
    });
    EXPECT_EQ(std::abs(kappa_density(flat, 0, {0.3, 0.4})), 0.0);

    const auto seg = parse_manifold("segment:timelike,2", kPlane11);
    EXPECT_NEAR(std::abs(kappa_density(InducedMetric(seg, 0), 1, {0.5, 0}) - Complex(0, 1)), 0.0, 1e-15);
    EXPECT_EQ(kappa_density(InducedMetric(seg, 0), 0, {0.5, 0}), Complex(0.0));
    EXPECT_NEAR(std::abs(kappa_total(seg, 1) - Complex(0, 2)), 0.0, 1e-14);

    const auto null = parse_manifold("segment:null,1", kPlane11);
    EXPECT_THROW(kappa_density(InducedMetric(null, 0), 1, {0.5, 0}), Error);
}

TEST(Kappa, TotalsOnClosedAndOpenSurfaces) {
    const auto s2 = parse_manifold("sphere:1", kEuclid3);
    EXPECT_NEAR(std::abs(kappa_total(s2, 0) - Complex(2.0)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(kappa_total(s2, 2) - Complex(4 * kPi)), 0.0, 1e-8);
    // de Sitter band |v| <= V: metric cosh^2 v du^2 - dv^2, K = 1.
    const double v = 1.5;
    const auto ds = parse_manifold("pseudosphere", kLorentz3);
    EXPECT_NEAR(std::abs(kappa_total(ds, 2) - Complex(0, 4 * kPi * std::sinh(v))), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(kappa_total(ds, 0) - Complex(0, 2 * std::sinh(v))), 0.0, 1e-8);
}

TEST(Kappa, TopDegreeIsVolume) {
    // Prolate spheroid (1, 1, 2): A = 2 pi a^2 (1 + c/(a e) asin e).
    const double a = 1, c = 2, e = std::sqrt(1 - a * a / (c * c));
    const double area = 2 * kPi * a * a * (1 + c / (a * e) * std::asin(e));
    const auto ell = parse_manifold("ellipsoid:1,1,2", kEuclid3);
    EXPECT_NEAR(std::abs(kappa_total(ell, 2) - Complex(area)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(kappa_total(ell, 0) - Complex(2.0)), 0.0, 1e-8);
    const auto circle = parse_manifold("ellipse:1,2", AmbientSpace(2, 0));
    EXPECT_NEAR(kappa_total(circle, 1, 256).real(), 9.688448220547675, 1e-10);
}

TEST(GaussBonnet, DistributionMatchesLorentzDisplay) {
    // In R^{2,1}: (1/2pi)(i x_+^{-3/2} - x_-^{-3/2}); the real part against a
    // real profile is -(1/2pi) <x_-^{-3/2}, h>.
    const auto d = gauss_bonnet_distribution(2, 1);
    const HalfInteger s = HalfInteger::from_twice(-3);
    EXPECT_NEAR(std::abs(d.power_coeff(Side::minus, s) - Complex(-1.0 / (2 * kPi))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(d.power_coeff(Side::plus, s) - Complex(0, 1.0 / (2 * kPi))), 0.0, 1e-15);
    EXPECT_TRUE(d.delta_terms().empty());
}

TEST(GaussBonnet, SphereAndEllipsoidInLorentzSpace) {
    const auto cfg = coarse_gb();
    for (const char* name : {"sphere:1", "ellipsoid:1,1.3,2.1", "sphere:2.5"}) {
        const auto r = gauss_bonnet_hypersurface(parse_manifold(name, kLorentz3), cfg);
        EXPECT_NEAR(r.chi.real(), 2.0, 5e-3) << name;
        EXPECT_TRUE(r.pass) << name;
        EXPECT_TRUE(r.profile.has_value());
        EXPECT_GT(r.margin, 0.1);
    }
    const auto flipped = gauss_bonnet_hypersurface(parse_manifold("sphere:1", AmbientSpace(1, 2)), cfg);
    EXPECT_NEAR(flipped.chi.real(), 2.0, 5e-3);
}

TEST(GaussBonnet, TorusGivesZero) {
    const auto cfg = coarse_gb();
    for (const char* name : {"torus:2,0.5", "torus:2,0.5,z", "torus:3,1,y"}) {
        const auto r = gauss_bonnet_hypersurface(parse_manifold(name, kLorentz3), cfg);
        EXPECT_NEAR(r.chi.real(), 0.0, 5e-3) << name;
    }
}

TEST(GaussBonnet, DefiniteAmbients) {
    GaussBonnetConfig cfg;
    for (const auto& amb : {kEuclid3, AmbientSpace(0, 3)}) {
        const auto r = gauss_bonnet_hypersurface(parse_manifold("sphere:1", amb), cfg);
        EXPECT_NEAR(r.chi.real(), 2.0, 1e-6);
        EXPECT_NEAR(r.chi.imag(), 0.0, 1e-12);
        EXPECT_FALSE(r.profile.has_value());
        EXPECT_TRUE(std::isinf(r.margin));
    }
    const auto torus = gauss_bonnet_hypersurface(parse_manifold("torus:2,0.5", kEuclid3), cfg);
    EXPECT_NEAR(torus.chi.real(), 0.0, 1e-6);
}

TEST(GaussBonnet, IsometryInvariance) {
    const auto cfg = coarse_gb();
    const auto ell = parse_manifold("ellipsoid:1,1.3,2.1", kLorentz3);
    const auto base = gauss_bonnet_hypersurface(ell, cfg).chi;
    const double th = 0.7;
    Mat rot = Mat::Identity(3, 3);
    rot(0, 0) = rot(1, 1) = std::cos(th);
    rot(0, 1) = -std::sin(th);
    rot(1, 0) = std::sin(th);
    Mat reflect = Mat::Identity(3, 3);
    reflect(2, 2) = -1;
    for (const Mat& a : {rot, reflect}) {
        const auto moved = gauss_bonnet_hypersurface(ell.transformed(a, "moved"), cfg).chi;
        EXPECT_LT(std::abs(moved.real() - base.real()), 5e-3);
    }
}

TEST(GaussBonnet, Preconditions) {
    const auto cfg = coarse_gb();
    try {
        gauss_bonnet_hypersurface(parse_manifold("graph:band", kLorentz3), cfg);
        FAIL();
    } catch (const Error& e) {
        // The band is not closed either; that check comes first.
        EXPECT_EQ(e.kind(), ErrorKind::validation_error);
    }
    EXPECT_THROW(gauss_bonnet_hypersurface(parse_manifold("circle:1", kPlane11), cfg), Error);
    EXPECT_THROW(gauss_bonnet_hypersurface(parse_manifold("sphere:1", AmbientSpace(2, 2)), cfg), Error);
}

TEST(GaussBonnet, ReportJson) {
    const auto cfg = coarse_gb();
    const auto m = parse_manifold("sphere:1", kLorentz3);
    const auto j = gauss_bonnet_hypersurface(m, cfg).report(m, cfg).to_json();
    for (const char* key : {"target", "k", "value", "error_est", "margin", "verdict", "grid", "seed"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["verdict"], "pass");
    EXPECT_EQ(j["grid"], 512);
    EXPECT_NEAR(j["value"]["re"].get<double>(), 2.0, 5e-3);
}

TEST(EulerM11, DiscAndAnnulus) {
    const auto disc = euler_intersection_m11(domain("disc:1"));
    EXPECT_EQ(disc.crossings.size(), 4u);
    EXPECT_EQ(disc.signed_count, 4);
    EXPECT_EQ(disc.chi, 1.0);
    for (const auto& c : disc.crossings) {
        EXPECT_NEAR(std::abs(c.point[0]), std::sqrt(0.5), 1e-9);
        EXPECT_NEAR(std::abs(c.slope), 2.0, 1e-6);
    }
    const auto ann = euler_intersection_m11(domain("annulus:1,2"));
    EXPECT_EQ(ann.crossings.size(), 8u);
    EXPECT_EQ(ann.signed_count, 0);
    EXPECT_EQ(ann.chi, 0.0);
    const auto j = ann.report(domain("annulus:1,2"), 4096).to_json();
    EXPECT_EQ(j["details"]["crossings"].size(), 8u);
}

TEST(EulerM11, StableUnderSmallPerturbations) {
    const double margin = euler_intersection_m11(domain("disc:1")).min_margin;
    // r = 1 + a sin(3 th + phase): the C^2 size of the change is at most 13 a.
    const double a = 0.1 * margin / 13;
    for (double phase : {0.0, 0.4, 1.3, 2.9}) {
        const std::string name = "disc:1," + std::to_string(a) + ",3," + std::to_string(phase);
        const auto r = euler_intersection_m11(domain(name));
        EXPECT_EQ(r.chi, 1.0) << name;
        EXPECT_EQ(r.crossings.size(), 4u) << name;
    }
    const double ring_margin = euler_intersection_m11(domain("annulus:1,2")).min_margin;
    const double b = 0.1 * ring_margin / (13 * 2);
    for (double phase : {0.0, 1.1}) {
        const auto r = euler_intersection_m11(domain("annulus:1,2," + std::to_string(b) + ",3," + std::to_string(phase)));
        EXPECT_EQ(r.chi, 0.0);
        EXPECT_EQ(r.crossings.size(), 8u);
    }
    EXPECT_THROW(domain("annulus:1,2,0.4"), Error);
    // Convex bodies other than the disc.
    for (const char* name : {"disc:1,0.05,2,0.3", "disc:2,0.02,5,1.0"}) EXPECT_EQ(euler_intersection_m11(domain(name)).chi, 1.0);
}

TEST(EulerM11, Preconditions) {
    PlanarDomain wrong{"disc", {parse_manifold("circle:1", AmbientSpace(2, 0))}};
    EXPECT_THROW(euler_intersection_m11(wrong), Error);
}

TEST(Tube, ClosedForms) {
    auto volume = [](const std::string& target, AmbientSpace amb, double r) {
        return tube_volume_formula(TubeSpec{target, amb, r});
    };
    auto t = volume("segment:timelike,2", kLorentz3, 0.1);
    EXPECT_NEAR(t.volume, kPi * 2 * 0.01, 1e-12);
    EXPECT_LT(t.imag_residue, 1e-10);
    t = volume("segment:spacelike,1", kPlane11, 0.5);
    EXPECT_NEAR(t.volume, 1.0, 1e-12);
    t = volume("circle:1", kEuclid3, 0.1);
    EXPECT_NEAR(t.volume, 2 * kPi * kPi * 0.01, 1e-12);
    t = volume("sphere:1", kEuclid3, 0.2);
    EXPECT_NEAR(t.volume, 8 * kPi * 0.2 + 8 * kPi / 3 * 0.008, 1e-8);
    try {
        volume("segment:timelike,1", AmbientSpace(2, 2), 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unbounded_tube);
    }
}

TEST(Tube, MonteCarloAgreesWithFormula) {
    const std::vector<TubeSpec> specs{{"segment:timelike,2", kLorentz3, 0.1},
                                      {"segment:spacelike,1", kPlane11, 0.5},
                                      {"circle:1", kEuclid3, 0.1},
                                      {"sphere:1", kEuclid3, 0.3}};
    for (const auto& s : specs) {
        const auto mc = tube_volume_oracle(s, 1000000, 12345);
        const double exact = tube_volume_formula(s).volume;
        EXPECT_LT(std::abs(mc.estimate - exact), 3 * mc.stderr_) << s.target;
        EXPECT_GT(mc.stderr_, 0.0);
    }
}

TEST(Tube, MonteCarloIsSeedDeterministic) {
    const TubeSpec s{"circle:1", kEuclid3, 0.1};
    const auto a = tube_volume_oracle(s, 200000, 7);
    const auto b = tube_volume_oracle(s, 200000, 7);
    const auto c = tube_volume_oracle(s, 200000, 8);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_NE(a.estimate, c.estimate);
    try {
        tube_volume_oracle({"ellipsoid:1,1,2", kEuclid3, 0.1}, 1000, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::no_membership_test);
    }
}

TEST(Scaling, KappaScalesAsPredicted) {
    const auto circle = parse_manifold("circle:1", AmbientSpace(2, 0));
    const auto s2 = parse_manifold("sphere:1", kEuclid3);
    const auto ds = parse_manifold("pseudosphere", kLorentz3);
    const auto curve = std::make_shared<InducedMetric>(circle, 0);
    const auto sphere = std::make_shared<InducedMetric>(s2, 0);
    const auto lorentz = std::make_shared<InducedMetric>(ds, 0);
    EXPECT_LT(scaling_check(curve, 4, 1), 1e-10);
    EXPECT_LT(scaling_check(curve, -1, 1), 1e-10);
    EXPECT_LT(scaling_check(sphere, 9, 0), 1e-8);
    EXPECT_LT(scaling_check(sphere, 4, 2), 1e-8);
    EXPECT_LT(scaling_check(sphere, -1, 0), 1e-8);
    EXPECT_LT(scaling_check(lorentz, -1, 0), 1e-8);
    EXPECT_LT(scaling_check(lorentz, -1, 2), 1e-8);
    EXPECT_LT(scaling_check(lorentz, 9, 2), 1e-8);
    EXPECT_THROW(scaling_check(sphere, 0, 0), Error);
}
