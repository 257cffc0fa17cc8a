#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "weylscope/catalog.hpp"
#include "weylscope/pseudogeom.hpp"
#include "weylscope/pushforward.hpp"

namespace weylscope {

/// Curvature density kappa_k at u, as a multiple of du (chart coordinates).
/// Zero when dim - k is odd. Throws degenerate_point where g is degenerate.
Complex kappa_density(const MetricField& g, int k, ChartPoint u);

/// Integral of kappa_k over the whole manifold, with partition weights.
/// `panels` per axis of an 8-point Gauss-Legendre rule.
Complex kappa_total(const ParametricManifold& m, int k, int panels = 48);

/// Common serialized form of every evaluator result.
struct LKReport {
    std::string target;
    int k = 0;
    Complex value{0.0, 0.0};
    double error_est = 0.0;
    double margin = 0.0;
    bool pass = false;
    int grid = 0;
    std::uint64_t seed = 0;
    nlohmann::json details = nlohmann::json::object();

    nlohmann::json to_json() const;
};

struct GaussBonnetConfig {
    GridConfig grid{};
    ScanConfig scan{};
    /// Distance of Re(chi) from the nearest integer accepted as a pass.
    double tol = 5e-3;
    /// Gauss-Legendre panels per axis for definite ambients.
    int panels = 64;
};

struct GaussBonnetResult {
    Complex chi{0.0, 0.0};
    double error_estimate = 0.0;
    double margin = 0.0;  // LC-transversality margin; +inf if the light cone is missed
    bool pass = false;
    std::optional<PushforwardProfile> profile;  // empty for definite ambients

    LKReport report(const ParametricManifold& m, const GaussBonnetConfig& cfg) const;
};

/// Pairing prefactor for closed hypersurfaces of dimension n in R^{p,q}:
/// i^q c_n (chi_0^s - i chi_1^s), s = -(n+1)/2, both normals included.
HomDistribution gauss_bonnet_distribution(int n, int q);

/// Euler characteristic of a closed LC-transversal surface in a 3-dimensional
/// ambient, from the pushforward of K_E dA_E under sigma = Q(normal).
/// Throws transversality_failure when the light-cone contact is not transverse.
GaussBonnetResult gauss_bonnet_hypersurface(const ParametricManifold& m, const GaussBonnetConfig& cfg = {});

struct LightlikeCrossing {
    int curve = 0;
    double s = 0.0;
    Vec point;
    double slope = 0.0;  // d sigma / ds
    int sign = 0;
};

struct M11Result {
    std::vector<LightlikeCrossing> crossings;
    int signed_count = 0;
    double chi = 0.0;
    double min_margin = 0.0;

    LKReport report(const PlanarDomain& d, int resolution) const;
};

/// Euler characteristic of a planar domain in R^{1,1}: a quarter of the
/// signed number of boundary points with lightlike normal. Each point counts
/// with the turning direction of the normal there.
M11Result euler_intersection_m11(const PlanarDomain& domain, int resolution = 4096);

struct TubeSpec {
    std::string target;  // catalog curve or surface
    AmbientSpace ambient{2, 1};
    double radius = 0.1;
};

struct TubeFormulaResult {
    double volume = 0.0;
    double imag_residue = 0.0;
    std::vector<Complex> lambdas;  // Lambda_0 .. Lambda_dim
};

/// Tube volume from the intrinsic curvature totals. Throws unbounded_tube
/// when the normal bundle is indefinite.
TubeFormulaResult tube_volume_formula(const TubeSpec& spec, int panels = 48);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
};

/// Rejection-sampling volume of the tube for straight segments, circles and
/// round spheres. Fully determined by the seed. Throws no_membership_test
/// for other targets.
MonteCarloEstimate tube_volume_oracle(const TubeSpec& spec, std::uint64_t samples, std::uint64_t seed);

/// Largest relative discrepancy of kappa_k under g -> lambda g against the
/// predicted factor sqrt(lambda)^k (with conjugation for lambda < 0), over a
/// grid of nondegenerate sample points.
double scaling_check(const std::shared_ptr<const MetricField>& g, double lambda, int k, int samples_per_axis = 9);

}  // namespace weylscope
