#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "weylscope/pseudogeom.hpp"

namespace weylscope {

/// A compact planar region given by its boundary curves, each traversed with
/// the interior on its left (outer boundary counterclockwise).
struct PlanarDomain {
    std::string name;
    std::vector<ParametricManifold> boundary;
};

using CatalogTarget = std::variant<ParametricManifold, PlanarDomain>;

/// Parses "name:arg,arg,..." and builds the target in the given ambient.
/// Surfaces: sphere:R, ellipsoid:a,b,c, torus:R,r[,x|y|z|null], pseudosphere[:V],
/// graph:saddle|cubic|band|paraboloid|saddle4.
/// Curves: circle:R, ellipse:a,b, segment:timelike|spacelike|null,L.
/// Planar domains: disc:R[,eps,k[,phase]], annulus:R1,R2[,eps,k[,phase]]
/// (boundary radius scaled by 1 + eps sin(k theta + phase)).
CatalogTarget parse_target(const std::string& text, const AmbientSpace& ambient);
/// Same, for targets that must be curves or surfaces.
ParametricManifold parse_manifold(const std::string& text, const AmbientSpace& ambient);

/// Intrinsic metrics on [-1,1]^2 for LC-regularity checks:
/// metric:linear (dx^2 + y dy^2), metric:quadratic (dx^2 + y^2 dy^2),
/// metric:minkowski (dx^2 - dy^2), metric:euclidean.
std::shared_ptr<const MetricField> parse_metric(const std::string& text);

/// Names accepted by parse_target, for help output.
std::vector<std::string> catalog_names();

/// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

}  // namespace weylscope
