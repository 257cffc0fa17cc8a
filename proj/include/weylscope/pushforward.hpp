#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "weylscope/homdist.hpp"
#include "weylscope/specfun.hpp"

namespace weylscope {

using ChartPoint = std::array<double, 2>;

/// One coordinate patch: an interval (dim 1, second coordinate ignored) or a
/// rectangle, optionally periodic per axis.
struct DomainPatch {
    int dim = 2;
    ChartPoint lo{0.0, 0.0};
    ChartPoint hi{1.0, 1.0};
    std::array<bool, 2> periodic{false, false};
};

/// A scalar field on a union of patches. Patches overlapping in the
/// underlying space carry partition-of-unity weights summing to one.
struct ScalarFieldOnDomain {
    std::vector<DomainPatch> patches;
    std::function<double(int patch, ChartPoint u)> value;
    std::function<ChartPoint(int patch, ChartPoint u)> gradient;
    /// Defaults to 1 everywhere.
    std::function<double(int patch, ChartPoint u)> weight;
    /// Optional: the same point expressed in another patch, if it lies there.
    std::function<std::optional<std::pair<int, ChartPoint>>(int patch, ChartPoint u)> transition;
};

/// Density F(u) du in chart coordinates, before partition weights.
struct DensityOnDomain {
    std::function<Complex(int patch, ChartPoint u)> value;
    bool integrable = true;
};

/// Field value and density at one point, for callers that compute both from
/// shared intermediate data.
struct FieldSample {
    double sigma = 0.0;
    Complex density{0.0, 0.0};
};
using JointSampler = std::function<FieldSample(int patch, ChartPoint u)>;

struct GridConfig {
    int resolution = 512;      // cells per axis (2D) or segments (1D) per patch
    int t_samples = 512;       // uniform bins over the value range
    int refine_levels = 4;     // geometric refinement toward 0 and the endpoints
    double window_fraction = 0.1;
    double blend_fraction = 0.1;
    int model_degree = 4;
    /// Relative threshold on |grad sigma| along the zero level.
    double margin_threshold = 1e-6;
};

/// Polynomial model of h near 0 in powers of t.
struct LocalModel {
    bool valid = false;
    std::vector<Complex> coeffs;  // h(t) ~ sum coeffs[i] t^i
    double window = 0.0;
    double blend = 0.0;
    double residual_rms = 0.0;
};

/// Pushforward density h(t) = int_{sigma=t} F / |grad sigma| of a density
/// under a scalar field, stored as exact bin masses of the piecewise-linear
/// model plus node values and a local model at 0.
class PushforwardProfile {
public:
    PushforwardProfile(std::vector<double> edges, std::vector<Complex> masses, std::vector<Complex> node_values,
                       double margin, double field_scale, const GridConfig& config);

    const std::vector<double>& edges() const { return edges_; }
    const std::vector<Complex>& bin_masses() const { return masses_; }
    /// Interior edges, where h is sampled.
    std::vector<double> nodes() const;
    const std::vector<Complex>& node_values() const { return node_values_; }
    double t_min() const { return edges_.front(); }
    double t_max() const { return edges_.back(); }
    /// min |grad sigma| on the zero level; +inf when 0 is not attained.
    double margin() const { return margin_; }
    double field_scale() const { return field_scale_; }
    bool margin_ok() const;
    const LocalModel& model() const { return model_; }
    /// Bin edge used as the split point between model and bins.
    double split() const { return split_; }
    Complex total_mass() const;
    /// h(t): node interpolation, or the local model inside the blend zone.
    Complex value(double t) const;
    /// Merges adjacent bins outside the split zone; used for error estimates.
    PushforwardProfile coarsened() const;

    void write_csv(std::ostream& out) const;

private:
    void fit_model();

    std::vector<double> edges_;
    std::vector<Complex> masses_;
    std::vector<Complex> node_values_;
    double margin_;
    double field_scale_;
    GridConfig config_;
    LocalModel model_;
    double split_ = 0.0;
};

PushforwardProfile coarea_profile(const ScalarFieldOnDomain& sigma, const DensityOnDomain& density,
                                  const GridConfig& grid = {});
/// Same, with sigma and density sampled jointly at grid vertices. The
/// oracles in `sigma` are still used for setup checks and the margin.
PushforwardProfile coarea_profile(const ScalarFieldOnDomain& sigma, const JointSampler& sampler,
                                  const GridConfig& grid = {});

struct ProfilePairing {
    Complex value;
    double error_estimate = 0.0;
};

Complex pair_profile(const HomDistribution& d, const PushforwardProfile& h);
/// Pairing plus an error estimate from a coarsened profile and the model fit.
ProfilePairing pair_profile_with_error(const HomDistribution& d, const PushforwardProfile& h);

}  // namespace weylscope
