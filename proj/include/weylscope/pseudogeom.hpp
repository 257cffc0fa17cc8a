#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weylscope/jet.hpp"
#include "weylscope/pushforward.hpp"

namespace weylscope {

inline constexpr int kMaxAmbient = 6;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxAmbient, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxAmbient, kMaxAmbient>;

/// R^{p,q}: Q = diag(+1 x p, -1 x q), P the Euclidean form, S = Q as an involution.
class AmbientSpace {
public:
    AmbientSpace(int p, int q);
    /// "p,q".
    static AmbientSpace parse(const std::string& text);

    int p() const { return p_; }
    int q() const { return q_; }
    int dim() const { return p_ + q_; }
    double sign(int a) const { return a < p_ ? 1.0 : -1.0; }
    double form(const Vec& a, const Vec& b) const;
    double norm2(const Vec& a) const { return form(a, a); }
    Mat q_matrix() const;
    Mat p_matrix() const { return Mat::Identity(dim(), dim()); }
    Mat involution() const { return q_matrix(); }
    bool definite() const { return p_ == 0 || q_ == 0; }
    std::string to_string() const;

private:
    int p_, q_;
};

/// Partial derivatives of an embedding at one parameter: d[a][b] = d_u^a d_v^b f.
struct EmbeddingJet {
    int order = 0;
    std::array<std::array<Vec, 4>, 4> d;

    const Vec& point() const { return d[0][0]; }
    const Vec& first(int i) const { return i == 0 ? d[1][0] : d[0][1]; }
    const Vec& second(int i, int j) const { return d[(i == 0) + (j == 0)][(i == 1) + (j == 1)]; }
    const Vec& third(int i, int j, int k) const {
        return d[(i == 0) + (j == 0) + (k == 0)][(i == 1) + (j == 1) + (k == 1)];
    }
};

/// One coordinate chart of an embedded curve or surface.
struct Chart {
    DomainPatch patch;
    std::function<EmbeddingJet(ChartPoint, int order)> jet;
    /// Partition-of-unity weight; unset means 1.
    std::function<double(ChartPoint)> weight;
    std::function<std::optional<std::pair<int, ChartPoint>>(ChartPoint)> transition;
    /// +1 or -1 so that the oriented normal is the intended (outward) one.
    double orientation = 1.0;
};

namespace detail {

template <int O, class Map>
EmbeddingJet evaluate_chart(const Map& map, ChartPoint u, int components, int ambient) {
    using J = Jet<2, O>;
    const std::array<J, 2> x{J::variable(0, u[0]), J::variable(1, u[1])};
    const auto y = map(x);
    EmbeddingJet out;
    out.order = O;
    for (int a = 0; a <= O; ++a)
        for (int b = 0; a + b <= O; ++b) {
            Vec v = Vec::Zero(ambient);
            for (int c = 0; c < components; ++c) v[c] = y[c].derivative({a, b});
            out.d[a][b] = v;
        }
    return out;
}

}  // namespace detail

/// Builds a chart from a map templated on the scalar type:
///   template <class T> std::array<T, 6> map(const std::array<T, 2>& u)
/// Only the first `components` entries are used; the rest of the ambient
/// coordinates are zero. Curves ignore u[1].
template <class Map>
Chart make_chart(DomainPatch patch, int components, int ambient, Map map) {
    Chart c;
    c.patch = patch;
    c.jet = [map, components, ambient](ChartPoint u, int order) {
        switch (order) {
            case 0:
            case 1:
                return detail::evaluate_chart<1>(map, u, components, ambient);
            case 2:
                return detail::evaluate_chart<2>(map, u, components, ambient);
            default:
                return detail::evaluate_chart<3>(map, u, components, ambient);
        }
    };
    return c;
}

/// An immersed curve or surface in R^{p,q}, covered by one or more charts.
class ParametricManifold {
public:
    ParametricManifold(AmbientSpace ambient, int dim, std::string name, std::vector<Chart> charts, bool closed);

    const AmbientSpace& ambient() const { return ambient_; }
    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    bool closed() const { return closed_; }
    const std::vector<Chart>& charts() const { return charts_; }
    std::vector<DomainPatch> patches() const;
    double weight(int chart, ChartPoint u) const;

    EmbeddingJet jet(int chart, ChartPoint u, int order) const;
    Vec point(int chart, ChartPoint u) const { return jet(chart, u, 1).point(); }
    /// Gram matrix of the tangent frame under Q.
    Mat induced_metric(int chart, ChartPoint u) const;

    /// Image under a linear map; an element of O(p,q) gives an isometric copy.
    ParametricManifold transformed(const Mat& a, std::string name) const;

private:
    void validate() const;

    AmbientSpace ambient_;
    int dim_;
    std::string name_;
    std::vector<Chart> charts_;
    bool closed_;
};

/// Metric, first and second derivatives at one point (dim 1 or 2).
struct MetricJet {
    Mat g;
    std::array<Mat, 2> dg;
    std::array<std::array<Mat, 2>, 2> ddg;
};

class MetricField {
public:
    virtual ~MetricField() = default;
    virtual int dim() const = 0;
    virtual DomainPatch domain() const = 0;
    /// order 1 fills g and dg; order 2 also ddg.
    virtual MetricJet jet(ChartPoint u, int order) const = 0;
};

/// Pullback of Q through one chart.
class InducedMetric final : public MetricField {
public:
    InducedMetric(const ParametricManifold& m, int chart) : m_(&m), chart_(chart) {}
    int dim() const override { return m_->dim(); }
    DomainPatch domain() const override { return m_->charts()[chart_].patch; }
    MetricJet jet(ChartPoint u, int order) const override;

private:
    const ParametricManifold* m_;
    int chart_;
};

/// Metric given by components (g11, g12, g22) as functions of (x, y); for
/// dim 1 only g11 is used.
class ComponentMetric final : public MetricField {
public:
    using Components = std::function<std::array<Jet<2, 2>, 3>(const std::array<Jet<2, 2>, 2>&)>;
    ComponentMetric(int dim, DomainPatch domain, Components components)
        : dim_(dim), domain_(domain), components_(std::move(components)) {}
    int dim() const override { return dim_; }
    DomainPatch domain() const override { return domain_; }
    MetricJet jet(ChartPoint u, int order) const override;

private:
    int dim_;
    DomainPatch domain_;
    Components components_;
};

/// lambda * g.
class ScaledMetric final : public MetricField {
public:
    ScaledMetric(std::shared_ptr<const MetricField> base, double lambda) : base_(std::move(base)), lambda_(lambda) {}
    int dim() const override { return base_->dim(); }
    DomainPatch domain() const override { return base_->domain(); }
    MetricJet jet(ChartPoint u, int order) const override;

private:
    std::shared_ptr<const MetricField> base_;
    double lambda_;
};

struct Signature {
    int positive = 0;
    int negative = 0;
    int kernel_dim = 0;
    Mat kernel;  // columns span the kernel
};

/// Eigenvalue counts with |lambda| <= tol treated as zero. A negative tol
/// selects 1e-9 times the spectral scale.
Signature signature_at(const Mat& g, double tol = -1.0);

/// Basis orthonormal under `form` (columns), with signs form(e_a, e_a) = eps_a.
/// Gram-Schmidt pivots on |form(v, v)|; throws degenerate_metric if the span
/// is degenerate.
struct OrthonormalFrame {
    Mat vectors;
    Vec eps;
};
OrthonormalFrame orthonormalize(const Mat& basis, const Mat& form);

struct HypersurfaceSample {
    Vec normal;          // Euclidean unit normal
    double sigma = 0.0;  // Q(normal)
    double gauss_kronecker = 0.0;
    double area_density = 0.0;  // Euclidean
    ChartPoint sigma_gradient{0.0, 0.0};
};

/// Data of a codimension-one chart point. Requires dim = ambient dim - 1.
HypersurfaceSample hypersurface_data(const ParametricManifold& m, int chart, ChartPoint u);
HypersurfaceSample hypersurface_data(const ParametricManifold& m, int chart, const EmbeddingJet& jet);

struct CurvatureTensorField {
    Mat g;
    std::array<std::array<std::array<double, 2>, 2>, 2> christoffel{};  // [m][i][j]
    std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> lower{};  // R_{ijkl}
    /// Frame components with the last pair raised by eps-signs: R_{ab}^{cd}.
    std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> mixed{};
    OrthonormalFrame frame;
    int positive = 0, negative = 0;
    double gauss = 0.0;  // R_{1212} / det g
};

CurvatureTensorField curvature_tensor(const MetricField& g, ChartPoint u);

struct EgregiumResult {
    double intrinsic;
    double extrinsic;
    double discrepancy;
};
/// Intrinsic curvature against the Gauss equation with normal signs eps_r.
EgregiumResult egregium_check(const ParametricManifold& m, int chart, ChartPoint u);

struct EgregiumSweep {
    int samples = 0;
    int rejected = 0;  // draws skipped as too close to degenerate
    double max_discrepancy = 0.0;
    int worst_chart = 0;
    ChartPoint worst_u{0.0, 0.0};
    EgregiumResult worst{};
};

/// egregium_check at `samples` uniform random chart points with
/// |det g| >= 1e-2 |g|^2, cycling through the charts. Determined by the seed.
EgregiumSweep egregium_sweep(const ParametricManifold& m, int samples, std::uint64_t seed);

struct ScanConfig {
    int resolution = 64;
    double zero_tol = 1e-9;         // relative to the scanned function's scale
    double margin_threshold = 1e-6;  // relative to scale / domain extent
};

struct CriticalPoint {
    int chart = 0;
    ChartPoint u{0.0, 0.0};
    Vec kernel;       // kernel vector (metric check only)
    double margin = 0.0;
};

struct LcVerdict {
    bool regular = true;
    std::vector<CriticalPoint> degenerate_points;
    std::vector<CriticalPoint> violations;
    double min_margin = std::numeric_limits<double>::infinity();
};

/// Kernel covectors d g(v, v) at degenerate points found by scanning grid lines.
LcVerdict lc_regular_check(const MetricField& g, const ScanConfig& cfg = {});
/// Same over every chart of the induced metric.
LcVerdict lc_regular_check(const ParametricManifold& m, const ScanConfig& cfg = {});
/// Regular-value check of sigma = Q(normal) on its zero set.
LcVerdict lc_transversal_hypersurface_check(const ParametricManifold& m, const ScanConfig& cfg = {});

}  // namespace weylscope
