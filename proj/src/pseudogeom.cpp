#include "weylscope/pseudogeom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "weylscope/error.hpp"
#include "weylscope/quadrature.hpp"

namespace weylscope {

AmbientSpace::AmbientSpace(int p, int q) : p_(p), q_(q) {
    if (p < 0 || q < 0 || p + q < 1 || p + q > kMaxAmbient)
        throw Error(ErrorKind::validation_error,
                    "ambient signature must have 1 <= p+q <= " + std::to_string(kMaxAmbient));
}

AmbientSpace AmbientSpace::parse(const std::string& text) {
    std::istringstream in(text);
    int p = -1, q = -1;
    char comma = 0;
    if (!(in >> p >> comma >> q) || comma != ',' || !(in >> std::ws).eof())
        throw Error(ErrorKind::validation_error, "ambient must look like p,q: '" + text + "'");
    return {p, q};
}

double AmbientSpace::form(const Vec& a, const Vec& b) const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += sign(i) * a[i] * b[i];
    return s;
}

Mat AmbientSpace::q_matrix() const {
    Mat m = Mat::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) m(i, i) = sign(i);
    return m;
}

std::string AmbientSpace::to_string() const { return std::to_string(p_) + "," + std::to_string(q_); }

ParametricManifold::ParametricManifold(AmbientSpace ambient, int dim, std::string name, std::vector<Chart> charts,
                                       bool closed)
    : ambient_(ambient), dim_(dim), name_(std::move(name)), charts_(std::move(charts)), closed_(closed) {
    if (dim_ < 1 || dim_ > 2 || dim_ >= ambient_.dim())
        throw Error(ErrorKind::validation_error, "manifold dimension must be 1 or 2 and below the ambient one");
    if (charts_.empty()) throw Error(ErrorKind::validation_error, "manifold needs at least one chart");
    for (auto& c : charts_) c.patch.dim = dim_;
    validate();
}

std::vector<DomainPatch> ParametricManifold::patches() const {
    std::vector<DomainPatch> out;
    for (const auto& c : charts_) out.push_back(c.patch);
    return out;
}

double ParametricManifold::weight(int chart, ChartPoint u) const {
    const auto& c = charts_.at(chart);
    return c.weight ? c.weight(u) : 1.0;
}

EmbeddingJet ParametricManifold::jet(int chart, ChartPoint u, int order) const {
    const auto& c = charts_.at(chart);
    for (int a = 0; a < dim_; ++a) {
        const double slack = 1e-9 * (c.patch.hi[a] - c.patch.lo[a]);
        if (!c.patch.periodic[a] && (u[a] < c.patch.lo[a] - slack || u[a] > c.patch.hi[a] + slack))
            throw Error(ErrorKind::out_of_domain, name_ + ": parameter outside chart " + std::to_string(chart));
    }
    return c.jet(u, order);
}

Mat ParametricManifold::induced_metric(int chart, ChartPoint u) const {
    const auto j = jet(chart, u, 1);
    Mat g(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) g(i, k) = ambient_.form(j.first(i), j.first(k));
    return g;
}

ParametricManifold ParametricManifold::transformed(const Mat& a, std::string name) const {
    if (a.rows() != ambient_.dim() || a.cols() != ambient_.dim())
        throw Error(ErrorKind::validation_error, "transform must be square of the ambient dimension");
    std::vector<Chart> charts = charts_;
    for (auto& c : charts) {
        auto inner = c.jet;
        c.jet = [inner, a](ChartPoint u, int order) {
            EmbeddingJet j = inner(u, order);
            for (int x = 0; x <= j.order; ++x)
                for (int y = 0; x + y <= j.order; ++y) j.d[x][y] = a * j.d[x][y];
            return j;
        };
        // The Euclidean orientation of a transformed hypersurface flips with det(a).
        if (a.determinant() < 0) c.orientation = -c.orientation;
    }
    return {ambient_, dim_, std::move(name), std::move(charts), closed_};
}

void ParametricManifold::validate() const {
    constexpr std::array<ChartPoint, 5> probes{{{0.21, 0.34}, {0.67, 0.28}, {0.45, 0.71}, {0.86, 0.62}, {0.5, 0.5}}};
    const double h_rel = std::cbrt(std::numeric_limits<double>::epsilon());
    for (int c = 0; c < static_cast<int>(charts_.size()); ++c) {
        const auto& patch = charts_[c].patch;
        for (const auto& frac : probes) {
            ChartPoint u{patch.lo[0] + frac[0] * (patch.hi[0] - patch.lo[0]),
                         dim_ == 2 ? patch.lo[1] + frac[1] * (patch.hi[1] - patch.lo[1]) : patch.lo[1]};
            const auto j = charts_[c].jet(u, 1);
            Mat d1(ambient_.dim(), dim_);
            for (int i = 0; i < dim_; ++i) d1.col(i) = j.first(i);
            Eigen::JacobiSVD<Mat> svd(d1);
            const auto& sv = svd.singularValues();
            if (!(sv[dim_ - 1] > 1e-10 * sv[0]))
                throw Error(ErrorKind::rank_deficiency, name_ + ": chart differential is not injective");
            for (int i = 0; i < dim_; ++i) {
                const double h = h_rel * (patch.hi[i] - patch.lo[i]);
                ChartPoint up = u, dn = u;
                up[i] += h;
                dn[i] -= h;
                const Vec fd = (charts_[c].jet(up, 1).point() - charts_[c].jet(dn, 1).point()) / (2 * h);
                if ((fd - j.first(i)).norm() > 1e-3 * (j.first(i).norm() + 1e-12))
                    throw Error(ErrorKind::jet_unavailable, name_ + ": jet disagrees with finite differences");
            }
        }
    }
}

MetricJet InducedMetric::jet(ChartPoint u, int order) const {
    const int d = m_->dim();
    const auto& amb = m_->ambient();
    const auto j = m_->jet(chart_, u, order + 1);
    MetricJet out;
    out.g = Mat(d, d);
    for (auto& x : out.dg) x = Mat::Zero(d, d);
    for (auto& row : out.ddg)
        for (auto& x : row) x = Mat::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            out.g(a, b) = amb.form(j.first(a), j.first(b));
            for (int k = 0; k < d; ++k) {
                out.dg[k](a, b) = amb.form(j.second(a, k), j.first(b)) + amb.form(j.first(a), j.second(b, k));
                if (order < 2) continue;
                for (int l = 0; l < d; ++l)
                    out.ddg[k][l](a, b) = amb.form(j.third(a, k, l), j.first(b)) +
                                          amb.form(j.second(a, k), j.second(b, l)) +
                                          amb.form(j.second(a, l), j.second(b, k)) +
                                          amb.form(j.first(a), j.third(b, k, l));
            }
        }
    return out;
}

MetricJet ComponentMetric::jet(ChartPoint u, int order) const {
    using J = Jet<2, 2>;
    const auto c = components_({J::variable(0, u[0]), J::variable(1, u[1])});
    const int d = dim_;
    MetricJet out;
    out.g = Mat(d, d);
    for (auto& x : out.dg) x = Mat::Zero(d, d);
    for (auto& row : out.ddg)
        for (auto& x : row) x = Mat::Zero(d, d);
    auto entry = [&](int a, int b) -> const J& { return c[a + b]; };  // (0,0)->0, (0,1)->1, (1,1)->2
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            out.g(a, b) = entry(a, b).value();
            for (int k = 0; k < d; ++k) {
                out.dg[k](a, b) = entry(a, b).derivative({k == 0, k == 1});
                if (order < 2) continue;
                for (int l = 0; l < d; ++l)
                    out.ddg[k][l](a, b) = entry(a, b).derivative({(k == 0) + (l == 0), (k == 1) + (l == 1)});
            }
        }
    return out;
}

MetricJet ScaledMetric::jet(ChartPoint u, int order) const {
    MetricJet j = base_->jet(u, order);
    j.g *= lambda_;
    for (auto& x : j.dg) x *= lambda_;
    for (auto& row : j.ddg)
        for (auto& x : row) x *= lambda_;
    return j;
}

Signature signature_at(const Mat& g, double tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const auto& ev = es.eigenvalues();
    if (tol < 0) tol = 1e-9 * ev.cwiseAbs().maxCoeff();
    Signature s;
    std::vector<int> zero;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] > tol)
            ++s.positive;
        else if (ev[i] < -tol)
            ++s.negative;
        else
            zero.push_back(i);
    }
    s.kernel_dim = static_cast<int>(zero.size());
    s.kernel = Mat(g.rows(), s.kernel_dim);
    for (int k = 0; k < s.kernel_dim; ++k) s.kernel.col(k) = es.eigenvectors().col(zero[k]);
    return s;
}

OrthonormalFrame orthonormalize(const Mat& basis, const Mat& form) {
    const int n = static_cast<int>(basis.cols());
    std::vector<Vec> left;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        left.emplace_back(basis.col(i));
        scale = std::max(scale, basis.col(i).squaredNorm());
    }
    scale *= form.cwiseAbs().maxCoeff();
    OrthonormalFrame f;
    f.vectors = Mat(basis.rows(), n);
    f.eps = Vec(n);
    for (int k = 0; k < n; ++k) {
        int best = -1;
        double best_q = -1.0;
        for (int i = 0; i < static_cast<int>(left.size()); ++i) {
            Vec v = left[i];
            for (int a = 0; a < k; ++a) v -= f.eps[a] * (v.dot(form * f.vectors.col(a))) * f.vectors.col(a);
            left[i] = v;
            const double q = std::abs(v.dot(form * v));
            if (q > best_q) {
                best_q = q;
                best = i;
            }
        }
        if (!(best_q > 1e-13 * scale)) throw Error(ErrorKind::degenerate_metric, "span is degenerate for the form");
        const Vec& v = left[best];
        const double q = v.dot(form * v);
        f.eps[k] = q > 0 ? 1.0 : -1.0;
        f.vectors.col(k) = v / std::sqrt(std::abs(q));
        left.erase(left.begin() + best);
    }
    return f;
}

HypersurfaceSample hypersurface_data(const ParametricManifold& m, int chart, ChartPoint u) {
    return hypersurface_data(m, chart, m.jet(chart, u, 2));
}

HypersurfaceSample hypersurface_data(const ParametricManifold& m, int chart, const EmbeddingJet& j) {
    const int n = m.ambient().dim();
    const int d = m.dim();
    if (d != n - 1) throw Error(ErrorKind::validation_error, m.name() + " is not a hypersurface of its ambient");
    const double orient = m.charts()[chart].orientation;
    HypersurfaceSample s;
    Vec nu(n);
    if (n == 2) {
        const Vec& t = j.first(0);
        nu << -t[1], t[0];
    } else if (n == 3) {
        const Eigen::Vector3d a = j.first(0).head<3>(), b = j.first(1).head<3>();
        nu = a.cross(b);
    } else {
        // Kernel of the transposed differential, oriented so det[d1 | nu] > 0.
        Mat d1(n, d);
        for (int i = 0; i < d; ++i) d1.col(i) = j.first(i);
        Eigen::HouseholderQR<Mat> qr(d1);
        nu = Mat(qr.householderQ()).col(n - 1);
        Mat full(n, n);
        full << d1, nu;
        if (full.determinant() < 0) nu = -nu;
    }
    const double len = nu.norm();
    double first_scale = 0.0;
    for (int i = 0; i < d; ++i) first_scale = std::max(first_scale, j.first(i).squaredNorm());
    if (!(len > 1e-12 * std::pow(first_scale, 0.5 * d)))
        throw Error(ErrorKind::rank_deficiency, m.name() + ": tangent frame is rank deficient");
    nu *= orient / len;
    s.normal = nu;
    Mat first(d, d), second(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            first(a, b) = j.first(a).dot(j.first(b));
            second(a, b) = nu.dot(j.second(a, b));
        }
    const double det_first = first.determinant();
    s.area_density = std::sqrt(det_first);
    s.gauss_kronecker = second.determinant() / det_first;
    s.sigma = m.ambient().norm2(nu);
    // Weingarten: d_k nu = -II_kj I^{jl} f_l, so d_k sigma = 2 Q(nu, d_k nu).
    const Mat inv = first.inverse();
    Vec q_nu_f(d);
    for (int l = 0; l < d; ++l) q_nu_f[l] = m.ambient().form(nu, j.first(l));
    for (int k = 0; k < d; ++k) {
        double acc = 0.0;
        for (int a = 0; a < d; ++a)
            for (int l = 0; l < d; ++l) acc += second(k, a) * inv(a, l) * q_nu_f[l];
        s.sigma_gradient[k] = -2.0 * acc;
    }
    return s;
}

CurvatureTensorField curvature_tensor(const MetricField& field, ChartPoint u) {
    if (field.dim() != 2) throw Error(ErrorKind::validation_error, "curvature tensors are provided for surfaces");
    const MetricJet j = field.jet(u, 2);
    const Signature sig = signature_at(j.g);
    if (sig.kernel_dim > 0) throw Error(ErrorKind::degenerate_metric, "metric is degenerate at the point");
    CurvatureTensorField out;
    out.g = j.g;
    out.positive = sig.positive;
    out.negative = sig.negative;
    const Mat gi = j.g.inverse();
    std::array<Mat, 2> dgi;
    for (int l = 0; l < 2; ++l) dgi[l] = -gi * j.dg[l] * gi;
    // first-kind symbols and their derivatives
    auto gamma1 = [&](int k, int a, int b) { return 0.5 * (j.dg[a](k, b) + j.dg[b](k, a) - j.dg[k](a, b)); };
    auto dgamma1 = [&](int l, int k, int a, int b) {
        return 0.5 * (j.ddg[l][a](k, b) + j.ddg[l][b](k, a) - j.ddg[l][k](a, b));
    };
    double dgamma[2][2][2][2];  // [l][m][a][b] = d_l Gamma^m_ab
    for (int m = 0; m < 2; ++m)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double c = 0.0;
                for (int k = 0; k < 2; ++k) c += gi(m, k) * gamma1(k, a, b);
                out.christoffel[m][a][b] = c;
                for (int l = 0; l < 2; ++l) {
                    double d = 0.0;
                    for (int k = 0; k < 2; ++k) d += dgi[l](m, k) * gamma1(k, a, b) + gi(m, k) * dgamma1(l, k, a, b);
                    dgamma[l][m][a][b] = d;
                }
            }
    const auto& G = out.christoffel;
    double upper[2][2][2][2];  // R^m_{jkl}
    for (int m = 0; m < 2; ++m)
        for (int jj = 0; jj < 2; ++jj)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    double r = dgamma[k][m][l][jj] - dgamma[l][m][k][jj];
                    for (int p = 0; p < 2; ++p) r += G[m][k][p] * G[p][l][jj] - G[m][l][p] * G[p][k][jj];
                    upper[m][jj][k][l] = r;
                }
    for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    double r = 0.0;
                    for (int m = 0; m < 2; ++m) r += j.g(i, m) * upper[m][jj][k][l];
                    out.lower[i][jj][k][l] = r;
                }
    out.gauss = out.lower[0][1][0][1] / j.g.determinant();
    out.frame = orthonormalize(Mat::Identity(2, 2), j.g);
    const Mat& e = out.frame.vectors;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    double r = 0.0;
                    for (int i = 0; i < 2; ++i)
                        for (int jj = 0; jj < 2; ++jj)
                            for (int k = 0; k < 2; ++k)
                                for (int l = 0; l < 2; ++l)
                                    r += out.lower[i][jj][k][l] * e(i, a) * e(jj, b) * e(k, c) * e(l, d);
                    out.mixed[a][b][c][d] = out.frame.eps[c] * out.frame.eps[d] * r;
                }
    return out;
}

EgregiumResult egregium_check(const ParametricManifold& m, int chart, ChartPoint u) {
    if (m.dim() != 2) throw Error(ErrorKind::validation_error, "egregium check needs a surface");
    const auto j = m.jet(chart, u, 3);
    const auto& amb = m.ambient();
    Mat g(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) g(a, b) = amb.form(j.first(a), j.first(b));
    const double det = g.determinant();
    if (std::abs(det) < 1e-9 * g.cwiseAbs().maxCoeff() * g.cwiseAbs().maxCoeff())
        throw Error(ErrorKind::degenerate_point, m.name() + ": induced metric is degenerate at the point");
    const double intrinsic = curvature_tensor(InducedMetric(m, chart), u).gauss;
    Mat d1(amb.dim(), 2);
    d1 << j.first(0), j.first(1);
    const Mat constraint = d1.transpose() * amb.q_matrix();
    const Mat normals = Eigen::FullPivLU<Mat>(constraint).kernel();
    const auto frame = orthonormalize(normals, amb.q_matrix());
    double acc = 0.0;
    for (int r = 0; r < frame.vectors.cols(); ++r) {
        const Vec nr = frame.vectors.col(r);
        const double h11 = amb.form(j.second(0, 0), nr);
        const double h22 = amb.form(j.second(1, 1), nr);
        const double h12 = amb.form(j.second(0, 1), nr);
        acc += frame.eps[r] * (h11 * h22 - h12 * h12);
    }
    const double extrinsic = acc / det;
    return {intrinsic, extrinsic, std::abs(intrinsic - extrinsic)};
}

EgregiumSweep egregium_sweep(const ParametricManifold& m, int samples, std::uint64_t seed) {
    if (samples < 1) throw Error(ErrorKind::validation_error, "egregium sweep needs at least one sample");
    std::mt19937_64 rng(seed);
    EgregiumSweep out;
    const int charts = static_cast<int>(m.charts().size());
    // A surface that is degenerate almost everywhere would never finish.
    const long long max_draws = 1000LL * samples;
    long long draws = 0;
    while (out.samples < samples) {
        if (++draws > max_draws)
            throw Error(ErrorKind::degenerate_metric, m.name() + ": too few nondegenerate sample points");
        const int chart = out.samples % charts;
        const auto& patch = m.charts()[chart].patch;
        std::uniform_real_distribution<double> ux(patch.lo[0], patch.hi[0]), uy(patch.lo[1], patch.hi[1]);
        const ChartPoint u{ux(rng), uy(rng)};
        if (m.weight(chart, u) <= 0) continue;
        const Mat g = m.induced_metric(chart, u);
        if (std::abs(g.determinant()) < 1e-2 * g.squaredNorm()) {
            ++out.rejected;
            continue;
        }
        const auto r = egregium_check(m, chart, u);
        if (out.samples == 0 || r.discrepancy > out.max_discrepancy) {
            out.max_discrepancy = r.discrepancy;
            out.worst_chart = chart;
            out.worst_u = u;
            out.worst = r;
        }
        ++out.samples;
    }
    return out;
}

namespace {


// Zeros of f on the grid lines of a patch: exact zeros at samples, sign
// changes refined by bisection, and near-zero minima of |f| by golden section.
std::vector<ChartPoint> scan_zeros(const DomainPatch& patch, int res, const std::function<double(ChartPoint)>& f,
                                   double zero_tol, double& scale_out) {
    const int dims = patch.dim;
    const int nu = res + 1;
    const int nv = dims == 2 ? res + 1 : 1;
    auto coord = [&](int axis, double k) { return patch.lo[axis] + (patch.hi[axis] - patch.lo[axis]) * k / res; };
    std::vector<double> val(static_cast<std::size_t>(nu) * nv);
    double scale = 0.0;
    for (int jv = 0; jv < nv; ++jv)
        for (int iu = 0; iu < nu; ++iu) {
            const double x = f({coord(0, iu), dims == 2 ? coord(1, jv) : patch.lo[1]});
            val[static_cast<std::size_t>(jv) * nu + iu] = x;
            scale = std::max(scale, std::abs(x));
        }
    scale_out = scale;
    const double tol = zero_tol * (scale > 0 ? scale : 1.0);
    std::vector<ChartPoint> hits;
    auto scan_line = [&](int axis, int fixed) {
        const int n = axis == 0 ? nu : nv;
        auto point = [&](double k) {
            ChartPoint u{};
            u[axis] = coord(axis, k);
            u[1 - axis] = dims == 2 ? coord(1 - axis, fixed) : patch.lo[1];
            return u;
        };
        auto sample = [&](int k) {
            return axis == 0 ? val[static_cast<std::size_t>(fixed) * nu + k] : val[static_cast<std::size_t>(k) * nu + fixed];
        };
        for (int k = 0; k < n; ++k) {
            const double a = sample(k);
            if (std::abs(a) <= tol) {
                hits.push_back(point(k));
                continue;
            }
            if (k + 1 < n) {
                const double b = sample(k + 1);
                if (std::abs(b) > tol && a * b < 0) {
                    auto g = [&](double s) { return f(point(s)); };
                    hits.push_back(point(bisect_root(g, k, k + 1, a, b, 60)));
                    continue;
                }
            }
            if (k > 0 && k + 1 < n) {
                const double l = sample(k - 1), r = sample(k + 1);
                if (std::abs(a) <= std::abs(l) && std::abs(a) <= std::abs(r) && a * l > 0 && a * r > 0 &&
                    std::abs(a) < 0.1 * scale) {
                    auto g = [&](double s) { return std::abs(f(point(s))); };
                    const double s = golden_min(g, k - 1, k + 1, 80);
                    if (g(s) <= tol) hits.push_back(point(s));
                }
            }
        }
    };
    for (int jv = 0; jv < nv; ++jv) scan_line(0, jv);
    if (dims == 2)
        for (int iu = 0; iu < nu; ++iu) scan_line(1, iu);
    return hits;
}

double patch_extent(const DomainPatch& p) {
    double e = p.hi[0] - p.lo[0];
    if (p.dim == 2) e = std::max(e, p.hi[1] - p.lo[1]);
    return e;
}

// Eigenvalue of least magnitude with its eigenvector.
std::pair<double, Vec> smallest_eigen(const Mat& g) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    int best = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()[i]) < std::abs(es.eigenvalues()[best])) best = i;
    return {es.eigenvalues()[best], es.eigenvectors().col(best)};
}

void metric_scan(const MetricField& g, int chart, const ScanConfig& cfg, LcVerdict& verdict) {
    const auto patch = [&] {
        auto p = g.domain();
        p.dim = g.dim();
        return p;
    }();
    double scale = 0.0;
    const auto hits = scan_zeros(
        patch, cfg.resolution, [&](ChartPoint u) { return g.jet(u, 0).g.determinant(); }, cfg.zero_tol, scale);
    const double metric_scale = std::pow(std::max(scale, 1e-300), 1.0 / g.dim());
    const double threshold = cfg.margin_threshold * metric_scale / patch_extent(patch);
    for (const auto& u : hits) {
        const MetricJet j = g.jet(u, 1);
        // det g is smooth across eigenvalue crossings, so it locates zeros; the
        // kernel comes from the eigenvalue of least magnitude there.
        const Vec v = smallest_eigen(j.g).second;
        double norm2 = 0.0;
        for (int k = 0; k < g.dim(); ++k) {
            const double c = v.dot(j.dg[k] * v);
            norm2 += c * c;
        }
        CriticalPoint cp{chart, u, v, std::sqrt(norm2)};
        verdict.min_margin = std::min(verdict.min_margin, cp.margin);
        verdict.degenerate_points.push_back(cp);
        if (!(cp.margin > threshold)) verdict.violations.push_back(cp);
    }
    verdict.regular = verdict.violations.empty();
}

}  // namespace

LcVerdict lc_regular_check(const MetricField& g, const ScanConfig& cfg) {
    LcVerdict v;
    metric_scan(g, 0, cfg, v);
    return v;
}

LcVerdict lc_regular_check(const ParametricManifold& m, const ScanConfig& cfg) {
    LcVerdict v;
    for (int c = 0; c < static_cast<int>(m.charts().size()); ++c) metric_scan(InducedMetric(m, c), c, cfg, v);
    return v;
}

LcVerdict lc_transversal_hypersurface_check(const ParametricManifold& m, const ScanConfig& cfg) {
    LcVerdict v;
    for (int c = 0; c < static_cast<int>(m.charts().size()); ++c) {
        const auto& patch = m.charts()[c].patch;
        double scale = 0.0;
        const auto hits = scan_zeros(
            patch, cfg.resolution, [&](ChartPoint u) { return hypersurface_data(m, c, u).sigma; }, cfg.zero_tol,
            scale);
        const double threshold = cfg.margin_threshold * std::max(scale, 1e-300) / patch_extent(patch);
        for (const auto& u : hits) {
            const auto s = hypersurface_data(m, c, u);
            const double g = m.dim() == 2 ? std::hypot(s.sigma_gradient[0], s.sigma_gradient[1])
                                          : std::abs(s.sigma_gradient[0]);
            CriticalPoint cp{c, u, Vec(), g};
            v.min_margin = std::min(v.min_margin, g);
            v.degenerate_points.push_back(cp);
            if (!(g > threshold)) v.violations.push_back(cp);
        }
    }
    v.regular = v.violations.empty();
    return v;
}

}  // namespace weylscope
