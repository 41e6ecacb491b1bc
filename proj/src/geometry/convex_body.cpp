#include "anisolab/geometry/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anisolab/core/error.hpp"
#include "anisolab/core/special.hpp"
#include "anisolab/core/streams.hpp"

namespace anisolab {

namespace {

constexpr double kMinAcceptance = 1e-6;
constexpr std::size_t kPolytopeVolumeSamples = 1u << 21;
constexpr std::size_t kMaxVertexCombos = 2'000'000;
constexpr std::size_t kBlock = 256;

// Fills a structure-of-arrays block with `count` samples from `draw`.
template <class Draw>
void fill_block(int n, std::size_t count, std::vector<double>& soa, Draw&& draw) {
  soa.resize(static_cast<std::size_t>(n) * count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec y = draw();
    for (int k = 0; k < n; ++k) soa[k * count + i] = y[k];
  }
}

double lq_norm(const Vec& x, double q) {
  if (q == 1.0) return x.lpNorm<1>();
  if (q == 2.0) return x.norm();
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, q);
  return m * std::pow(s, 1.0 / q);
}

// Solve the n x n system by partial-pivot LU; false if singular.
bool solve_square(const Mat& a, const Vec& b, Vec& x) {
  Eigen::FullPivLU<Mat> lu(a);
  if (lu.rank() < a.rows()) return false;
  x = lu.solve(b);
  return true;
}

// Iterate over all n-subsets of {0..m-1}.
template <class Fn>
void for_each_subset(int m, int n, Fn&& fn) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = n - 1;
    while (i >= 0 && idx[i] == m - n + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double binomial(int m, int n) {
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m - n + 1.0));
}

}  // namespace

const char* to_string(Shape s) {
  switch (s) {
    case Shape::ball: return "ball";
    case Shape::ellipsoid: return "ellipsoid";
    case Shape::box: return "box";
    case Shape::polytope: return "polytope";
    case Shape::lq_ball: return "lq-ball";
  }
  return "?";
}

ConvexBody ConvexBody::ball(int n, double radius) {
  require(n >= 1 && n <= kMaxDim, "ball: dimension out of range");
  require(radius > 0.0 && std::isfinite(radius), "ball: radius must be positive");
  ConvexBody b;
  b.shape_ = Shape::ball;
  b.n_ = n;
  b.radius_ = radius;
  b.finish();
  return b;
}

ConvexBody ConvexBody::ellipsoid(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  require(n >= 1 && n <= kMaxDim && a.cols() == n, "ellipsoid: matrix must be square");
  require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()),
          "ellipsoid: matrix must be symmetric");
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) fail(ErrorCode::invalid_argument, "ellipsoid: matrix must be positive definite");
  ConvexBody b;
  b.shape_ = Shape::ellipsoid;
  b.n_ = n;
  b.form_ = a;
  // A = L L^T, so x = L^{-T} u maps the unit ball onto K.
  const Mat l = llt.matrixL();
  b.sampler_map_ = l.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
  b.finish();
  return b;
}

ConvexBody ConvexBody::box(const Vec& half_widths) {
  const int n = static_cast<int>(half_widths.size());
  require(n >= 1 && n <= kMaxDim, "box: dimension out of range");
  require((half_widths.array() > 0.0).all() && half_widths.allFinite(),
          "box: half-widths must be positive");
  ConvexBody b;
  b.shape_ = Shape::box;
  b.n_ = n;
  b.bbox_ = half_widths;
  b.finish();
  return b;
}

ConvexBody ConvexBody::polytope(const std::vector<Vec>& normals) {
  require(!normals.empty(), "polytope: need at least one normal");
  const int n = static_cast<int>(normals.front().size());
  require(n >= 1 && n <= kMaxDim, "polytope: dimension out of range");
  for (const Vec& a : normals) {
    require(a.size() == n, "polytope: normals must share a dimension");
    require(a.allFinite(), "polytope: normals must be finite");
  }
  ConvexBody b;
  b.shape_ = Shape::polytope;
  b.n_ = n;
  b.normals_ = normals;
  b.finish();
  return b;
}

ConvexBody ConvexBody::lq_ball(int n, double q, double scale) {
  require(n >= 1 && n <= kMaxDim, "lq-ball: dimension out of range");
  require(q >= 1.0 && std::isfinite(q), "lq-ball: exponent q must be >= 1");
  require(scale > 0.0 && std::isfinite(scale), "lq-ball: scale must be positive");
  ConvexBody b;
  b.shape_ = Shape::lq_ball;
  b.n_ = n;
  b.q_ = q;
  b.radius_ = scale;
  b.finish();
  return b;
}

void ConvexBody::finish() {
  const int n = n_;
  kernel_rows_.clear();
  switch (shape_) {
    case Shape::ball: {
      bbox_ = Vec::Constant(n, radius_);
      circumradius_ = radius_;
      inradius_ = radius_;
      volume_.value = unit_ball_volume(n) * std::pow(radius_, n);
      const double inv = 1.0 / (radius_ * radius_);
      kernel_rows_.assign(static_cast<std::size_t>(n * n), 0.0);
      for (int i = 0; i < n; ++i) kernel_rows_[i * n + i] = inv;
      break;
    }
    case Shape::ellipsoid: {
      // Extent along e_k is sqrt((A^{-1})_kk); circumradius is 1/sqrt(lambda_min).
      const Mat inv = form_.inverse();
      bbox_ = inv.diagonal().cwiseSqrt();
      Eigen::SelfAdjointEigenSolver<Mat> eig(form_);
      circumradius_ = 1.0 / std::sqrt(eig.eigenvalues().minCoeff());
      inradius_ = 1.0 / std::sqrt(eig.eigenvalues().maxCoeff());
      volume_.value = unit_ball_volume(n) / std::sqrt(form_.determinant());
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) kernel_rows_.push_back(form_(r, c));
      break;
    }
    case Shape::box: {
      circumradius_ = bbox_.norm();
      inradius_ = bbox_.minCoeff();
      volume_.value = std::pow(2.0, n) * bbox_.prod();
      kernel_rows_.assign(static_cast<std::size_t>(n * n), 0.0);
      for (int i = 0; i < n; ++i) kernel_rows_[i * n + i] = 1.0 / bbox_[i];
      break;
    }
    case Shape::lq_ball: {
      bbox_ = Vec::Constant(n, radius_);
      circumradius_ = q_ >= 2.0 ? radius_ * std::pow(n, 0.5 - 1.0 / q_) : radius_;
      inradius_ = q_ <= 2.0 ? radius_ * std::pow(n, 0.5 - 1.0 / q_) : radius_;
      const double log_unit = n * (std::log(2.0) + std::lgamma(1.0 + 1.0 / q_)) -
                              std::lgamma(1.0 + n / q_);
      volume_.value = std::exp(log_unit) * std::pow(radius_, n);
      break;
    }
    case Shape::polytope: {
      const int m = static_cast<int>(normals_.size());
      Eigen::MatrixXd a(m, n);  // m may exceed the fixed-size capacity
      for (int i = 0; i < m; ++i) a.row(i) = normals_[i].transpose();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
      const double smin = svd.singularValues().minCoeff();
      if (m < n || !(smin > 1e-12 * svd.singularValues().maxCoeff()))
        fail(ErrorCode::degenerate_body, "polytope: normals do not span R^n (unbounded body)");
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) kernel_rows_.push_back(a(i, k));
      inradius_ = 1.0 / a.rowwise().norm().maxCoeff();

      const double combos = binomial(m, n) * std::pow(2.0, n);
      if (combos <= static_cast<double>(kMaxVertexCombos)) {
        // Vertices solve n active constraints a_i . x = +-1 and satisfy the rest.
        bbox_ = Vec::Zero(n);
        circumradius_ = 0.0;
        Mat sub(n, n);
        Vec rhs(n), x(n);
        for_each_subset(m, n, [&](const std::vector<int>& idx) {
          for (int r = 0; r < n; ++r) sub.row(r) = a.row(idx[r]);
          for (unsigned signs = 0; signs < (1u << n); ++signs) {
            for (int r = 0; r < n; ++r) rhs[r] = (signs >> r) & 1u ? -1.0 : 1.0;
            if (!solve_square(sub, rhs, x)) return;
            if ((a * x).cwiseAbs().maxCoeff() > 1.0 + 1e-9) continue;
            bbox_ = bbox_.cwiseMax(x.cwiseAbs());
            circumradius_ = std::max(circumradius_, x.norm());
          }
        });
      } else {
        // |x| <= |Ax|_2 / sigma_min <= sqrt(m) / sigma_min.
        const double bound = std::sqrt(static_cast<double>(m)) / smin;
        bbox_ = Vec::Constant(n, bound);
        circumradius_ = bound;
      }
      volume_ = volume(McConfig{kPolytopeVolumeSamples, 0, 32, 1});
      break;
    }
  }
  acceptance_ = volume_.value / (std::pow(2.0, n) * bbox_.prod());
  if (!(acceptance_ >= kMinAcceptance))
    fail(ErrorCode::degenerate_body, "rejection acceptance rate below 1e-6");
}

void ConvexBody::check_dim(const Vec& x) const {
  if (x.size() != n_) fail(ErrorCode::invalid_argument, "dimension mismatch");
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  os << to_string(shape_) << "(n=" << n_;
  switch (shape_) {
    case Shape::ball: os << ", radius=" << radius_; break;
    case Shape::lq_ball: os << ", q=" << q_ << ", scale=" << radius_; break;
    case Shape::box: os << ", half_widths=" << bbox_.transpose(); break;
    case Shape::ellipsoid: os << ", det=" << form_.determinant(); break;
    case Shape::polytope: os << ", facets=" << normals_.size(); break;
  }
  os << ")";
  return os.str();
}

double ConvexBody::gauge(const Vec& x) const {
  check_dim(x);
  switch (shape_) {
    case Shape::ball: return x.norm() / radius_;
    case Shape::ellipsoid: return std::sqrt(std::max(x.dot(form_ * x), 0.0));
    case Shape::box: return x.cwiseQuotient(bbox_).cwiseAbs().maxCoeff();
    case Shape::lq_ball: return lq_norm(x, q_) / radius_;
    case Shape::polytope: {
      double best = 0.0;
      for (const Vec& a : normals_) best = std::max(best, std::abs(a.dot(x)));
      return best;
    }
  }
  return 0.0;
}

void ConvexBody::gauge_batch(const simd::PointBlock& pts, double* out) const {
  if (pts.dim != n_) fail(ErrorCode::invalid_argument, "dimension mismatch");
  const simd::KernelTable& k = simd::kernels();
  switch (shape_) {
    case Shape::ball:
    case Shape::ellipsoid:
      k.quad_form_sqrt(kernel_rows_.data(), pts, out);
      return;
    case Shape::box:
    case Shape::polytope:
      k.max_abs_dot(kernel_rows_.data(), static_cast<int>(kernel_rows_.size() / n_), pts, out);
      return;
    case Shape::lq_ball: {
      Vec x(n_);
      for (std::size_t i = 0; i < pts.count; ++i) {
        for (int d = 0; d < n_; ++d) x[d] = pts.data[d * pts.stride + i];
        out[i] = lq_norm(x, q_) / radius_;
      }
      return;
    }
  }
}

Estimate ConvexBody::volume(const McConfig& mc) const {
  if (shape_ != Shape::polytope) {
    Estimate e = volume_;
    e.seed = mc.seed;
    return e;
  }
  const double box_volume = std::pow(2.0, n_) * bbox_.prod();
  std::vector<double> soa, g(kBlock);
  Estimate hit = mc_mean(mc, streams::body_volume, [&](Philox& rng, std::size_t count) {
    double inside = 0.0;
    for (std::size_t done = 0; done < count; done += kBlock) {
      const std::size_t m = std::min(kBlock, count - done);
      fill_block(n_, m, soa, [&] {
        Vec y(n_);
        for (int k = 0; k < n_; ++k) y[k] = bbox_[k] * (2.0 * rng.uniform() - 1.0);
        return y;
      });
      gauge_batch({soa.data(), m, m, n_}, g.data());
      for (std::size_t i = 0; i < m; ++i) inside += g[i] <= 1.0 ? 1.0 : 0.0;
    }
    return inside;
  });
  if (hit.value == 0.0) fail(ErrorCode::degenerate_body, "polytope volume estimate is zero");
  hit.value *= box_volume;
  hit.std_error *= box_volume;
  return hit;
}

Vec ConvexBody::sample_uniform(Philox& rng) const {
  switch (shape_) {
    case Shape::ball: return radius_ * random_in_unit_ball(n_, rng);
    case Shape::ellipsoid: return sampler_map_ * random_in_unit_ball(n_, rng);
    case Shape::box: {
      Vec x(n_);
      for (int k = 0; k < n_; ++k) x[k] = bbox_[k] * (2.0 * rng.uniform() - 1.0);
      return x;
    }
    case Shape::polytope:
    case Shape::lq_ball: break;
  }
  // Rejection from the bounding box; expected attempts 1/acceptance.
  const std::size_t budget = static_cast<std::size_t>(std::min(1e9, 100.0 / acceptance_));
  Vec x(n_);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    for (int k = 0; k < n_; ++k) x[k] = bbox_[k] * (2.0 * rng.uniform() - 1.0);
    if (gauge(x) <= 1.0) return x;
  }
  fail(ErrorCode::degenerate_body, "rejection sampler exhausted its attempt budget");
}

std::optional<Interval> ConvexBody::chord(const Vec& p, const Vec& d, double r) const {
  check_dim(p);
  check_dim(d);
  require(r >= 0.0, "chord: radius must be nonnegative");
  auto quadratic = [&](const Mat& a) -> std::optional<Interval> {
    const double qa = d.dot(a * d);
    const double qb = p.dot(a * d);
    const double qc = p.dot(a * p) - r * r;
    if (qa <= 0.0) return qc <= 0.0 ? std::optional<Interval>(Interval{-kInf, kInf}) : std::nullopt;
    const double disc = qb * qb - qa * qc;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    // Cancellation-free pair of roots.
    const double big = qb >= 0.0 ? -(qb + root) : -(qb - root);
    if (big == 0.0) return Interval{0.0, 0.0};
    double s0 = big / qa, s1 = qc / big;
    if (s0 > s1) std::swap(s0, s1);
    return Interval{s0, s1};
  };
  auto slabs = [&](const std::vector<Vec>& rows) -> std::optional<Interval> {
    double lo = -kInf, hi = kInf;
    for (const Vec& a : rows) {
      const double ap = a.dot(p), ad = a.dot(d);
      if (ad == 0.0) {
        if (std::abs(ap) > r) return std::nullopt;
        continue;
      }
      double s0 = (-r - ap) / ad, s1 = (r - ap) / ad;
      if (s0 > s1) std::swap(s0, s1);
      lo = std::max(lo, s0);
      hi = std::min(hi, s1);
    }
    if (lo > hi) return std::nullopt;
    return Interval{lo, hi};
  };
  switch (shape_) {
    case Shape::ball: return quadratic(Mat::Identity(n_, n_) / (radius_ * radius_));
    case Shape::ellipsoid: return quadratic(form_);
    case Shape::box: {
      std::vector<Vec> rows;
      for (int k = 0; k < n_; ++k) rows.push_back(Vec::Unit(n_, k) / bbox_[k]);
      return slabs(rows);
    }
    case Shape::polytope: return slabs(normals_);
    case Shape::lq_ball: break;
  }
  // Generic convex gauge: locate the minimum of h(s) = gauge(p + s d), then
  // bisect each side for the level r.
  const double gd = gauge(d);
  if (gd == 0.0) return gauge(p) <= r ? std::optional<Interval>(Interval{-kInf, kInf}) : std::nullopt;
  const double span = (r + gauge(p)) / gd + 1.0;
  auto h = [&](double s) { return gauge(p + s * d); };
  double lo = -span, hi = span;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), e = lo + invphi * (hi - lo);
  double hc = h(c), he = h(e);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * span; ++it) {
    if (hc < he) {
      hi = e; e = c; he = hc;
      c = hi - invphi * (hi - lo); hc = h(c);
    } else {
      lo = c; c = e; hc = he;
      e = lo + invphi * (hi - lo); he = h(e);
    }
  }
  const double smin = 0.5 * (lo + hi);
  if (h(smin) > r) return std::nullopt;
  auto crossing = [&](double inside, double outside) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      (h(mid) <= r ? inside : outside) = mid;
    }
    return inside;
  };
  return Interval{crossing(smin, -span), crossing(smin, span)};
}

bool has_closed_form_moment(const ConvexBody& body, double p) {
  if (body.dimension() == 1) return true;
  switch (body.shape()) {
    case Shape::ball:
    case Shape::ellipsoid: return true;
    case Shape::box: return p == 2.0;
    case Shape::lq_ball: return body.q() == 2.0;
    case Shape::polytope: return false;
  }
  return false;
}

namespace {

double closed_form_moment(const ConvexBody& body, double p, const Vec& z) {
  const int n = body.dimension();
  if (n == 1) {
    // K = [-c, c]: ((1+p)/2) * 2 c^{p+1} |z|^p / (p+1).
    const double c = body.bounding_half_widths()[0];
    return std::pow(c, p + 1.0) * std::pow(std::abs(z[0]), p);
  }
  const double k = k_constant(p, n);
  switch (body.shape()) {
    case Shape::ball:
      return std::pow(body.radius(), n + p) * k * std::pow(z.norm(), p) / 2.0;
    case Shape::lq_ball:
      return std::pow(body.scale(), n + p) * k * std::pow(z.norm(), p) / 2.0;
    case Shape::ellipsoid: {
      // K = L^{-T} B^n with A = L L^T; the integral pulls back to the ball.
      Eigen::LLT<Mat> llt(body.form());
      const Vec w = llt.matrixL().solve(z);
      return k * std::pow(w.norm(), p) / (2.0 * std::sqrt(body.form().determinant()));
    }
    case Shape::box: {
      // p = 2: cross terms vanish by symmetry.
      const Vec& h = body.half_widths();
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += z[j] * z[j] * h[j] * h[j] / 3.0;
      return (n + 2.0) / 2.0 * body.volume().value * s;
    }
    case Shape::polytope: break;
  }
  fail(ErrorCode::invalid_argument, "no closed-form moment norm for this body");
}

}  // namespace

Estimate moment_norm_p(const MomentNormSpec& spec, const Vec& z) {
  require(spec.body != nullptr, "moment_norm_p: body is null");
  require(spec.p >= 1.0 && std::isfinite(spec.p), "moment_norm_p: p must be >= 1");
  const ConvexBody& body = *spec.body;
  if (z.size() != body.dimension()) fail(ErrorCode::invalid_argument, "dimension mismatch");
  const int n = body.dimension();
  const double p = spec.p;
  const bool closed = spec.estimator == MomentEstimator::closed_form ||
                      (spec.estimator == MomentEstimator::automatic && has_closed_form_moment(body, p));
  if (closed) {
    Estimate e;
    e.value = closed_form_moment(body, p, z);
    e.seed = spec.mc.seed;
    return e;
  }
  require(spec.mc.samples > 0, "moment_norm_p: Monte Carlo needs samples > 0");

  // Exact samplers use |K| E|z.Y|^p; rejection shapes integrate the
  // indicator over the bounding box so no volume estimate enters.
  const bool exact_sampler = body.shape() == Shape::ball || body.shape() == Shape::ellipsoid ||
                             body.shape() == Shape::box;
  const Vec& bb = body.bounding_half_widths();
  const double scale = (n + p) / 2.0 * (exact_sampler ? body.volume().value : std::pow(2.0, n) * bb.prod());
  const simd::KernelTable& kern = simd::kernels();
  Estimate e = mc_mean(spec.mc, streams::moment_norm, [&](Philox& rng, std::size_t count) {
    std::vector<double> soa, vals(kBlock), g(kBlock);
    CompensatedSum sum;
    for (std::size_t done = 0; done < count; done += kBlock) {
      const std::size_t m = std::min(kBlock, count - done);
      fill_block(n, m, soa, [&] {
        if (exact_sampler) return body.sample_uniform(rng);
        Vec y(n);
        for (int k = 0; k < n; ++k) y[k] = bb[k] * (2.0 * rng.uniform() - 1.0);
        return y;
      });
      const simd::PointBlock block{soa.data(), m, m, n};
      kern.abs_dot_pow(z.data(), block, p, vals.data());
      if (!exact_sampler) {
        body.gauge_batch(block, g.data());
        for (std::size_t i = 0; i < m; ++i) if (g[i] > 1.0) vals[i] = 0.0;
      }
      for (std::size_t i = 0; i < m; ++i) sum.add(vals[i]);
    }
    return sum.value();
  });
  e.value *= scale;
  e.std_error *= scale;
  return e;
}

Estimate body_abs_moment(const ConvexBody& body, double p, const McConfig& mc) {
  const int n = body.dimension();
  Estimate e;
  e.seed = mc.seed;
  if (body.shape() == Shape::ball || (body.shape() == Shape::lq_ball && body.q() == 2.0)) {
    e.value = unit_sphere_area(n) * std::pow(body.radius(), n + p) / (n + p);
    return e;
  }
  if (n == 1) {
    const double c = body.bounding_half_widths()[0];
    e.value = 2.0 * std::pow(c, p + 1.0) / (p + 1.0);
    return e;
  }
  const Vec& bb = body.bounding_half_widths();
  const double box_volume = std::pow(2.0, n) * bb.prod();
  e = mc_mean(mc, streams::moment_norm ^ 0x100, [&](Philox& rng, std::size_t count) {
    double sum = 0.0;
    Vec y(n);
    for (std::size_t i = 0; i < count; ++i) {
      for (int k = 0; k < n; ++k) y[k] = bb[k] * (2.0 * rng.uniform() - 1.0);
      if (body.gauge(y) <= 1.0) sum += std::pow(y.norm(), p);
    }
    return sum;
  });
  e.value *= box_volume;
  e.std_error *= box_volume;
  return e;
}

}  // namespace anisolab
