#include "pcaq/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcaq/rng.hpp"
#include "pcaq/stats.hpp"

namespace pcaq {

SymmetricMatrix::SymmetricMatrix(Mat m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymmetricMatrix: matrix is not square");
  if (m.rows() == 0) throw std::invalid_argument("SymmetricMatrix: empty matrix");
  if (!m.allFinite()) throw std::invalid_argument("SymmetricMatrix: non-finite entries");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const Eigen::Index d = m.rows();
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < j; ++i) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("SymmetricMatrix: input is not symmetric");
      m(j, i) = m(i, j);
    }
  m_ = std::make_shared<const Mat>(std::move(m));
}

Vec SymmetricMatrix::apply(const Vec& v) const {
  if (v.size() != dim()) throw std::invalid_argument("SymmetricMatrix::apply: dimension mismatch");
  return (*m_) * v;
}

void sample_goe_into(Eigen::Index d, std::uint64_t seed, Mat& out) {
  if (d < 1) throw std::invalid_argument("sample_goe: d must be >= 1");
  Rng rng(seed);
  out.resize(d, d);
  const double sqrt2 = std::sqrt(2.0);
  std::vector<double> col(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    rng.fill_normal(col.data(), static_cast<std::size_t>(j + 1));
    for (Eigen::Index i = 0; i < j; ++i) {
      out(i, j) = col[static_cast<std::size_t>(i)];
      out(j, i) = col[static_cast<std::size_t>(i)];
    }
    out(j, j) = sqrt2 * col[static_cast<std::size_t>(j)];
  }
}

SymmetricMatrix sample_goe(Eigen::Index d, std::uint64_t seed) {
  Mat w;
  sample_goe_into(d, seed, w);
  return SymmetricMatrix(std::move(w));
}

Vec sample_uniform_sphere(Eigen::Index d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("sample_uniform_sphere: d must be >= 1");
  Rng rng(seed);
  for (;;) {
    Vec g = rng.normal_vector(d);
    const double n = g.norm();
    if (n > 0.0) return g / n;
  }
}

SpikedInstance make_spiked_from(Vec theta, double lambda, const SymmetricMatrix& noise) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("make_spiked: lambda must be finite and >= 0");
  if (theta.size() != noise.dim()) throw std::invalid_argument("make_spiked: dimension mismatch");
  require_unit(theta, "make_spiked theta", 1e-12);
  const Eigen::Index d = theta.size();
  Mat m = noise.dense() / std::sqrt(static_cast<double>(d));
  m.noalias() += lambda * theta * theta.transpose();
  SpikedInstance inst;
  inst.theta = std::move(theta);
  inst.lambda = lambda;
  inst.noise = noise;
  inst.matrix = SymmetricMatrix(std::move(m));
  return inst;
}

SpikedInstance make_spiked(Eigen::Index d, double lambda, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("make_spiked: d must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("make_spiked: lambda must be finite and >= 0");
  Vec theta = sample_uniform_sphere(d, derive_seed(seed, 1));
  SymmetricMatrix w = sample_goe(d, derive_seed(seed, 2));
  return make_spiked_from(std::move(theta), lambda, w);
}

namespace {

void check_cap(const SymmetricMatrix& m, Eigen::Index cap) {
  if (m.dim() < 1) throw std::invalid_argument("spectrum: empty matrix");
  if (m.dim() > cap)
    throw std::invalid_argument("spectrum: d=" + std::to_string(m.dim()) + " exceeds dense cap " + std::to_string(cap));
}

double ratio_of(const std::vector<double>& ev) {
  if (ev.empty() || !(ev[0] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double r = 0.0;
  for (std::size_t j = 1; j < ev.size(); ++j) r = std::max(r, std::abs(ev[j]) / ev[0]);
  return r;
}

}  // namespace

SpectrumSummary spectrum(const SymmetricMatrix& m, Eigen::Index cap) {
  check_cap(m, cap);
  Eigen::SelfAdjointEigenSolver<Mat> es(m.dense());
  if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
  const Eigen::Index d = m.dim();
  SpectrumSummary s;
  s.eigenvalues.resize(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) s.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(d - 1 - i);
  s.top_vector = es.eigenvectors().col(d - 1).normalized();
  s.op_norm = std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back()));
  s.eigenratio = ratio_of(s.eigenvalues);
  return s;
}

std::vector<double> eigenvalues_desc(const SymmetricMatrix& m, Eigen::Index cap) {
  check_cap(m, cap);
  Eigen::SelfAdjointEigenSolver<Mat> es(m.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues_desc: eigensolver failed");
  const Eigen::Index d = m.dim();
  std::vector<double> ev(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) ev[static_cast<std::size_t>(i)] = es.eigenvalues()(d - 1 - i);
  return ev;
}

MembershipResult check_membership(const std::vector<double>& ev, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("check_membership: gamma must lie in [0,1)");
  MembershipResult r;
  if (ev.empty()) throw std::invalid_argument("check_membership: no eigenvalues");
  const double l1 = ev[0];
  if (!(l1 > 0.0)) {
    r.violating_index = 1;
    r.reason = "lambda_1 <= 0";
    return r;
  }
  for (std::size_t j = 1; j < ev.size(); ++j) {
    const double a = std::abs(ev[j]);
    if (a / l1 > gamma) {
      r.violating_index = static_cast<int>(j) + 1;
      r.reason = a > l1 ? "lambda_1 != ||M||" : "eigenratio exceeds gamma";
      return r;
    }
  }
  r.member = true;
  return r;
}

MembershipResult check_membership(const SymmetricMatrix& m, double gamma) {
  return check_membership(eigenvalues_desc(m), gamma);
}

double rayleigh(const SymmetricMatrix& m, const Vec& v) {
  require_unit(v, "rayleigh");
  if (v.size() != m.dim()) throw std::invalid_argument("rayleigh: dimension mismatch");
  return v.dot(m.apply(v));
}

ExtremeEigen extreme_eigenvalues(const SymmetricMatrix& m, std::uint64_t seed, double rel_tol, int max_iter) {
  const Eigen::Index d = m.dim();
  if (d < 1) throw std::invalid_argument("extreme_eigenvalues: empty matrix");
  const int kmax = static_cast<int>(std::min<Eigen::Index>(d, max_iter));
  Mat q(d, kmax);
  std::vector<double> alpha, beta;
  q.col(0) = sample_uniform_sphere(d, seed);
  ExtremeEigen out;
  for (int k = 0; k < kmax; ++k) {
    Vec w = m.apply(q.col(k));
    alpha.push_back(q.col(k).dot(w));
    for (int pass = 0; pass < 2; ++pass) {
      const Vec c = q.leftCols(k + 1).transpose() * w;
      w.noalias() -= q.leftCols(k + 1) * c;
    }
    const double b = w.norm();
    const bool last = (k + 1 == kmax) || b < 1e-14;
    if (last || (k + 1) % 5 == 0) {
      const int n = k + 1;
      Mat t = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Mat> es(t);
      out.lambda_max = es.eigenvalues()(n - 1);
      out.lambda_min = es.eigenvalues()(0);
      out.residual_max = b * std::abs(es.eigenvectors()(n - 1, n - 1));
      out.residual_min = b * std::abs(es.eigenvectors()(n - 1, 0));
      out.iterations = n;
      const double scale = std::max(std::abs(out.lambda_max), std::abs(out.lambda_min));
      const double tol = rel_tol * std::max(scale, 1e-300);
      const bool max_ok = out.residual_max <= tol;
      const bool min_ok = out.residual_min <= tol;
      // When one extreme dominates the other by a wide margin, only the
      // dominant one matters for the operator norm.
      const bool dominant = (max_ok && out.lambda_max >= 2.0 * std::abs(out.lambda_min) && n >= 30) ||
                            (min_ok && -out.lambda_min >= 2.0 * std::abs(out.lambda_max) && n >= 30);
      if (b < 1e-14 || (max_ok && min_ok) || dominant) {
        out.converged = true;
        return out;
      }
      if (last) return out;
    }
    beta.push_back(b);
    q.col(k + 1) = w / b;
  }
  return out;
}

double op_norm(const SymmetricMatrix& m, Eigen::Index dense_cutoff) {
  if (m.dim() <= dense_cutoff) {
    const auto ev = eigenvalues_desc(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
  }
  const ExtremeEigen e = extreme_eigenvalues(m, 0x5eedULL + static_cast<std::uint64_t>(m.dim()));
  return std::max(std::abs(e.lambda_max), std::abs(e.lambda_min));
}

KdEstimate estimate_kd(Eigen::Index d, int n, std::uint64_t seed, int jobs) {
  if (d < 1 || n < 1) throw std::invalid_argument("estimate_kd: need d >= 1 and n >= 1");
  KdEstimate k;
  k.d = d;
  k.samples.assign(static_cast<std::size_t>(n), 0.0);
  const double sd = std::sqrt(static_cast<double>(d));
  parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
    k.samples[i] = op_norm(sample_goe(d, derive_seed(seed, i))) / sd;
  });
  const Moments mo = moments(k.samples);
  k.mean = mo.mean;
  k.sd = mo.sd;
  k.stderr_ = mo.stderr_;
  return k;
}

}  // namespace pcaq
