#include "pcaq/oracle.hpp"

#include <cstring>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pcaq {

Mat Transcript::basis() const {
  std::vector<const Vec*> cols;
  for (const auto& s : steps_)
    if (!s.degenerate) cols.push_back(&s.direction);
  Mat q(dim_, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = *cols[j];
  return q;
}

Vec Transcript::reconstruct_raw(std::size_t i) const {
  if (i >= steps_.size()) throw std::out_of_range("Transcript::reconstruct_raw: index out of range");
  std::vector<Vec> q, mq;
  for (std::size_t j = 0; j <= i; ++j) {
    const QueryRecord& s = steps_[j];
    if (s.degenerate) continue;
    // M q_j = P_{j-1} M q_j + sum_l q_l <M q_l, q_j>, using symmetry of M.
    Vec m = s.projected;
    for (std::size_t l = 0; l < q.size(); ++l) m += q[l] * mq[l].dot(s.direction);
    q.push_back(s.direction);
    mq.push_back(std::move(m));
  }
  const Vec& v = steps_[i].query;
  Vec out = Vec::Zero(dim_);
  for (std::size_t l = 0; l < q.size(); ++l) out += q[l].dot(v) * mq[l];
  return out;
}

QuerySession::QuerySession(const SymmetricMatrix& m, int budget) : m_(m), budget_(budget) {
  if (budget < 1) throw std::invalid_argument("open_session: budget must be >= 1");
  if (m.dim() < 1) throw std::invalid_argument("open_session: empty matrix");
  t_.dim_ = m.dim();
}

Vec QuerySession::query(const Vec& v) {
  if (t_.finalized()) throw std::logic_error("query: session already finalized");
  if (queries_made() >= budget_) throw BudgetExhausted("query: budget of " + std::to_string(budget_) + " exhausted");
  if (v.size() != dim()) throw std::invalid_argument("query: dimension mismatch");
  require_unit(v, "query");

  QueryRecord rec;
  rec.query = v;
  rec.raw = m_.apply(v);

  // Modified Gram-Schmidt, two passes; coefficients accumulate across passes.
  Vec r = v;
  std::vector<double> coef(basis_.size(), 0.0);
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const double c = basis_[j].dot(r);
      coef[j] += c;
      r -= c * basis_[j];
    }
  rec.residual_norm = r.norm();
  if (rec.residual_norm < kDegenerateTol) {
    rec.degenerate = true;
    rec.projected = Vec::Zero(dim());
  } else {
    rec.direction = r / rec.residual_norm;
    Vec mq;
    if (rec.residual_norm >= 0.5) {
      // M q = (M v - sum_j c_j M q_j) / |r|; the division amplifies rounding
      // by at most 2.
      mq = rec.raw;
      for (std::size_t j = 0; j < basis_.size(); ++j) mq -= coef[j] * basis_m_[j];
      mq /= rec.residual_norm;
    } else {
      // Nearly parallel query: a fresh product avoids cancellation. Internal
      // bookkeeping only, not charged to the budget.
      mq = m_.apply(rec.direction);
    }
    Vec p = mq;
    for (const Vec& q : basis_) p -= q.dot(p) * q;
    rec.projected = std::move(p);
    basis_.push_back(rec.direction);
    basis_m_.push_back(std::move(mq));
  }
  Vec out = rec.raw;
  t_.steps_.push_back(std::move(rec));
  return out;
}

void QuerySession::finalize(const Vec& v_hat) {
  if (t_.finalized()) throw std::logic_error("finalize: session already finalized");
  if (v_hat.size() != dim()) throw std::invalid_argument("finalize: dimension mismatch");
  require_unit(v_hat, "finalize");
  t_.final_output_ = v_hat;
}

int QuerySession::degenerate_count() const {
  int c = 0;
  for (const auto& s : t_.steps_) c += s.degenerate ? 1 : 0;
  return c;
}

ProjectedStep QuerySession::projected_view(std::size_t i) const {
  if (i >= t_.steps_.size()) throw std::out_of_range("projected_view: index out of range");
  const QueryRecord& s = t_.steps_[i];
  return ProjectedStep{s.direction, s.projected, s.degenerate};
}

Transcript QuerySession::sealed() const {
  if (!t_.finalized()) throw std::logic_error("sealed: session not finalized");
  return t_;
}

Metrics score(const Transcript& t, const SpikedInstance& inst, std::optional<double> op_norm_hint) {
  if (!t.finalized()) throw std::logic_error("score: transcript not finalized");
  if (t.dim() != inst.dim()) throw std::invalid_argument("score: dimension mismatch");
  const Vec& vh = *t.final_output();
  Metrics m;
  m.rayleigh = vh.dot(inst.matrix.apply(vh));
  m.op_norm = op_norm_hint ? *op_norm_hint : op_norm(inst.matrix);
  m.rayleigh_ratio = m.op_norm > 0 ? m.rayleigh / m.op_norm : 0.0;
  const double a = vh.dot(inst.theta);
  m.spike_overlap = a * a;
  const double d = static_cast<double>(inst.dim());
  for (const auto& s : t.steps()) {
    const double b = s.query.dot(inst.theta);
    m.step_overlaps.push_back(d * b * b);
  }
  return m;
}

std::string vector_hash(const Vec& v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* p = reinterpret_cast<const unsigned char*>(v.data());
  const std::size_t n = static_cast<std::size_t>(v.size()) * sizeof(double);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string transcript_csv(const Transcript& t, const Vec* theta) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "step,query_hash,overlap,projected_norm,degenerate\n";
  const double d = static_cast<double>(t.dim());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const QueryRecord& s = t.step(i);
    os << (i + 1) << ',' << vector_hash(s.query) << ',';
    if (theta) {
      const double b = s.query.dot(*theta);
      os << d * b * b;
    }
    os << ',' << s.projected.norm() << ',' << (s.degenerate ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace pcaq
