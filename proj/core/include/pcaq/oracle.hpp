#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcaq/common.hpp"
#include "pcaq/instance.hpp"

namespace pcaq {

// Algorithm-facing view of the exact matrix-vector oracle. Algorithms only
// ever see this interface, so the hidden matrix and spike are unreachable from
// algorithm code.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Eigen::Index dim() const = 0;
  virtual int budget() const = 0;
  virtual int queries_made() const = 0;
  int remaining() const { return budget() - queries_made(); }
  // Returns M v exactly. v must be a unit vector (tolerance 1e-8).
  virtual Vec query(const Vec& v) = 0;
  // Records the output vector. Does not consume budget.
  virtual void finalize(const Vec& v_hat) = 0;
};

struct QueryRecord {
  Vec query;          // v^(i) as submitted
  Vec raw;            // M v^(i)
  Vec direction;      // orthonormalized residual of v^(i); empty when degenerate
  Vec projected;      // P_{i-1} M direction (zero vector when degenerate)
  double residual_norm = 0.0;  // norm of v^(i) after removing prior directions
  bool degenerate = false;
};

// Z_k together with the output vector.
class Transcript {
 public:
  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return steps_.size(); }
  const QueryRecord& step(std::size_t i) const { return steps_.at(i); }
  const std::vector<QueryRecord>& steps() const { return steps_; }
  bool finalized() const { return final_output_.has_value(); }
  const std::optional<Vec>& final_output() const { return final_output_; }

  // Orthonormal basis of the queried span (non-degenerate directions in order).
  Mat basis() const;

  // Rebuilds M v^(i) from the projected responses and the basis alone.
  Vec reconstruct_raw(std::size_t i) const;

 private:
  friend class QuerySession;
  Eigen::Index dim_ = 0;
  std::vector<QueryRecord> steps_;
  std::optional<Vec> final_output_;
};

struct ProjectedStep {
  Vec direction;  // empty when degenerate
  Vec response;
  bool degenerate = false;
};

class QuerySession final : public Oracle {
 public:
  static constexpr double kDegenerateTol = 1e-10;

  QuerySession(const SymmetricMatrix& m, int budget);
  QuerySession(const SpikedInstance& inst, int budget) : QuerySession(inst.matrix, budget) {}

  Eigen::Index dim() const override { return m_.dim(); }
  int budget() const override { return budget_; }
  int queries_made() const override { return static_cast<int>(t_.steps_.size()); }
  Vec query(const Vec& v) override;
  void finalize(const Vec& v_hat) override;

  bool finalized() const { return t_.finalized(); }
  int degenerate_count() const;
  // 0-based step index.
  ProjectedStep projected_view(std::size_t i) const;
  // Read-only analysis view; contains only what the algorithm itself has seen.
  const Transcript& transcript() const { return t_; }
  // Sealed copy; only valid after finalize().
  Transcript sealed() const;

 private:
  SymmetricMatrix m_;
  int budget_;
  Transcript t_;
  std::vector<Vec> basis_;
  std::vector<Vec> basis_m_;  // M applied to each basis direction
};

struct Metrics {
  double rayleigh = 0.0;        // v_hat^T M v_hat
  double op_norm = 0.0;         // ||M||
  double rayleigh_ratio = 0.0;  // v_hat^T M v_hat / ||M||
  double spike_overlap = 0.0;   // <v_hat, theta>^2
  std::vector<double> step_overlaps;  // d <v^(k), theta>^2, k = 1..T
};

// Scores a finalized transcript against its instance. `op_norm_hint` skips
// the eigen-solve when the caller already knows ||M||.
Metrics score(const Transcript& t, const SpikedInstance& inst, std::optional<double> op_norm_hint = std::nullopt);

// 64-bit FNV-1a over the raw bytes of v, as 16 hex digits.
std::string vector_hash(const Vec& v);

// CSV rows: step,query_hash,overlap,projected_norm,degenerate. `overlap` is
// d<v,theta>^2 when theta is given, empty otherwise.
std::string transcript_csv(const Transcript& t, const Vec* theta = nullptr);

}  // namespace pcaq
