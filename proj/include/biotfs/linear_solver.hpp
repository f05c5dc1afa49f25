#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <stdexcept>

namespace biotfs {

using SpMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

class SingularMatrixError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  /// Componentwise backward error max_i |b - A x|_i / (|A||x| + |b|)_i of
  /// the last solve; <= 1e-12 on success.
  double relative_residual = 0.0;
  /// True when the factorization had already served an earlier solve.
  bool factor_reused = false;
};

/// Direct sparse factorization used for every inner solve: SparseLU on the
/// symmetrically equilibrated matrix, plus iterative refinement in the
/// original scaling. Immutable after construction; solve() is bitwise
/// deterministic for identical inputs and usable from concurrent runs
/// (each call works on its own vectors, the report is per-object).
class Factorization {
public:
  /// Throws SingularMatrixError on a structurally or numerically singular
  /// matrix (an identically zero row is reported with its index).
  explicit Factorization(const SpMat& A);
  Factorization(Factorization&&) noexcept = default;
  Factorization& operator=(Factorization&&) noexcept = default;

  /// Solve A x = b. Throws on dimension mismatch; throws if refinement
  /// cannot push the backward error below 1e-12.
  Vector solve(const Vector& b) const;

  const SolveReport& last_report() const { return report_; }
  Eigen::Index size() const { return A_.rows(); }

private:
  SpMat A_;      // original matrix, kept for refinement
  Vector scale_; // equilibration diagonal S; factorized matrix is S A S
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
  mutable SolveReport report_;
  mutable long solve_count_ = 0;
};

/// Convenience spelling of the operation.
inline Factorization factorize(const SpMat& A) { return Factorization(A); }

/// True when a Cholesky factorization of A succeeds, i.e. A is symmetric
/// positive definite up to round-off. Used as the definiteness probe on
/// reduced mechanics matrices.
bool spd_probe(const SpMat& A);

} // namespace biotfs
