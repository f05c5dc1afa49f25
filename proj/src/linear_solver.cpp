#include "biotfs/linear_solver.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <string>

namespace biotfs {

namespace {

// |A| x for the backward-error denominator.
Vector abs_mat_times_abs_vec(const SpMat& A, const Vector& x) {
  Vector out = Vector::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      out[it.row()] += std::abs(it.value()) * std::abs(x[it.col()]);
  return out;
}

double backward_error(const SpMat& A, const Vector& x, const Vector& b,
                      const Vector& r) {
  Vector den = abs_mat_times_abs_vec(A, x) + b.cwiseAbs();
  const double guard = 1e-300;
  double berr = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    double d = den[i];
    if (d <= guard) {
      if (std::abs(r[i]) > guard)
        return std::numeric_limits<double>::infinity();
      continue;
    }
    berr = std::max(berr, std::abs(r[i]) / d);
  }
  return berr;
}

} // namespace

Factorization::Factorization(const SpMat& A) : A_(A) {
  if (A_.rows() != A_.cols())
    throw std::invalid_argument("factorize: matrix must be square");
  A_.makeCompressed();
  const Eigen::Index n = A_.rows();
  scale_ = Vector::Ones(n);
  if (n == 0)
    return;

  // Symmetric equilibration by the max magnitude of each row/column pair;
  // tames the disparate physical units of the saddle blocks.
  Vector max_abs = Vector::Zero(n);
  for (int k = 0; k < A_.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A_, k); it; ++it) {
      double a = std::abs(it.value());
      max_abs[it.row()] = std::max(max_abs[it.row()], a);
      max_abs[it.col()] = std::max(max_abs[it.col()], a);
    }
  }
  // Detect an identically zero row before Eigen does, to name its index.
  Vector row_max = Vector::Zero(n);
  for (int k = 0; k < A_.outerSize(); ++k)
    for (SpMat::InnerIterator it(A_, k); it; ++it)
      row_max[it.row()] = std::max(row_max[it.row()], std::abs(it.value()));
  for (Eigen::Index i = 0; i < n; ++i)
    if (row_max[i] == 0.0)
      throw SingularMatrixError("factorize: matrix is singular, row " +
                                std::to_string(i) + " is identically zero");
  for (Eigen::Index i = 0; i < n; ++i)
    scale_[i] = 1.0 / std::sqrt(max_abs[i]);

  SpMat scaled = scale_.asDiagonal() * A_ * scale_.asDiagonal();
  scaled.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
  lu_->compute(scaled);
  if (lu_->info() != Eigen::Success)
    throw SingularMatrixError("factorize: sparse LU failed (" +
                              lu_->lastErrorMessage() + ")");
}

Vector Factorization::solve(const Vector& b) const {
  if (b.size() != A_.rows())
    throw std::invalid_argument("solve: dimension mismatch, matrix is " +
                                std::to_string(A_.rows()) + "x" +
                                std::to_string(A_.cols()) + ", vector has " +
                                std::to_string(b.size()));
  report_.factor_reused = solve_count_ > 0;
  ++solve_count_;
  if (A_.rows() == 0) {
    report_.relative_residual = 0.0;
    return Vector();
  }

  // Solve on the equilibrated system, refine in the original scaling.
  Vector x = scale_.asDiagonal() * lu_->solve(Vector(scale_.asDiagonal() * b));
  Vector r = b - A_ * x;
  double berr = backward_error(A_, x, b, r);
  for (int pass = 0; pass < 3 && berr > 1e-14; ++pass) {
    Vector dx =
        scale_.asDiagonal() * lu_->solve(Vector(scale_.asDiagonal() * r));
    Vector x_new = x + dx;
    Vector r_new = b - A_ * x_new;
    double berr_new = backward_error(A_, x_new, b, r_new);
    if (!(berr_new < berr))
      break;
    x.swap(x_new);
    r.swap(r_new);
    berr = berr_new;
  }
  if (!(berr <= 1e-12))
    throw std::runtime_error(
        "solve: backward error " + std::to_string(berr) +
        " exceeds the 1e-12 contract (matrix effectively singular?)");
  report_.relative_residual = berr;
  return x;
}

bool spd_probe(const SpMat& A) {
  if (A.rows() != A.cols())
    return false;
  if (A.rows() == 0)
    return true;
  Eigen::SimplicialLLT<SpMat> llt;
  llt.compute(A);
  return llt.info() == Eigen::Success;
}

} // namespace biotfs
