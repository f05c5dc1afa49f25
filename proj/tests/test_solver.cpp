#include <doctest.h>

#include <random>

#include "biotfs/linear_solver.hpp"

using namespace biotfs;

namespace {

SpMat from_dense(const Eigen::MatrixXd& d) {
  SpMat out = d.sparseView();
  out.makeCompressed();
  return out;
}

} // namespace

TEST_CASE("identity solve returns b exactly") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(5, 5);
  Factorization f(from_dense(eye));
  Vector b(5);
  b << 1, -2, 3.5, 0, 7;
  Vector x = f.solve(b);
  CHECK((x - b).norm() == 0.0);
}

TEST_CASE("hand-eliminated 2x2 system") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  Factorization f(from_dense(a));
  Vector b(2);
  b << 3, 3;
  Vector x = f.solve(b);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("zero row raises a singularity error naming the row") {
  Eigen::MatrixXd a(3, 3);
  a << 1, 0, 2, 0, 0, 0, 4, 0, 1;
  CHECK_THROWS_WITH_AS(Factorization{from_dense(a)},
                       doctest::Contains("row 1"), SingularMatrixError);
}

TEST_CASE("zero rhs gives zero solution") {
  Eigen::MatrixXd a(3, 3);
  a << 4, 1, 0, 1, 5, 2, 0, 2, 6;
  Factorization f(from_dense(a));
  Vector x = f.solve(Vector::Zero(3));
  CHECK(x.norm() == 0.0);
}

TEST_CASE("random SPD system meets the residual contract") {
  std::mt19937 rng(42);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd g(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      g(i, j) = dist(rng);
  Eigen::MatrixXd a = g.transpose() * g + Eigen::MatrixXd::Identity(10, 10);
  Vector b(10);
  for (int i = 0; i < 10; ++i)
    b[i] = dist(rng);

  Factorization f(from_dense(a));
  Vector x = f.solve(b);
  CHECK((a * x - b).norm() <= 1e-12 * b.norm());
  CHECK(f.last_report().relative_residual <= 1e-12);
}

TEST_CASE("dimension mismatch is rejected") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  Factorization f(from_dense(a));
  CHECK_THROWS_AS(f.solve(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("repeated solves are bit-identical and flag factor reuse") {
  Eigen::MatrixXd a(3, 3);
  a << 3, 1, 0, 1, -2, 4, 0, 4, 1; // indefinite
  Factorization f(from_dense(a));
  Vector b(3);
  b << 0.1, -7, 2;
  Vector x1 = f.solve(b);
  CHECK(!f.last_report().factor_reused);
  Vector x2 = f.solve(b);
  CHECK(f.last_report().factor_reused);
  for (int i = 0; i < 3; ++i)
    CHECK(x1[i] == x2[i]);
}

TEST_CASE("spd probe accepts SPD and rejects indefinite") {
  Eigen::MatrixXd spd(2, 2);
  spd << 2, 1, 1, 2;
  CHECK(spd_probe(from_dense(spd)));
  Eigen::MatrixXd saddle(2, 2);
  saddle << 2, 3, 3, 1;
  CHECK(!spd_probe(from_dense(saddle)));
}

TEST_CASE("empty system is a no-op") {
  SpMat a(0, 0);
  Factorization f(a);
  Vector x = f.solve(Vector());
  CHECK(x.size() == 0);
}
