#include <doctest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "mzi/expm.hpp"

using namespace mzi;

namespace {

Matrix random_matrix(int n, double scale, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = scale * cplx(g(rng), g(rng));
  return m;
}

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

} // namespace

TEST_CASE("zero and diagonal") {
  CHECK((expm(Matrix::Zero(4, 4)) - Matrix::Identity(4, 4)).norm() == 0.0);
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = cplx(1.0, 0.5);
  d(1, 1) = -2.0;
  d(2, 2) = cplx(0.0, 3.0);
  const Matrix e = expm(d);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(e(i, i) - std::exp(d(i, i))) < 1e-14 * std::abs(std::exp(d(i, i))) + 1e-15);
}

TEST_CASE("nilpotent") {
  Matrix n = Matrix::Zero(3, 3);
  n(0, 1) = 1.0;
  n(1, 2) = 1.0;
  const Matrix e = expm(n);
  CHECK(std::abs(e(0, 2) - 0.5) < 1e-15);
  CHECK(std::abs(e(0, 1) - 1.0) < 1e-15);
}

TEST_CASE("agrees with Eigen matrix exponential across norms") {
  unsigned seed = 1;
  for (double scale : {1e-4, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    const Matrix m = random_matrix(12, scale, seed++);
    const Matrix ref = m.exp();
    CAPTURE(scale);
    CHECK(rel(expm(m), ref) < 1e-11);
  }
}

TEST_CASE("group property") {
  const Matrix m = random_matrix(8, 0.7, 42);
  CHECK(rel(expm(m) * expm(m), expm(2.0 * m)) < 1e-12);
  CHECK(rel(expm(m) * expm(-m), Matrix::Identity(8, 8)) < 1e-12);
}
