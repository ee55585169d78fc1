#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ginv/errors.hpp"
#include "ginv/matrix.hpp"
#include "test_support.hpp"

using namespace ginv;

TEST_CASE("solve_linear on the identity returns the right-hand side") {
  const Matrix a = Matrix::identity(2);
  const Matrix b{{3.0}, {4.0}};
  const Matrix x = solve_linear(a, b);
  CHECK(max_abs_diff(x, b) == 0.0);
}

TEST_CASE("solve_linear inverts the C1 perturbed kernel") {
  // Hand-derived by the 2x2 adjugate; the solution is the fundamental
  // matrix of the C1 fixture.
  const Matrix a{{5.0 / 6.0, 1.0 / 6.0}, {1.0 / 12.0, 11.0 / 12.0}};
  const Matrix x = solve_linear(a, Matrix::identity(2));
  CHECK(max_abs_diff(x, testing::c1_fundamental()) < 1e-12);
}

TEST_CASE("solve_linear rejects rank-deficient systems") {
  const Matrix a{{1.0, 1.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(solve_linear(a, Matrix::identity(2)), SingularMatrix);
}

TEST_CASE("solve_linear validates shapes") {
  CHECK_THROWS_AS(solve_linear(Matrix(2, 3), Matrix(2, 2)), ShapeMismatch);
  CHECK_THROWS_AS(solve_linear(Matrix::identity(2), Matrix(3, 1)),
                  ShapeMismatch);
}

TEST_CASE("invert handles identity, a symmetric kernel, and the zero matrix") {
  CHECK(max_abs_diff(invert(Matrix::identity(3)), Matrix::identity(3)) == 0.0);

  const Matrix a{{1.5, -0.5}, {-0.5, 1.5}};
  const Matrix expected{{0.75, 0.25}, {0.25, 0.75}};
  CHECK(max_abs_diff(invert(a), expected) < 1e-14);

  CHECK_THROWS_AS(invert(Matrix(2, 2, 0.0)), SingularMatrix);
}

TEST_CASE("inf_norm is the maximum absolute row sum") {
  CHECK(inf_norm(Matrix{{-0.25, 0.25}, {0.0, 0.0}}) == doctest::Approx(0.5));
  CHECK(inf_norm(Matrix::identity(2)) == 1.0);
  CHECK(inf_norm(Matrix{{1.0, -2.0}, {3.0, 0.0}}) == 3.0);
}

TEST_CASE("approx_eq respects absolute and relative tolerances") {
  const Matrix eye = Matrix::identity(2);
  CHECK(approx_eq(eye, eye, Tolerance{1e-12, 0.0}));

  Matrix nudged = eye;
  nudged(0, 0) += 1e-12;
  CHECK(approx_eq(eye, nudged, Tolerance{1e-9, 0.0}));

  CHECK_FALSE(approx_eq(eye, 2.0 * eye, Tolerance{1e-9, 1e-9}));
  CHECK_THROWS_AS(approx_eq(eye, Matrix(3, 3), Tolerance{}), ShapeMismatch);
}

TEST_CASE("tolerance requires a positive component") {
  CHECK_THROWS(Tolerance(0.0, 0.0));
  CHECK_THROWS(Tolerance(-1.0, 1e-9));
  CHECK_NOTHROW(Tolerance(0.0, 1e-9));
}

TEST_CASE("random well-conditioned inverses satisfy the residual bound") {
  testing::Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + trial % 7;
    Matrix a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
      a(i, i) += static_cast<double>(m);  // diagonal dominance
    }
    const Matrix inv = invert(a);
    const double residual =
        max_abs_diff(a * inv, Matrix::identity(m));
    CHECK(residual <= 1e-10 * inf_norm(a) * inf_norm(inv));
  }
}

TEST_CASE("column-by-column solves match the blocked solve bit for bit") {
  testing::Rng rng(99);
  const std::size_t m = 6;
  Matrix a(m, m);
  Matrix b(m, 4);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = rng.uniform(-2.0, 2.0);
    a(i, i) += 8.0;
    for (std::size_t j = 0; j < 4; ++j) b(i, j) = rng.uniform(-1.0, 1.0);
  }
  const Matrix whole = solve_linear(a, b);
  for (std::size_t col = 0; col < 4; ++col) {
    const Vector single = solve_linear(a, b.col(col));
    for (std::size_t i = 0; i < m; ++i) CHECK(single[i] == whole(i, col));
  }
}

TEST_CASE("inf_norm is subadditive") {
  testing::Rng rng(4321);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 5;
    Matrix a(m, m);
    Matrix b(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        a(i, j) = rng.uniform(-3.0, 3.0);
        b(i, j) = rng.uniform(-3.0, 3.0);
      }
    CHECK(inf_norm(a + b) <= inf_norm(a) + inf_norm(b) + 1e-12);
  }
}
