#include <random>
#include <set>

#include "doctest.h"
#include "privctl/linalg.hpp"

using namespace privctl;

TEST_CASE("spectral norm and radius on known matrices") {
  Matrix D(2, 2);
  D << 3, 0, 0, -4;
  CHECK(spectral_norm(D) == doctest::Approx(4.0));
  CHECK(spectral_radius(D) == doctest::Approx(4.0));

  Matrix J(2, 2);
  J << 0.5, 10, 0, 0.5;  // non-normal: radius 0.5, norm > 10
  CHECK(spectral_radius(J) == doctest::Approx(0.5));
  CHECK(spectral_norm(J) > 10.0);

  Matrix R(2, 2);
  R << 0, -1, 1, 0;  // rotation: complex eigenvalues of modulus 1
  CHECK(spectral_radius(R) == doctest::Approx(1.0));
}

TEST_CASE("symmetric extreme eigenvalues use the symmetric part") {
  Matrix M(2, 2);
  M << 1, 4, 0, 1;  // symmetric part [[1, 2], [2, 1]] -> eigenvalues -1, 3
  CHECK(lambda_max_sym(M) == doctest::Approx(3.0));
  CHECK(lambda_min_sym(M) == doctest::Approx(-1.0));
}

TEST_CASE("numerical rank honours the relative tolerance") {
  Matrix M(2, 3);
  M << 1, 2, 3, 2, 4, 6;
  CHECK(numerical_rank(M) == 1);
  M(1, 2) += 1e-3;
  CHECK(numerical_rank(M) == 2);
  M(1, 2) = 6.0 + 1e-12;  // below 1e-9 * sigma_max
  CHECK(numerical_rank(M) == 1);
  CHECK(numerical_rank(Matrix::Zero(3, 3)) == 0);
}

TEST_CASE("stacking checks dimensions") {
  const Matrix a = Matrix::Ones(2, 3), b = Matrix::Zero(1, 3);
  const Matrix s = vstack(a, b);
  CHECK(s.rows() == 3);
  CHECK(s(2, 0) == 0.0);
  CHECK(hstack(a, Matrix::Zero(2, 1)).cols() == 4);
  CHECK_THROWS_AS(vstack(a, Matrix::Zero(1, 2)), DimensionError);
  CHECK_THROWS_AS(hstack(a, Matrix::Zero(3, 1)), DimensionError);
}

TEST_CASE("Rng is deterministic per (seed, stream) and uniform draws stay in range") {
  Rng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  const Matrix ma = a.uniform_matrix(4, 5, -1.0, 1.0);
  CHECK(ma == b.uniform_matrix(4, 5, -1.0, 1.0));
  CHECK(ma != c.uniform_matrix(4, 5, -1.0, 1.0));
  CHECK(ma != d.uniform_matrix(4, 5, -1.0, 1.0));
  CHECK(ma.maxCoeff() < 1.0);
  CHECK(ma.minCoeff() >= -1.0);

  Rng e(1);
  double sum = 0.0, sq = 0.0;
  const int N = 20000;
  for (int i = 0; i < N; ++i) {
    const double u = e.uniform(2.0, 4.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / N, var = sq / N - mean * mean;
  CHECK(mean == doctest::Approx(3.0).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.03));

  double nsum = 0.0, nsq = 0.0;
  for (int i = 0; i < N; ++i) {
    const double z = e.normal();
    nsum += z;
    nsq += z * z;
  }
  CHECK(std::abs(nsum / N) < 0.03);
  CHECK(nsq / N == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("Rng uniform draws are a fixed function of the raw engine output") {
  // The first draw for seed 5, stream 0 is pinned so that a change in the
  // construction (which would silently change every experiment) is caught.
  Rng a(5), b(5);
  const double first = a.uniform(0.0, 1.0);
  std::seed_seq seq{5u, 0u, 0u, 0u};
  std::mt19937_64 engine(seq);
  const std::uint64_t raw = engine();
  CHECK(raw == 16145928033173601508ull);
  CHECK(first == static_cast<double>(raw >> 11) * 0x1.0p-53);
  CHECK(first == 0.87527251251807126);
  CHECK(first == b.uniform(0.0, 1.0));
  std::set<double> seen;
  Rng c(5);
  for (int i = 0; i < 1000; ++i) seen.insert(c.uniform(0.0, 1.0));
  CHECK(seen.size() == 1000);
}

TEST_CASE("relative gap") {
  const Matrix a = Matrix::Identity(2, 2);
  CHECK(relative_gap(a, a) == 0.0);
  CHECK(relative_gap(2.0 * a, a) == doctest::Approx(0.5));
}
