#include "doctest.h"
#include "privctl/audit.hpp"
#include "privctl/plant.hpp"
#include "test_support.hpp"

using namespace privctl;

namespace {

struct Trial {
  Plant plant;
  TransformKeys keys;
  DataSet data;
  MaskedData masked;
  CloudView view;
};

Trial make_trial(std::uint64_t seed) {
  Trial t;
  t.plant = batch_reactor();
  Rng rng(seed, 3);
  t.data = simulate_collect(t.plant, rng.uniform_matrix(4, 1, -2.5, 2.5).col(0),
                            rng.uniform_matrix(2, 20, -5, 5));
  const StageOneKeys k = generate_stage1_keys(4, 2, seed);
  t.keys.F1 = k.F1;
  t.keys.G1 = k.G1;
  t.masked = pre_process(t.data, k.F1, k.G1);
  t.view = {t.masked.X0, t.masked.X1, t.masked.V0, std::nullopt, 0.05,
            rng.normal_matrix(2, 4)};
  return t;
}

}  // namespace

TEST_CASE("identification from a 2x2 system") {
  CloudView v;
  v.X0 = (Matrix(1, 2) << 0, 1).finished();
  v.V0 = (Matrix(1, 2) << 1, 2).finished();
  v.X1 = (Matrix(1, 2) << 2, 5).finished();
  const SystemPair p = identify_transformed_pair(v);
  CHECK(p.A(0, 0) == doctest::Approx(1.0));
  CHECK(p.B(0, 0) == doctest::Approx(2.0));
  v.V0 = v.X0;
  CHECK_THROWS_AS(identify_transformed_pair(v), RankError);
}

TEST_CASE("the cloud identifies exactly the transformed pair") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Trial t = make_trial(seed);
    const SystemPair p = identify_transformed_pair(t.view);
    CHECK(relative_gap(p.A, t.plant.A + t.plant.B * t.keys.F1) <= 1e-8);
    CHECK(relative_gap(p.B, t.plant.B + t.plant.B * t.keys.G1) <= 1e-8);
  }
  // Without masking the cloud would recover the plant itself.
  const Trial t = make_trial(1);
  CloudView open = t.view;
  open.V0 = t.data.U0;
  const SystemPair p = identify_transformed_pair(open);
  CHECK(relative_gap(p.A, t.plant.A) <= 1e-8);
  CHECK(relative_gap(p.B, t.plant.B) <= 1e-8);
}

TEST_CASE("alternative systems") {
  const Trial t = make_trial(5);
  const SystemPair bar = identify_transformed_pair(t.view);
  const Matrix I = Matrix::Identity(2, 2);

  SUBCASE("the genuine preimage") {
    const AlternativeSystem a =
        construct_alternative_system(bar.A, bar.B, t.plant.B, t.keys.F1, I);
    CHECK(relative_gap(a.A_hat, t.plant.A) <= 1e-9);
    CHECK(relative_gap(a.B_hat, t.plant.B) <= 1e-9);
    CHECK(relative_gap(a.G1_hat, t.keys.G1) <= 1e-9);
  }
  SUBCASE("random keys give different systems with identical data") {
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
      const Matrix Ft = rng.uniform_matrix(2, 4, -1, 1), Gt = rng.uniform_matrix(2, 2, -1, 1);
      const AlternativeSystem a = construct_alternative_system(bar.A, bar.B, t.plant.B, Ft, Gt);
      CHECK(relative_gap(a.A_hat + a.B_hat * a.F1_hat, bar.A) <= 1e-9);
      CHECK(relative_gap(a.B_hat * (I + a.G1_hat), bar.B) <= 1e-9);
      CHECK(data_consistency_residual(t.masked.X0, t.masked.X1, t.masked.V0,
                                      a.A_hat + a.B_hat * a.F1_hat,
                                      a.B_hat * (I + a.G1_hat)) <= 1e-9);
      CHECK(relative_gap(a.A_hat, t.plant.A) > 1e-6);
    }
  }
  SUBCASE("fully actuated with a wrong input matrix") {
    Rng rng(9);
    const Matrix A = rng.normal_matrix(3, 3) * 0.5, B = rng.normal_matrix(3, 3);
    const Matrix F1 = rng.uniform_matrix(3, 3, -1, 1), G1 = rng.uniform_matrix(3, 3, -1, 1);
    const Matrix Ab = A + B * F1, Bb = B + B * G1;
    const Matrix X0 = rng.normal_matrix(3, 10), V0 = rng.normal_matrix(3, 10);
    const Matrix X1 = Ab * X0 + Bb * V0;
    const Matrix Bc = rng.normal_matrix(3, 3);  // any invertible candidate
    const AlternativeSystem a = construct_alternative_system(
        Ab, Bb, Bc, rng.uniform_matrix(3, 3, -1, 1), Matrix::Identity(3, 3));
    CHECK(data_consistency_residual(X0, X1, V0, a.A_hat + a.B_hat * a.F1_hat,
                                    a.B_hat * (Matrix::Identity(3, 3) + a.G1_hat)) <= 1e-9);
    CHECK(relative_gap(a.B_hat, B) > 1e-3);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(construct_alternative_system(bar.A, bar.B, t.plant.B, t.keys.F1,
                                                 Matrix::Zero(2, 2)),
                    SingularMatrixError);
    CHECK_THROWS_AS(construct_alternative_system(bar.A, bar.B, Matrix::Zero(4, 2), t.keys.F1, I),
                    RankError);
    // An input matrix whose range misses B_bar cannot explain the data.
    Matrix Bc = Matrix::Zero(4, 2);
    Bc(0, 0) = Bc(1, 1) = 1.0;
    CHECK_THROWS(construct_alternative_system(bar.A, bar.B, Bc, t.keys.F1, I));
  }
}

TEST_CASE("closed-loop gap") {
  const Trial t = make_trial(6);
  Rng rng(10);
  TransformKeys keys = t.keys;
  const Matrix K_bar = t.view.K_bar;

  SUBCASE("identical stage keys hide nothing") {
    keys.F2 = keys.F1;
    keys.G2 = keys.G1;
    CHECK(closed_loop_gap(t.plant, keys, K_bar).Delta.isZero(0.0));
  }
  SUBCASE("generated stage-2 keys leave a nonzero gap and the identity holds") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const StageTwoKeys k2 = generate_stage2_keys(keys.F1, keys.G1, K_bar, 0.05,
                                                   spectral_norm(t.plant.B), s);
      keys.F2 = k2.F2;
      keys.G2 = k2.G2;
      const ClosedLoopGap g = closed_loop_gap(t.plant, keys, K_bar);
      CHECK(spectral_norm(g.Delta) > closed_loop_gap_threshold(t.plant, keys));
      const Matrix K_star = post_process(keys.F2, keys.G2, K_bar);
      CHECK(spectral_norm(g.A_cl_bar + g.Delta - (t.plant.A + t.plant.B * K_star)) <= 1e-10);
      const SystemPair bar = identify_transformed_pair(t.view);
      CHECK(spectral_norm(g.A_cl_bar - (bar.A + bar.B * K_bar)) <= 1e-9);
    }
  }
}
