#include <doctest.h>

#include <cmath>

#include "logbarrier/baselines.hpp"
#include "logbarrier/datagen.hpp"
#include "support/oracles.hpp"

using namespace logbarrier;

TEST_CASE("em_step fixed points and one-step forms") {
  RngStream rng(1);
  const RealVector a = (RealVector(3) << 0.5, 2.0, 1.5).finished();
  SUBCASE("identical constant samples are a fixed point") {
    // What identical sensing rows turn into after the Poisson reformulation.
    const RealVector c = RealVector::Constant(3, 2.5);
    const ClassicalDataset ds({c, c, c});
    const RealVector x = oracles::random_interior_simplex(3, rng);
    CHECK((em_step(ds, x) - x).norm() <= 1e-15);
  }
  SUBCASE("identical samples: one step reaches the fixed point") {
    const ClassicalDataset ds({a, a});
    const RealVector x = oracles::random_interior_simplex(3, rng);
    const RealVector once = em_step(ds, x);
    RealVector expected = x.cwiseProduct(a);
    expected /= expected.sum();
    CHECK((once - expected).norm() <= 1e-15);
  }
  SUBCASE("single sample from uniform") {
    const ClassicalDataset ds({a});
    const RealVector x = em_step(ds, maximally_mixed<RealVector>(3));
    CHECK((x - a / a.sum()).norm() <= 1e-15);
  }
  SUBCASE("zero coordinates stay zero") {
    const auto ds = oracles::random_classical_dataset(5, 3, rng);
    RealVector x = (RealVector(3) << 0.5, 0.0, 0.5).finished();
    bool feasible = true;
    for (const auto& s : ds.samples()) feasible = feasible && inner(s, x) > 0.0;
    if (feasible) CHECK(em_step(ds, x)(1) == 0.0);
  }
  SUBCASE("infeasible sample") {
    const ClassicalDataset ds({(RealVector(2) << 0.0, 1.0).finished()});
    CHECK_THROWS_AS(em_step(ds, (RealVector(2) << 1.0, 0.0).finished()), InfeasibleSampleError);
  }
}

TEST_CASE("em descends monotonically") {
  RngStream rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = oracles::random_classical_dataset(12, 4, rng);
    RealVector x = maximally_mixed<RealVector>(4);
    double f = f_value(ds, x);
    for (int k = 0; k < 100; ++k) {
      x = em_step(ds, x);
      const double fn = f_value(ds, x);
      CHECK(fn <= f + 1e-15);
      CHECK(std::abs(x.sum() - 1.0) <= 1e-12);
      CHECK(x.minCoeff() > 0.0);
      f = fn;
    }
  }
}

TEST_CASE("imle_step") {
  RngStream rng(3);
  SUBCASE("identity sample fixes every state") {
    const QuantumDataset ds({HermitianMatrix::Identity(3, 3)});
    const HermitianMatrix r = oracles::random_interior_density(3, rng);
    CHECK((imle_step(ds, r) - r).norm() <= 1e-14);
  }
  SUBCASE("diagonal data square the EM ratio") {
    const auto cds = oracles::random_classical_dataset(6, 4, rng);
    const auto qds = diagonal_embedding(cds);
    const RealVector x = oracles::random_interior_simplex(4, rng);
    RealVector r = RealVector::Zero(4);
    for (std::size_t j = 0; j < cds.size(); ++j)
      r += cds.weights()(static_cast<Eigen::Index>(j)) / inner(cds.sample(j), x) * cds.sample(j);
    RealVector squared = x.cwiseProduct(r).cwiseProduct(r);
    squared /= squared.sum();
    RealVector single = x.cwiseProduct(r);
    single /= single.sum();
    const HermitianMatrix X = x.cast<Complex>().asDiagonal();
    const HermitianMatrix next = imle_step(qds, X);
    CHECK((next.diagonal().real() - squared).norm() <= 1e-10);
    CHECK((em_step(cds, x) - single).norm() <= 1e-12);
  }
  SUBCASE("output is a density matrix") {
    const auto ds = oracles::random_quantum_dataset(7, 3, rng, true);
    HermitianMatrix r = maximally_mixed<HermitianMatrix>(3);
    for (int k = 0; k < 20; ++k) {
      r = imle_step(ds, r);
      CHECK(is_density_matrix(r, 1e-10));
      for (const auto& A : ds.samples()) CHECK(inner(A, r) > 0.0);
    }
  }
}

TEST_CASE("imle fidelity rises on W-state data") {
  RngStream rng(4);
  const auto rho = w_state(2);
  const auto ens = random_measurements(4, 2, 32, rng);
  const auto q = sample_outcomes(rho, ens, 5000, rng);
  const auto ds = q.dataset();
  HermitianMatrix r = maximally_mixed<HermitianMatrix>(4);
  const double f0 = fidelity(r, rho);
  double prev = f0;
  int rises = 0;
  for (int k = 0; k < 50; ++k) {
    r = imle_step(ds, r);
    const double f = fidelity(r, rho);
    rises += f > prev;
    prev = f;
  }
  CHECK(prev > f0 + 0.3);
  CHECK(rises >= 40);
}

TEST_CASE("baselines are idempotent at fixed points") {
  RngStream rng(5);
  const auto cds = oracles::random_classical_dataset(8, 3, rng);
  RealVector x = maximally_mixed<RealVector>(3);
  for (int k = 0; k < 200000; ++k) {
    const RealVector n = em_step(cds, x);
    const double move = (n - x).norm();
    x = n;
    if (move < 1e-14) {
      CHECK((em_step(cds, x) - x).norm() < 1e-13);
      break;
    }
  }
  const auto qds = oracles::random_quantum_dataset(12, 2, rng);
  HermitianMatrix r = maximally_mixed<HermitianMatrix>(2);
  for (int k = 0; k < 200000; ++k) {
    const HermitianMatrix n = imle_step(qds, r);
    const double move = (n - r).norm();
    r = n;
    if (move < 1e-14) {
      CHECK((imle_step(qds, r) - r).norm() < 1e-13);
      break;
    }
  }
}

TEST_CASE("baseline_run") {
  RngStream rng(6);
  const auto cds = oracles::random_classical_dataset(10, 4, rng);
  const auto res = baseline_run(cds, Budget::iterations(300));
  const auto& cps = res.record.checkpoints;
  CHECK(cps.front().iter == 1);
  CHECK(cps.back().iter == 300);
  CHECK_FALSE(res.record.diverged);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    CHECK(cps[i].epochs == static_cast<double>(cps[i].iter));
    if (i > 0) CHECK(cps[i].objective <= cps[i - 1].objective + 1e-15);
  }
  CHECK(cps.front().objective == f_value(cds, maximally_mixed<RealVector>(4)));

  const auto epochs = baseline_run(cds, Budget::epochs(7));
  CHECK(epochs.record.checkpoints.back().iter == 7);
}
