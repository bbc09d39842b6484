#include "csoigo/error.hpp"
#include "csoigo/subspace.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace csoigo;
using csoigo::testing::random_complex;

namespace {

double orthonormality_error(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd unit_modulus_features(Eigen::Index k, Eigen::Index n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  return Eigen::MatrixXcd::NullaryExpr(k, n, [&] { return std::polar(1.0, angle(gen)); });
}

}  // namespace

TEST_CASE("rank-one fit: the basis is t / sqrt(K) up to phase") {
  std::mt19937_64 gen(1);
  const Eigen::MatrixXcd x = unit_modulus_features(30, 1, gen);
  const SubspaceModel m = fit_complex_pca(x, 1);
  CHECK(m.dim() == 1);
  CHECK(m.spectrum[0] == doctest::Approx(30.0).epsilon(1e-12));
  const std::complex<double> phase = (x.col(0) / std::sqrt(30.0)).dot(m.basis.col(0));
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
  CHECK((m.basis.col(0) * std::conj(phase) - x.col(0) / std::sqrt(30.0)).norm() < 1e-12);
  CHECK(m.effective_rank == 1);
}

TEST_CASE("full-rank projection reconstructs the training matrix") {
  std::mt19937_64 gen(2);
  const Eigen::MatrixXcd x = unit_modulus_features(40, 6, gen);
  const SubspaceModel m = fit_complex_pca(x, 6);
  const Eigen::MatrixXcd recon = m.basis * project_all(m, x);
  CHECK((x - recon).norm() <= 1e-8 * x.norm());
  CHECK(reconstruction_error(m, x) <= 1e-8 * x.squaredNorm());
  for (Eigen::Index i = 0; i < 6; ++i) CHECK((m.basis * project(m, x.col(i)) - x.col(i)).norm() < 1e-8);
}

TEST_CASE("random 12x5 instance matches the dense covariance eigensolver") {
  std::mt19937_64 gen(3);
  const Eigen::MatrixXcd x = random_complex(12, 5, gen);
  const SubspaceModel m = fit_complex_pca(x, 3);
  const auto oracle = csoigo::testing::dense_covariance_eigen(x, 3);
  CHECK(csoigo::testing::subspace_sin_angle(m.basis, oracle.vectors) < 1e-8);
  for (Eigen::Index j = 0; j < 3; ++j) CHECK(m.spectrum[j] == doctest::Approx(oracle.values[j]).epsilon(1e-10));
}

TEST_CASE("orthonormality, ordering and spectral consistency on random instances") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index k = 5 + trial % 30, n = 1 + trial % 12;
    const Eigen::Index d = 1 + trial % std::min(k, n);
    const Eigen::MatrixXcd x = trial % 2 ? random_complex(k, n, gen) : unit_modulus_features(k, n, gen);
    const SubspaceModel m = fit_complex_pca(x, d);
    CHECK(orthonormality_error(m.basis) < 1e-10);
    for (Eigen::Index j = 0; j + 1 < d; ++j) CHECK(m.spectrum[j] >= m.spectrum[j + 1]);
    CHECK(m.spectrum.minCoeff() >= -1e-9);
    const Eigen::MatrixXcd cov_u = x * (x.adjoint() * m.basis);
    for (Eigen::Index j = 0; j < d; ++j)
      CHECK((cov_u.col(j) - m.spectrum[j] * m.basis.col(j)).norm() <= 1e-6 * m.spectrum[0]);
  }
}

TEST_CASE("reconstruction error equals the discarded spectrum") {
  std::mt19937_64 gen(5);
  const Eigen::MatrixXcd x = random_complex(15, 7, gen);
  const auto oracle = csoigo::testing::dense_covariance_eigen(x, 7);
  double previous = std::numeric_limits<double>::infinity();
  for (Eigen::Index d = 1; d <= 7; ++d) {
    const double err = reconstruction_error(fit_complex_pca(x, d), x);
    const double discarded = oracle.values.segment(d, 7 - d).sum();
    CHECK(std::abs(err - discarded) <= 1e-6 * x.squaredNorm());
    CHECK(err <= previous);
    previous = err;
  }

  // Rank-2 matrix with d = 1: the error is the second eigenvalue.
  const Eigen::MatrixXcd rank2 = random_complex(10, 2, gen) * random_complex(2, 6, gen);
  const auto o2 = csoigo::testing::dense_covariance_eigen(rank2, 2);
  CHECK(reconstruction_error(fit_complex_pca(rank2, 1), rank2) == doctest::Approx(o2.values[1]).epsilon(1e-6));
  CHECK(reconstruction_error(fit_complex_pca(rank2, 2), rank2) <= 1e-8 * rank2.squaredNorm());
}

TEST_CASE("phase of basis columns does not change reconstruction error") {
  std::mt19937_64 gen(6);
  const Eigen::MatrixXcd x = unit_modulus_features(25, 8, gen);
  SubspaceModel m = fit_complex_pca(x, 4);
  const double before = reconstruction_error(m, x);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (Eigen::Index j = 0; j < 4; ++j) m.basis.col(j) *= std::polar(1.0, angle(gen));
  CHECK(std::abs(reconstruction_error(m, x) - before) <= 1e-10 * std::max(1.0, before));
}

TEST_CASE("projection properties") {
  std::mt19937_64 gen(7);
  SUBCASE("identity basis returns the input") {
    SubspaceModel m;
    m.basis = Eigen::MatrixXcd::Identity(4, 4);
    m.spectrum = Eigen::VectorXd::Ones(4);
    const Eigen::VectorXcd t = random_complex(4, 1, gen);
    CHECK(project(m, t) == t);
  }
  SUBCASE("column-wise projection equals matrix projection") {
    const Eigen::MatrixXcd x = unit_modulus_features(20, 5, gen);
    const SubspaceModel m = fit_complex_pca(x, 3);
    const Eigen::MatrixXcd y = project_all(m, x);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK((project(m, x.col(i)) - y.col(i)).norm() < 1e-14);
  }
  SUBCASE("dimension mismatch") {
    const SubspaceModel m = fit_complex_pca(random_complex(6, 3, gen), 2);
    CHECK_THROWS_AS(project(m, Eigen::VectorXcd::Ones(5)), InvalidArgument);
    CHECK_THROWS_AS(reconstruction_error(m, Eigen::MatrixXcd::Ones(5, 2)), InvalidArgument);
  }
}

TEST_CASE("Gram path agrees with brute force for K <= 20, N <= 10") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index k = 4 + trial % 17, n = 2 + trial % 9;
    const Eigen::Index d = 1 + trial % (std::min(k, n) - 1);
    const Eigen::MatrixXcd x = random_complex(k, n, gen);
    const SubspaceModel m = fit_complex_pca(x, d);
    const auto oracle = csoigo::testing::dense_covariance_eigen(x, d);
    CHECK(csoigo::testing::subspace_sin_angle(m.basis, oracle.vectors) < 1e-8);
  }
}

TEST_CASE("rank deficiency is flagged and the basis stays orthonormal") {
  std::mt19937_64 gen(9);
  Eigen::MatrixXcd x(12, 5);
  const Eigen::MatrixXcd base = unit_modulus_features(12, 2, gen);
  x << base, base, base.col(0);
  const SubspaceModel m = fit_complex_pca(x, 4);
  CHECK(m.effective_rank == 2);
  CHECK(m.rank_deficient());
  CHECK(orthonormality_error(m.basis) < 1e-10);
  CHECK(m.spectrum.tail(2).maxCoeff() < 1e-9);
  CHECK(reconstruction_error(m, x) < 1e-8 * x.squaredNorm());
}

TEST_CASE("real data yields a real basis") {
  std::mt19937_64 gen(10);
  const Eigen::MatrixXcd x = csoigo::testing::random_real(9, 4, gen).cast<std::complex<double>>();
  const SubspaceModel m = fit_complex_pca(x, 3);
  CHECK(m.basis.imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("d out of range") {
  std::mt19937_64 gen(11);
  const Eigen::MatrixXcd x = random_complex(6, 3, gen);
  CHECK_THROWS_WITH_AS(fit_complex_pca(x, 0), doctest::Contains("d out of range"), InvalidArgument);
  CHECK_THROWS_WITH_AS(fit_complex_pca(x, 4), doctest::Contains("d out of range"), InvalidArgument);
  Eigen::MatrixXcd bad = x;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_complex_pca(bad, 2), DataError);
}

TEST_CASE("truncation equals fitting with the smaller d") {
  std::mt19937_64 gen(12);
  const Eigen::MatrixXcd x = unit_modulus_features(30, 9, gen);
  const SubspaceModel full = fit_complex_pca(x, 9);
  for (Eigen::Index d = 1; d <= 9; ++d) {
    const SubspaceModel direct = fit_complex_pca(x, d);
    const SubspaceModel cut = full.truncated(d);
    CHECK(direct.basis == cut.basis);
    CHECK(direct.spectrum == cut.spectrum);
  }
  CHECK_THROWS_AS(full.truncated(10), InvalidArgument);
}

TEST_CASE("JSON round trip is bit exact") {
  std::mt19937_64 gen(13);
  SubspaceModel m = fit_complex_pca(unit_modulus_features(12, 4, gen), 3);
  m.image_rows = 4;
  m.image_cols = 3;
  m.order = FeatureOrder::First;
  const auto text = subspace_to_json(m).dump();
  const SubspaceModel back = subspace_from_json(nlohmann::json::parse(text));
  CHECK(back.basis == m.basis);
  CHECK(back.spectrum == m.spectrum);
  CHECK(back.effective_rank == m.effective_rank);
  CHECK(back.order == FeatureOrder::First);
  CHECK(back.image_rows == 4);

  auto doc = subspace_to_json(m);
  doc["version"] = 99;
  CHECK_THROWS_WITH_AS(subspace_from_json(doc), doctest::Contains("version"), DataError);
  doc = subspace_to_json(m);
  doc["basis_real"].erase(0);
  CHECK_THROWS_AS(subspace_from_json(doc), DataError);
}
