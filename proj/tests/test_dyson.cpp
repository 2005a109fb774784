#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qhi/dyson.hpp"

using namespace qhi;

namespace {

ComplexMatrix diag4(double a, double b, double c, double d) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m.diagonal() << a, b, c, d;
  return m;
}

}  // namespace

TEST(SqrtPd, Examples) {
  EXPECT_EQ(matrix_sqrt_pd(ComplexMatrix::Identity(4, 4)), ComplexMatrix::Identity(4, 4));
  EXPECT_LT(max_abs(matrix_sqrt_pd(diag4(4, 9, 0.25, 1)) - diag4(2, 3, 0.5, 1)), 1e-15);
  const ComplexMatrix expect = diag4(std::sqrt(7.5), std::sqrt(2.5), std::sqrt(0.625), std::sqrt(0.2083333333333333));
  EXPECT_LT(max_abs(matrix_sqrt_pd(diagonal_metric(0.5, 1.2)) - expect), 1e-12);
}

TEST(SqrtPd, RandomPdMatrices) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const ComplexMatrix a = oracle::random_matrix(rng, 4);
    const ComplexMatrix theta = a.adjoint() * a + 0.1 * ComplexMatrix::Identity(4, 4);
    const ComplexMatrix om = matrix_sqrt_pd(theta);
    EXPECT_LT(max_abs(om * om - theta), 1e-10);
    EXPECT_LT(hermiticity_defect(om), 1e-12);
    EXPECT_TRUE(check_positive_definite(om).is_pd);
  }
}

TEST(SqrtPd, RejectsIndefinite) {
  try {
    matrix_sqrt_pd(diag4(1, 2, -0.5, 3));
    FAIL();
  } catch (const NotPositiveDefinite& e) {
    EXPECT_DOUBLE_EQ(e.eigenvalue(), -0.5);
  }
  EXPECT_THROW(matrix_sqrt_pd(diag4(1, 2, 0.0, 3)), NotPositiveDefinite);
  EXPECT_THROW(matrix_sqrt_pd(diagonal_metric(0.9, 1.2)), NotPositiveDefinite);
}

TEST(Hermitize, TrivialMetricIsIdentityMap) {
  const ComplexMatrix h = eval_hermitian(1.0, 1.0);
  const auto d = hermitize(h, ComplexMatrix::Identity(4, 4));
  EXPECT_EQ(d.hermitized, h);
  EXPECT_EQ(d.omega, ComplexMatrix::Identity(4, 4));
  EXPECT_EQ(d.theta_condition_number, 1.0);
}

TEST(Hermitize, ModelPoint) {
  const ComplexMatrix h = eval_nonhermitian(0.5, 1.2);
  const auto d = hermitize(h, diagonal_metric(0.5, 1.2));
  EXPECT_LE(d.hermiticity_defect, 1e-10);
  EXPECT_LE(d.isospectral_defect, 1e-8);
  const Spectrum s = eigenvalues(d.hermitized);
  const Spectrum ref = closed_form_nonhermitian(0.5, 1.2);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(std::abs(s[i] - ref[i]), 1e-8);
  EXPECT_LT(max_abs(d.omega * d.omega_inverse - ComplexMatrix::Identity(4, 4)), 1e-10);
  EXPECT_LT(max_abs(d.omega.adjoint() * d.omega - d.theta), 1e-10);
  EXPECT_NEAR(d.theta_condition_number, 7.5 / 0.2083333333333333, 1e-9);
}

TEST(Hermitize, OffDiagonalsBecomeGeometricMeans) {
  const double eta = 0.5, lambda = 1.2;
  const auto d = hermitize(eval_nonhermitian(eta, lambda), diagonal_metric(eta, lambda));
  EXPECT_NEAR(std::abs(d.hermitized(0, 1)), std::sqrt((1 - eta) * (1 + eta)), 1e-12);
  EXPECT_NEAR(std::abs(d.hermitized(1, 2)), std::sqrt((1 - eta * lambda) * (1 + eta * lambda)), 1e-12);
}

TEST(Hermitize, PreconditionViolations) {
  const ComplexMatrix h = eval_nonhermitian(0.5, 1.2);
  try {
    hermitize(h, ComplexMatrix::Identity(4, 4));
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_GT(e.residual(), 0.9);
  }
  EXPECT_THROW(hermitize(eval_nonhermitian(0.9, 1.2), diagonal_metric(0.9, 1.2)), NotPositiveDefinite);
  EXPECT_THROW(hermitize(h, ComplexMatrix::Identity(3, 3)), DimensionMismatch);
}

TEST(Hermitize, RandomKernelMetrics) {
  // PD combinations of kernel-solver elements give Hermitian h with defect bounded by the input residual
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (auto [eta, lambda] : {std::pair{0.25, 1.0}, {0.5, 1.2}, {0.3, 0.6}}) {
    const ComplexMatrix h = eval_nonhermitian(eta, lambda);
    const ComplexMatrix base = diagonal_metric(eta, lambda);
    const auto kb = solve_metric_kernel(h);
    int used = 0;
    for (int rep = 0; rep < 20; ++rep) {
      ComplexMatrix theta = base;
      for (const auto& b : kb.basis) theta += u(rng) * b;
      if (!check_positive_definite(theta).is_pd) continue;
      ++used;
      const double residual = quasi_hermiticity_residual(h, theta);
      const auto d = hermitize(h, theta);
      EXPECT_LE(d.hermiticity_defect, std::max(100.0 * residual, 1e-12));
      EXPECT_LE(d.isospectral_defect, 1e-8);
      const Spectrum hs = eigenvalues(d.omega);
      for (const auto& v : hs.values) EXPECT_GT(v.real(), 0.0);
    }
    EXPECT_GT(used, 5);
  }
}

TEST(Hermitize, PolarFreedom) {
  const ComplexMatrix theta = diagonal_metric(0.5, 1.2);
  const ComplexMatrix om = matrix_sqrt_pd(theta);
  std::mt19937_64 rng(3);
  const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(oracle::random_matrix(rng, 4)).householderQ();
  const ComplexMatrix uom = q * om;
  EXPECT_LT(max_abs(uom.adjoint() * uom - theta), 1e-12);
  EXPECT_GT(hermiticity_defect(uom), 1e-3);
  EXPECT_LT(hermiticity_defect(om), 1e-14);
}

TEST(HermitizedPencil, Branches) {
  const HamiltonianPencil p{PencilFamily::unified, 1.0};
  const auto pts = hermitized_pencil(p, {-0.5, 0.5, 0.999});
  ASSERT_EQ(pts.size(), 3u);
  ASSERT_TRUE(pts[0].decomposition);
  EXPECT_EQ(pts[0].decomposition->hermitized, eval_unified(-0.5, 1.0));
  ASSERT_TRUE(pts[1].decomposition);
  EXPECT_LE(pts[1].decomposition->hermiticity_defect, 1e-10);
  ASSERT_TRUE(pts[2].decomposition);
  EXPECT_TRUE(pts[2].decomposition->hermitized.allFinite());
  EXPECT_GT(pts[2].decomposition->theta_condition_number, 1e3);
}

TEST(HermitizedPencil, ConstantContinuation) {
  const HamiltonianPencil p{PencilFamily::unified, 1.0};
  const auto pts = hermitized_pencil(p, {-0.7, -0.1}, Continuation::constant);
  for (const auto& pt : pts) {
    ASSERT_TRUE(pt.decomposition);
    EXPECT_EQ(pt.decomposition->hermitized, build_kinetic(4));
  }
}

TEST(HermitizedPencil, PerPointErrors) {
  const HamiltonianPencil p{PencilFamily::nonhermitian, 1.2};
  const auto pts = hermitized_pencil(p, {0.5, 5.0 / 6.0, 0.9, 1.0});
  EXPECT_TRUE(pts[0].decomposition);
  EXPECT_EQ(pts[1].status, "singular");
  EXPECT_EQ(pts[2].status, "not_pd");
  EXPECT_EQ(pts[3].status, "singular");
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_FALSE(pts[i].decomposition);
    EXPECT_FALSE(pts[i].error.empty());
  }
}

TEST(HermitizedPencil, IsospectralAcrossPhysicalDomain) {
  for (double lambda : {0.6, 1.0, 1.2}) {
    const double edge = std::min(1.0, 1.0 / lambda);
    const auto grid = linspace(-0.95 * edge, 0.95 * edge, 39);
    for (const auto& pt : hermitized_pencil({PencilFamily::nonhermitian, lambda}, grid, Continuation::own_matrix, 1e-9, 2)) {
      ASSERT_TRUE(pt.decomposition) << pt.error;
      EXPECT_LE(pt.decomposition->isospectral_defect, 1e-8) << lambda << " " << pt.param;
    }
  }
}
