#include <gtest/gtest.h>

#include <cmath>

#include "qhi/exceptional.hpp"

using namespace qhi;

namespace {

const HamiltonianPencil kNh65{PencilFamily::nonhermitian, 1.2};
const HamiltonianPencil kNh35{PencilFamily::nonhermitian, 0.6};
const HamiltonianPencil kUnified{PencilFamily::unified, 1.0};
constexpr double kTol = 1e-10;

// closed-form branch points of the general eigenvalue formula
double complexification_lambda_lt_1(double lambda) { return std::sqrt(5.0 / (4.0 + lambda * lambda)); }

}  // namespace

TEST(LocateEp, FirstKindAtInverseLambda) {
  const auto ep = locate_ep(kNh65, 0.5, 1.0, 0.01, kTol);
  EXPECT_NEAR(ep.param_value, 5.0 / 6.0, 1e-8);
  EXPECT_EQ(ep.kind, EpKind::first_kind);
  EXPECT_LE(ep.residual_gap, 10.0 * std::sqrt(kTol) * 2.0);
}

TEST(LocateEp, SecondKindCrossingAtOne) {
  const auto ep = locate_ep(kNh35, 0.9, 1.1, 0.01, kTol);
  EXPECT_NEAR(ep.param_value, 1.0, 1e-8);
  EXPECT_EQ(ep.kind, EpKind::second_kind);
  EXPECT_LE(ep.residual_gap, 1e3 * kTol * 2.0);
  // crossing at E = 0
  const Spectrum s = eigenvalues(kNh35.at(ep.param_value));
  EXPECT_LT(std::abs(s[ep.level_pair.first]), 1e-7);
  EXPECT_LT(std::abs(s[ep.level_pair.second]), 1e-7);
  for (double side : {-0.05, 0.05}) EXPECT_EQ(eigenvalues(kNh35.at(1.0 + side)).reality, Reality::all_real);
}

TEST(LocateEp, UnifiedFourfold) {
  const auto ep = locate_ep(kUnified, 0.9, 1.1, 0.01, kTol);
  EXPECT_NEAR(ep.param_value, 1.0, 1e-8);
  EXPECT_EQ(ep.multiplicity, 4);
  EXPECT_EQ(ep.kind, EpKind::first_kind);
}

TEST(LocateEp, InverseLambdaFamily) {
  for (double lambda : {1.2, 1.5, 2.0}) {
    const auto ep = locate_ep({PencilFamily::nonhermitian, lambda}, 0.2, 1.0 / lambda + 0.05, 0.005, kTol);
    EXPECT_NEAR(ep.param_value, 1.0 / lambda, kTol) << lambda;
    EXPECT_EQ(ep.kind, EpKind::first_kind);
  }
}

TEST(LocateEp, ComplexificationBelowUnitLambda) {
  const double expect = complexification_lambda_lt_1(0.6);
  const auto ep = locate_ep(kNh35, 1.02, 1.3, 0.01, kTol);
  EXPECT_NEAR(ep.param_value, expect, 1e-8);
  EXPECT_NEAR(expect, 1.0708823, 1e-7);
  EXPECT_EQ(ep.kind, EpKind::first_kind);
  EXPECT_EQ(eigenvalues(kNh35.at(expect - 0.01)).reality, Reality::all_real);
  EXPECT_EQ(eigenvalues(kNh35.at(expect + 0.01)).reality, Reality::partially_complex);
}

TEST(LocateEp, QuartetCollapseAtInverseLambda) {
  const auto ep = locate_ep(kNh35, 1.5, 1.8, 0.01, kTol);
  EXPECT_NEAR(ep.param_value, 5.0 / 3.0, 1e-8);
  EXPECT_EQ(ep.kind, EpKind::first_kind);
}

TEST(LocateEp, NoIndicatorChange) {
  EXPECT_THROW(locate_ep(kNh65, 0.1, 0.5, 0.01, kTol), NoEpInBracket);
  EXPECT_THROW(locate_ep({PencilFamily::hermitian, 1.0}, -2.0, 2.0, 0.01, kTol), NoEpInBracket);
}

TEST(LocateEp, BadArguments) {
  EXPECT_THROW(locate_ep(kNh65, 1.0, 0.5, 0.01, kTol), InvalidArgument);
  EXPECT_THROW(locate_ep(kNh65, 0.5, 1.0, 0.01, 0.0), InvalidArgument);
  EXPECT_THROW(locate_ep(kNh65, 0.5, 1.0, -1.0, kTol), InvalidArgument);
}

TEST(ScanEps, SymmetricTaxonomyLambdaThreeFifths) {
  const auto eps = scan_eps(kNh35, linspace(-2.0, 2.0, 81), 0.01, 1e-9);
  ASSERT_EQ(eps.size(), 6u);
  const double c = complexification_lambda_lt_1(0.6);
  const double expect[6] = {-5.0 / 3.0, -c, -1.0, 1.0, c, 5.0 / 3.0};
  const EpKind kinds[6] = {EpKind::first_kind, EpKind::first_kind, EpKind::second_kind,
                           EpKind::second_kind, EpKind::first_kind, EpKind::first_kind};
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(eps[i].param_value, expect[i], 1e-8) << i;
    EXPECT_EQ(eps[i].kind, kinds[i]) << i;
  }
}

TEST(ScanEps, NodeOnAnEpDoesNotHideNeighbour) {
  // grid nodes land exactly on eta = -1, with the quartet collapse at -0.9587 in the same cell
  const auto eps = scan_eps(kNh65, linspace(-2.0, 2.0, 81), 0.01, 1e-9);
  int near_collapse = 0;
  for (const auto& ep : eps)
    if (std::abs(std::abs(ep.param_value) - 0.9587062) < 1e-6) ++near_collapse;
  EXPECT_EQ(near_collapse, 2);
}

TEST(ScanEps, KindInvariantHoldsOnEveryEp) {
  for (const auto& pencil : {kNh35, kNh65, kUnified}) {
    for (const auto& ep : scan_eps(pencil, linspace(-2.0, 2.0, 81), 0.01, 1e-9)) {
      const bool left = eigenvalues(pencil.at(ep.param_value - 0.01)).reality == Reality::all_real;
      const bool right = eigenvalues(pencil.at(ep.param_value + 0.01)).reality == Reality::all_real;
      if (ep.kind == EpKind::second_kind)
        EXPECT_TRUE(left && right);
      else
        EXPECT_FALSE(left && right);
      EXPECT_LT(ep.level_pair.first, ep.level_pair.second);
    }
  }
}

TEST(ScanEps, HermitianPencilHasNone) {
  EXPECT_TRUE(scan_eps({PencilFamily::hermitian, 1.0}, linspace(-2.0, 2.0, 81), 0.01, 1e-9).empty());
  EXPECT_TRUE(scan_eps({PencilFamily::hermitian, 0.6}, linspace(-2.0, 2.0, 81), 0.01, 1e-9).empty());
}

TEST(EpKind, Names) {
  EXPECT_EQ(to_string(EpKind::first_kind), "first_kind");
  EXPECT_EQ(to_string(EpKind::second_kind), "second_kind");
}
