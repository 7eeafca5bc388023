#include "hitchin/spectra.hpp"
#include "oracles.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>

using namespace hitchin;

namespace {

const Rep4& fuchsian() {
  static const Rep4 rep = lift_principal(fuchsian_octagon_rep());
  return rep;
}

const Rep4& bent() {
  static const Rep4 rep = bend(fuchsian(), separating_curve(), Vec4(1, 0, 0, -1), 0.1);
  return rep;
}

const Vec4 kLog32(std::log(3.0), std::log(2.0), -std::log(2.0), -std::log(3.0));

}  // namespace

TEST(Jordan, DiagonalAndPrincipal) {
  EXPECT_LT((jordan_projection(Mat4(Vec4(3, 2, 0.5, 1.0 / 3).asDiagonal())) - kLog32).norm(), 1e-12);
  Mat2 d;
  d << 2, 0, 0, 0.5;
  const double l = std::log(2.0);
  EXPECT_LT((jordan_projection(sym_cube(d)) - Vec4(3 * l, l, -l, -3 * l)).norm(), 1e-12);
}

TEST(Jordan, MatchesGeneralEigensolverOnShortWords) {
  for (const Word& w : enumerate_words(3)) {
    const Eigen::VectorXd expect = oracle::log_moduli_paired(bent().evaluate_long(w), bent().evaluate_long(w.inverse()));
    EXPECT_LT((jordan_projection(bent(), w) - Vec4(expect)).cwiseAbs().maxCoeff(), 1e-8) << w.str();
  }
}

TEST(Eq1, KnownValues) {
  EXPECT_NEAR(eq1_residual(Vec4(3, 1, -1, -3)), 0.0, 1e-15);
  EXPECT_NEAR(eq1_residual(kLog32), -1.7575, 1e-4);
  const Vec4 l = kLog32 * 7.0;
  EXPECT_NEAR(eq1_residual_normalized(l), eq1_residual(kLog32 / kLog32.norm()), 1e-14);
  try {
    eq1_residual(Vec4(1, 2, 0, -3));
    FAIL() << "expected NotSorted";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSorted);
  }
}

TEST(EllipseRatios, KnownValuesAndGap) {
  const auto r = ellipse_ratios(Vec4(3, 1, -1, -3));
  EXPECT_DOUBLE_EQ(r.first, 2.0);
  EXPECT_DOUBLE_EQ(r.second, 2.0);
  const auto q = ellipse_ratios(Vec4(4, 1, 0, -5));
  EXPECT_DOUBLE_EQ(q.first, 4.0 / 3);
  EXPECT_DOUBLE_EQ(q.second, 6.0 / 5);
  try {
    ellipse_ratios(Vec4(1, 1, 0, -2));
    FAIL() << "expected DegenerateGap";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateGap);
  }
}

TEST(DiagonalForm, KnownValues) {
  const auto a = diagonal_form_check(Vec4(3, 1, -1, -3), 1e-12);
  ASSERT_TRUE(a.has_value());
  EXPECT_NEAR(*a, std::exp(1.0), 1e-12);
  EXPECT_FALSE(diagonal_form_check(kLog32, 1e-9).has_value());
  EXPECT_FALSE(diagonal_form_check(Vec4(2, 1, -1, -2), 1e-9).has_value());
}

TEST(Eq1, RatioFormEquivalentNearZeroLocus) {
  props::Gen g(61);
  for (int k = 0; k < 200; ++k) {
    const double t = g.uniform(0.5, 3.0);
    const double l1 = 3 * t + g.uniform(-0.3, 0.3), l2 = t + g.uniform(-0.3, 0.3), l3 = -t + g.uniform(-0.3, 0.3);
    const double scale = 1e-9 * (l2 - l3);
    const double target = (k % 2 ? 10.0 : 0.1) * (k % 4 < 2 ? 1 : -1) * scale;
    // eq1 is affine in l4 with slope (l2 - l1).
    const double c = (l1 - l3) * l3 - l2 * (l2 - l3);
    double l4 = (target - c) / (l2 - l1);
    const Vec4 l(l1, l2, l3, l4);
    if (l3 - l4 < 0.1) continue;
    const double diff = std::abs((l1 - l3) / (l2 - l3) - (l2 - l4) / (l3 - l4));
    const bool ratio_equal = diff < 1e-9;
    const bool residual_small = std::abs(eq1_residual(l)) < 1e-9 * (l2 - l3) * (l3 - l4);
    EXPECT_EQ(ratio_equal, residual_small) << "diff " << diff;
  }
}

TEST(Witness, PublishedValues) {
  EXPECT_GT(std::abs(fuchsian_witness(Vec4(3, 2, 0.5, 1.0 / 3))), 1e-6);
  EXPECT_LT(std::abs(fuchsian_witness(Vec4(8, 2, 0.5, 0.125))), 1e-12);
  EXPECT_EQ(fuchsian_witness(Vec4(1, 2, 0.5, 1)), 0.0);
}

TEST(Witness, MatchesSymmetricFunctionOracleUnderReordering) {
  props::Gen g(62);
  for (int k = 0; k < 100; ++k) {
    std::array<double, 4> a{g.uniform(0.2, 3), g.uniform(0.2, 3), g.uniform(-3, -0.2), g.uniform(-1, 1)};
    const double direct = fuchsian_witness(Vec4(a[0], a[1], a[2], a[3]));
    const double expect = oracle::witness_by_char_poly(a);
    EXPECT_NEAR(direct, expect, 1e-9 * std::max(1.0, std::abs(expect)));
    std::array<double, 4> b{a[2], a[0], a[3], a[1]};
    EXPECT_NEAR(fuchsian_witness(Vec4(b[0], b[1], b[2], b[3])), direct, 1e-9 * std::max(1.0, std::abs(direct)));
  }
}

TEST(Scan, FuchsianSatisfiesEq3) {
  const SpectraScan scan = spectra_scan(fuchsian(), 4);
  EXPECT_EQ(scan.records.size(), 3200u);
  for (const auto& r : scan.records) {
    EXPECT_LT(std::abs(r.eq1_residual), 1e-8) << r.word.str();
    EXPECT_NEAR(r.ellipse_ratios.first, 2.0, 1e-8);
    EXPECT_NEAR(r.ellipse_ratios.second, 2.0, 1e-8);
  }
  EXPECT_TRUE(spectra_scan(fuchsian(), 0).records.empty());
}

TEST(Scan, BentViolatesEq1) {
  const SpectraScan scan = spectra_scan(bent(), 4);
  double worst = 0.0;
  for (const auto& r : scan.records) worst = std::max(worst, std::abs(r.eq1_normalized));
  EXPECT_GT(worst, 1e-3);
}

TEST(Cone, FuchsianRayAndBentSpread) {
  const ConeSampleSet f = limit_cone_sample(fuchsian(), 3);
  const Vec4 ray = Vec4(3, 1, -1, -3).normalized();
  for (const auto& d : f.directions) EXPECT_LT((d - ray).norm(), 1e-8);
  EXPECT_EQ(cone_dimension(f).rank, 1);
  EXPECT_TRUE(limit_cone_sample(fuchsian(), 0).directions.empty());

  const ConeSampleSet b = limit_cone_sample(bent(), 3);
  double widest = 0.0;
  for (const auto& d : b.directions) widest = std::max(widest, std::acos(std::min(1.0, d.dot(b.directions[0]))));
  EXPECT_GT(widest, 1e-3);
  EXPECT_GE(cone_dimension(b).rank, 2);
}

TEST(Cone, DimensionOfConstructedSets) {
  ConeSampleSet one;
  for (int k = 0; k < 5; ++k) one.directions.push_back(Vec4(3, 1, -1, -3).normalized());
  EXPECT_EQ(cone_dimension(one).rank, 1);
  ConeSampleSet full;
  full.directions = {Vec4(1, 0, 0, -1).normalized(), Vec4(1, 1, -1, -1).normalized(),
                     Vec4(3, 1, -1, -3).normalized(), Vec4(1, 1, 1, -3).normalized()};
  EXPECT_EQ(cone_dimension(full).rank, 3);
  EXPECT_THROW(cone_dimension(ConeSampleSet{}), GeometryError);
}

TEST(Properties, ConjugationInvariance) {
  const auto r = props::jordan_conjugation(bent(), 100);
  EXPECT_TRUE(r.ok()) << r.failures << " failures, worst " << r.worst;
}

TEST(Properties, PowersScaleLinearly) {
  const auto r = props::jordan_powers(bent(), 100);
  EXPECT_TRUE(r.ok()) << r.failures << " failures, worst " << r.worst;
}
