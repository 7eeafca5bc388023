#include "hitchin/frenet.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace hitchin;

namespace {

const Rep2& base() {
  static const Rep2 rep = fuchsian_octagon_rep();
  return rep;
}

const Rep4& fuchsian() {
  static const Rep4 rep = lift_principal(base());
  return rep;
}

const FlagTable& table(int max_len) {
  static std::map<int, FlagTable> cache;
  auto it = cache.find(max_len);
  if (it == cache.end()) it = cache.emplace(max_len, build_flag_table(fuchsian(), base(), max_len)).first;
  return it->second;
}

}  // namespace

TEST(BoundaryPoint, DiagonalImageFixesOrigin) {
  Mat2 d;
  d << 2, 0, 0, 0.5;
  const Rep2 toy({d, d, d.inverse(), d.inverse()}, default_tolerances());
  EXPECT_NEAR(angle_gap(boundary_point_of_word(toy, Word::parse("a1")).angle, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(angle_gap(boundary_point_of_word(toy, Word::parse("A1")).angle, kTwoPi / 2), 0.0, 1e-15);
}

TEST(BoundaryPoint, ConjugateWordMovesFixedPoint) {
  const Word a1 = Word::parse("a1");
  for (const char* g : {"b1", "a2B1", "B2b1a2"}) {
    const Word u = Word::parse(g);
    const double expect = act_on_angle(base().evaluate(u), boundary_point_of_word(base(), a1).angle);
    EXPECT_LT(angle_gap(boundary_point_of_word(base(), u * a1 * u.inverse()).angle, expect), 1e-12) << g;
  }
}

TEST(BoundaryPoint, IdentityWordThrows) {
  EXPECT_THROW(boundary_point_of_word(base(), Word()), GeometryError);
}

TEST(VeroneseFlag, CoordinateAxes) {
  const FlagRP3 f0 = veronese_flag({0.0, std::nullopt});
  EXPECT_LT(f0.p1.distance(HomPoint<4>(Vec4(1, 0, 0, 0))), 1e-15);
  EXPECT_LT(f0.p3.distance(Covector<4>(Vec4(0, 0, 0, 1))), 1e-15);
  const FlagRP3 f1 = veronese_flag({kTwoPi / 2, std::nullopt});
  EXPECT_LT(f1.p1.distance(HomPoint<4>(Vec4(0, 0, 0, 1))), 1e-15);
  EXPECT_LT(f1.p3.distance(Covector<4>(Vec4(1, 0, 0, 0))), 1e-15);
}

TEST(VeroneseFlag, DerivativesLieInTheFlag) {
  props::Gen g(41);
  for (int k = 0; k < 100; ++k) {
    const double angle = g.uniform(0, kTwoPi);
    const FlagRP3 f = veronese_flag({angle, std::nullopt});
    EXPECT_LT(f.incidence_residual(), 1e-10);
    const HomPoint<2> p = point_of_angle(angle);
    const double x = p[0], y = p[1], u = -y, v = x;
    const Vec4 d1(3 * x * x * u, 2 * x * y * u + x * x * v, y * y * u + 2 * x * y * v, 3 * y * y * v);
    const Vec4 d2(6 * x * u * u, 2 * y * u * u + 4 * x * u * v, 2 * x * v * v + 4 * y * u * v, 6 * y * v * v);
    EXPECT_LT(f.p2.residual(HomPoint<4>(d1)), 1e-10);
    EXPECT_LT(std::abs(f.p3.coeffs().dot(d2.normalized())), 1e-10);
  }
}

TEST(FlagOfWord, MatchesVeroneseForShortWords) {
  for (const Word& w : enumerate_words(3)) {
    const FlagRP3 f = flag_of_word(fuchsian(), w);
    EXPECT_LT(f.distance(veronese_flag(boundary_point_of_word(base(), w))), 1e-7) << w.str();
    EXPECT_LT(f.incidence_residual(), 1e-9);
  }
}

TEST(FlagOfWord, PowersShareFlagAndInverseGivesBottomLine) {
  for (const char* s : {"a1", "b1A2", "a2b2B1"}) {
    const Word w = Word::parse(s);
    EXPECT_LT(flag_of_word(fuchsian(), w).distance(flag_of_word(fuchsian(), w.power(2))), 1e-10) << s;
    const Vec4 bottom = word_spectrum<4>(fuchsian(), w).split.eigenvectors.col(3);
    EXPECT_LT(flag_of_word(fuchsian(), w.inverse()).p1.distance(HomPoint<4>(bottom)), 1e-10) << s;
  }
}

TEST(FlagTable, SizesAndOrdering) {
  EXPECT_EQ(table(1).size(), 8u);
  const auto& t = table(2);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LT(t[k - 1].point.angle, t[k].point.angle);
  for (const auto& e : t.entries()) EXPECT_LT(e.flag.distance(veronese_flag(e.point)), 1e-7);
}

TEST(FlagTable, DedupKeepsShortestWord) {
  // a1 and a1a1 share their attracting point.
  const auto& t = table(2);
  const std::size_t k = t.index_of(boundary_point_of_word(base(), Word::parse("a1")));
  EXPECT_EQ(t[k].point.word->str(), "a1");
}

TEST(Equivariance, FuchsianAndPerturbed) {
  EXPECT_LT(check_equivariance(fuchsian(), table(4), Word::parse("a1")), 1e-7);
  EXPECT_LT(check_equivariance(fuchsian(), table(4), Word()), 1e-14);
  FlagTable noisy = table(4);
  props::Gen g(43);
  for (auto& e : noisy.mutable_entries()) {
    Mat4 m = Mat4::Identity();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) m(i, j) += g.uniform(-0.05, 0.05);
    }
    e.flag = transform_flag(m, e.flag);
  }
  EXPECT_GT(check_equivariance(fuchsian(), noisy, Word::parse("a1")), 1e-3);
}

TEST(GeneralPosition, FuchsianTableHasPositiveMargins) {
  const auto r = check_general_position(table(2), 200000);
  EXPECT_EQ(r.tested, 56u * 55u * 54u);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_GT(std::min(r.min_plane_margin, r.min_point_margin), 1e-6);
}

TEST(GeneralPosition, DuplicatedFlagIsFlagged) {
  FlagTable t = table(1);
  t.mutable_entries()[1].flag = t[0].flag;
  const auto r = check_general_position(t, 1000);
  EXPECT_GT(r.failures, 0u);
  EXPECT_LT(r.min_plane_margin, 1e-12);
  EXPECT_EQ(check_general_position(t, 0).tested, 0u);
}

TEST(Osculation, SecantLinesApproachTangentLine) {
  // x1^n, x2^n are the fixed points of a1^n b1 a1^-n and a1^n B1 a1^-n, which
  // converge to the attracting point of a1.
  const Word a1 = Word::parse("a1");
  const LineRP3 target = flag_of_word(fuchsian(), a1).p2;
  double prev = INFINITY;
  for (int n = 1; n <= 6; ++n) {
    const Word u = a1.power(n);
    const HomPoint<4> p = flag_of_word(fuchsian(), u * Word::parse("b1") * u.inverse()).p1;
    const HomPoint<4> q = flag_of_word(fuchsian(), u * Word::parse("B1") * u.inverse()).p1;
    const double d = join_points(p, q).distance(target);
    EXPECT_LT(d, prev) << "n = " << n;
    prev = d;
  }
}
