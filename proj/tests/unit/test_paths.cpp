#include <gtest/gtest.h>

#include <cmath>

#include "charpath/errors.hpp"
#include "charpath/paths.hpp"
#include "charpath/steinhaus.hpp"

using namespace charpath;

namespace {
const double kInvSqrt5 = 1.0 / std::sqrt(5.0);
}

TEST(PartialSum, Examples) {
  const Character chi(build_context(5), 1);
  EXPECT_LT(std::abs(partial_sum(chi, 1.0)), 1e-15);
  EXPECT_LT(std::abs(partial_sum(chi, Fraction{1, 5}) - cplx(kInvSqrt5, 0.0)), 1e-15);
  EXPECT_LT(std::abs(partial_sum(chi, Fraction{2, 5}) - cplx(kInvSqrt5, kInvSqrt5)), 1e-15);
  // decimal 0.4 snaps to the vertex 2/5
  EXPECT_LT(std::abs(partial_sum(chi, 0.4) - cplx(kInvSqrt5, kInvSqrt5)), 1e-15);
  EXPECT_EQ(partial_sum(chi, 0.0), cplx(0.0, 0.0));
}

TEST(PathValue, Examples) {
  const Character chi(build_context(5), 1);
  EXPECT_LT(std::abs(path_value(chi, 0.1) - cplx(0.5 * kInvSqrt5, 0.0)), 1e-15);
  EXPECT_EQ(path_value(chi, 0.0), cplx(0.0, 0.0));
  EXPECT_EQ(path_value(chi, 1.0), cplx(0.0, 0.0));
}

TEST(PathValue, ClosureExact) {
  for (std::uint64_t q : {5, 101, 1009}) {
    const auto ctx = build_context(q);
    for (const auto& chi : enumerate_characters(ctx, CharacterFilter::nonprincipal)) {
      EXPECT_LT(std::abs(path_value(chi, 0.0)), 1e-12);
      EXPECT_LT(std::abs(path_value(chi, 1.0)), 1e-12);
    }
  }
}

TEST(PathValue, WithinOneStepOfPartialSum) {
  const auto ctx = build_context(1009);
  const SeedSpec seed{3, 0};
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Character chi(ctx, static_cast<std::uint32_t>(mix_counter(seed, 2 * i) % 1008));
    const double t = mix_unit(seed, 2 * i + 1);
    EXPECT_LE(std::abs(path_value(chi, t) - partial_sum(chi, t)), 1.0 / std::sqrt(1009.0) + 1e-15);
  }
}

TEST(SamplePath, VertexGrid) {
  const Character chi(build_context(5), 1);
  const auto path = sample_path(chi, PathGrid::vertex(5));
  ASSERT_EQ(path.values.size(), 6u);
  EXPECT_EQ(path.values.front(), cplx(0.0, 0.0));
  EXPECT_LT(std::abs(path.values.back()), 1e-15);
  const auto principal = sample_path(Character(build_context(7), 0), PathGrid::vertex(7));
  EXPECT_NEAR(principal.values.back().real(), 6.0 / std::sqrt(7.0), 1e-14);
}

TEST(SamplePath, UniformGridNearPartialSums) {
  const Character chi(build_context(5), 1);
  const auto grid = PathGrid::uniform(11);
  const auto path = sample_path(chi, grid);
  ASSERT_EQ(path.values.size(), 11u);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_LE(std::abs(path.values[i] - partial_sum(chi, grid.time(i))), kInvSqrt5 + 1e-15);
}

TEST(PathGrid, Shapes) {
  const auto v = PathGrid::vertex(7);
  EXPECT_EQ(v.size(), 8u);
  EXPECT_EQ(v[0], 0.0);
  EXPECT_EQ(v[7], 1.0);
  const auto u = PathGrid::uniform(5);
  EXPECT_EQ(u[2], 0.5);
  EXPECT_EQ(u.denominator(), 4u);
  EXPECT_THROW(PathGrid::uniform(1), InvalidArgument);
  EXPECT_THROW(PathGrid::points({0.5, 0.2}), InvalidArgument);
  EXPECT_THROW(PathGrid::points({0.5, 1.5}), InvalidArgument);
}

TEST(FourierPath, Examples) {
  const auto c5 = build_context(5);
  EXPECT_LT(std::abs(fourier_path(Character(c5, 1), 0.0, 3)), 1e-15);
  EXPECT_LT(std::abs(fourier_path(Character(c5, 2), 0.5, 4)), 1e-12);
  EXPECT_LT(std::abs(fourier_path_parity(Character(c5, 2), 0.5, 4)), 1e-12);
  EXPECT_THROW(fourier_path(Character(c5, 0), 0.3, 4), PrincipalCharacter);
  EXPECT_THROW(fourier_path(Character(c5, 1), 0.3, 5), InvalidArgument);
}

TEST(FourierPath, ParityFormsAgreeWithGeneral) {
  for (std::uint64_t q : {7, 101}) {
    const auto ctx = build_context(q);
    for (const auto& chi : enumerate_characters(ctx, CharacterFilter::nonprincipal))
      for (double t : {0.1, 0.37, 0.5, 0.9})
        EXPECT_LT(std::abs(fourier_path(chi, t, q - 1) - fourier_path_parity(chi, t, q - 1)), 1e-10);
  }
}

TEST(FourierPath, CloseToPathAtModerateQ) {
  const std::uint64_t q = 1009;
  const auto ctx = build_context(q);
  const double bound = 10.0 * std::log(q) / std::sqrt(q);
  for (std::uint32_t j : {1u, 2u, 17u, 500u, 1007u})
    for (int i = 1; i <= 9; ++i) {
      const Character chi(ctx, j);
      EXPECT_LE(std::abs(fourier_path(chi, i / 10.0, q - 1) - path_value(chi, i / 10.0)), bound);
    }
}

TEST(MaxAbsSum, Examples) {
  const auto c5 = build_context(5);
  EXPECT_NEAR(max_abs_sum(Character(c5, 1)), 0.6324555320336759, 1e-15);
  EXPECT_NEAR(max_abs_sum(Character(c5, 0)), 4.0 / std::sqrt(5.0), 1e-15);
  const auto c101 = build_context(101);
  for (const auto& chi : enumerate_characters(c101, CharacterFilter::nonprincipal))
    EXPECT_GE(max_abs_sum(chi), 1.0 / std::sqrt(101.0) - 1e-15);
}

TEST(EvenSymmetry, TailSumsMirrorHeadSums) {
  const std::uint64_t q = 101;
  const auto ctx = build_context(q);
  const auto P = prefix_sums(Character(ctx, 2));
  for (std::uint64_t j = 0; j < q; ++j) {
    // sum_{n=q-j}^{q-1} chi(n) = P[q-1] - P[q-1-j]
    EXPECT_LT(std::abs((P[q - 1] - P[q - 1 - j]) - P[j]), 1e-12);
  }
}
