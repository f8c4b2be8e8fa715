#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "charpath/dirichlet.hpp"
#include "charpath/errors.hpp"
#include "charpath/steinhaus.hpp"

using namespace charpath;

TEST(BuildContext, SmallPrimes) {
  const auto c5 = build_context(5);
  EXPECT_EQ(c5->primitive_root(), 2u);
  EXPECT_EQ(c5->dlog(1), 0u);
  EXPECT_EQ(c5->dlog(2), 1u);
  EXPECT_EQ(c5->dlog(3), 3u);
  EXPECT_EQ(c5->dlog(4), 2u);
  EXPECT_EQ(c5->dlog_table()[0], PrimeContext::kNoLog);
  EXPECT_EQ(build_context(7)->primitive_root(), 3u);
}

TEST(BuildContext, Rejects) {
  EXPECT_THROW(build_context(4), NotPrime);
  EXPECT_THROW(build_context(2), NotPrime);
  EXPECT_THROW(build_context(1), NotPrime);
  EXPECT_THROW(build_context(9), NotPrime);
  EXPECT_THROW(build_context(101, 50), Overflow);
}

TEST(BuildContext, DlogRoundTrip) {
  for (std::uint64_t q : {3, 5, 7, 101, 1009, 10007}) {
    const auto ctx = build_context(q);
    std::uint64_t g = 1;
    for (std::uint64_t k = 0; k + 1 < q; ++k) {
      EXPECT_EQ(ctx->dlog(g), k);
      g = g * ctx->primitive_root() % q;
    }
    EXPECT_EQ(g, 1u);
  }
}

TEST(CharValue, Examples) {
  const auto ctx = build_context(5);
  EXPECT_EQ(char_value(Character(ctx, 0), 3), cplx(1.0, 0.0));
  EXPECT_EQ(char_value(Character(ctx, 1), 2), cplx(0.0, 1.0));
  EXPECT_EQ(char_value(Character(ctx, 1), 10), cplx(0.0, 0.0));
  EXPECT_EQ(char_value(Character(ctx, 1), -1), cplx(-1.0, 0.0));
  EXPECT_EQ(char_value(Character(ctx, 1), 7), char_value(Character(ctx, 1), 2));
}

TEST(Parity, Examples) {
  const auto ctx = build_context(5);
  EXPECT_EQ(parity(Character(ctx, 0)), Parity::even);
  EXPECT_EQ(parity(Character(ctx, 1)), Parity::odd);
  EXPECT_EQ(parity(Character(ctx, 2)), Parity::even);
  const auto c101 = build_context(101);
  for (std::uint32_t j = 0; j < 100; ++j) {
    const Character chi(c101, j);
    EXPECT_EQ(chi(-1).real(), chi.parity() == Parity::odd ? -1.0 : 1.0);
  }
}

TEST(Character, MultiplicativeOnRandomPairs) {
  const auto ctx = build_context(1009);
  const SeedSpec seed{11, 0};
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Character chi(ctx, static_cast<std::uint32_t>(mix_counter(seed, 3 * i) % 1008));
    const auto m = static_cast<std::int64_t>(mix_counter(seed, 3 * i + 1) % 100000);
    const auto n = static_cast<std::int64_t>(mix_counter(seed, 3 * i + 2) % 100000);
    EXPECT_LT(std::abs(chi(m * n) - chi(m) * chi(n)), 1e-12);
  }
}

TEST(GaussSum, Examples) {
  const auto ctx = build_context(5);
  EXPECT_NEAR(std::abs(gauss_sum(Character(ctx, 0)) - cplx(-1.0, 0.0)), 0.0, 1e-14);
  const cplx t2 = gauss_sum(Character(ctx, 2));
  EXPECT_NEAR(t2.real(), 2.2360679774997897, 1e-13);
  EXPECT_NEAR(t2.imag(), 0.0, 1e-13);
  for (std::uint64_t q : {5, 101, 1009}) {
    const auto c = build_context(q);
    for (const auto& chi : enumerate_characters(c, CharacterFilter::nonprincipal))
      EXPECT_NEAR(std::norm(gauss_sum(chi)), static_cast<double>(q), 1e-8 * q);
  }
}

TEST(Enumerate, Filters) {
  const auto c5 = build_context(5);
  const auto odd = enumerate_characters(c5, CharacterFilter::odd);
  ASSERT_EQ(odd.size(), 2u);
  EXPECT_EQ(odd[0].index(), 1u);
  EXPECT_EQ(odd[1].index(), 3u);
  EXPECT_EQ(enumerate_characters(c5, CharacterFilter::all).size(), 4u);
  EXPECT_EQ(enumerate_characters(c5, CharacterFilter::nonprincipal).size(), 3u);
  const auto even = enumerate_characters(build_context(7), CharacterFilter::even);
  ASSERT_EQ(even.size(), 3u);
  EXPECT_EQ(even[0].index(), 0u);
  EXPECT_EQ(even[1].index(), 2u);
  EXPECT_EQ(even[2].index(), 4u);
}

TEST(Orthogonality, ColumnRelation) {
  for (std::uint64_t q : {5, 11, 101}) {
    const auto ctx = build_context(q);
    const auto chars = enumerate_characters(ctx, CharacterFilter::all);
    for (std::int64_t a = 1; a < static_cast<std::int64_t>(q); a += 3) {
      for (std::int64_t b = 1; b < static_cast<std::int64_t>(q); b += 5) {
        cplx s{0.0, 0.0};
        for (const auto& chi : chars) s += chi(a) * std::conj(chi(b));
        s /= static_cast<double>(q - 1);
        EXPECT_LT(std::abs(s - (a == b ? 1.0 : 0.0)), 1e-10);
      }
    }
  }
}

class DlogCache : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("charpath_cache_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(DlogCache, MissThenHitGivesSameTable) {
  bool hit = true;
  const auto a = cached_context(101, dir_, kDefaultTableLimit, &hit);
  EXPECT_FALSE(hit);
  EXPECT_TRUE(std::filesystem::exists(dlog_cache_path(dir_, 101)));
  EXPECT_EQ(std::filesystem::file_size(dlog_cache_path(dir_, 101)), 101u * 4u);
  const auto b = cached_context(101, dir_, kDefaultTableLimit, &hit);
  EXPECT_TRUE(hit);
  ASSERT_EQ(a->dlog_table().size(), b->dlog_table().size());
  for (std::size_t i = 0; i < a->dlog_table().size(); ++i) EXPECT_EQ(a->dlog_table()[i], b->dlog_table()[i]);
  EXPECT_EQ(gauss_sum(Character(a, 3)), gauss_sum(Character(b, 3)));
}

TEST_F(DlogCache, CorruptFileIsRejectedAndRebuilt) {
  save_dlog_cache(*build_context(13), dir_);
  {
    std::fstream f(dlog_cache_path(dir_, 13), std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8);
    const char junk[4] = {7, 0, 0, 0};
    f.write(junk, 4);
  }
  EXPECT_THROW(load_dlog_cache(13, dir_), CacheError);
  bool hit = true;
  const auto ctx = cached_context(13, dir_, kDefaultTableLimit, &hit);
  EXPECT_FALSE(hit);
  EXPECT_EQ(ctx->primitive_root(), 2u);
  EXPECT_NO_THROW(load_dlog_cache(13, dir_));
}

TEST_F(DlogCache, TruncatedFileIsRejected) {
  save_dlog_cache(*build_context(13), dir_);
  std::filesystem::resize_file(dlog_cache_path(dir_, 13), 20);
  EXPECT_THROW(load_dlog_cache(13, dir_), CacheError);
}
