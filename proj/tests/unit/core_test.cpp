#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "catana/core/date.hpp"
#include "catana/core/embedding_container.hpp"
#include "catana/core/json_io.hpp"
#include "catana/core/popularity.hpp"
#include "catana/util/random.hpp"

using namespace catana;

namespace {

std::string random_text(Rng& rng) {
  static const std::string alphabet = "abcXYZ019 _-\"\\/\t\n";
  std::string s;
  for (auto len = rng.below(12); len > 0; --len) s += alphabet[rng.below(alphabet.size())];
  if (rng.bernoulli(0.2)) s += "\xc3\xa9";
  return s;
}

Date random_date(Rng& rng) { return add_days(parse_date("1990-01-01"), static_cast<long>(rng.below(20000))); }

template <typename T>
T through_text(const T& value) {
  return json::parse(json(value).dump()).get<T>();
}

}  // namespace

TEST(CoreRoundTrip, ThousandRecordsEachKind) {
  Rng rng(4242);
  for (int i = 0; i < 1000; ++i) {
    ChannelRecord c;
    c.channel_id = "ch" + std::to_string(i) + random_text(rng);
    c.title = random_text(rng);
    c.category = random_text(rng);
    if (rng.bernoulli(0.5)) c.mcn = random_text(rng);
    for (std::size_t k = rng.below(4); k > 0; --k) c.featured_channels.push_back(random_text(rng));
    c.video_count = rng.next_u64() >> rng.below(64);
    EXPECT_EQ(through_text(c), c);

    VideoRecord v;
    v.video_id = "v" + std::to_string(i);
    v.channel_id = c.channel_id;
    v.upload_date = random_date(rng);
    v.category = random_text(rng);
    v.frame_count = 1 + (rng.next_u64() >> (1 + rng.below(63)));
    v.frame_rate = rng.uniform(0.001, 500.0);
    EXPECT_EQ(through_text(v), v);

    SnapshotRow r;
    r.subject_id = v.video_id;
    r.sample.date = random_date(rng);
    r.sample.views = rng.next_u64() >> rng.below(64);
    if (rng.bernoulli(0.5)) r.sample.subscribers = rng.below(100'000'000);
    if (rng.bernoulli(0.3)) r.sample.comments = rng.below(1'000'000);
    EXPECT_EQ(through_text(r), r);
  }
}

TEST(CoreRoundTrip, EmbeddingContainers) {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    EmbeddingFile f;
    f.dim = 1 + static_cast<std::uint32_t>(rng.below(70));
    const auto n = rng.below(40);
    for (std::size_t i = 0; i < n; ++i) f.frame_indices.push_back(static_cast<std::uint32_t>(rng.next_u64()));
    for (std::size_t i = 0; i < n * f.dim; ++i) f.values.push_back(static_cast<float>(rng.normal(0.0, 10.0)));
    const auto bytes = encode_embeddings(f);
    ASSERT_EQ(bytes.size(), kEmbeddingHeaderSize + n * (4 + 4 * f.dim));
    EXPECT_EQ(decode_embeddings(bytes), f);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(f.record_index(f.record_offset(i)), i);
    if (!bytes.empty()) {
      std::vector<char> cut(bytes.begin(), bytes.end() - 1);
      EXPECT_THROW(decode_embeddings(cut), ContractError);
    }
  }
}

TEST(CoreRoundTrip, Dates) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto d = random_date(rng);
    EXPECT_EQ(parse_date(format_date(d)), d);
  }
  EXPECT_THROW(parse_date("2020-02-30"), ContractError);
  EXPECT_THROW(parse_date("20200101"), ContractError);
}

TEST(PopularityClasses, PartitionWithoutGaps) {
  for (std::size_t i = 0; i < kPopularityClasses.size(); ++i) {
    const auto& c = kPopularityClasses[i];
    EXPECT_EQ(static_cast<std::size_t>(c.class_index), i);
    EXPECT_LT(c.lower, c.upper);
    if (i > 0) {
      EXPECT_EQ(kPopularityClasses[i - 1].upper, c.lower);
    }
  }
  EXPECT_EQ(kPopularityClasses.front().lower, 0u);
  EXPECT_EQ(kPopularityClasses.back().upper, 100'000'000u);
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto s = rng.below(100'000'000);
    const auto& c = kPopularityClasses[static_cast<std::size_t>(popularity_class(s))];
    EXPECT_TRUE(c.lower <= s && s < c.upper);
  }
}
