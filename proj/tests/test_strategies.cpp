// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cutthumb/error.hpp"
#include "cutthumb/strategies.hpp"
#include "reference.hpp"

using namespace cutthumb;
using cutthumb::testing::rand_int;
using cutthumb::testing::random_image;

namespace {

constexpr int kA = 1, kB = 4, kC = 7;

AugConfig config_with_thumb(int w, int h) {
  AugConfig cfg;
  cfg.thumb = ThumbSize{w, h};
  return cfg;
}

Image gradient(int w, int h) {
  Image img(w, h, 3);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) = static_cast<std::uint8_t>(16 * r + 2 * c + ch);
  return img;
}

}  // namespace

TEST_CASE("mix_labels examples") {
  const auto a = LabelDist::pure(10, kA);
  const auto b = LabelDist::pure(10, kB);
  {
    const LabelDist in[] = {a};
    const double w[] = {1.0};
    CHECK(mix_labels(in, w) == a);
  }
  {
    const LabelDist in[] = {a, b};
    const double w[] = {0.75, 0.25};
    const auto m = mix_labels(in, w);
    CHECK(m.weight_of(kA) == 0.75);
    CHECK(m.weight_of(kB) == 0.25);
    CHECK(m.entries().size() == 2);
  }
  {
    const LabelDist half(10, {{kA, 0.5}, {kB, 0.5}});
    const LabelDist in[] = {half, b};
    const double w[] = {0.5, 0.5};
    const auto m = mix_labels(in, w);
    CHECK(m.weight_of(kA) == 0.25);
    CHECK(m.weight_of(kB) == 0.75);
  }
}

TEST_CASE("mix_labels errors") {
  const auto a = LabelDist::pure(10, kA);
  const auto other_k = LabelDist::pure(5, 1);
  CHECK_THROWS_AS(mix_labels(std::span<const LabelDist>{}, std::span<const double>{}),
                  InvalidArgument);
  {
    const LabelDist in[] = {a, other_k};
    const double w[] = {0.5, 0.5};
    CHECK_THROWS_AS(mix_labels(in, w), InvalidArgument);
  }
  {
    const LabelDist in[] = {a, a};
    const double w[] = {0.5};
    CHECK_THROWS_AS(mix_labels(in, w), InvalidArgument);
  }
  {
    const LabelDist in[] = {a};
    const double w[] = {0.0};
    CHECK_THROWS_AS(mix_labels(in, w), InvalidArgument);
  }
}

TEST_CASE("LabelDist invariants") {
  CHECK_THROWS_AS(LabelDist(3, {{3, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(LabelDist(3, {{-1, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(LabelDist(3, {{0, 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(LabelDist(3, {{0, 0.5}, {0, 0.5}}), InvalidArgument);
  CHECK(LabelDist::pure(3, 2).entries() == std::vector<LabelEntry>{{2, 1.0}});
}

TEST_CASE("mix_labels agrees with dense oracle on random inputs") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = rand_int(gen, 1, 8);
    const int n = rand_int(gen, 1, 5);
    std::vector<LabelDist> labels;
    std::vector<double> weights;
    for (int i = 0; i < n; ++i) {
      std::vector<LabelEntry> entries;
      for (int c = 0; c < k; ++c)
        if (rand_int(gen, 0, 2) == 0) entries.push_back({c, rand_int(gen, 1, 100) / 64.0});
      labels.emplace_back(k, entries);
      weights.push_back(rand_int(gen, 1, 100) / 32.0);
    }
    const auto mixed = mix_labels(labels, weights);
    const auto dense = testing::ref_mix(labels, weights);
    REQUIRE(mixed.entries().size() == dense.size());
    for (const auto& [c, w] : dense) REQUIRE(mixed.weight_of(c) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("default config matches published settings") {
  const AugConfig cfg;
  CHECK(cfg.lambda == 0.25);
  CHECK(cfg.lambda_base == 0.6);
  CHECK(cfg.lambda_thumb == 0.2);
  CHECK(cfg.num_thumbnails == 2);
  CHECK(cfg.participation_rate == 0.8);
  CHECK_FALSE(cfg.normalize_labels);
  CHECK(cfg.thumb_for(224, 224) == ThumbSize{112, 112});
  CHECK(cfg.thumb_for(32, 32) == ThumbSize{16, 16});
  CHECK(cfg.thumb_for(1, 3) == ThumbSize{1, 1});
}

TEST_CASE("config validation") {
  AugConfig cfg;
  cfg.lambda = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = AugConfig{};
  cfg.participation_rate = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = AugConfig{};
  cfg.num_thumbnails = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = AugConfig{};
  cfg.lambda_thumb = -0.2;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  CHECK(parse_strategy("MMT") == Strategy::kMixedMultiThumbnails);
  CHECK_THROWS_AS(parse_strategy("cutmix"), InvalidArgument);
}

TEST_CASE("self_thumbnail on 224x224 keeps label and touches only the box") {
  std::mt19937_64 gen(29);
  const Image x = random_image(gen, 224, 224, 3);
  const auto y = LabelDist::pure(1000, kC);
  RngStream rng(1, 1);
  const auto out = self_thumbnail(x, y, AugConfig{}, rng);
  CHECK(out.label == y);
  CHECK(out.boxes.w == 112);
  CHECK(out.boxes.h == 112);
  for (int r = 0; r < 224; ++r)
    for (int c = 0; c < 224; ++c)
      if (!out.boxes.contains(r, c))
        for (int ch = 0; ch < 3; ++ch) REQUIRE(out.image.at(r, c, ch) == x.at(r, c, ch));
}

TEST_CASE("self_thumbnail on constant 2x2 image is identity") {
  const Image x(2, 2, 3, std::vector<std::uint8_t>(12, 99));
  RngStream rng(2, 2);
  const auto out = self_thumbnail(x, LabelDist::pure(2, 0), config_with_thumb(1, 1), rng);
  CHECK(out.image == x);
}

TEST_CASE("self_thumbnail region equals thumbnail of the gradient") {
  const Image x = gradient(8, 8);
  RngStream rng(3, 3);
  const auto out = self_thumbnail(x, LabelDist::pure(2, 0), config_with_thumb(4, 4), rng);
  const Image t = thumbnail(x, 4, 4);
  const BBox b = out.boxes;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int ch = 0; ch < 3; ++ch) REQUIRE(out.image.at(b.y + r, b.x + c, ch) == t.at(r, c, ch));
}

TEST_CASE("self_thumbnail rejects oversize thumbnail") {
  RngStream rng(1, 1);
  CHECK_THROWS_AS(self_thumbnail(Image(4, 4, 3), LabelDist::pure(2, 0), config_with_thumb(5, 2), rng),
                  InvalidArgument);
}

TEST_CASE("mixed_single label weights with lambda 0.25") {
  std::mt19937_64 gen(31);
  const Image x1 = random_image(gen, 16, 16, 3), x2 = random_image(gen, 16, 16, 3);
  RngStream rng(4, 4);
  const auto out = mixed_single(x1, LabelDist::pure(10, kA), x2, LabelDist::pure(10, kB),
                                AugConfig{}, rng);
  CHECK(out.label.weight_of(kA) == 0.75);
  CHECK(out.label.weight_of(kB) == 0.25);
}

TEST_CASE("mixed_single self-mix equals self_thumbnail") {
  std::mt19937_64 gen(37);
  const Image x = random_image(gen, 12, 10, 3);
  const auto y = LabelDist::pure(10, kA);
  RngStream r1(5, 5), r2(5, 5);
  const auto st = self_thumbnail(x, y, AugConfig{}, r1);
  const auto mst = mixed_single(x, y, x, y, AugConfig{}, r2);
  CHECK(mst.image == st.image);
  CHECK(mst.boxes == st.boxes);
  CHECK(mst.label.entries().size() == 1);
  CHECK(std::fabs(mst.label.weight_of(kA) - 1.0) <= 1e-9);
}

TEST_CASE("mixed_single provenance counts on 8x8") {
  // Distinct constant images make provenance readable from pixel values.
  const Image x1(8, 8, 3, std::vector<std::uint8_t>(192, 10));
  const Image x2(8, 8, 3, std::vector<std::uint8_t>(192, 200));
  RngStream rng(6, 6);
  const auto out = mixed_single(x1, LabelDist::pure(2, 0), x2, LabelDist::pure(2, 1),
                                config_with_thumb(4, 4), rng);
  int from_x2 = 0, from_x1 = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) (out.image.at(r, c, 0) == 200 ? from_x2 : from_x1)++;
  CHECK(from_x2 == 16);
  CHECK(from_x1 == 48);
}

TEST_CASE("mixed_single rejects mismatched images") {
  RngStream rng(1, 1);
  CHECK_THROWS_AS(mixed_single(Image(8, 8, 3), LabelDist::pure(2, 0), Image(8, 7, 3),
                               LabelDist::pure(2, 1), AugConfig{}, rng),
                  DimensionMismatch);
}

TEST_CASE("mixed_multi label weights") {
  const Image x1(20, 20, 3), x2(20, 20, 3), x3(20, 20, 3);
  const auto ya = LabelDist::pure(10, kA), yb = LabelDist::pure(10, kB), yc = LabelDist::pure(10, kC);
  AugConfig cfg = config_with_thumb(5, 5);
  const SourceRef others[] = {{&x2, &yb}, {&x3, &yc}};
  RngStream rng(7, 7);
  const auto out = mixed_multi(x1, ya, others, cfg, rng);
  CHECK(out.boxes.size() == 2);
  CHECK(out.label.weight_of(kA) == 0.6);
  CHECK(out.label.weight_of(kB) == 0.2);
  CHECK(out.label.weight_of(kC) == 0.2);
}

TEST_CASE("mixed_multi with one thumbnail degenerates to mixed_single") {
  std::mt19937_64 gen(41);
  const Image x1 = random_image(gen, 16, 12, 3), x2 = random_image(gen, 16, 12, 3);
  const auto ya = LabelDist::pure(10, kA), yb = LabelDist::pure(10, kB);
  AugConfig cfg;
  cfg.lambda_base = 0.75;
  cfg.lambda_thumb = 0.25;
  cfg.num_thumbnails = 1;
  const SourceRef others[] = {{&x2, &yb}};
  RngStream r1(8, 8), r2(8, 8);
  const auto mmt = mixed_multi(x1, ya, others, cfg, r1);
  const auto mst = mixed_single(x1, ya, x2, yb, cfg, r2);
  CHECK(mmt.image == mst.image);
  CHECK(mmt.label == mst.label);
  CHECK(mmt.boxes == std::vector<BBox>{mst.boxes});
}

TEST_CASE("mixed_multi with five thumbnails: raw and normalized totals") {
  const Image base(64, 64, 3);
  std::vector<Image> imgs(5, Image(64, 64, 3));
  std::vector<LabelDist> labels;
  for (int i = 0; i < 5; ++i) labels.push_back(LabelDist::pure(10, i + 1));
  std::vector<SourceRef> others;
  for (int i = 0; i < 5; ++i) others.push_back({&imgs[i], &labels[i]});
  AugConfig cfg = config_with_thumb(16, 16);
  cfg.num_thumbnails = 5;
  RngStream r1(9, 9), r2(9, 9);
  const auto raw = mixed_multi(base, LabelDist::pure(10, 0), others, cfg, r1);
  CHECK(raw.label.total_weight() == 1.6);
  cfg.normalize_labels = true;
  const auto norm = mixed_multi(base, LabelDist::pure(10, 0), others, cfg, r2);
  CHECK(std::fabs(norm.label.total_weight() - 1.0) <= 1e-9);
  CHECK(norm.image == raw.image);
}

TEST_CASE("label weights do not depend on box placement") {
  std::mt19937_64 gen(43);
  const Image x1 = random_image(gen, 32, 32, 3), x2 = random_image(gen, 32, 32, 3);
  const auto ya = LabelDist::pure(10, kA), yb = LabelDist::pure(10, kB);
  RngStream r1(100, 1), r2(200, 1);
  const auto o1 = mixed_single(x1, ya, x2, yb, AugConfig{}, r1);
  const auto o2 = mixed_single(x1, ya, x2, yb, AugConfig{}, r2);
  REQUIRE_FALSE(o1.boxes == o2.boxes);
  CHECK(o1.label == o2.label);
}

TEST_CASE("mixed_multi surfaces placement failure") {
  const Image x(10, 5, 3);
  const auto y = LabelDist::pure(2, 0);
  const SourceRef others[] = {{&x, &y}, {&x, &y}};
  AugConfig cfg = config_with_thumb(6, 4);
  cfg.max_attempts = 20;
  RngStream rng(1, 1);
  CHECK_THROWS_AS(mixed_multi(x, y, others, cfg, rng), PlacementFailure);
}
