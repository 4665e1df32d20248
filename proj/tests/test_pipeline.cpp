// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "cutthumb/error.hpp"
#include "cutthumb/pipeline.hpp"
#include "reference.hpp"

using namespace cutthumb;
using cutthumb::testing::random_image;

namespace {

std::vector<Sample> make_corpus(int n, int w, int h, std::uint64_t seed, int classes = 5) {
  std::mt19937_64 gen(seed);
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"s" + std::to_string(i), random_image(gen, w, h, 3),
                   LabelDist::pure(classes, i % classes)});
  }
  return out;
}

Batch make_batch(std::vector<Sample> samples, std::uint64_t index = 0) {
  return Batch{index, std::move(samples)};
}

AugConfig cfg_for(Strategy s, double rate) {
  AugConfig cfg;
  cfg.strategy = s;
  cfg.participation_rate = rate;
  cfg.root_seed = 1234;
  return cfg;
}

}  // namespace

TEST_CASE("participation 0 passes every sample through") {
  const auto corpus = make_corpus(8, 12, 12, 1);
  for (Strategy s : {Strategy::kSelfThumbnail, Strategy::kMixedSingleThumbnail,
                     Strategy::kMixedMultiThumbnails}) {
    const auto out = augment_batch(make_batch(corpus), cfg_for(s, 0.0));
    REQUIRE(out.size() == corpus.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i].image == corpus[i].image);
      CHECK(out[i].label == corpus[i].label);
      CHECK(out[i].record.strategy == AppliedStrategy::kNone);
      CHECK(out[i].record.sources == std::vector<SourceWeight>{{corpus[i].sample_id, 1.0}});
      CHECK(out[i].record.boxes.empty());
    }
  }
}

TEST_CASE("participation 1 with ST changes only the recorded box") {
  const auto corpus = make_corpus(6, 10, 14, 2);
  const auto out = augment_batch(make_batch(corpus), cfg_for(Strategy::kSelfThumbnail, 1.0));
  for (std::size_t i = 0; i < out.size(); ++i) {
    REQUIRE(out[i].record.strategy == AppliedStrategy::kST);
    REQUIRE(out[i].record.boxes.size() == 1);
    const BBox& b = out[i].record.boxes[0];
    CHECK(b.w == 5);
    CHECK(b.h == 7);
    for (int r = 0; r < 14; ++r)
      for (int c = 0; c < 10; ++c)
        if (!b.contains(r, c))
          for (int ch = 0; ch < 3; ++ch) REQUIRE(out[i].image.at(r, c, ch) == corpus[i].image.at(r, c, ch));
  }
}

TEST_CASE("gate fires on about 80% of single-sample batches") {
  auto corpus = make_corpus(10000, 2, 2, 3);
  const auto out = run_corpus(std::move(corpus), cfg_for(Strategy::kSelfThumbnail, 0.8), 1);
  int st = 0;
  for (const auto& o : out) st += o.record.strategy == AppliedStrategy::kST;
  CHECK(std::fabs(st / 10000.0 - 0.8) <= 0.01);
}

TEST_CASE("run_corpus partitions into batches") {
  CHECK(run_corpus(std::vector<Sample>{}, AugConfig{}, 4).empty());
  const auto out = run_corpus(make_corpus(10, 6, 6, 4), cfg_for(Strategy::kMixedSingleThumbnail, 1.0), 4);
  REQUIRE(out.size() == 10);
  std::map<std::uint64_t, int> sizes;
  for (const auto& o : out) ++sizes[o.record.batch_index];
  CHECK(sizes == std::map<std::uint64_t, int>{{0, 4}, {1, 4}, {2, 2}});
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].record.output_id == "s" + std::to_string(i));
  CHECK_THROWS_AS(run_corpus(make_corpus(2, 4, 4, 1), AugConfig{}, 0), InvalidArgument);
}

TEST_CASE("run_corpus is deterministic") {
  for (Strategy s : {Strategy::kSelfThumbnail, Strategy::kMixedSingleThumbnail,
                     Strategy::kMixedMultiThumbnails}) {
    const auto a = run_corpus(make_corpus(23, 16, 16, 5), cfg_for(s, 0.8), 4);
    const auto b = run_corpus(make_corpus(23, 16, 16, 5), cfg_for(s, 0.8), 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].image == b[i].image);
      CHECK(a[i].label == b[i].label);
      CHECK(a[i].record == b[i].record);
    }
  }
}

TEST_CASE("heterogeneous batch names the offending sample") {
  auto corpus = make_corpus(3, 8, 8, 6);
  corpus.push_back({"odd_one", Image(9, 8, 3), LabelDist::pure(5, 0)});
  try {
    run_corpus(std::move(corpus), AugConfig{}, 4);
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(std::string(e.what()).find("odd_one") != std::string::npos);
  }
  // Across batch boundaries, shapes may differ.
  auto mixed = make_corpus(2, 8, 8, 7);
  auto more = make_corpus(2, 6, 6, 8);
  more[0].sample_id = "t0";
  more[1].sample_id = "t1";
  mixed.insert(mixed.end(), more.begin(), more.end());
  CHECK(run_corpus(std::move(mixed), cfg_for(Strategy::kSelfThumbnail, 1.0), 2).size() == 4);
}

TEST_CASE("duplicate ids and empty batches are rejected") {
  auto corpus = make_corpus(2, 4, 4, 9);
  corpus[1].sample_id = corpus[0].sample_id;
  CHECK_THROWS_AS(augment_batch(make_batch(corpus), AugConfig{}), InvalidArgument);
  CHECK_THROWS_AS(augment_batch(make_batch({}), AugConfig{}), InvalidArgument);
}

TEST_CASE("gate granularity: a batch is all-or-nothing") {
  const auto out = run_corpus(make_corpus(200, 8, 8, 10), cfg_for(Strategy::kMixedSingleThumbnail, 0.5), 8);
  std::map<std::uint64_t, std::set<AppliedStrategy>> per_batch;
  for (const auto& o : out) per_batch[o.record.batch_index].insert(o.record.strategy);
  int on = 0, off = 0;
  for (const auto& [b, kinds] : per_batch) {
    CHECK(kinds.size() == 1);
    (*kinds.begin() == AppliedStrategy::kNone ? off : on)++;
  }
  CHECK(on > 0);
  CHECK(off > 0);
}

TEST_CASE("MST records carry partner weights and labels match") {
  const auto corpus = make_corpus(16, 8, 8, 11, 16);
  const auto out = augment_batch(make_batch(corpus), cfg_for(Strategy::kMixedSingleThumbnail, 1.0));
  std::map<std::string, const Sample*> by_id;
  for (const auto& s : corpus) by_id[s.sample_id] = &s;
  for (const auto& o : out) {
    REQUIRE(o.record.strategy == AppliedStrategy::kMST);
    REQUIRE(o.record.sources.size() == 2);
    CHECK(o.record.sources[0].weight == 0.75);
    CHECK(o.record.sources[1].weight == 0.25);
    std::vector<LabelDist> labels;
    std::vector<double> weights;
    for (const auto& s : o.record.sources) {
      labels.push_back(by_id[s.sample_id]->label);
      weights.push_back(s.weight);
    }
    const auto dense = testing::ref_mix(labels, weights);
    for (const auto& [c, w] : dense) CHECK(o.label.weight_of(c) == w);
    CHECK(std::fabs(o.label.total_weight() - 1.0) <= 1e-9);
  }
}

TEST_CASE("MMT draws partners and weights per sample") {
  AugConfig cfg = cfg_for(Strategy::kMixedMultiThumbnails, 1.0);
  cfg.thumb = ThumbSize{4, 4};
  cfg.num_thumbnails = 3;
  const auto out = augment_batch(make_batch(make_corpus(10, 16, 16, 12)), cfg);
  for (const auto& o : out) {
    REQUIRE(o.record.strategy == AppliedStrategy::kMMT);
    REQUIRE(o.record.sources.size() == 4);
    REQUIRE(o.record.boxes.size() == 3);
    CHECK(o.record.sources[0].weight == 0.6);
    for (std::size_t k = 1; k < 4; ++k) CHECK(o.record.sources[k].weight == 0.2);
  }
}

TEST_CASE("MMT normalized source weights") {
  AugConfig cfg = cfg_for(Strategy::kMixedMultiThumbnails, 1.0);
  cfg.thumb = ThumbSize{4, 4};
  cfg.num_thumbnails = 5;
  cfg.normalize_labels = true;
  const auto out = augment_batch(make_batch(make_corpus(4, 20, 20, 13)), cfg);
  for (const auto& o : out) {
    double total = 0;
    for (const auto& s : o.record.sources) total += s.weight;
    CHECK(std::fabs(total - 1.0) <= 1e-9);
    CHECK(std::fabs(o.label.total_weight() - 1.0) <= 1e-9);
  }
}

TEST_CASE("MMT placement failure degrades only that sample") {
  AugConfig cfg = cfg_for(Strategy::kMixedMultiThumbnails, 1.0);
  cfg.thumb = ThumbSize{6, 4};
  cfg.num_thumbnails = 2;
  cfg.max_attempts = 5;
  const auto corpus = make_corpus(3, 10, 5, 14);
  const auto out = augment_batch(make_batch(corpus), cfg);
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].record.strategy == AppliedStrategy::kNone);
    CHECK_FALSE(out[i].record.note.empty());
    CHECK(out[i].image == corpus[i].image);
  }
}

TEST_CASE("MMT infeasible configuration is rejected up front") {
  AugConfig cfg = cfg_for(Strategy::kMixedMultiThumbnails, 1.0);
  cfg.num_thumbnails = 5;  // 5 * (4*4) > 8*8
  CHECK_THROWS_AS(augment_batch(make_batch(make_corpus(2, 8, 8, 15)), cfg), InvalidArgument);
}

TEST_CASE("replay_record reproduces every output") {
  for (Strategy s : {Strategy::kSelfThumbnail, Strategy::kMixedSingleThumbnail,
                     Strategy::kMixedMultiThumbnails}) {
    AugConfig cfg = cfg_for(s, 0.7);
    cfg.thumb = ThumbSize{5, 3};
    const auto corpus = make_corpus(30, 17, 13, 16);
    std::map<std::string, Image> images;
    for (const auto& c : corpus) images.emplace(c.sample_id, c.image);
    const auto out = run_corpus(corpus, cfg, 7);
    for (const auto& o : out) {
      const Image replayed =
          replay_record(o.record, [&](const std::string& id) -> const Image& { return images.at(id); });
      REQUIRE(replayed == o.image);
    }
  }
}

TEST_CASE("conservation: every input is the base of exactly one record") {
  const auto corpus = make_corpus(37, 8, 8, 17);
  const auto out = run_corpus(corpus, cfg_for(Strategy::kMixedSingleThumbnail, 0.8), 5);
  REQUIRE(out.size() == corpus.size());
  std::map<std::string, int> base_count;
  for (const auto& o : out) ++base_count[o.record.sources[0].sample_id];
  for (const auto& c : corpus) CHECK(base_count[c.sample_id] == 1);
}
