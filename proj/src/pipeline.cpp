// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#include "cutthumb/pipeline.hpp"

#include <set>
#include <string>

#include "cutthumb/error.hpp"

namespace cutthumb {

namespace {

std::string shape_str(const Image& img) {
  return std::to_string(img.width()) + "x" + std::to_string(img.height()) + "x" +
         std::to_string(img.channels());
}

void check_batch(const Batch& batch) {
  if (batch.samples.empty()) {
    throw InvalidArgument("batch " + std::to_string(batch.batch_index) + " is empty");
  }
  const Image& first = batch.samples.front().image;
  std::set<std::string> seen;
  for (const auto& s : batch.samples) {
    if (!s.image.same_shape(first)) {
      throw DimensionMismatch("sample '" + s.sample_id + "' is " + shape_str(s.image) +
                              " but batch " + std::to_string(batch.batch_index) + " is " +
                              shape_str(first));
    }
    if (!seen.insert(s.sample_id).second) {
      throw InvalidArgument("duplicate sample_id '" + s.sample_id + "' in batch " +
                            std::to_string(batch.batch_index));
    }
  }
}

AugOutput pass_through(const Sample& s, const Batch& batch, const AugConfig& cfg,
                       std::string note = {}) {
  AugRecord rec;
  rec.output_id = s.sample_id;
  rec.strategy = AppliedStrategy::kNone;
  rec.sources = {{s.sample_id, 1.0}};
  rec.batch_index = batch.batch_index;
  rec.root_seed = cfg.root_seed;
  rec.note = std::move(note);
  return {s.image, s.label, std::move(rec)};
}

AugRecord make_record(const Sample& base, AppliedStrategy strategy, const Batch& batch,
                      const AugConfig& cfg) {
  AugRecord rec;
  rec.output_id = base.sample_id;
  rec.strategy = strategy;
  rec.batch_index = batch.batch_index;
  rec.root_seed = cfg.root_seed;
  return rec;
}

}  // namespace

std::string_view to_string(AppliedStrategy s) {
  switch (s) {
    case AppliedStrategy::kNone:
      return "none";
    case AppliedStrategy::kST:
      return "st";
    case AppliedStrategy::kMST:
      return "mst";
    case AppliedStrategy::kMMT:
      return "mmt";
  }
  return "?";
}

AppliedStrategy parse_applied_strategy(std::string_view name) {
  if (name == "none") return AppliedStrategy::kNone;
  return applied(parse_strategy(name));
}

AppliedStrategy applied(Strategy s) {
  switch (s) {
    case Strategy::kSelfThumbnail:
      return AppliedStrategy::kST;
    case Strategy::kMixedSingleThumbnail:
      return AppliedStrategy::kMST;
    case Strategy::kMixedMultiThumbnails:
      return AppliedStrategy::kMMT;
  }
  return AppliedStrategy::kNone;
}

std::vector<AugOutput> augment_batch(const Batch& batch, const AugConfig& cfg) {
  cfg.validate();
  check_batch(batch);

  const Image& first = batch.samples.front().image;
  const int W = first.width();
  const int H = first.height();
  const ThumbSize t = cfg.thumb_for(W, H);
  if (t.w > W || t.h > H) {
    throw InvalidArgument("thumbnail " + std::to_string(t.w) + "x" + std::to_string(t.h) +
                          " larger than batch images " + std::to_string(W) + "x" +
                          std::to_string(H));
  }
  if (cfg.strategy == Strategy::kMixedMultiThumbnails &&
      static_cast<long long>(cfg.num_thumbnails) * t.w * t.h > static_cast<long long>(W) * H) {
    throw InvalidArgument(std::to_string(cfg.num_thumbnails) + " thumbnails of " +
                          std::to_string(t.w) + "x" + std::to_string(t.h) +
                          " cannot fit disjointly in " + std::to_string(W) + "x" +
                          std::to_string(H));
  }

  const auto n = static_cast<int>(batch.samples.size());
  std::vector<AugOutput> out;
  out.reserve(batch.samples.size());

  RngStream gate = derive_stream(cfg.root_seed, Purpose::kGate, batch.batch_index);
  if (!bernoulli_gate(gate, cfg.participation_rate)) {
    for (const auto& s : batch.samples) {
      out.push_back(pass_through(s, batch, cfg));
    }
    return out;
  }

  switch (cfg.strategy) {
    case Strategy::kSelfThumbnail: {
      for (int i = 0; i < n; ++i) {
        const Sample& s = batch.samples[i];
        RngStream rng = derive_stream(cfg.root_seed, Purpose::kBox, batch.batch_index, i);
        auto aug = self_thumbnail(s.image, s.label, cfg, rng);
        AugRecord rec = make_record(s, AppliedStrategy::kST, batch, cfg);
        rec.sources = {{s.sample_id, 1.0}};
        rec.boxes = {aug.boxes};
        out.push_back({std::move(aug.image), std::move(aug.label), std::move(rec)});
      }
      break;
    }
    case Strategy::kMixedSingleThumbnail: {
      RngStream pair_rng = derive_stream(cfg.root_seed, Purpose::kPairing, batch.batch_index);
      const std::vector<int> partner = sample_pairing(pair_rng, n);
      for (int i = 0; i < n; ++i) {
        const Sample& s = batch.samples[i];
        const Sample& p = batch.samples[partner[i]];
        RngStream rng = derive_stream(cfg.root_seed, Purpose::kBox, batch.batch_index, i);
        auto aug = mixed_single(s.image, s.label, p.image, p.label, cfg, rng);
        AugRecord rec = make_record(s, AppliedStrategy::kMST, batch, cfg);
        rec.sources = {{s.sample_id, 1.0 - cfg.lambda}, {p.sample_id, cfg.lambda}};
        rec.boxes = {aug.boxes};
        out.push_back({std::move(aug.image), std::move(aug.label), std::move(rec)});
      }
      break;
    }
    case Strategy::kMixedMultiThumbnails: {
      std::vector<std::vector<int>> partners;
      for (int k = 0; k < cfg.num_thumbnails; ++k) {
        RngStream pair_rng =
            derive_stream(cfg.root_seed, Purpose::kPartner, batch.batch_index, k);
        partners.push_back(sample_pairing(pair_rng, n));
      }
      for (int i = 0; i < n; ++i) {
        const Sample& s = batch.samples[i];
        std::vector<SourceRef> others;
        std::vector<const Sample*> partner_samples;
        for (const auto& perm : partners) {
          const Sample& p = batch.samples[perm[i]];
          others.push_back({&p.image, &p.label});
          partner_samples.push_back(&p);
        }
        RngStream rng = derive_stream(cfg.root_seed, Purpose::kBox, batch.batch_index, i);
        try {
          auto aug = mixed_multi(s.image, s.label, others, cfg, rng);
          AugRecord rec = make_record(s, AppliedStrategy::kMMT, batch, cfg);
          double base_w = cfg.lambda_base;
          double thumb_w = cfg.lambda_thumb;
          if (cfg.normalize_labels) {
            std::vector<LabelEntry> ws{{0, cfg.lambda_base}};
            for (int k = 0; k < cfg.num_thumbnails; ++k) {
              ws.push_back({k + 1, cfg.lambda_thumb});
            }
            const double total = LabelDist(cfg.num_thumbnails + 1, ws).total_weight();
            base_w /= total;
            thumb_w /= total;
          }
          rec.sources = {{s.sample_id, base_w}};
          for (const Sample* p : partner_samples) {
            rec.sources.push_back({p->sample_id, thumb_w});
          }
          rec.boxes = std::move(aug.boxes);
          out.push_back({std::move(aug.image), std::move(aug.label), std::move(rec)});
        } catch (const PlacementFailure& e) {
          out.push_back(pass_through(s, batch, cfg, e.what()));
        }
      }
      break;
    }
  }
  return out;
}

std::size_t run_corpus(const SampleSource& source, const AugConfig& cfg, int batch_size,
                       const OutputSink& sink) {
  if (batch_size < 1) {
    throw InvalidArgument("batch_size must be at least 1");
  }
  std::size_t count = 0;
  Batch batch;
  auto flush = [&] {
    for (auto& o : augment_batch(batch, cfg)) {
      sink(std::move(o));
    }
    batch.samples.clear();
    ++batch.batch_index;
  };
  while (auto sample = source()) {
    if (!batch.samples.empty() && !sample->image.same_shape(batch.samples.front().image)) {
      throw DimensionMismatch("sample '" + sample->sample_id + "' is " +
                              shape_str(sample->image) + " but batch " +
                              std::to_string(batch.batch_index) + " is " +
                              shape_str(batch.samples.front().image));
    }
    batch.samples.push_back(std::move(*sample));
    ++count;
    if (static_cast<int>(batch.samples.size()) == batch_size) {
      flush();
    }
  }
  if (!batch.samples.empty()) {
    flush();
  }
  return count;
}

std::vector<AugOutput> run_corpus(std::vector<Sample> samples, const AugConfig& cfg,
                                  int batch_size) {
  std::size_t next = 0;
  std::vector<AugOutput> out;
  out.reserve(samples.size());
  run_corpus(
      [&]() -> std::optional<Sample> {
        if (next == samples.size()) return std::nullopt;
        return std::move(samples[next++]);
      },
      cfg, batch_size, [&](AugOutput&& o) { out.push_back(std::move(o)); });
  return out;
}

Image replay_record(const AugRecord& record,
                    const std::function<const Image&(const std::string&)>& lookup) {
  if (record.sources.empty()) {
    throw InvalidArgument("record '" + record.output_id + "' has no sources");
  }
  const Image& base = lookup(record.sources.front().sample_id);
  switch (record.strategy) {
    case AppliedStrategy::kNone:
      if (!record.boxes.empty()) {
        throw InvalidArgument("pass-through record '" + record.output_id + "' carries boxes");
      }
      return base;
    case AppliedStrategy::kST: {
      if (record.boxes.size() != 1) {
        throw InvalidArgument("st record '" + record.output_id + "' needs exactly one box");
      }
      const BBox& b = record.boxes.front();
      return paste(base, thumbnail(base, b.w, b.h), b);
    }
    case AppliedStrategy::kMST:
    case AppliedStrategy::kMMT: {
      if (record.boxes.size() + 1 != record.sources.size() || record.boxes.empty()) {
        throw InvalidArgument("record '" + record.output_id +
                              "' needs one box per thumbnail source");
      }
      Image out = base;
      for (std::size_t i = 0; i < record.boxes.size(); ++i) {
        const BBox& b = record.boxes[i];
        const Image& src = lookup(record.sources[i + 1].sample_id);
        if (!src.same_shape(base)) {
          throw DimensionMismatch("record '" + record.output_id + "' mixes differently shaped sources");
        }
        out = paste(out, thumbnail(src, b.w, b.h), b);
      }
      return out;
    }
  }
  return base;
}

}  // namespace cutthumb
