// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "cutthumb/codec.hpp"
#include "cutthumb/error.hpp"
#include "cutthumb/manifest.hpp"
#include "cutthumb/pipeline.hpp"

namespace fs = std::filesystem;

namespace cutthumb::cli {

namespace {

constexpr const char* kManifestName = "manifest.jsonl";
constexpr const char* kConfigName = "augment_config.json";
constexpr const char* kSeedEnv = "CUTTHUMB_SEED";

ThumbSize parse_thumb_size(const std::string& text) {
  // Accepts "WxH", "W×H" or a single "N" for a square thumbnail.
  std::string s = text;
  const std::string times = "\xC3\x97";
  if (auto pos = s.find(times); pos != std::string::npos) {
    s.replace(pos, times.size(), "x");
  }
  int w = 0;
  int h = 0;
  char sep = 0;
  std::istringstream in(s);
  if (s.find_first_of("xX") == std::string::npos) {
    in >> w;
    h = w;
  } else {
    in >> w >> sep >> h;
  }
  if (!in || !(in >> std::ws).eof() || w < 1 || h < 1) {
    throw InvalidArgument("bad --thumb-size '" + text + "' (expected WxH)");
  }
  return {w, h};
}

void check_sample_id(const std::string& id) {
  if (id.empty() || id.front() == '.' || id.find_first_of("/\\") != std::string::npos) {
    throw InvalidArgument("sample_id '" + id + "' cannot be used as a file name");
  }
}

std::string extension_for(const std::string& format) {
  if (format == "png") return ".png";
  if (format == "ppm") return ".ppm";
  throw InvalidArgument("--format must be png or ppm, got '" + format + "'");
}

std::optional<std::uint64_t> seed_from_env() {
  const char* v = std::getenv(kSeedEnv);
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long seed = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') {
    throw InvalidArgument(std::string(kSeedEnv) + " is not an unsigned integer");
  }
  return seed;
}

int num_classes_for(const std::vector<CorpusEntry>& corpus, int requested) {
  int max_class = -1;
  for (const auto& e : corpus) max_class = std::max(max_class, e.class_index);
  const int k = requested > 0 ? requested : max_class + 1;
  if (max_class >= k) {
    throw InvalidArgument("class_index " + std::to_string(max_class) + " outside [0, " +
                          std::to_string(k) + ")");
  }
  return std::max(k, 1);
}

void check_unique_ids(const std::vector<CorpusEntry>& corpus) {
  std::set<std::string> seen;
  for (const auto& e : corpus) {
    check_sample_id(e.sample_id);
    if (!seen.insert(e.sample_id).second) {
      throw InvalidArgument("duplicate sample_id '" + e.sample_id + "' in corpus");
    }
  }
}

struct LoadError {
  std::string sample_id;
  std::string message;
};

/// Lazily decodes corpus entries; failures are collected and the sample skipped.
SampleSource corpus_source(const std::vector<CorpusEntry>& corpus, int num_classes,
                           std::vector<LoadError>& errors) {
  auto next = std::make_shared<std::size_t>(0);
  return [&corpus, num_classes, &errors, next]() -> std::optional<Sample> {
    while (*next < corpus.size()) {
      const CorpusEntry& e = corpus[(*next)++];
      try {
        return Sample{e.sample_id, load_image(e.input_path),
                      LabelDist::pure(num_classes, e.class_index)};
      } catch (const Error& ex) {
        errors.push_back({e.sample_id, ex.what()});
      }
    }
    return std::nullopt;
  };
}

std::string first_difference(const Image& expected, const Image& actual) {
  if (!expected.same_shape(actual)) {
    return "shape " + std::to_string(actual.width()) + "x" + std::to_string(actual.height()) +
           "x" + std::to_string(actual.channels()) + ", expected " +
           std::to_string(expected.width()) + "x" + std::to_string(expected.height()) + "x" +
           std::to_string(expected.channels());
  }
  for (int r = 0; r < expected.height(); ++r) {
    for (int c = 0; c < expected.width(); ++c) {
      for (int ch = 0; ch < expected.channels(); ++ch) {
        if (expected.at(r, c, ch) != actual.at(r, c, ch)) {
          return "first differing pixel at (x=" + std::to_string(c) + ", y=" +
                 std::to_string(r) + ", c=" + std::to_string(ch) + ")";
        }
      }
    }
  }
  return {};
}

// ---- augment ---------------------------------------------------------------

struct AugmentArgs {
  fs::path corpus;
  fs::path out_dir;
  std::string strategy;
  std::string thumb_size;
  double lambda = AugConfig{}.lambda;
  double lambda_base = AugConfig{}.lambda_base;
  double lambda_thumb = AugConfig{}.lambda_thumb;
  int num_thumbnails = AugConfig{}.num_thumbnails;
  double participation_rate = AugConfig{}.participation_rate;
  std::uint64_t seed = 0;
  int batch_size = RunConfig{}.batch_size;
  bool normalize_labels = false;
  int max_attempts = kDefaultMaxAttempts;
  int num_classes = 0;
  std::string format = RunConfig{}.format;
  bool dump_config = false;
};

struct AugmentOptions {
  CLI::Option* corpus;
  CLI::Option* out_dir;
  CLI::Option* lambda;
  CLI::Option* lambda_base;
  CLI::Option* lambda_thumb;
  CLI::Option* num_thumbnails;
  CLI::Option* normalize_labels;
  CLI::Option* seed;
};

RunConfig build_run_config(const AugmentArgs& a, const AugmentOptions& opts) {
  RunConfig cfg;
  AugConfig& aug = cfg.aug;
  aug.strategy = parse_strategy(a.strategy);
  const bool is_mst = aug.strategy == Strategy::kMixedSingleThumbnail;
  const bool is_mmt = aug.strategy == Strategy::kMixedMultiThumbnails;
  if (opts.lambda->count() > 0 && !is_mst) {
    throw InvalidArgument("--lambda only applies to --strategy mst");
  }
  for (CLI::Option* o :
       {opts.lambda_base, opts.lambda_thumb, opts.num_thumbnails, opts.normalize_labels}) {
    if (o->count() > 0 && !is_mmt) {
      throw InvalidArgument(o->get_name() + " only applies to --strategy mmt");
    }
  }
  if (!a.thumb_size.empty()) {
    aug.thumb = parse_thumb_size(a.thumb_size);
  }
  aug.lambda = a.lambda;
  aug.lambda_base = a.lambda_base;
  aug.lambda_thumb = a.lambda_thumb;
  aug.num_thumbnails = a.num_thumbnails;
  aug.participation_rate = a.participation_rate;
  aug.normalize_labels = a.normalize_labels;
  aug.max_attempts = a.max_attempts;
  if (opts.seed->count() > 0) {
    aug.root_seed = a.seed;
  } else if (auto env = seed_from_env()) {
    aug.root_seed = *env;
  }
  aug.validate();
  if (a.batch_size < 1) {
    throw InvalidArgument("--batch-size must be at least 1");
  }
  cfg.batch_size = a.batch_size;
  extension_for(a.format);
  cfg.format = a.format;
  return cfg;
}

int do_augment(const AugmentArgs& a, const AugmentOptions& opts, std::ostream& out,
               std::ostream& err) {
  const RunConfig cfg = build_run_config(a, opts);
  if (a.dump_config) {
    out << to_json(cfg) << '\n';
    return 0;
  }
  if (opts.corpus->count() == 0 || opts.out_dir->count() == 0) {
    throw InvalidArgument("--corpus and --out-dir are required");
  }
  const auto corpus = read_corpus_manifest(a.corpus);
  check_unique_ids(corpus);
  const int k = num_classes_for(corpus, a.num_classes);

  fs::create_directories(a.out_dir);
  {
    std::ofstream cfg_out(a.out_dir / kConfigName);
    cfg_out << to_json(cfg) << '\n';
    if (!cfg_out) throw IoError("cannot write " + (a.out_dir / kConfigName).string());
  }
  std::ofstream manifest(a.out_dir / kManifestName, std::ios::trunc);
  if (!manifest) {
    throw IoError("cannot write " + (a.out_dir / kManifestName).string());
  }

  const std::string ext = extension_for(cfg.format);
  std::vector<LoadError> errors;
  std::size_t augmented = 0;
  const std::size_t total = run_corpus(
      corpus_source(corpus, k, errors), cfg.aug, cfg.batch_size, [&](AugOutput&& o) {
        OutputRecord rec{o.record.output_id + ext, std::move(o.record)};
        try {
          save_image(o.image, a.out_dir / rec.output_path);
        } catch (const Error& ex) {
          errors.push_back({rec.record.output_id, ex.what()});
          return;
        }
        if (rec.record.strategy != AppliedStrategy::kNone) ++augmented;
        manifest << to_json_line(rec) << '\n';
      });
  manifest.close();

  out << "processed " << total << " samples, augmented " << augmented << ", wrote "
      << (a.out_dir / kManifestName).string() << '\n';
  if (!errors.empty()) {
    err << errors.size() << " sample(s) failed:\n";
    for (const auto& e : errors) {
      err << "  " << e.sample_id << ": " << e.message << '\n';
    }
    return 1;
  }
  return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  fs::path corpus;
  fs::path out_dir;
  fs::path manifest;
  std::uint64_t seed = 0;
  int num_classes = 0;
};

int do_verify(const VerifyArgs& a, bool seed_given, std::ostream& out, std::ostream& err) {
  RunConfig cfg = parse_run_config([&] {
    const auto bytes = read_file(a.out_dir / kConfigName);
    return std::string(bytes.begin(), bytes.end());
  }());
  if (seed_given) {
    cfg.aug.root_seed = a.seed;
  } else if (auto env = seed_from_env()) {
    cfg.aug.root_seed = *env;
  }
  const fs::path manifest_path = a.manifest.empty() ? a.out_dir / kManifestName : a.manifest;
  const auto stored = read_output_manifest(manifest_path);
  const auto corpus = read_corpus_manifest(a.corpus);
  check_unique_ids(corpus);
  const int k = num_classes_for(corpus, a.num_classes);

  std::map<std::string, Image> sources;
  for (const auto& e : corpus) {
    sources.emplace(e.sample_id, load_image(e.input_path));
  }
  const auto lookup = [&](const std::string& id) -> const Image& {
    auto it = sources.find(id);
    if (it == sources.end()) {
      throw InvalidArgument("unknown source sample_id '" + id + "'");
    }
    return it->second;
  };

  std::vector<std::string> failures;
  auto fail = [&](const std::string& path, const std::string& why) {
    failures.push_back(path + ": " + why);
  };

  // Pass 1: each stored record recomposed from its own sources and boxes.
  std::map<std::string, Image> outputs;
  for (const auto& rec : stored) {
    Image actual(1, 1, 3);
    try {
      actual = load_image(a.out_dir / rec.output_path);
    } catch (const Error& ex) {
      fail(rec.output_path, ex.what());
      continue;
    }
    try {
      const Image expected = replay_record(rec.record, lookup);
      if (auto diff = first_difference(expected, actual); !diff.empty()) {
        fail(rec.output_path, "record replay mismatch, " + diff);
      }
    } catch (const Error& ex) {
      fail(rec.output_path, ex.what());
    }
    outputs.emplace(rec.output_path, std::move(actual));
  }

  // Pass 2: rerun the pipeline with the run's config and the given seed.
  std::vector<LoadError> load_errors;
  const std::string ext = extension_for(cfg.format);
  std::size_t index = 0;
  run_corpus(corpus_source(corpus, k, load_errors), cfg.aug, cfg.batch_size,
             [&](AugOutput&& o) {
               const std::string path = o.record.output_id + ext;
               const std::size_t i = index++;
               if (i >= stored.size()) {
                 fail(path, "missing from manifest");
                 return;
               }
               const OutputRecord& rec = stored[i];
               if (rec.output_path != path || !(rec.record == o.record)) {
                 fail(rec.output_path, "record differs from pipeline replay (seed " +
                                           std::to_string(cfg.aug.root_seed) + ")");
                 return;
               }
               auto it = outputs.find(rec.output_path);
               if (it == outputs.end()) return;  // already reported in pass 1
               if (auto diff = first_difference(o.image, it->second); !diff.empty()) {
                 fail(rec.output_path, "pipeline replay mismatch, " + diff);
               }
             });
  for (const auto& e : load_errors) {
    fail(e.sample_id, e.message);
  }
  if (index < stored.size()) {
    fail(manifest_path.string(),
         std::to_string(stored.size() - index) + " record(s) not produced by replay");
  }

  if (!failures.empty()) {
    err << "verify failed (" << failures.size() << " problem(s)):\n";
    for (const auto& f : failures) err << "  " << f << '\n';
    return 1;
  }
  out << "verified " << stored.size() << " outputs\n";
  return 0;
}

// ---- grayscale -------------------------------------------------------------

struct GrayscaleArgs {
  fs::path corpus;
  fs::path out_dir;
  std::string format = "png";
};

int do_grayscale(const GrayscaleArgs& a, std::ostream& out, std::ostream& err) {
  const std::string ext = extension_for(a.format);
  const auto corpus = read_corpus_manifest(a.corpus);
  check_unique_ids(corpus);
  fs::create_directories(a.out_dir);
  std::ofstream manifest(a.out_dir / "corpus.csv", std::ios::trunc);
  if (!manifest) {
    throw IoError("cannot write " + (a.out_dir / "corpus.csv").string());
  }
  manifest << "path,sample_id,class_index\n";
  std::vector<LoadError> errors;
  for (const auto& e : corpus) {
    try {
      save_image(to_grayscale(load_image(e.input_path)), a.out_dir / (e.sample_id + ext));
      manifest << e.sample_id << ext << ',' << e.sample_id << ',' << e.class_index << '\n';
    } catch (const Error& ex) {
      errors.push_back({e.sample_id, ex.what()});
    }
  }
  out << "converted " << corpus.size() - errors.size() << " images into " << a.out_dir.string()
      << '\n';
  if (!errors.empty()) {
    err << errors.size() << " sample(s) failed:\n";
    for (const auto& e : errors) err << "  " << e.sample_id << ": " << e.message << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cut-Thumbnail image augmentation"};
  app.require_subcommand(1);

  AugmentArgs aug;
  AugmentOptions aug_opts{};
  auto* augment = app.add_subcommand("augment", "Augment a corpus and write a replay manifest");
  aug_opts.corpus = augment->add_option("--corpus", aug.corpus, "Corpus manifest (CSV or JSONL)");
  aug_opts.out_dir = augment->add_option("--out-dir", aug.out_dir, "Output directory");
  augment->add_option("--strategy", aug.strategy, "st, mst or mmt")->required();
  augment->add_option("--thumb-size", aug.thumb_size, "Thumbnail size WxH (default: half input)");
  aug_opts.lambda = augment->add_option("--lambda", aug.lambda, "MST thumbnail label weight")
                        ->capture_default_str();
  aug_opts.lambda_base =
      augment->add_option("--lambda-base", aug.lambda_base, "MMT base image label weight")
          ->capture_default_str();
  aug_opts.lambda_thumb =
      augment->add_option("--lambda-thumb", aug.lambda_thumb, "MMT per-thumbnail label weight")
          ->capture_default_str();
  aug_opts.num_thumbnails =
      augment->add_option("--num-thumbnails", aug.num_thumbnails, "MMT thumbnails per image")
          ->capture_default_str();
  augment
      ->add_option("--participation-rate", aug.participation_rate,
                   "Fraction of batches augmented")
      ->capture_default_str();
  aug_opts.seed = augment->add_option("--seed", aug.seed, "Root seed (default: $CUTTHUMB_SEED or 0)");
  augment->add_option("--batch-size", aug.batch_size, "Samples per batch")->capture_default_str();
  aug_opts.normalize_labels =
      augment->add_flag("--normalize-labels", aug.normalize_labels, "Renormalize MMT labels");
  augment->add_option("--max-attempts", aug.max_attempts, "MMT placement rejection budget")
      ->capture_default_str();
  augment->add_option("--num-classes", aug.num_classes, "Number of classes (default: max+1)");
  augment->add_option("--format", aug.format, "Output format, png or ppm")->capture_default_str();
  augment->add_flag("--dump-config", aug.dump_config, "Print the resolved config and exit");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Replay a manifest and compare against outputs");
  verify->add_option("--corpus", ver.corpus, "Original corpus manifest")->required();
  verify->add_option("--out-dir", ver.out_dir, "Directory written by augment")->required();
  verify->add_option("--manifest", ver.manifest, "Output manifest (default: out-dir/manifest.jsonl)");
  auto* ver_seed = verify->add_option("--seed", ver.seed, "Root seed to replay with");
  verify->add_option("--num-classes", ver.num_classes, "Number of classes (default: max+1)");

  GrayscaleArgs gray;
  auto* grayscale = app.add_subcommand("grayscale", "Convert a corpus to 3-channel grayscale");
  grayscale->add_option("--corpus", gray.corpus, "Corpus manifest")->required();
  grayscale->add_option("--out-dir", gray.out_dir, "Output directory")->required();
  grayscale->add_option("--format", gray.format, "Output format, png or ppm")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (augment->parsed()) return do_augment(aug, aug_opts, out, err);
    if (verify->parsed()) return do_verify(ver, ver_seed->count() > 0, out, err);
    if (grayscale->parsed()) return do_grayscale(gray, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace cutthumb::cli
