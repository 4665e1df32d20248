// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cutthumb/pipeline.hpp"
#include "cutthumb/strategies.hpp"

namespace cutthumb {

/// One line of the input corpus manifest.
struct CorpusEntry {
  std::filesystem::path input_path;
  std::string sample_id;
  int class_index = 0;

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

/**
 * Reads a corpus manifest, either CSV (`path,sample_id,class_index`, optional
 * header row) or JSONL (`{"input_path":..,"sample_id":..,"class_index":..}`).
 * The format is picked by a `.jsonl` extension or a leading `{`. Relative
 * paths are resolved against the manifest's directory.
 */
std::vector<CorpusEntry> read_corpus_manifest(const std::filesystem::path& path);
std::vector<CorpusEntry> parse_corpus_manifest(std::istream& in,
                                               const std::filesystem::path& base_dir,
                                               bool jsonl);

/// Output manifest line: an AugRecord plus where its image was written.
struct OutputRecord {
  std::string output_path;
  AugRecord record;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

/// Serializes one record as a single JSON line (no trailing newline).
std::string to_json_line(const OutputRecord& rec);
OutputRecord parse_json_line(const std::string& line);

void write_output_manifest(std::ostream& out, const std::vector<OutputRecord>& records);
std::vector<OutputRecord> read_output_manifest(const std::filesystem::path& path);

/// Full configuration of an augment run; written next to the output manifest
/// so the run can be replayed.
struct RunConfig {
  AugConfig aug;
  int batch_size = 256;
  std::string format = "png";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string to_json(const RunConfig& cfg);
RunConfig parse_run_config(const std::string& text);

}  // namespace cutthumb
