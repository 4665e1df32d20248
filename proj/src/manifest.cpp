// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#include "cutthumb/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cutthumb/error.hpp"

namespace cutthumb {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(trim(field));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

int parse_class_index(const std::string& text, std::size_t line_no) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || value < 0) {
    throw InvalidArgument("corpus manifest line " + std::to_string(line_no) +
                          ": bad class_index '" + text + "'");
  }
  return value;
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

}  // namespace

std::vector<CorpusEntry> parse_corpus_manifest(std::istream& in,
                                               const std::filesystem::path& base_dir,
                                               bool jsonl) {
  std::vector<CorpusEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    CorpusEntry e;
    if (jsonl) {
      json j;
      try {
        j = json::parse(t);
        const std::string path =
            j.contains("input_path") ? j.at("input_path").get<std::string>()
                                     : j.at("path").get<std::string>();
        e.input_path = resolve(base_dir, path);
        e.sample_id = j.at("sample_id").get<std::string>();
        e.class_index = j.at("class_index").get<int>();
      } catch (const json::exception& ex) {
        throw InvalidArgument("corpus manifest line " + std::to_string(line_no) + ": " +
                              ex.what());
      }
      if (e.class_index < 0) {
        throw InvalidArgument("corpus manifest line " + std::to_string(line_no) +
                              ": negative class_index");
      }
    } else {
      const auto fields = split_csv(t);
      if (fields.size() != 3) {
        throw InvalidArgument("corpus manifest line " + std::to_string(line_no) +
                              ": expected path,sample_id,class_index");
      }
      if (entries.empty() && line_no == 1 &&
          (fields[0] == "path" || fields[0] == "input_path")) {
        continue;  // header
      }
      e.input_path = resolve(base_dir, fields[0]);
      e.sample_id = fields[1];
      e.class_index = parse_class_index(fields[2], line_no);
    }
    if (e.sample_id.empty()) {
      throw InvalidArgument("corpus manifest line " + std::to_string(line_no) +
                            ": empty sample_id");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<CorpusEntry> read_corpus_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open corpus manifest " + path.string());
  }
  bool jsonl = path.extension() == ".jsonl";
  if (!jsonl) {
    std::string first;
    while (std::getline(in, first) && trim(first).empty()) {
    }
    jsonl = !trim(first).empty() && trim(first).front() == '{';
    in.clear();
    in.seekg(0);
  }
  return parse_corpus_manifest(in, path.parent_path(), jsonl);
}

std::string to_json_line(const OutputRecord& rec) {
  json sources = json::array();
  for (const auto& s : rec.record.sources) {
    sources.push_back({{"sample_id", s.sample_id}, {"weight", s.weight}});
  }
  json boxes = json::array();
  for (const auto& b : rec.record.boxes) {
    boxes.push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
  }
  json j = {
      {"output_path", rec.output_path},
      {"strategy", std::string(to_string(rec.record.strategy))},
      {"sources", std::move(sources)},
      {"boxes", std::move(boxes)},
      {"batch_index", rec.record.batch_index},
      {"root_seed", rec.record.root_seed},
  };
  if (!rec.record.note.empty()) {
    j["note"] = rec.record.note;
  }
  return j.dump();
}

OutputRecord parse_json_line(const std::string& line) {
  OutputRecord rec;
  try {
    const json j = json::parse(line);
    rec.output_path = j.at("output_path").get<std::string>();
    rec.record.strategy = parse_applied_strategy(j.at("strategy").get<std::string>());
    for (const auto& s : j.at("sources")) {
      rec.record.sources.push_back(
          {s.at("sample_id").get<std::string>(), s.at("weight").get<double>()});
    }
    for (const auto& b : j.at("boxes")) {
      rec.record.boxes.push_back(
          {b.at("x").get<int>(), b.at("y").get<int>(), b.at("w").get<int>(), b.at("h").get<int>()});
    }
    rec.record.batch_index = j.at("batch_index").get<std::uint64_t>();
    rec.record.root_seed = j.at("root_seed").get<std::uint64_t>();
    if (j.contains("note")) {
      rec.record.note = j.at("note").get<std::string>();
    }
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed output manifest line: ") + ex.what());
  }
  if (rec.record.sources.empty()) {
    throw InvalidArgument("output manifest line has no sources");
  }
  rec.record.output_id = rec.record.sources.front().sample_id;
  return rec;
}

void write_output_manifest(std::ostream& out, const std::vector<OutputRecord>& records) {
  for (const auto& r : records) {
    out << to_json_line(r) << '\n';
  }
}

std::vector<OutputRecord> read_output_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open output manifest " + path.string());
  }
  std::vector<OutputRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    records.push_back(parse_json_line(line));
  }
  return records;
}

std::string to_json(const RunConfig& cfg) {
  const AugConfig& a = cfg.aug;
  json thumb = nullptr;
  if (a.thumb) {
    thumb = {{"w", a.thumb->w}, {"h", a.thumb->h}};
  }
  json j = {
      {"strategy", std::string(to_string(a.strategy))},
      {"thumb_size", thumb},
      {"lambda", a.lambda},
      {"lambda_base", a.lambda_base},
      {"lambda_thumb", a.lambda_thumb},
      {"num_thumbnails", a.num_thumbnails},
      {"participation_rate", a.participation_rate},
      {"root_seed", a.root_seed},
      {"normalize_labels", a.normalize_labels},
      {"max_attempts", a.max_attempts},
      {"batch_size", cfg.batch_size},
      {"format", cfg.format},
  };
  return j.dump(2);
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  try {
    const json j = json::parse(text);
    AugConfig& a = cfg.aug;
    a.strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (!j.at("thumb_size").is_null()) {
      a.thumb = ThumbSize{j["thumb_size"].at("w").get<int>(), j["thumb_size"].at("h").get<int>()};
    }
    a.lambda = j.at("lambda").get<double>();
    a.lambda_base = j.at("lambda_base").get<double>();
    a.lambda_thumb = j.at("lambda_thumb").get<double>();
    a.num_thumbnails = j.at("num_thumbnails").get<int>();
    a.participation_rate = j.at("participation_rate").get<double>();
    a.root_seed = j.at("root_seed").get<std::uint64_t>();
    a.normalize_labels = j.at("normalize_labels").get<bool>();
    a.max_attempts = j.at("max_attempts").get<int>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.format = j.at("format").get<std::string>();
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed run config: ") + ex.what());
  }
  return cfg;
}

}  // namespace cutthumb
