#include "rashomon/curation.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <iostream>

#include "rashomon/error.hpp"

namespace rashomon {

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string format_rfc3339(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  auto frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(frac));
  return buffer;
}

const CurationRecord& CurationFile::record(int tree_id) const {
  auto it = std::find_if(records.begin(), records.end(),
                         [&](const CurationRecord& r) { return r.tree_id == tree_id; });
  if (it == records.end()) throw UnknownTreeId(tree_id);
  return *it;
}

nlohmann::json record_to_json(const CurationRecord& r) {
  return {{"tree_id", r.tree_id},
          {"comment", r.comment},
          {"created_at", r.created_at},
          {"tree", tree_to_json(r.tree)},
          {"metrics", metrics_to_json(r.metrics)}};
}

nlohmann::json curation_to_json(const CurationFile& file) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : file.records) records.push_back(record_to_json(r));
  return {{"format_version", file.format_version},
          {"dataset_hash", file.dataset_hash},
          {"config", config_to_json(file.config)},
          {"conditions", conditions_to_json(file.conditions)},
          {"records", std::move(records)}};
}

CurationFile curation_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("format_version"))
    throw SchemaError("curation file lacks format_version");
  const auto& version = doc["format_version"];
  if (!version.is_string() || version.get<std::string>() != kCurationFormatVersion)
    throw UnsupportedVersion("unsupported curation format_version " + version.dump());

  CurationFile file;
  try {
    file.dataset_hash = doc.at("dataset_hash").get<std::string>();
    file.config = config_from_json(doc.at("config"));
    file.conditions = conditions_from_json(doc.at("conditions"));
    for (const auto& r : doc.at("records")) {
      CurationRecord rec{r.at("tree_id").get<int>(), r.at("comment").get<std::string>(),
                         r.at("created_at").get<std::string>(), tree_from_json(r.at("tree")),
                         metrics_from_json(r.at("metrics"))};
      if (std::any_of(file.records.begin(), file.records.end(),
                      [&](const CurationRecord& x) { return x.tree_id == rec.tree_id; }))
        throw SchemaError("duplicate tree_id " + std::to_string(rec.tree_id) + " in curation file");
      file.records.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed curation file: ") + e.what());
  }
  return file;
}

bool matches_set(const CurationFile& file, const RashomonSet& set) {
  if (file.dataset_hash == set.dataset_hash) return true;
  std::clog << "warning: curation file was exported for dataset " << file.dataset_hash
            << " but the loaded set uses " << set.dataset_hash << "\n";
  return false;
}

CurationStore::CurationStore(const RashomonSet& set, std::optional<std::filesystem::path> path,
                             Clock clock)
    : set_(set), path_(std::move(path)), clock_(std::move(clock)) {
  if (path_ && std::filesystem::exists(*path_)) {
    auto file = import_curation(*path_);
    matches_set(file, set_);
    records_ = std::move(file.records);
  }
}

CurationRecord CurationStore::bookmark(int tree_id, const std::string& comment) {
  const auto& member = set_.member(tree_id);
  std::lock_guard lock(mutex_);
  auto it = std::find_if(records_.begin(), records_.end(),
                         [&](const CurationRecord& r) { return r.tree_id == tree_id; });
  if (it != records_.end()) {
    it->comment = comment;
  } else {
    records_.push_back({tree_id, comment, format_rfc3339(clock_()), member.tree, member.metrics});
    it = std::prev(records_.end());
  }
  CurationRecord out = *it;
  persist_locked();
  return out;
}

bool CurationStore::unbookmark(int tree_id) {
  if (!set_.contains(tree_id)) throw UnknownTreeId(tree_id);
  std::lock_guard lock(mutex_);
  auto removed = std::erase_if(records_, [&](const CurationRecord& r) { return r.tree_id == tree_id; });
  if (removed) persist_locked();
  return removed > 0;
}

std::vector<CurationRecord> CurationStore::list_bookmarks() const {
  std::lock_guard lock(mutex_);
  auto out = records_;
  std::stable_sort(out.begin(), out.end(),
                   [](const CurationRecord& a, const CurationRecord& b) { return a.created_at < b.created_at; });
  return out;
}

CurationFile CurationStore::snapshot_locked() const {
  CurationFile file;
  file.dataset_hash = set_.dataset_hash;
  file.config = set_.config;
  file.conditions = set_.conditions;
  file.records = records_;
  std::stable_sort(file.records.begin(), file.records.end(),
                   [](const CurationRecord& a, const CurationRecord& b) { return a.created_at < b.created_at; });
  return file;
}

CurationFile CurationStore::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_locked();
}

void CurationStore::persist_locked() const {
  if (!path_) return;
  write_atomically(*path_, curation_to_json(snapshot_locked()).dump(2) + "\n");
}

CurationFile export_curation(const CurationStore& store, const std::filesystem::path& path) {
  auto file = store.snapshot();
  if (file.records.empty()) throw EmptySetError("nothing is bookmarked");
  write_atomically(path, curation_to_json(file).dump(2) + "\n");
  return file;
}

CurationFile import_curation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("cannot parse " + path.string() + ": " + e.what());
  }
  return curation_from_json(doc);
}

std::vector<std::uint8_t> load_and_predict(const CurationFile& file, int tree_id,
                                           const std::vector<std::vector<std::uint8_t>>& samples) {
  const auto& record = file.record(tree_id);
  std::vector<std::uint8_t> labels;
  labels.reserve(samples.size());
  for (const auto& x : samples) {
    if (x.size() != file.feature_count())
      throw DimensionError("sample has " + std::to_string(x.size()) + " values, model expects " +
                           std::to_string(file.feature_count()));
    labels.push_back(predict(record.tree, x));
  }
  return labels;
}

}  // namespace rashomon
