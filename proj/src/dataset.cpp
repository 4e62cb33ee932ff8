#include "rashomon/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rashomon/error.hpp"

namespace rashomon {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::uint8_t parse_bit(const std::string& cell, std::size_t row, std::size_t column,
                       const std::string& column_name) {
  if (cell == "0") return 0;
  if (cell == "1") return 1;
  throw ValidationError("non-binary value \"" + cell + "\" at row " + std::to_string(row) +
                            ", column " + std::to_string(column) + " (" + column_name + ")",
                        row, column);
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

SplitCondition parse_condition_header(int id, const std::string& header) {
  SplitCondition c;
  c.id = id;
  c.display_name = header;
  auto colon = header.find(':');
  if (colon == std::string::npos) {
    c.source_feature = header;
  } else {
    c.source_feature = header.substr(0, colon);
    c.range_label = header.substr(colon + 1);
  }
  return c;
}

Dataset::Dataset(std::vector<SplitCondition> conditions,
                 std::vector<std::vector<std::uint8_t>> samples,
                 std::vector<std::uint8_t> labels, std::string label_name)
    : conditions_(std::move(conditions)),
      samples_(std::move(samples)),
      labels_(std::move(labels)),
      label_name_(std::move(label_name)) {
  if (conditions_.empty()) throw SchemaError("dataset needs at least one condition column");
  if (labels_.empty()) throw SchemaError("dataset needs at least one sample row");
  if (samples_.size() != labels_.size())
    throw DimensionError("sample and label counts differ");

  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < conditions_.size(); ++i) {
    if (conditions_[i].id != static_cast<int>(i))
      throw SchemaError("condition ids must be dense and ordered");
    if (!seen.emplace(conditions_[i].source_feature, conditions_[i].range_label).second)
      throw SchemaError("duplicate condition " + conditions_[i].display_name);
  }
  for (std::size_t r = 0; r < samples_.size(); ++r) {
    if (samples_[r].size() != conditions_.size())
      throw DimensionError("row " + std::to_string(r) + " has wrong width");
    for (std::size_t c = 0; c < samples_[r].size(); ++c)
      if (samples_[r][c] > 1)
        throw ValidationError("non-binary value at row " + std::to_string(r) + ", column " +
                                  std::to_string(c),
                              r, c);
    if (labels_[r] > 1)
      throw ValidationError("non-binary label at row " + std::to_string(r), r,
                            conditions_.size());
  }
  content_hash_ = sha256_hex(canonical_serialization());
}

std::string Dataset::canonical_serialization() const {
  nlohmann::json doc;
  auto& conds = doc["conditions"] = nlohmann::json::array();
  for (const auto& c : conditions_) conds.push_back(c.display_name);
  doc["label"] = label_name_;
  doc["labels"] = labels_;
  doc["samples"] = samples_;
  return doc.dump();
}

bool Dataset::operator==(const Dataset& other) const {
  return conditions_ == other.conditions_ && samples_ == other.samples_ &&
         labels_ == other.labels_ && label_name_ == other.label_name_ &&
         content_hash_ == other.content_hash_;
}

Dataset parse_dataset(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line).empty())
    throw SchemaError("empty dataset file");
  auto header = split_row(strip_cr(line));
  if (header.size() < 2)
    throw SchemaError("header needs at least one condition column and a label column");

  std::set<std::string> names;
  for (const auto& h : header)
    if (!names.insert(h).second) throw SchemaError("duplicate header \"" + h + "\"");

  std::vector<SplitCondition> conditions;
  for (std::size_t i = 0; i + 1 < header.size(); ++i)
    conditions.push_back(parse_condition_header(static_cast<int>(i), header[i]));

  std::vector<std::vector<std::uint8_t>> samples;
  std::vector<std::uint8_t> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (cells.size() != header.size())
      throw SchemaError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(header.size()));
    std::vector<std::uint8_t> values(conditions.size());
    for (std::size_t c = 0; c < conditions.size(); ++c)
      values[c] = parse_bit(cells[c], row, c, header[c]);
    labels.push_back(parse_bit(cells.back(), row, header.size() - 1, header.back()));
    samples.push_back(std::move(values));
    ++row;
  }
  if (samples.empty()) throw SchemaError("dataset has a header but no rows");
  return Dataset(std::move(conditions), std::move(samples), std::move(labels), header.back());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str());
}

std::string to_csv(const Dataset& dataset) {
  std::string out;
  for (const auto& c : dataset.conditions()) out += c.display_name + ",";
  out += dataset.label_name() + "\n";
  for (std::size_t r = 0; r < dataset.sample_count(); ++r) {
    for (auto v : dataset.samples()[r]) {
      out.push_back(static_cast<char>('0' + v));
      out.push_back(',');
    }
    out.push_back(static_cast<char>('0' + dataset.labels()[r]));
    out.push_back('\n');
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_csv(dataset);
}

std::vector<FeatureGroup> group_conditions(const std::vector<SplitCondition>& conditions) {
  std::vector<FeatureGroup> groups;
  for (const auto& c : conditions) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const FeatureGroup& g) { return g.source_feature == c.source_feature; });
    if (it == groups.end()) {
      groups.push_back({c.source_feature, {c.id}});
    } else {
      it->condition_ids.push_back(c.id);
    }
  }
  return groups;
}

DatasetSummary describe(const Dataset& dataset) {
  DatasetSummary s;
  s.sample_count = dataset.sample_count();
  s.condition_count = dataset.condition_count();
  for (auto y : dataset.labels()) s.positives += y;
  s.negatives = s.sample_count - s.positives;
  s.groups = group_conditions(dataset.conditions());
  return s;
}

}  // namespace rashomon
