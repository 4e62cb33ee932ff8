#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rashomon {

// A binarized split condition, e.g. "prior:>3" -> source "prior", range ">3".
struct SplitCondition {
  int id = 0;
  std::string display_name;
  std::string source_feature;
  std::string range_label;

  bool operator==(const SplitCondition&) const = default;
};

// Splits a header cell of the form "source:range" at the first ':'.
SplitCondition parse_condition_header(int id, const std::string& header);

// Immutable binary dataset. Rows are samples, columns are split conditions.
class Dataset {
 public:
  Dataset(std::vector<SplitCondition> conditions,
          std::vector<std::vector<std::uint8_t>> samples,
          std::vector<std::uint8_t> labels,
          std::string label_name = "label");

  std::size_t sample_count() const { return labels_.size(); }
  std::size_t condition_count() const { return conditions_.size(); }

  const std::vector<SplitCondition>& conditions() const { return conditions_; }
  const std::vector<std::vector<std::uint8_t>>& samples() const { return samples_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  const std::string& label_name() const { return label_name_; }

  std::uint8_t value(std::size_t row, std::size_t condition) const {
    return samples_[row][condition];
  }

  // Hex SHA-256 of canonical_serialization().
  const std::string& content_hash() const { return content_hash_; }
  std::string canonical_serialization() const;

  bool operator==(const Dataset& other) const;

 private:
  std::vector<SplitCondition> conditions_;
  std::vector<std::vector<std::uint8_t>> samples_;
  std::vector<std::uint8_t> labels_;
  std::string label_name_;
  std::string content_hash_;
};

struct FeatureGroup {
  std::string source_feature;
  std::vector<int> condition_ids;
};

struct DatasetSummary {
  std::size_t sample_count = 0;
  std::size_t condition_count = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // Ordered by first appearance of the source feature.
  std::vector<FeatureGroup> groups;
};

// Groups conditions by source feature, in order of first appearance.
std::vector<FeatureGroup> group_conditions(const std::vector<SplitCondition>& conditions);

Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(const std::string& csv_text);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string to_csv(const Dataset& dataset);

DatasetSummary describe(const Dataset& dataset);

std::string sha256_hex(const std::string& bytes);

}  // namespace rashomon
