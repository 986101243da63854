#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adasketch/linalg.hpp"

namespace adasketch {

struct SparseEntry {
  Index index;  // 0-based
  double value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

using SparseRow = std::vector<SparseEntry>;

/// Binary classification data: labels in {-1, +1} and sparse feature rows.
struct Dataset {
  std::vector<double> labels;
  std::vector<SparseRow> rows;
  Index n_features = 0;

  std::size_t size() const { return labels.size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Parses "label idx:val idx:val ..." lines (1-based indices). Labels 0 and
/// -1 map to -1, positive labels to +1. Blank lines and '#' comments are
/// skipped. n_features is the largest index seen.
Dataset parse_libsvm(std::string_view text);
Dataset load_libsvm(const std::filesystem::path& path);

/// Inverse of parse_libsvm for datasets with labels in {-1, +1}; values are
/// written with 17 significant digits.
std::string serialize_libsvm(const Dataset& data);

}  // namespace adasketch
