#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arena::dataset {

class SizeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Split { kTrain, kValidation, kTest };

std::string_view to_string(Split s);
Split split_from_string(std::string_view s);

struct DatasetSplit {
  Split split = Split::kTrain;
  std::vector<std::string> ids;

  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

/// Seeded shuffle, then contiguous cuts at 80% and 99% of the ids
/// (8000/1900/100 for 10,000). Throws SizeMismatch below 100 ids and
/// std::invalid_argument on duplicate ids.
std::array<DatasetSplit, 3> partition(std::span<const std::string> ids, std::uint64_t seed);

}  // namespace arena::dataset
