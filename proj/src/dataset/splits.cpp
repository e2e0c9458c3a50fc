#include "arena/dataset/splits.hpp"

#include <set>

#include "arena/common/random.hpp"

namespace arena::dataset {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "validation") return Split::kValidation;
  if (s == "test") return Split::kTest;
  throw std::invalid_argument("unknown split: " + std::string(s));
}

std::array<DatasetSplit, 3> partition(std::span<const std::string> ids, std::uint64_t seed) {
  const std::size_t n = ids.size();
  if (n < 100) {
    throw SizeMismatch("partition needs at least 100 ids, got " + std::to_string(n));
  }
  if (std::set<std::string>(ids.begin(), ids.end()).size() != n) {
    throw std::invalid_argument("partition ids must be unique");
  }
  std::vector<std::string> shuffled(ids.begin(), ids.end());
  Rng rng(seed);
  seeded_shuffle(std::span<std::string>(shuffled), rng);

  const std::size_t train_end = n * 80 / 100;
  const std::size_t validation_end = n * 99 / 100;
  const auto slice = [&](std::size_t from, std::size_t to) {
    return std::vector<std::string>(shuffled.begin() + static_cast<std::ptrdiff_t>(from),
                                    shuffled.begin() + static_cast<std::ptrdiff_t>(to));
  };
  return {DatasetSplit{Split::kTrain, slice(0, train_end)},
          DatasetSplit{Split::kValidation, slice(train_end, validation_end)},
          DatasetSplit{Split::kTest, slice(validation_end, n)}};
}

}  // namespace arena::dataset
