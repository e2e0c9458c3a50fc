#pragma once

#include <cstdint>
#include <vector>

#include "arena/common/random.hpp"
#include "arena/forge/tables.hpp"

namespace arena::forge {

struct DemographicProfile {
  AgeBand age_band = AgeBand::kYoungAdult;
  Gender gender = Gender::kMale;
  Ethnicity ethnicity = Ethnicity::kWhite;
  DiseaseCategory disease = DiseaseCategory::kInfectious;
  ChiefComplaint chief_complaint = ChiefComplaint::kFeverAndInfections;
  /// Non-empty, in clinical-table order.
  std::vector<Procedure> procedures;

  friend bool operator==(const DemographicProfile&,
                         const DemographicProfile&) = default;
};

/// True when the complaint and every procedure belong to the disease's row.
bool is_compatible(DiseaseCategory disease, ChiefComplaint complaint,
                   const std::vector<Procedure>& procedures);

/// Seeded profile stream. Age, gender and ethnicity follow the population
/// ratios; the disease category is uniform over the 14 rows; the complaint
/// is uniform within the row and the procedures are a uniformly drawn
/// non-empty subset of the row's procedures.
class ProfileSampler {
 public:
  explicit ProfileSampler(std::uint64_t seed) : rng_(seed) {}
  DemographicProfile next();

 private:
  Rng rng_;
};

/// First profile of the stream seeded with `seed`.
DemographicProfile sample_profile(std::uint64_t seed);

}  // namespace arena::forge
