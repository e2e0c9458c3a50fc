#include "arena/forge/profile.hpp"

#include <algorithm>

namespace arena::forge {

namespace {

template <typename E, std::size_t N>
E draw(Rng& rng, const std::array<WeightedValue<E>, N>& table) {
  std::array<double, N> weights{};
  for (std::size_t i = 0; i < N; ++i) weights[i] = table[i].ratio;
  return table[categorical_index(rng, weights)].value;
}

}  // namespace

bool is_compatible(DiseaseCategory disease, ChiefComplaint complaint,
                   const std::vector<Procedure>& procedures) {
  const ClinicalRow& row = clinical_row(disease);
  if (std::find(row.complaints.begin(), row.complaints.end(), complaint) ==
      row.complaints.end()) {
    return false;
  }
  if (procedures.empty()) return false;
  return std::all_of(procedures.begin(), procedures.end(), [&](Procedure p) {
    return std::find(row.procedures.begin(), row.procedures.end(), p) !=
           row.procedures.end();
  });
}

DemographicProfile ProfileSampler::next() {
  DemographicProfile p;
  p.age_band = draw(rng_, kAgeRatios);
  p.gender = draw(rng_, kGenderRatios);
  p.ethnicity = draw(rng_, kEthnicityRatios);
  const auto rows = clinical_rows();
  const ClinicalRow& row = rows[bounded_index(rng_, rows.size())];
  p.disease = row.disease;
  p.chief_complaint = row.complaints[bounded_index(rng_, row.complaints.size())];
  const std::size_t k = row.procedures.size();
  const std::uint64_t mask = 1 + bounded_index(rng_, (std::size_t{1} << k) - 1);
  for (std::size_t i = 0; i < k; ++i) {
    if (mask & (std::uint64_t{1} << i)) p.procedures.push_back(row.procedures[i]);
  }
  return p;
}

DemographicProfile sample_profile(std::uint64_t seed) {
  return ProfileSampler(seed).next();
}

}  // namespace arena::forge
