#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace arena::forge {

enum class AgeBand { kYoungAdult, kMiddleAged, kOlderAdult, kElderly };
enum class Gender { kMale, kFemale };
enum class Ethnicity {
  kWhite,
  kBlack,
  kHispanic,
  kAsian,
  kNativeAmerican,
  kPacificIslander,
  kMixed,
};

enum class DiseaseCategory {
  kInfectious,
  kChronic,
  kCardiovascular,
  kNeurological,
  kMentalHealth,
  kOncological,
  kAutoimmune,
  kGenetic,
  kEndocrine,
  kMusculoskeletal,
  kGastrointestinal,
  kDermatological,
  kUrinaryRenal,
  kGynecologicalObstetric,
};

enum class ChiefComplaint {
  kFeverAndInfections,
  kRespiratoryIssues,
  kGastrointestinalSymptoms,
  kPain,
  kGeneralSymptoms,
  kCardiovascularSymptoms,
  kNeurologicSymptoms,
  kMentalHealthConcerns,
  kDermatologicalIssues,
  kUrinaryRenalIssues,
  kGynecologicalObstetricComplaints,
};

enum class Procedure {
  kMedication,
  kLaboratoryTesting,
  kVitalSignMeasurement,
  kPhysicalTherapy,
  kSurgery,
  kDiagnosticImaging,
  kCardiacCatheterization,
  kChemotherapy,
  kRadiationTherapy,
  kEndoscopy,
  kWoundCare,
  kDialysis,
};

template <typename E>
struct WeightedValue {
  E value;
  std::string_view label;
  double ratio;
};

/// Marginal ratios of the synthetic population. Each table sums to 1.
inline constexpr std::array<WeightedValue<AgeBand>, 4> kAgeRatios = {{
    {AgeBand::kYoungAdult, "Young Adult (19-35 years)", 0.250},
    {AgeBand::kMiddleAged, "Middle-aged Adult (36-55 years)", 0.350},
    {AgeBand::kOlderAdult, "Older Adult (56-75 years)", 0.250},
    {AgeBand::kElderly, "Elderly (76+ years)", 0.150},
}};

inline constexpr std::array<WeightedValue<Gender>, 2> kGenderRatios = {{
    {Gender::kMale, "Male", 0.471},
    {Gender::kFemale, "Female", 0.529},
}};

inline constexpr std::array<WeightedValue<Ethnicity>, 7> kEthnicityRatios = {{
    {Ethnicity::kWhite, "White", 0.672},
    {Ethnicity::kBlack, "Black or African American", 0.100},
    {Ethnicity::kHispanic, "Hispanic or Latino", 0.100},
    {Ethnicity::kAsian, "Asian", 0.080},
    {Ethnicity::kNativeAmerican, "Native American or Alaska Native", 0.020},
    {Ethnicity::kPacificIslander, "Native Hawaiian or Pacific Islander", 0.015},
    {Ethnicity::kMixed, "Mixed or Multicultural", 0.013},
}};

/// One row of the clinical compatibility table: a disease category with the
/// chief complaints and procedures that may accompany it.
struct ClinicalRow {
  DiseaseCategory disease;
  std::vector<ChiefComplaint> complaints;
  std::vector<Procedure> procedures;
};

std::span<const ClinicalRow> clinical_rows();
const ClinicalRow& clinical_row(DiseaseCategory disease);

std::string_view label(AgeBand v);
std::string_view label(Gender v);
std::string_view label(Ethnicity v);
std::string_view label(DiseaseCategory v);
std::string_view label(ChiefComplaint v);
std::string_view label(Procedure v);

/// Inverse of label(); throws std::invalid_argument on an unknown label.
template <typename E>
E from_label(std::string_view s);

extern template AgeBand from_label<AgeBand>(std::string_view);
extern template Gender from_label<Gender>(std::string_view);
extern template Ethnicity from_label<Ethnicity>(std::string_view);
extern template DiseaseCategory from_label<DiseaseCategory>(std::string_view);
extern template ChiefComplaint from_label<ChiefComplaint>(std::string_view);
extern template Procedure from_label<Procedure>(std::string_view);

}  // namespace arena::forge
