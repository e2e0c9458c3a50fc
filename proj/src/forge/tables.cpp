#include "arena/forge/tables.hpp"

#include <stdexcept>
#include <string>

namespace arena::forge {

namespace {

using C = ChiefComplaint;
using P = Procedure;
using D = DiseaseCategory;

const std::vector<ClinicalRow>& rows() {
  static const std::vector<ClinicalRow> table = {
      {D::kInfectious,
       {C::kFeverAndInfections, C::kRespiratoryIssues,
        C::kGastrointestinalSymptoms},
       {P::kMedication, P::kLaboratoryTesting, P::kVitalSignMeasurement}},
      {D::kChronic,
       {C::kPain, C::kGeneralSymptoms},
       {P::kMedication, P::kPhysicalTherapy, P::kSurgery,
        P::kDiagnosticImaging, P::kLaboratoryTesting,
        P::kVitalSignMeasurement}},
      {D::kCardiovascular,
       {C::kCardiovascularSymptoms, C::kPain},
       {P::kCardiacCatheterization, P::kPhysicalTherapy,
        P::kDiagnosticImaging, P::kLaboratoryTesting,
        P::kVitalSignMeasurement, P::kMedication}},
      {D::kNeurological,
       {C::kNeurologicSymptoms, C::kPain},
       {P::kPhysicalTherapy, P::kDiagnosticImaging, P::kLaboratoryTesting,
        P::kVitalSignMeasurement, P::kMedication}},
      {D::kMentalHealth,
       {C::kMentalHealthConcerns},
       {P::kMedication, P::kLaboratoryTesting, P::kVitalSignMeasurement}},
      {D::kOncological,
       {C::kPain, C::kGeneralSymptoms},
       {P::kSurgery, P::kChemotherapy, P::kRadiationTherapy, P::kMedication,
        P::kLaboratoryTesting, P::kVitalSignMeasurement}},
      {D::kAutoimmune,
       {C::kPain, C::kGeneralSymptoms},
       {P::kMedication, P::kLaboratoryTesting, P::kVitalSignMeasurement}},
      {D::kGenetic,
       {C::kGeneralSymptoms},
       {P::kMedication, P::kLaboratoryTesting, P::kVitalSignMeasurement}},
      {D::kEndocrine,
       {C::kGeneralSymptoms},
       {P::kMedication, P::kLaboratoryTesting, P::kVitalSignMeasurement}},
      {D::kMusculoskeletal,
       {C::kPain, C::kGeneralSymptoms},
       {P::kPhysicalTherapy, P::kSurgery, P::kMedication,
        P::kLaboratoryTesting, P::kVitalSignMeasurement}},
      {D::kGastrointestinal,
       {C::kGastrointestinalSymptoms},
       {P::kEndoscopy, P::kMedication, P::kLaboratoryTesting,
        P::kVitalSignMeasurement}},
      {D::kDermatological,
       {C::kDermatologicalIssues},
       {P::kWoundCare, P::kMedication, P::kLaboratoryTesting,
        P::kVitalSignMeasurement}},
      {D::kUrinaryRenal,
       {C::kUrinaryRenalIssues},
       {P::kDialysis, P::kMedication, P::kLaboratoryTesting,
        P::kVitalSignMeasurement}},
      {D::kGynecologicalObstetric,
       {C::kGynecologicalObstetricComplaints},
       {P::kSurgery, P::kDiagnosticImaging, P::kMedication,
        P::kLaboratoryTesting, P::kVitalSignMeasurement}},
  };
  return table;
}

template <typename E, std::size_t N>
std::string_view lookup(const std::array<std::string_view, N>& labels, E v) {
  return labels.at(static_cast<std::size_t>(v));
}

constexpr std::array<std::string_view, 14> kDiseaseLabels = {
    "Infectious Diseases",
    "Chronic Diseases",
    "Cardiovascular Diseases",
    "Neurological Disorders",
    "Mental Health Disorders",
    "Oncological Diseases",
    "Autoimmune Diseases",
    "Genetic Disorders",
    "Endocrine Disorders",
    "Musculoskeletal Disorders",
    "Gastrointestinal Disorders",
    "Dermatological Disorders",
    "Urinary and Renal Disorders",
    "Gynecological & Obstetric issues",
};

constexpr std::array<std::string_view, 11> kComplaintLabels = {
    "Fever and Infections",
    "Respiratory Issues",
    "Gastrointestinal Symptoms",
    "Pain",
    "General symptoms",
    "Cardiovascular symptoms",
    "Neurologic Symptoms",
    "Mental health concerns",
    "Dermatological issues",
    "Urinary and Renal issues",
    "Gynecological & Obstetric complaints",
};

constexpr std::array<std::string_view, 12> kProcedureLabels = {
    "Medication",
    "Laboratory testing",
    "Vital Sign measurement",
    "Physical therapy",
    "Surgery",
    "Diagnostic Imaging",
    "Cardiac Catheterization",
    "Chemotherapy",
    "Radiation therapy",
    "Endoscopy",
    "Wound care",
    "Dialysis",
};

template <typename E>
std::size_t value_count();
template <>
std::size_t value_count<AgeBand>() { return kAgeRatios.size(); }
template <>
std::size_t value_count<Gender>() { return kGenderRatios.size(); }
template <>
std::size_t value_count<Ethnicity>() { return kEthnicityRatios.size(); }
template <>
std::size_t value_count<DiseaseCategory>() { return kDiseaseLabels.size(); }
template <>
std::size_t value_count<ChiefComplaint>() { return kComplaintLabels.size(); }
template <>
std::size_t value_count<Procedure>() { return kProcedureLabels.size(); }

}  // namespace

std::span<const ClinicalRow> clinical_rows() { return rows(); }

const ClinicalRow& clinical_row(DiseaseCategory disease) {
  return rows().at(static_cast<std::size_t>(disease));
}

std::string_view label(AgeBand v) {
  return kAgeRatios.at(static_cast<std::size_t>(v)).label;
}
std::string_view label(Gender v) {
  return kGenderRatios.at(static_cast<std::size_t>(v)).label;
}
std::string_view label(Ethnicity v) {
  return kEthnicityRatios.at(static_cast<std::size_t>(v)).label;
}
std::string_view label(DiseaseCategory v) { return lookup(kDiseaseLabels, v); }
std::string_view label(ChiefComplaint v) { return lookup(kComplaintLabels, v); }
std::string_view label(Procedure v) { return lookup(kProcedureLabels, v); }

template <typename E>
E from_label(std::string_view s) {
  for (std::size_t i = 0; i < value_count<E>(); ++i) {
    const auto v = static_cast<E>(i);
    if (label(v) == s) return v;
  }
  throw std::invalid_argument("unknown category label: " + std::string(s));
}

template AgeBand from_label<AgeBand>(std::string_view);
template Gender from_label<Gender>(std::string_view);
template Ethnicity from_label<Ethnicity>(std::string_view);
template DiseaseCategory from_label<DiseaseCategory>(std::string_view);
template ChiefComplaint from_label<ChiefComplaint>(std::string_view);
template Procedure from_label<Procedure>(std::string_view);

}  // namespace arena::forge
