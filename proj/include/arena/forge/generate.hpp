#pragma once

#include <string>
#include <vector>

#include "arena/forge/conversation.hpp"
#include "arena/forge/exam.hpp"
#include "arena/forge/note.hpp"
#include "arena/forge/profile.hpp"
#include "arena/gateway/backend.hpp"

namespace arena::forge {

struct GenerationOptions {
  /// Regenerations allowed after an invalid reply.
  int retry_budget = 3;
};

/// Reasons for every rejected reply, in order.
struct RejectionLog {
  std::vector<std::string> reasons;
};

std::string note_prompt(const DemographicProfile& profile,
                        const std::string& note_id);
std::string exam_prompt(const DischargeNote& note);
std::string conversation_prompt(const DischargeNote& note,
                                const ComprehensionExam& exam);

/// Numbered question list with the answer of each item, as shown to the
/// conversation generator.
std::string format_questionnaire(const ComprehensionExam& exam);

/// The returned note carries `note_id` regardless of what the model wrote.
/// Throws GenerationRejected once the retry budget is spent; endpoint
/// errors propagate unchanged.
DischargeNote generate_note(const DemographicProfile& profile,
                            const std::string& note_id,
                            gateway::ChatBackend& backend,
                            const gateway::EndpointConfig& config,
                            const GenerationOptions& options = {},
                            RejectionLog* log = nullptr);

/// Options are shuffled before return. Throws SchemaError when the last
/// reply was not readable as records, GenerationRejected otherwise.
ComprehensionExam generate_exam(const DischargeNote& note,
                                gateway::ChatBackend& backend,
                                const gateway::EndpointConfig& config,
                                const GenerationOptions& options = {},
                                RejectionLog* log = nullptr);

ReferenceConversation generate_reference_conversation(
    const DischargeNote& note, const ComprehensionExam& exam,
    gateway::ChatBackend& backend, const gateway::EndpointConfig& config,
    const GenerationOptions& options = {}, RejectionLog* log = nullptr);

}  // namespace arena::forge
