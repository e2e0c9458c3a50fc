#pragma once

#include <optional>
#include <string>

#include "arena/common/json.hpp"
#include "arena/dialogue/arena.hpp"
#include "arena/forge/conversation.hpp"
#include "arena/forge/exam.hpp"
#include "arena/forge/note.hpp"
#include "arena/forge/profile.hpp"
#include "arena/judge/report.hpp"
#include "arena/metrics/metrics.hpp"

namespace arena::dataset {

/// Record codecs. encode() output is the on-disk field layout; the decode
/// functions throw SchemaMismatch on missing or mistyped fields.

Json encode(const forge::DemographicProfile& p);
Json encode(const forge::DischargeNote& n);
Json encode(const forge::ComprehensionExam& e);
Json encode(const forge::ReferenceConversation& c);
Json encode(const dialogue::ConversationTranscript& t);
Json encode(const dialogue::ExamResult& r);
Json encode(const dialogue::Episode& e);
Json encode(const dialogue::EpisodeError& e);
Json encode(const dialogue::EpisodeOutcome& o);
Json encode(const judge::SentenceLabeling& l);
Json encode(const judge::JudgeReport& r);
Json encode(const metrics::PlotPoint& p);

forge::DemographicProfile decode_profile(const Json& j);
forge::DischargeNote decode_note(const Json& j);
forge::ComprehensionExam decode_exam(const Json& j);
forge::ReferenceConversation decode_conversation(const Json& j);
dialogue::ConversationTranscript decode_transcript(const Json& j);
dialogue::ExamResult decode_exam_result(const Json& j);
/// Accepts both "ok" and "error" episode records.
dialogue::EpisodeOutcome decode_episode(const Json& j);
judge::SentenceLabeling decode_labeling(const Json& j);
judge::JudgeReport decode_report(const Json& j);
metrics::PlotPoint decode_plot_point(const Json& j);

}  // namespace arena::dataset
