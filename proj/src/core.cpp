#include "anticipate/core.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace anticipate {

EmotionLabel::EmotionLabel(int valence, int arousal) : valence_(valence), arousal_(arousal) {
  if (!in_range(valence)) throw std::out_of_range("valence out of range [-3,3]");
  if (!in_range(arousal)) throw std::out_of_range("arousal out of range [-3,3]");
}

EmotionLabel EmotionLabel::from_indices(int valence_index, int arousal_index) {
  return EmotionLabel(valence_index + kEmotionMin, arousal_index + kEmotionMin);
}

namespace {

constexpr std::array<std::string_view, kDialogueActCount> kDaNames = {
    "statement",    "wh-question",          "yes-no-question",      "signal-non-understanding",
    "reject",       "apology",              "appreciation",         "backchannel",
    "conventional-opening", "conventional-closing", "praise",       "other",
};
constexpr std::array<std::string_view, 3> kLaughterNames = {"none", "social", "mirthful"};
constexpr std::array<std::string_view, 3> kLaughKindNames = {"social", "mirthful", "embarrassment"};
constexpr std::array<std::string_view, 3> kPhaseNames = {"ice_breaking", "spontaneous", "ending"};
constexpr std::array<std::string_view, 2> kSpeakerNames = {"system", "user"};

template <typename Enum, std::size_t N>
std::optional<Enum> find_name(const std::array<std::string_view, N>& names, std::string_view name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(DialogueAct da) { return kDaNames[static_cast<std::size_t>(da)]; }
std::string_view to_string(LaughterType type) { return kLaughterNames[static_cast<std::size_t>(type)]; }
std::string_view to_string(UserLaughKind kind) { return kLaughKindNames[static_cast<std::size_t>(kind)]; }
std::string_view to_string(DialoguePhase phase) { return kPhaseNames[static_cast<std::size_t>(phase)]; }
std::string_view to_string(Speaker speaker) { return kSpeakerNames[static_cast<std::size_t>(speaker)]; }

std::optional<DialogueAct> parse_dialogue_act(std::string_view name) {
  return find_name<DialogueAct>(kDaNames, name);
}
std::optional<LaughterType> parse_laughter_type(std::string_view name) {
  return find_name<LaughterType>(kLaughterNames, name);
}
std::optional<UserLaughKind> parse_user_laugh_kind(std::string_view name) {
  return find_name<UserLaughKind>(kLaughKindNames, name);
}
std::optional<DialoguePhase> parse_phase(std::string_view name) {
  return find_name<DialoguePhase>(kPhaseNames, name);
}
std::optional<Speaker> parse_speaker(std::string_view name) {
  return find_name<Speaker>(kSpeakerNames, name);
}

DialogueAct parse_dialogue_act_lenient(std::string_view name) {
  return parse_dialogue_act(name).value_or(DialogueAct::other);
}

ValidationResult validate_emotion_values(int valence, int arousal) {
  ValidationResult result;
  if (!EmotionLabel::in_range(valence)) result.violations.emplace_back("valence out of range");
  if (!EmotionLabel::in_range(arousal)) result.violations.emplace_back("arousal out of range");
  return result;
}

ValidationResult validate_acoustics(const LaughterAcoustics& a) {
  ValidationResult result;
  auto& v = result.violations;
  for (double x : {a.f0_flatness, a.power_norm, a.duration_s, a.jitter_pct, a.shimmer_pct}) {
    if (!std::isfinite(x)) {
      v.emplace_back("acoustics not finite");
      return result;
    }
  }
  if (a.f0_flatness < 0.0 || a.f0_flatness > 1.0) v.emplace_back("f0_flatness out of range");
  if (a.power_norm < 0.0 || a.power_norm > 1.0) v.emplace_back("power_norm out of range");
  if (a.duration_s <= 0.0) v.emplace_back("duration_s must be positive");
  if (a.jitter_pct < 0.0) v.emplace_back("jitter_pct negative");
  if (a.shimmer_pct < 0.0) v.emplace_back("shimmer_pct negative");
  return result;
}

ValidationResult validate_turn(const Turn& turn) {
  ValidationResult result = validate_emotion_values(turn.emotion.valence(), turn.emotion.arousal());
  auto& v = result.violations;
  if (turn.laughter_acoustics) {
    if (!turn.laughs()) v.emplace_back("acoustics without laugh");
    for (auto& msg : validate_acoustics(*turn.laughter_acoustics).violations) v.push_back(std::move(msg));
  }
  if (turn.prediction) {
    const auto& p = *turn.prediction;
    if (!(p.confidence > 0.0 && p.confidence <= 1.0)) v.emplace_back("prediction confidence out of range");
    for (const auto* dist : {&p.valence_dist, &p.arousal_dist}) {
      double sum = 0.0;
      for (double x : *dist) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
          v.emplace_back("prediction distribution invalid");
          break;
        }
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-6) v.emplace_back("prediction distribution not normalized");
    }
  }
  return result;
}

ValidationResult validate_turn_order(const std::vector<Turn>& turns) {
  ValidationResult result;
  std::map<std::string, std::uint64_t> last_index;
  for (const auto& t : turns) {
    auto it = last_index.find(t.session_id);
    if (it != last_index.end() && t.turn_index <= it->second) {
      result.violations.push_back("turn_index not increasing in session " + t.session_id);
    }
    last_index[t.session_id] = t.turn_index;
  }
  return result;
}

}  // namespace anticipate
