#pragma once

// Domain vocabulary: emotions, dialogue acts, laughter, phases and turns,
// plus the fixed one-hot feature layout consumed by the emotion predictor.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace anticipate {

constexpr int kEmotionMin = -3;
constexpr int kEmotionMax = 3;
constexpr int kEmotionLevels = 7;
constexpr int kDialogueActCount = 12;
constexpr int kLaughterTypeCount = 3;
constexpr int kFeatureDim = 1 + kEmotionLevels + kEmotionLevels + kDialogueActCount;  // 27

/// Valence/arousal pair on the 7-point annotation scale [-3, +3].
/// Construction outside that range throws std::out_of_range.
class EmotionLabel {
 public:
  EmotionLabel() = default;
  EmotionLabel(int valence, int arousal);

  int valence() const { return valence_; }
  int arousal() const { return arousal_; }

  // Class indices in [0, 7): value + 3.
  int valence_index() const { return valence_ - kEmotionMin; }
  int arousal_index() const { return arousal_ - kEmotionMin; }

  static EmotionLabel from_indices(int valence_index, int arousal_index);
  static bool in_range(int value) { return value >= kEmotionMin && value <= kEmotionMax; }

  friend bool operator==(const EmotionLabel&, const EmotionLabel&) = default;

 private:
  int valence_ = 0;
  int arousal_ = 0;
};

// Order is significant: it fixes the one-hot index of each act.
enum class DialogueAct : std::uint8_t {
  statement,
  wh_question,
  yes_no_question,
  signal_non_understanding,
  reject,
  apology,
  appreciation,
  backchannel,
  conventional_opening,
  conventional_closing,
  praise,
  other,
};

enum class LaughterType : std::uint8_t { none, social, mirthful };

// Character of an observed user laugh, as opposed to a reciprocation decision.
enum class UserLaughKind : std::uint8_t { social, mirthful, embarrassment };

enum class DialoguePhase : std::uint8_t { ice_breaking, spontaneous, ending };

enum class Speaker : std::uint8_t { system, user };

inline constexpr std::array<DialogueAct, kDialogueActCount> kAllDialogueActs = {
    DialogueAct::statement,           DialogueAct::wh_question,
    DialogueAct::yes_no_question,     DialogueAct::signal_non_understanding,
    DialogueAct::reject,              DialogueAct::apology,
    DialogueAct::appreciation,        DialogueAct::backchannel,
    DialogueAct::conventional_opening, DialogueAct::conventional_closing,
    DialogueAct::praise,              DialogueAct::other,
};

inline constexpr std::array<LaughterType, kLaughterTypeCount> kAllLaughterTypes = {
    LaughterType::none, LaughterType::social, LaughterType::mirthful};

inline constexpr std::array<DialoguePhase, 3> kAllPhases = {
    DialoguePhase::ice_breaking, DialoguePhase::spontaneous, DialoguePhase::ending};

std::string_view to_string(DialogueAct da);
std::string_view to_string(LaughterType type);
std::string_view to_string(UserLaughKind kind);
std::string_view to_string(DialoguePhase phase);
std::string_view to_string(Speaker speaker);

// Strict parsers return nullopt on an unknown name.
std::optional<DialogueAct> parse_dialogue_act(std::string_view name);
std::optional<LaughterType> parse_laughter_type(std::string_view name);
std::optional<UserLaughKind> parse_user_laugh_kind(std::string_view name);
std::optional<DialoguePhase> parse_phase(std::string_view name);
std::optional<Speaker> parse_speaker(std::string_view name);

// Unknown tags become DialogueAct::other.
DialogueAct parse_dialogue_act_lenient(std::string_view name);

inline int index_of(DialogueAct da) { return static_cast<int>(da); }
inline int index_of(LaughterType type) { return static_cast<int>(type); }
inline int index_of(DialoguePhase phase) { return static_cast<int>(phase); }

/// Scalar summary of one laugh. f0_flatness and power_norm live in [0,1],
/// duration is strictly positive, jitter and shimmer are non-negative percents.
struct LaughterAcoustics {
  double f0_flatness = 0.0;
  double power_norm = 0.0;
  double duration_s = 0.0;
  double jitter_pct = 0.0;
  double shimmer_pct = 0.0;

  friend bool operator==(const LaughterAcoustics&, const LaughterAcoustics&) = default;
};

/// Prediction snapshot attached to a logged system turn.
struct PredictionLog {
  std::array<double, kEmotionLevels> valence_dist{};
  std::array<double, kEmotionLevels> arousal_dist{};
  double confidence = 0.0;
  bool accepted = false;

  friend bool operator==(const PredictionLog&, const PredictionLog&) = default;
};

struct Turn {
  std::string session_id;
  std::uint64_t turn_index = 0;
  Speaker speaker = Speaker::system;
  DialoguePhase phase = DialoguePhase::spontaneous;
  EmotionLabel emotion;
  DialogueAct da = DialogueAct::statement;
  std::optional<LaughterType> laughter_type;
  std::optional<LaughterAcoustics> laughter_acoustics;
  std::optional<std::string> transcript;
  std::optional<PredictionLog> prediction;

  /// True when the turn carries a laugh (type present and not none).
  bool laughs() const { return laughter_type && *laughter_type != LaughterType::none; }

  friend bool operator==(const Turn&, const Turn&) = default;
};

/// Violations are plain strings; an empty list means the turn is well formed.
struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the per-turn invariants. Emotion range is checked on the raw
/// values so that labels decoded from untrusted input can be reported.
ValidationResult validate_turn(const Turn& turn);
ValidationResult validate_emotion_values(int valence, int arousal);
ValidationResult validate_acoustics(const LaughterAcoustics& acoustics);

/// Checks that turn_index strictly increases within each session.
ValidationResult validate_turn_order(const std::vector<Turn>& turns);

template <typename Scalar>
using FeatureVector = Eigen::Matrix<Scalar, kFeatureDim, 1>;

namespace feature_offset {
constexpr int bias = 0;
constexpr int valence = 1;
constexpr int arousal = 1 + kEmotionLevels;
constexpr int dialogue_act = 1 + 2 * kEmotionLevels;
}  // namespace feature_offset

/// [bias | valence one-hot | arousal one-hot | dialogue-act one-hot].
template <typename Scalar = double>
FeatureVector<Scalar> encode_features(const EmotionLabel& emotion, DialogueAct da) {
  FeatureVector<Scalar> x = FeatureVector<Scalar>::Zero();
  x(feature_offset::bias) = Scalar(1);
  x(feature_offset::valence + emotion.valence_index()) = Scalar(1);
  x(feature_offset::arousal + emotion.arousal_index()) = Scalar(1);
  x(feature_offset::dialogue_act + index_of(da)) = Scalar(1);
  return x;
}

}  // namespace anticipate
