#include "anticipate/perception.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace anticipate {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

bool LaughDetectorRules::is_valid() const {
  const bool finite = std::isfinite(flat_pitch_min) && std::isfinite(long_duration_min_s) &&
                      std::isfinite(jitter_shimmer_min_pct) && std::isfinite(low_power_max);
  return finite && flat_pitch_min >= 0.0 && flat_pitch_min <= 1.0 && low_power_max >= 0.0 && low_power_max <= 1.0;
}

EmotionLabel recognize_emotion(const NoisyRecognizerConfig& config, const EmotionLabel& true_emotion, Rng& rng) {
  std::bernoulli_distribution corrupt(config.error_rate);
  if (!corrupt(rng)) return true_emotion;
  std::uniform_int_distribution<int> shift(-config.max_perturbation, config.max_perturbation);
  const int v = std::clamp(true_emotion.valence() + shift(rng), kEmotionMin, kEmotionMax);
  const int a = std::clamp(true_emotion.arousal() + shift(rng), kEmotionMin, kEmotionMax);
  return EmotionLabel(v, a);
}

UserLaughKind detect_laughter(const LaughDetectorRules& rules, const LaughterAcoustics& a) {
  if (a.power_norm <= rules.low_power_max) return UserLaughKind::embarrassment;
  const bool rough = a.jitter_pct >= rules.jitter_shimmer_min_pct || a.shimmer_pct >= rules.jitter_shimmer_min_pct;
  if (a.duration_s >= rules.long_duration_min_s && rough) return UserLaughKind::mirthful;
  // Flat-pitch laughs and the residual region are both social.
  return UserLaughKind::social;
}

LaughterType reciprocation_label(UserLaughKind kind) {
  switch (kind) {
    case UserLaughKind::social:
      return LaughterType::social;
    case UserLaughKind::mirthful:
      return LaughterType::mirthful;
    case UserLaughKind::embarrassment:
      return LaughterType::none;
  }
  return LaughterType::none;
}

EmotionRecognizer make_noisy_recognizer(NoisyRecognizerConfig config) {
  return [config](const Turn& user_turn, Rng& rng) { return recognize_emotion(config, user_turn.emotion, rng); };
}

EmotionRecognizer make_exact_recognizer() {
  return [](const Turn& user_turn, Rng&) { return user_turn.emotion; };
}

LaughterRecognizer make_rule_laughter_recognizer(LaughDetectorRules rules) {
  return [rules](const Turn& user_turn, Rng&) {
    if (!user_turn.laughs()) return LaughterType::none;
    if (!user_turn.laughter_acoustics) return *user_turn.laughter_type;
    return reciprocation_label(detect_laughter(rules, *user_turn.laughter_acoustics));
  };
}

}  // namespace anticipate
