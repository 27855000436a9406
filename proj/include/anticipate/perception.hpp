#pragma once

// Stand-ins for the recognition side of the loop: a noisy emotion
// recognizer and a rule-based laughter character detector. Both are
// reached through std::function so trained models can be dropped in.

#include <cstdint>
#include <functional>
#include <random>

#include "anticipate/core.hpp"

namespace anticipate {

using Rng = std::mt19937_64;

/// Independent 64-bit seed for sub-stream `stream` of a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct NoisyRecognizerConfig {
  double error_rate = 0.1;
  int max_perturbation = 1;

  bool is_valid() const { return error_rate >= 0.0 && error_rate <= 1.0 && max_perturbation >= 1; }
  friend bool operator==(const NoisyRecognizerConfig&, const NoisyRecognizerConfig&) = default;
};

/// Decision-list thresholds for detect_laughter.
struct LaughDetectorRules {
  double flat_pitch_min = 0.7;
  double long_duration_min_s = 1.0;
  double jitter_shimmer_min_pct = 5.0;
  double low_power_max = 0.3;

  bool is_valid() const;
  friend bool operator==(const LaughDetectorRules&, const LaughDetectorRules&) = default;
};

/// With probability 1 - error_rate the true label; otherwise each dimension
/// is shifted by a uniform integer in [-max_perturbation, +max_perturbation]
/// and clamped to the scale.
EmotionLabel recognize_emotion(const NoisyRecognizerConfig& config, const EmotionLabel& true_emotion, Rng& rng);

/// Order: low power -> embarrassment; long and (jittery or shimmery) ->
/// mirthful; everything else -> social.
UserLaughKind detect_laughter(const LaughDetectorRules& rules, const LaughterAcoustics& acoustics);

/// How the system should answer a laugh of this kind.
LaughterType reciprocation_label(UserLaughKind kind);

using EmotionRecognizer = std::function<EmotionLabel(const Turn& user_turn, Rng& rng)>;
using LaughterRecognizer = std::function<LaughterType(const Turn& user_turn, Rng& rng)>;

EmotionRecognizer make_noisy_recognizer(NoisyRecognizerConfig config);
EmotionRecognizer make_exact_recognizer();

/// LA_rec for a user turn: none when the user did not laugh, otherwise
/// reciprocation_label(detect_laughter(acoustics)). A laugh without
/// acoustics is taken at its annotated type.
LaughterRecognizer make_rule_laughter_recognizer(LaughDetectorRules rules);

}  // namespace anticipate
