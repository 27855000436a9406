#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "anticipate/controller.hpp"
#include "anticipate/corpus_store.hpp"
#include "anticipate/core.hpp"

namespace anticipate::testing {

/// Fixed DA -> emotion map of the deterministic rule-driven user.
inline EmotionLabel rule_emotion(DialogueAct da) {
  const int d = index_of(da);
  return EmotionLabel((d % 7) - 3, ((d * 3) % 7) - 3);
}

/// A user that answers every system turn with rule_emotion(system da).
inline Turn rule_user_reaction(const Turn& sys) {
  Turn u;
  u.session_id = sys.session_id;
  u.turn_index = sys.turn_index + 1;
  u.speaker = Speaker::user;
  u.phase = sys.phase;
  u.emotion = rule_emotion(sys.da);
  u.da = DialogueAct::statement;
  u.laughter_type = LaughterType::none;
  return u;
}

struct RuleRunSetup {
  AnticipationConfig config;
  AnticipationModels models;
  std::vector<Turn> plan;
  Oracles oracles;
};

/// Closed-loop convergence scenario: 500 spontaneous turns (stationary DA
/// mix), p_thr1 0.6, learning rate 0.3, error-free recognition.
inline RuleRunSetup rule_run_setup(std::uint64_t seed, std::size_t turns = 500) {
  RuleRunSetup s;
  s.config.p_thr1 = 0.6;
  s.models.emotion.learning_rate = 0.3;
  SessionPlanParams params;
  params.ice_breaking_fraction = 0.0;
  params.ending_fraction = 0.0;
  Rng rng(derive_seed(seed, 0));
  s.plan = make_session_plan(params, turns, "rule", rng);
  s.oracles.emotion = make_exact_recognizer();
  return s;
}

// Values of the form k/1000 survive the 9-digit text rendering exactly.
inline double milli(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng) / 1000.0;
}

inline int level(std::mt19937_64& rng) { return std::uniform_int_distribution<int>(kEmotionMin, kEmotionMax)(rng); }

template <typename T, std::size_t N>
T pick(std::mt19937_64& rng, const std::array<T, N>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

inline bool coin(std::mt19937_64& rng) { return std::bernoulli_distribution(0.5)(rng); }

inline std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {"Tokushima", " ", "\"quoted\"", "\\", "\n", "\t",
                                                  "\xe3\x81\x82", "Haha.", "{}", ",", "\x01", "é"};
  std::string s;
  const int n = std::uniform_int_distribution<int>(0, 6)(rng);
  for (int i = 0; i < n; ++i) s += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
  return s;
}

inline std::array<double, kEmotionLevels> random_dist(std::mt19937_64& rng) {
  std::array<int, kEmotionLevels> parts{};
  int left = 1000;
  for (int i = 0; i < kEmotionLevels - 1; ++i) {
    parts[i] = std::uniform_int_distribution<int>(0, left)(rng);
    left -= parts[i];
  }
  parts[kEmotionLevels - 1] = left;
  std::array<double, kEmotionLevels> d{};
  for (int i = 0; i < kEmotionLevels; ++i) d[i] = parts[i] / 1000.0;
  return d;
}

/// A valid turn with every optional field randomly present or absent.
inline Turn random_turn(std::mt19937_64& rng, const std::string& session, std::uint64_t index) {
  Turn t;
  t.session_id = session;
  t.turn_index = index;
  t.speaker = coin(rng) ? Speaker::system : Speaker::user;
  t.phase = pick(rng, kAllPhases);
  t.emotion = EmotionLabel(level(rng), level(rng));
  t.da = pick(rng, kAllDialogueActs);
  if (coin(rng)) t.laughter_type = pick(rng, kAllLaughterTypes);
  if (t.laughs() && coin(rng)) {
    t.laughter_acoustics = LaughterAcoustics{milli(rng, 0, 1000), milli(rng, 0, 1000), milli(rng, 1, 3000),
                                             milli(rng, 0, 15000), milli(rng, 0, 15000)};
  }
  if (coin(rng)) t.transcript = random_text(rng);
  if (t.speaker == Speaker::system && coin(rng)) {
    PredictionLog p;
    p.valence_dist = random_dist(rng);
    p.arousal_dist = random_dist(rng);
    p.confidence = milli(rng, 1, 1000);
    p.accepted = coin(rng);
    t.prediction = p;
  }
  return t;
}

/// A valid run configuration with every field perturbed.
inline RunConfig random_config(std::mt19937_64& rng) {
  RunConfig c;
  c.anticipation.p_thr1 = milli(rng, 0, 1000);
  c.anticipation.p_thr2 = milli(rng, 0, 1000);
  c.anticipation.latency_recognition = milli(rng, 0, 5000);
  c.anticipation.latency_anticipation = milli(rng, 0, 5000);
  c.anticipation.learn_on_accept = coin(rng);
  for (auto& m : c.user.mimicry_valence) m = milli(rng, 0, 1000);
  c.user.mimicry_arousal = milli(rng, 0, 1000);
  c.user.noise_valence = std::uniform_int_distribution<int>(0, 3)(rng);
  c.user.noise_arousal = std::uniform_int_distribution<int>(0, 3)(rng);
  for (auto& r : c.user.da_rules) {
    r.delta_valence = std::uniform_int_distribution<int>(-3, 3)(rng);
    r.delta_arousal = std::uniform_int_distribution<int>(-3, 3)(rng);
    if (coin(rng)) r.override = EmotionLabel(level(rng), level(rng));
  }
  for (int row = 0; row < 3; ++row) {
    const int a = std::uniform_int_distribution<int>(0, 1000)(rng);
    const int b = std::uniform_int_distribution<int>(0, 1000 - a)(rng);
    c.user.laugh_contagion(row, 0) = a / 1000.0;
    c.user.laugh_contagion(row, 1) = b / 1000.0;
    c.user.laugh_contagion(row, 2) = (1000 - a - b) / 1000.0;
  }
  c.user.embarrassment_rate = milli(rng, 0, 1000);
  c.user.valence_cap = level(rng);
  c.recognizer.error_rate = milli(rng, 0, 1000);
  c.recognizer.max_perturbation = std::uniform_int_distribution<int>(1, 6)(rng);
  c.laugh_detector.flat_pitch_min = milli(rng, 0, 1000);
  c.laugh_detector.long_duration_min_s = milli(rng, 1, 5000);
  c.laugh_detector.jitter_shimmer_min_pct = milli(rng, 0, 20000);
  c.laugh_detector.low_power_max = milli(rng, 0, 1000);
  c.learning_rate = milli(rng, 1, 2000);
  c.prior_alpha = milli(rng, 1, 5000);
  c.plan.ice_breaking_fraction = milli(rng, 0, 500);
  c.plan.ending_fraction = milli(rng, 0, 500);
  c.plan.emotion_persistence = milli(rng, 0, 1000);
  c.plan.laughter_rate = milli(rng, 0, 1000);
  c.plan.mirthful_share = milli(rng, 0, 1000);
  c.metrics_window = std::uniform_int_distribution<std::size_t>(1, 1000)(rng);
  if (coin(rng)) c.seed = rng();
  return c;
}

}  // namespace anticipate::testing
