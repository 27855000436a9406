#pragma once

// Per-turn anticipation loop. For every system turn the controller predicts
// the user's reaction, accepts the prediction when its confidence clears
// the gate, and otherwise recognizes the actual reaction and updates the
// predictor with it. The same loop runs for laughter on turns where the
// system laughs.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "anticipate/core.hpp"
#include "anticipate/emotion_predictor.hpp"
#include "anticipate/laughter_predictor.hpp"
#include "anticipate/perception.hpp"
#include "anticipate/simulated_user.hpp"

namespace anticipate {

struct AnticipationConfig {
  double p_thr1 = 0.5;  // emotion gate
  double p_thr2 = 0.6;  // laughter gate
  double latency_recognition = 1.0;
  double latency_anticipation = 0.0;
  // Also learn from the user's observed reaction on accepted turns.
  bool learn_on_accept = false;

  std::vector<std::string> violations() const;
  friend bool operator==(const AnticipationConfig&, const AnticipationConfig&) = default;
};

struct LaughterTurnRecord {
  LaughterPrediction prediction;
  bool accepted = false;
  std::optional<LaughterType> la_rec;  // present iff the detection path ran
  LaughterType la_actual = LaughterType::none;  // evaluation reference, never fed to the model
  bool model_updated = false;
};

struct TurnRecord {
  Turn system_turn;
  Turn user_turn;
  EmotionPrediction emotion_prediction;
  bool emotion_accepted = false;
  std::optional<EmotionLabel> em_rec;  // present iff the recognition path ran
  bool emotion_updated = false;
  std::optional<LaughterTurnRecord> laughter;  // present iff the system laughed
  double latency_charged = 0.0;
};

struct SessionMetrics {
  std::size_t turns = 0;
  double emotion_acceptance_rate = 0.0;
  std::optional<double> accepted_emotion_accuracy;
  std::optional<double> overall_emotion_accuracy;
  std::size_t emotion_updates = 0;
  std::size_t laughter_turns = 0;
  std::optional<double> laughter_acceptance_rate;
  std::optional<double> accepted_laughter_accuracy;
  std::size_t laughter_updates = 0;
  double total_latency = 0.0;
  std::size_t window = 1;
  // Per consecutive window of `window` turns.
  std::vector<std::optional<double>> learning_curve;  // accepted-prediction accuracy
  std::vector<double> acceptance_curve;
  std::vector<std::size_t> updates_curve;
};

using UserReactionProvider = std::function<Turn(const Turn& system_turn)>;

struct AnticipationModels {
  EmotionPredictorModel emotion;
  LaughterContagionTable laughter;
};

struct Oracles {
  EmotionRecognizer emotion = make_noisy_recognizer({});
  LaughterRecognizer laughter = make_rule_laughter_recognizer({});
};

struct EmotionTurnResult {
  EmotionPredictorModel model;
  TurnRecord record;
};

/// One pass of the emotion loop. Throws std::invalid_argument unless
/// system_turn.speaker is system. The laughter fields of the record are
/// left empty.
EmotionTurnResult run_emotion_turn(const EmotionPredictorModel& model, const AnticipationConfig& config,
                                   const Turn& system_turn, const UserReactionProvider& user_reaction,
                                   const EmotionRecognizer& recognizer, Rng& rng);

struct LaughterTurnResult {
  LaughterContagionTable table;
  LaughterTurnRecord record;
};

/// One pass of the laughter loop. Throws std::invalid_argument when the
/// system turn does not laugh.
LaughterTurnResult run_laughter_turn(const LaughterContagionTable& table, const AnticipationConfig& config,
                                     const Turn& system_turn, const UserReactionProvider& user_reaction,
                                     const LaughterRecognizer& detector, Rng& rng);

struct SessionResult {
  AnticipationModels models;
  std::vector<TurnRecord> records;
  SessionMetrics metrics;
};

/// Runs the plan turn by turn against `user_model`. The user and the
/// recognizers draw from separate streams derived from `seed`, so the
/// user's reactions do not depend on which gate branch was taken.
SessionResult run_session(AnticipationModels models, const AnticipationConfig& config, const std::vector<Turn>& plan,
                          const UserBehaviorModel& user_model, const Oracles& oracles, std::uint64_t seed,
                          std::size_t metrics_window = 100);

/// Same loop with an arbitrary reaction source (scripted users, replays).
SessionResult run_session_with(AnticipationModels models, const AnticipationConfig& config,
                               const std::vector<Turn>& plan, const UserReactionProvider& user_reaction,
                               const Oracles& oracles, std::uint64_t seed, std::size_t metrics_window = 100);

}  // namespace anticipate
