#pragma once

// Simulated dialogue partner. Emotions are produced by probabilistic
// copying of the system's emotion (phase-dependent for valence), integer
// noise, dialogue-act rules and a valence ceiling; laughter follows a
// contagion table conditioned on the system's laughter.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "anticipate/core.hpp"
#include "anticipate/perception.hpp"

namespace anticipate {

/// Effect of one system dialogue act on the user's reaction. `override`
/// replaces the mimicked emotion before noise; deltas apply after noise.
struct DaRule {
  int delta_valence = 0;
  int delta_arousal = 0;
  std::optional<EmotionLabel> override;

  bool is_identity() const { return delta_valence == 0 && delta_arousal == 0 && !override; }
  friend bool operator==(const DaRule&, const DaRule&) = default;
};

using DaRuleTable = std::array<DaRule, kDialogueActCount>;

/// Rows: system laughter (none, social, mirthful); columns: user laughter.
using ContagionMatrix = Eigen::Matrix3d;

struct UserBehaviorModel {
  std::array<double, 3> mimicry_valence = {0.05, 0.60, 0.05};  // by DialoguePhase
  double mimicry_arousal = 0.9;
  int noise_valence = 1;
  int noise_arousal = 1;
  DaRuleTable da_rules = default_da_rules();
  ContagionMatrix laugh_contagion = default_contagion();
  double embarrassment_rate = 0.1;
  int valence_cap = 2;

  static DaRuleTable default_da_rules();
  static ContagionMatrix default_contagion();

  double mimicry_valence_for(DialoguePhase phase) const { return mimicry_valence[index_of(phase)]; }

  /// Empty when valid; otherwise one message per violated invariant.
  std::vector<std::string> violations() const;

  bool operator==(const UserBehaviorModel& o) const {
    return mimicry_valence == o.mimicry_valence && mimicry_arousal == o.mimicry_arousal &&
           noise_valence == o.noise_valence && noise_arousal == o.noise_arousal && da_rules == o.da_rules &&
           laugh_contagion == o.laugh_contagion && embarrassment_rate == o.embarrassment_rate &&
           valence_cap == o.valence_cap;
  }
};

/// Samples acoustics from the prototype region of a laugh character.
LaughterAcoustics sample_laugh_acoustics(UserLaughKind kind, Rng& rng);

/// The user's reply to `system_turn`. The result has speaker = user, the
/// same session and phase, and turn_index = system_turn.turn_index + 1.
/// Throws std::invalid_argument if system_turn is not a system turn.
Turn react(const UserBehaviorModel& model, const Turn& system_turn, Rng& rng);

// ---------------------------------------------------------------------------
// Session plans: the system side of a simulated dialogue.

struct SessionPlanParams {
  double ice_breaking_fraction = 0.1;
  double ending_fraction = 0.1;
  // Probability that the system keeps its previous emotion instead of
  // drawing a fresh one uniformly from the 7x7 grid.
  double emotion_persistence = 0.5;
  double laughter_rate = 0.3;
  double mirthful_share = 0.4;

  std::vector<std::string> violations() const;
  friend bool operator==(const SessionPlanParams&, const SessionPlanParams&) = default;
};

/// Dialogue-act mix used by the planner for one phase, indexed by DialogueAct.
const std::array<double, kDialogueActCount>& phase_dialogue_act_weights(DialoguePhase phase);

/// Phase of turn `index` in a session of `turns` system turns.
DialoguePhase phase_for_turn(const SessionPlanParams& params, std::size_t index, std::size_t turns);

/// One system turn in `phase`; with probability emotion_persistence it keeps
/// the emotion of `previous` (when given). Session id and index are unset.
Turn sample_system_turn(const SessionPlanParams& params, DialoguePhase phase, const Turn* previous, Rng& rng);

/// `turns` system turns with even turn indices 0, 2, 4, ...
std::vector<Turn> make_session_plan(const SessionPlanParams& params, std::size_t turns, const std::string& session_id,
                                    Rng& rng);

// ---------------------------------------------------------------------------
// Calibration of mimicry weights against target correlations.

struct CalibrationTargets {
  std::optional<double> ice_breaking_valence;
  std::optional<double> spontaneous_valence;
  std::optional<double> ending_valence;
  std::optional<double> arousal;
};

struct CalibrationOutcome {
  double target = 0.0;
  double achieved = 0.0;  // NaN when the correlation is undefined
  double weight = 0.0;
};

struct CalibrationResult {
  UserBehaviorModel model;
  std::optional<CalibrationOutcome> ice_breaking_valence;
  std::optional<CalibrationOutcome> spontaneous_valence;
  std::optional<CalibrationOutcome> ending_valence;
  std::optional<CalibrationOutcome> arousal;
  double residual = 0.0;  // sum of squared PCC errors
};

/// Grid-searches each targeted mimicry weight over {0, 0.05, ..., 1}.
/// Valence targets are measured on `trials` simulated pairs drawn from that
/// phase; the arousal target on `trials` pairs spread over a whole plan.
/// Every candidate reuses the same random stream (common random numbers).
/// Throws std::invalid_argument for targets outside [-1, 1] or trials < 2.
CalibrationResult calibrate(const UserBehaviorModel& base, const CalibrationTargets& targets, int trials,
                            std::uint64_t seed, const SessionPlanParams& plan = {});

}  // namespace anticipate
