#include "anticipate/simulated_user.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anticipate/analysis.hpp"

namespace anticipate {

DaRuleTable UserBehaviorModel::default_da_rules() {
  DaRuleTable rules{};
  rules[index_of(DialogueAct::signal_non_understanding)] = {-2, 0, std::nullopt};
  rules[index_of(DialogueAct::praise)] = {+1, 0, std::nullopt};
  rules[index_of(DialogueAct::apology)] = {-1, 0, std::nullopt};
  rules[index_of(DialogueAct::conventional_opening)] = {0, 0, EmotionLabel(1, 1)};
  rules[index_of(DialogueAct::conventional_closing)] = {0, 0, EmotionLabel(1, 1)};
  return rules;
}

ContagionMatrix UserBehaviorModel::default_contagion() {
  ContagionMatrix m;
  m << 0.85, 0.10, 0.05,  //
      0.25, 0.60, 0.15,   //
      0.20, 0.25, 0.55;
  return m;
}

std::vector<std::string> UserBehaviorModel::violations() const {
  std::vector<std::string> v;
  auto unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  for (auto phase : kAllPhases) {
    if (!unit(mimicry_valence[index_of(phase)])) {
      v.push_back("mimicry_valence." + std::string(to_string(phase)) + " must be in [0,1]");
    }
  }
  if (!unit(mimicry_arousal)) v.emplace_back("mimicry_arousal must be in [0,1]");
  if (noise_valence < 0 || noise_arousal < 0) v.emplace_back("noise levels must be non-negative");
  if (!unit(embarrassment_rate)) v.emplace_back("embarrassment_rate must be in [0,1]");
  if (!EmotionLabel::in_range(valence_cap)) v.emplace_back("valence_cap must be in [-3,3]");
  for (int r = 0; r < 3; ++r) {
    bool ok = true;
    for (int c = 0; c < 3; ++c) ok = ok && unit(laugh_contagion(r, c));
    if (!ok || std::abs(laugh_contagion.row(r).sum() - 1.0) > 1e-9) {
      v.push_back("laugh_contagion row " + std::string(to_string(static_cast<LaughterType>(r))) +
                  " must be a probability distribution");
    }
  }
  return v;
}

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_level(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Inverse-CDF draw from a finite distribution; the last index absorbs rounding.
template <typename Weights>
int sample_index(const Weights& weights, int n, Rng& rng) {
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += weights[i];
  double u = uniform(rng, 0.0, total);
  for (int i = 0; i < n - 1; ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return n - 1;
}

int mimic(double weight, int system_value, Rng& rng) {
  const bool copy = uniform(rng, 0.0, 1.0) < weight;
  const int fresh = uniform_level(rng, kEmotionMin, kEmotionMax);
  return copy ? system_value : fresh;
}

}  // namespace

LaughterAcoustics sample_laugh_acoustics(UserLaughKind kind, Rng& rng) {
  LaughterAcoustics a;
  switch (kind) {
    case UserLaughKind::social:
      a.f0_flatness = uniform(rng, 0.75, 0.95);
      a.power_norm = uniform(rng, 0.4, 0.6);
      a.duration_s = uniform(rng, 0.2, 0.8);
      a.jitter_pct = uniform(rng, 0.0, 3.0);
      a.shimmer_pct = uniform(rng, 0.0, 3.0);
      break;
    case UserLaughKind::mirthful:
      a.f0_flatness = uniform(rng, 0.1, 0.5);
      a.power_norm = uniform(rng, 0.5, 0.9);
      a.duration_s = uniform(rng, 1.2, 2.5);
      a.jitter_pct = uniform(rng, 5.0, 12.0);
      a.shimmer_pct = uniform(rng, 5.0, 12.0);
      break;
    case UserLaughKind::embarrassment:
      a.f0_flatness = uniform(rng, 0.3, 0.7);
      a.power_norm = uniform(rng, 0.05, 0.25);
      a.duration_s = uniform(rng, 0.2, 0.8);
      a.jitter_pct = uniform(rng, 0.0, 3.0);
      a.shimmer_pct = uniform(rng, 0.0, 3.0);
      break;
  }
  return a;
}

Turn react(const UserBehaviorModel& model, const Turn& system_turn, Rng& rng) {
  if (system_turn.speaker != Speaker::system) throw std::invalid_argument("react: expected a system turn");

  const DaRule& rule = model.da_rules[index_of(system_turn.da)];
  int v = mimic(model.mimicry_valence_for(system_turn.phase), system_turn.emotion.valence(), rng);
  int a = mimic(model.mimicry_arousal, system_turn.emotion.arousal(), rng);
  if (rule.override) {
    v = rule.override->valence();
    a = rule.override->arousal();
  }
  v += uniform_level(rng, -model.noise_valence, model.noise_valence);
  a += uniform_level(rng, -model.noise_arousal, model.noise_arousal);
  v += rule.delta_valence;
  a += rule.delta_arousal;

  Turn user;
  user.session_id = system_turn.session_id;
  user.turn_index = system_turn.turn_index + 1;
  user.speaker = Speaker::user;
  user.phase = system_turn.phase;
  user.emotion = EmotionLabel(std::clamp(v, kEmotionMin, std::min(model.valence_cap, kEmotionMax)),
                              std::clamp(a, kEmotionMin, kEmotionMax));
  // Users reply with the dominant act of the exchange; the simulator does
  // not model user dialogue acts beyond that.
  user.da = system_turn.da == DialogueAct::signal_non_understanding ? DialogueAct::reject : DialogueAct::statement;

  const LaughterType system_laugh = system_turn.laughter_type.value_or(LaughterType::none);
  const int row = index_of(system_laugh);
  const auto user_laugh = static_cast<LaughterType>(
      sample_index(std::array<double, 3>{model.laugh_contagion(row, 0), model.laugh_contagion(row, 1),
                                         model.laugh_contagion(row, 2)},
                   3, rng));
  const bool embarrassed = uniform(rng, 0.0, 1.0) < model.embarrassment_rate;
  user.laughter_type = user_laugh;
  if (user_laugh != LaughterType::none) {
    UserLaughKind kind = user_laugh == LaughterType::mirthful ? UserLaughKind::mirthful : UserLaughKind::social;
    if (embarrassed) kind = UserLaughKind::embarrassment;
    user.laughter_acoustics = sample_laugh_acoustics(kind, rng);
  }
  return user;
}

std::vector<std::string> SessionPlanParams::violations() const {
  std::vector<std::string> v;
  auto unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  if (!unit(ice_breaking_fraction)) v.emplace_back("ice_breaking_fraction must be in [0,1]");
  if (!unit(ending_fraction)) v.emplace_back("ending_fraction must be in [0,1]");
  if (unit(ice_breaking_fraction) && unit(ending_fraction) && ice_breaking_fraction + ending_fraction > 1.0) {
    v.emplace_back("ice_breaking_fraction + ending_fraction must not exceed 1");
  }
  if (!unit(emotion_persistence)) v.emplace_back("emotion_persistence must be in [0,1]");
  if (!unit(laughter_rate)) v.emplace_back("laughter_rate must be in [0,1]");
  if (!unit(mirthful_share)) v.emplace_back("mirthful_share must be in [0,1]");
  return v;
}

const std::array<double, kDialogueActCount>& phase_dialogue_act_weights(DialoguePhase phase) {
  // statement, wh, yes-no, sig-non-und, reject, apology, appreciation,
  // backchannel, opening, closing, praise, other
  static const std::array<double, kDialogueActCount> ice = {0.20, 0.30, 0.10, 0.0, 0.0, 0.0,
                                                            0.0,  0.10, 0.30, 0.0, 0.0, 0.0};
  static const std::array<double, kDialogueActCount> spontaneous = {0.30, 0.15, 0.10, 0.05, 0.03, 0.04,
                                                                    0.06, 0.12, 0.0,  0.0,  0.07, 0.08};
  static const std::array<double, kDialogueActCount> ending = {0.25, 0.0, 0.0,  0.0, 0.0,  0.0,
                                                               0.25, 0.15, 0.0, 0.35, 0.0, 0.0};
  switch (phase) {
    case DialoguePhase::ice_breaking:
      return ice;
    case DialoguePhase::ending:
      return ending;
    case DialoguePhase::spontaneous:
      break;
  }
  return spontaneous;
}

DialoguePhase phase_for_turn(const SessionPlanParams& params, std::size_t index, std::size_t turns) {
  const auto n_ice = static_cast<std::size_t>(std::llround(params.ice_breaking_fraction * static_cast<double>(turns)));
  const auto n_end = static_cast<std::size_t>(std::llround(params.ending_fraction * static_cast<double>(turns)));
  if (index < n_ice) return DialoguePhase::ice_breaking;
  if (index + n_end >= turns) return DialoguePhase::ending;
  return DialoguePhase::spontaneous;
}

Turn sample_system_turn(const SessionPlanParams& params, DialoguePhase phase, const Turn* previous, Rng& rng) {
  Turn t;
  t.speaker = Speaker::system;
  t.phase = phase;
  const bool keep = uniform(rng, 0.0, 1.0) < params.emotion_persistence;
  const int v = uniform_level(rng, kEmotionMin, kEmotionMax);
  const int a = uniform_level(rng, kEmotionMin, kEmotionMax);
  t.emotion = (keep && previous) ? previous->emotion : EmotionLabel(v, a);
  t.da = kAllDialogueActs[static_cast<std::size_t>(
      sample_index(phase_dialogue_act_weights(phase), kDialogueActCount, rng))];
  const bool laughs = uniform(rng, 0.0, 1.0) < params.laughter_rate;
  const bool mirthful = uniform(rng, 0.0, 1.0) < params.mirthful_share;
  if (laughs) t.laughter_type = mirthful ? LaughterType::mirthful : LaughterType::social;
  return t;
}

std::vector<Turn> make_session_plan(const SessionPlanParams& params, std::size_t turns, const std::string& session_id,
                                    Rng& rng) {
  std::vector<Turn> plan;
  plan.reserve(turns);
  for (std::size_t i = 0; i < turns; ++i) {
    Turn t = sample_system_turn(params, phase_for_turn(params, i, turns), plan.empty() ? nullptr : &plan.back(), rng);
    t.session_id = session_id;
    t.turn_index = 2 * i;
    plan.push_back(std::move(t));
  }
  return plan;
}

namespace {

double valence_pcc_in_phase(const UserBehaviorModel& model, const SessionPlanParams& plan, DialoguePhase phase,
                            int trials, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs, ys;
  xs.reserve(trials);
  ys.reserve(trials);
  Turn previous;
  for (int i = 0; i < trials; ++i) {
    Turn sys = sample_system_turn(plan, phase, i == 0 ? nullptr : &previous, rng);
    const Turn user = react(model, sys, rng);
    xs.push_back(sys.emotion.valence());
    ys.push_back(user.emotion.valence());
    previous = std::move(sys);
  }
  return pearson_pcc_or_nan(xs, ys);
}

double arousal_pcc_over_plan(const UserBehaviorModel& model, const SessionPlanParams& plan, int trials,
                             std::uint64_t seed) {
  Rng rng(seed);
  const auto turns = make_session_plan(plan, static_cast<std::size_t>(trials), "calibration", rng);
  std::vector<double> xs, ys;
  for (const auto& sys : turns) {
    xs.push_back(sys.emotion.arousal());
    ys.push_back(react(model, sys, rng).emotion.arousal());
  }
  return pearson_pcc_or_nan(xs, ys);
}

template <typename Measure>
CalibrationOutcome grid_search(double target, Measure measure) {
  CalibrationOutcome best{target, std::numeric_limits<double>::quiet_NaN(), 0.0};
  double best_err = std::numeric_limits<double>::infinity();
  for (int step = 0; step <= 20; ++step) {
    const double w = 0.05 * step;
    const double pcc = measure(w);
    const double err = std::isnan(pcc) ? std::numeric_limits<double>::infinity() : (pcc - target) * (pcc - target);
    if (err < best_err || (step == 0 && std::isinf(err))) {
      best_err = err;
      best = {target, pcc, w};
    }
  }
  return best;
}

void check_target(const std::optional<double>& t) {
  if (t && !(*t >= -1.0 && *t <= 1.0)) throw std::invalid_argument("PCC must be in [-1,1]");
}

}  // namespace

CalibrationResult calibrate(const UserBehaviorModel& base, const CalibrationTargets& targets, int trials,
                            std::uint64_t seed, const SessionPlanParams& plan) {
  check_target(targets.ice_breaking_valence);
  check_target(targets.spontaneous_valence);
  check_target(targets.ending_valence);
  check_target(targets.arousal);
  if (trials < 2) throw std::invalid_argument("calibrate: trials must be at least 2");

  CalibrationResult result;
  result.model = base;

  auto fit_phase = [&](const std::optional<double>& target, DialoguePhase phase,
                       std::optional<CalibrationOutcome>& slot) {
    if (!target) return;
    slot = grid_search(*target, [&](double w) {
      UserBehaviorModel candidate = base;
      candidate.mimicry_valence[index_of(phase)] = w;
      return valence_pcc_in_phase(candidate, plan, phase, trials, seed);
    });
    result.model.mimicry_valence[index_of(phase)] = slot->weight;
  };
  fit_phase(targets.ice_breaking_valence, DialoguePhase::ice_breaking, result.ice_breaking_valence);
  fit_phase(targets.spontaneous_valence, DialoguePhase::spontaneous, result.spontaneous_valence);
  fit_phase(targets.ending_valence, DialoguePhase::ending, result.ending_valence);

  if (targets.arousal) {
    result.arousal = grid_search(*targets.arousal, [&](double w) {
      UserBehaviorModel candidate = base;
      candidate.mimicry_arousal = w;
      return arousal_pcc_over_plan(candidate, plan, trials, seed);
    });
    result.model.mimicry_arousal = result.arousal->weight;
  }

  for (const auto* slot : {&result.ice_breaking_valence, &result.spontaneous_valence, &result.ending_valence,
                           &result.arousal}) {
    if (*slot && !std::isnan((*slot)->achieved)) {
      const double e = (*slot)->achieved - (*slot)->target;
      result.residual += e * e;
    }
  }
  return result;
}

}  // namespace anticipate
