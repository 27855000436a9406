#include "anticipate/controller.hpp"

#include <cmath>
#include <stdexcept>

#include "anticipate/analysis.hpp"

namespace anticipate {

std::vector<std::string> AnticipationConfig::violations() const {
  std::vector<std::string> v;
  auto unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  if (!unit(p_thr1)) v.emplace_back("p_thr1 must be in [0,1]");
  if (!unit(p_thr2)) v.emplace_back("p_thr2 must be in [0,1]");
  if (!(latency_recognition >= 0.0) || !std::isfinite(latency_recognition)) {
    v.emplace_back("latency_recognition must be non-negative");
  }
  if (!(latency_anticipation >= 0.0) || !std::isfinite(latency_anticipation)) {
    v.emplace_back("latency_anticipation must be non-negative");
  }
  return v;
}

EmotionTurnResult run_emotion_turn(const EmotionPredictorModel& model, const AnticipationConfig& config,
                                   const Turn& system_turn, const UserReactionProvider& user_reaction,
                                   const EmotionRecognizer& recognizer, Rng& rng) {
  if (system_turn.speaker != Speaker::system) {
    throw std::invalid_argument("run_emotion_turn: expected a system turn");
  }
  EmotionTurnResult out{model, {}};
  TurnRecord& rec = out.record;
  rec.system_turn = system_turn;
  rec.emotion_prediction = predict(model, system_turn.emotion, system_turn.da);
  rec.emotion_accepted = rec.emotion_prediction.confidence >= config.p_thr1;

  // The user's turn is always collected for the log; on the accepted path
  // the model does not see it unless learn_on_accept is set.
  rec.user_turn = user_reaction(system_turn);

  if (rec.emotion_accepted) {
    rec.latency_charged = config.latency_anticipation;
    if (config.learn_on_accept) {
      update_in_place(out.model, system_turn.emotion, system_turn.da, rec.user_turn.emotion);
      rec.emotion_updated = true;
    }
  } else {
    rec.em_rec = recognizer(rec.user_turn, rng);
    update_in_place(out.model, system_turn.emotion, system_turn.da, *rec.em_rec);
    rec.emotion_updated = true;
    rec.latency_charged = config.latency_recognition;
  }
  return out;
}

LaughterTurnResult run_laughter_turn(const LaughterContagionTable& table, const AnticipationConfig& config,
                                     const Turn& system_turn, const UserReactionProvider& user_reaction,
                                     const LaughterRecognizer& detector, Rng& rng) {
  if (system_turn.speaker != Speaker::system) {
    throw std::invalid_argument("run_laughter_turn: expected a system turn");
  }
  if (!system_turn.laughs()) throw std::invalid_argument("run_laughter_turn: system turn has no laughter");

  const LaughterType la_cur = *system_turn.laughter_type;
  LaughterTurnResult out{table, {}};
  LaughterTurnRecord& rec = out.record;
  rec.prediction = predict_laughter(table, la_cur);
  rec.accepted = rec.prediction.confidence >= config.p_thr2;

  const Turn user_turn = user_reaction(system_turn);
  if (rec.accepted) {
    Rng reference_rng(0);
    rec.la_actual = detector(user_turn, reference_rng);
    if (config.learn_on_accept) {
      out.table = update_laughter(out.table, la_cur, rec.la_actual);
      rec.model_updated = true;
    }
  } else {
    rec.la_rec = detector(user_turn, rng);
    rec.la_actual = *rec.la_rec;
    out.table = update_laughter(out.table, la_cur, *rec.la_rec);
    rec.model_updated = true;
  }
  return out;
}

SessionResult run_session_with(AnticipationModels models, const AnticipationConfig& config,
                               const std::vector<Turn>& plan, const UserReactionProvider& user_reaction,
                               const Oracles& oracles, std::uint64_t seed, std::size_t metrics_window) {
  Rng recognizer_rng(derive_seed(seed, 1));
  SessionResult result;
  result.records.reserve(plan.size());
  for (const Turn& system_turn : plan) {
    auto emotion = run_emotion_turn(models.emotion, config, system_turn, user_reaction, oracles.emotion,
                                    recognizer_rng);
    models.emotion = std::move(emotion.model);
    TurnRecord rec = std::move(emotion.record);
    if (system_turn.laughs()) {
      const Turn& observed = rec.user_turn;
      auto replay = [&observed](const Turn&) { return observed; };
      auto laughter = run_laughter_turn(models.laughter, config, system_turn, replay, oracles.laughter,
                                        recognizer_rng);
      models.laughter = laughter.table;
      rec.laughter = laughter.record;
    }
    result.records.push_back(std::move(rec));
  }
  result.models = std::move(models);
  result.metrics = prediction_metrics(result.records, metrics_window);
  return result;
}

SessionResult run_session(AnticipationModels models, const AnticipationConfig& config, const std::vector<Turn>& plan,
                          const UserBehaviorModel& user_model, const Oracles& oracles, std::uint64_t seed,
                          std::size_t metrics_window) {
  Rng user_rng(derive_seed(seed, 0));
  auto provider = [&](const Turn& system_turn) { return react(user_model, system_turn, user_rng); };
  return run_session_with(std::move(models), config, plan, provider, oracles, seed, metrics_window);
}

}  // namespace anticipate
