#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "anticipate/analysis.hpp"
#include "support.hpp"

using namespace anticipate;

namespace {

// Two-pass textbook formula, kept deliberately naive.
double naive_pcc(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

Turn make(Speaker s, std::uint64_t idx, EmotionLabel e, DialogueAct da,
          DialoguePhase phase = DialoguePhase::spontaneous, const std::string& session = "s") {
  Turn t;
  t.session_id = session;
  t.turn_index = idx;
  t.speaker = s;
  t.phase = phase;
  t.emotion = e;
  t.da = da;
  return t;
}

// The annotated excerpt: robot and participant alternating.
std::vector<Turn> excerpt() {
  return {
      make(Speaker::system, 0, EmotionLabel(1, 1), DialogueAct::wh_question, DialoguePhase::ice_breaking),
      make(Speaker::user, 1, EmotionLabel(1, 2), DialogueAct::statement, DialoguePhase::ice_breaking),
      make(Speaker::system, 2, EmotionLabel(2, 2), DialogueAct::signal_non_understanding,
           DialoguePhase::ice_breaking),
      make(Speaker::user, 3, EmotionLabel(0, 1), DialogueAct::reject, DialoguePhase::ice_breaking),
      make(Speaker::system, 4, EmotionLabel(-1, 0), DialogueAct::apology, DialoguePhase::ice_breaking),
  };
}

}  // namespace

TEST_CASE("pearson_pcc closed-form cases") {
  const std::vector<double> a = {1, 2, 3}, b = {3, 2, 1};
  CHECK(std::abs(pearson_pcc(a, a) - 1.0) < 1e-9);
  CHECK(std::abs(pearson_pcc(a, b) + 1.0) < 1e-9);
  const std::vector<double> x = {1, 2, 3, 4}, y = {2, 4, 4, 8};
  CHECK(std::abs(pearson_pcc(x, y) - 9.0 / std::sqrt(5.0 * 19.0)) < 1e-9);
  CHECK(std::abs(pearson_pcc(x, y) - 0.9234) < 1e-4);
}

TEST_CASE("pearson_pcc errors") {
  const std::vector<double> one = {1}, two = {1, 2}, three = {1, 2, 3}, flat = {5, 5, 5};
  CHECK_THROWS_AS(pearson_pcc(one, one), std::invalid_argument);
  CHECK_THROWS_AS(pearson_pcc(two, three), std::invalid_argument);
  CHECK_THROWS_AS(pearson_pcc(flat, three), UndefinedCorrelation);
  CHECK(std::isnan(pearson_pcc_or_nan(flat, three)));
}

TEST_CASE("pearson_pcc properties on random sequences") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0, 1);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 2 + rng() % 60;
    std::vector<double> x(len), y(len), z(len);
    for (std::size_t i = 0; i < len; ++i) {
      x[i] = n(rng);
      y[i] = 0.3 * x[i] + n(rng);
    }
    const double r = pearson_pcc(x, y);
    CHECK(std::abs(r - naive_pcc(x, y)) < 1e-12);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(std::abs(r - pearson_pcc(y, x)) < 1e-12);
    double a = u(rng);
    if (a == 0) a = 1;
    const double b = u(rng);
    for (std::size_t i = 0; i < len; ++i) z[i] = a * x[i] + b;
    CHECK(std::abs(pearson_pcc(z, y) - (a > 0 ? r : -r)) < 1e-9);
  }
}

TEST_CASE("pair_turns joins each system turn to the following user turn") {
  auto turns = excerpt();
  const auto pairs = pair_turns(turns);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].first.turn_index == 0);
  CHECK(pairs[0].second.turn_index == 1);
  CHECK(pairs[1].first.da == DialogueAct::signal_non_understanding);

  // Adjacent turns of different sessions do not pair.
  turns[1].session_id = "other";
  CHECK(pair_turns(turns).size() == 1);
}

TEST_CASE("da_shift_table on the annotated excerpt") {
  const auto table = da_shift_table(pair_turns(excerpt()));
  const auto& snu = table.row(DialogueAct::signal_non_understanding);
  CHECK(snu.count == 1);
  CHECK(snu.mean_dv == -2.0);
  CHECK(snu.mean_da == -1.0);
  const auto& wh = table.row(DialogueAct::wh_question);
  CHECK(wh.count == 1);
  CHECK(wh.mean_dv == 0.0);
  CHECK(wh.mean_da == 1.0);
  CHECK(table.row(DialogueAct::apology).count == 0);
  CHECK(da_shift_csv(table) ==
        "da,mean_dv,mean_da,count\n"
        "wh-question,0,1,1\n"
        "signal-non-understanding,-2,-1,1\n");
  CHECK_THROWS_AS(da_shift_table({}), std::invalid_argument);
}

TEST_CASE("da_shift_table agrees with brute-force sums") {
  std::mt19937_64 rng(4);
  std::vector<TurnPair> pairs;
  for (int i = 0; i < 1000; ++i) {
    auto s = testing::random_turn(rng, "x", 0);
    auto u = testing::random_turn(rng, "x", 1);
    s.speaker = Speaker::system;
    u.speaker = Speaker::user;
    pairs.emplace_back(s, u);
  }
  const auto table = da_shift_table(pairs);
  for (auto da : kAllDialogueActs) {
    double dv = 0, dar = 0;
    std::size_t n = 0;
    for (const auto& [s, u] : pairs) {
      if (s.da != da) continue;
      dv += u.emotion.valence() - s.emotion.valence();
      dar += u.emotion.arousal() - s.emotion.arousal();
      ++n;
    }
    CHECK(table.row(da).count == n);
    if (n) {
      CHECK(table.row(da).mean_dv == doctest::Approx(dv / n));
      CHECK(table.row(da).mean_da == doctest::Approx(dar / n));
    }
  }
}

TEST_CASE("a pure copier shows no shifts") {
  UserBehaviorModel m;
  m.mimicry_valence = {1, 1, 1};
  m.mimicry_arousal = 1;
  m.noise_valence = m.noise_arousal = 0;
  m.da_rules = DaRuleTable{};
  m.valence_cap = 3;
  Rng rng(2);
  const auto plan = make_session_plan({}, 500, "c", rng);
  std::vector<TurnPair> pairs;
  for (const auto& s : plan) pairs.emplace_back(s, react(m, s, rng));
  const auto table = da_shift_table(pairs);
  for (const auto& row : table.rows) {
    CHECK(row.mean_dv == 0.0);
    CHECK(row.mean_da == 0.0);
  }
}

namespace {

// Expected user-minus-system shift on one dimension, enumerated over the
// copy/fresh choice, the fresh level and the noise draw, then averaged over
// a uniform system level.
double expected_shift(double mimicry, int noise, int delta, int cap) {
  double total = 0;
  for (int x = kEmotionMin; x <= kEmotionMax; ++x) {
    double e = 0;
    for (int fresh = kEmotionMin; fresh <= kEmotionMax; ++fresh) {
      for (int n = -noise; n <= noise; ++n) {
        const double pn = 1.0 / (2 * noise + 1);
        const auto out = [&](int src) { return std::clamp(src + n + delta, kEmotionMin, cap) - x; };
        e += pn * (mimicry / kEmotionLevels * out(x) + (1 - mimicry) / kEmotionLevels * out(fresh));
      }
    }
    total += e / kEmotionLevels;
  }
  return total;
}

}  // namespace

TEST_CASE("default user signal-non-understanding shift over 5000 pairs") {
  const UserBehaviorModel m;
  Rng rng(6);
  std::uniform_int_distribution<int> lvl(kEmotionMin, kEmotionMax);
  std::vector<TurnPair> pairs;
  for (int i = 0; i < 5000; ++i) {
    const Turn s = make(Speaker::system, 0, EmotionLabel(lvl(rng), lvl(rng)), DialogueAct::signal_non_understanding);
    pairs.emplace_back(s, react(m, s, rng));
  }
  const DaShiftTable row_table = da_shift_table(pairs);
  const auto& row = row_table.row(DialogueAct::signal_non_understanding);
  CHECK(row.count == 5000);
  const double ev = expected_shift(m.mimicry_valence_for(DialoguePhase::spontaneous), m.noise_valence, -2, m.valence_cap);
  const double ea = expected_shift(m.mimicry_arousal, m.noise_arousal, 0, kEmotionMax);
  // The floor at -3 absorbs part of the drop, so the mean sits near -1.52.
  CHECK(ev == doctest::Approx(-32.0 / 21.0));
  CHECK(std::abs(row.mean_dv - ev) <= 0.1);
  CHECK(std::abs(row.mean_da - ea) <= 0.1);
  CHECK(std::abs(row.mean_da) <= 0.3);
}

TEST_CASE("phase grouping") {
  std::vector<TurnPair> pairs;
  const std::vector<int> sv = {-2, 0, 1, 3}, uv = {-1, 0, 2, 2};
  for (std::size_t i = 0; i < sv.size(); ++i) {
    pairs.emplace_back(make(Speaker::system, 2 * i, EmotionLabel(sv[i], sv[i]), DialogueAct::statement),
                       make(Speaker::user, 2 * i + 1, EmotionLabel(uv[i], -uv[i]), DialogueAct::statement));
  }
  const auto report = phase_segmented_pcc(pairs);
  const std::vector<double> x(sv.begin(), sv.end()), y(uv.begin(), uv.end());
  CHECK(report.phase(DialoguePhase::spontaneous).pairs == 4);
  CHECK(*report.phase(DialoguePhase::spontaneous).valence == doctest::Approx(pearson_pcc(x, y)).epsilon(1e-15));
  CHECK(*report.phase(DialoguePhase::spontaneous).arousal == doctest::Approx(-pearson_pcc(x, y)).epsilon(1e-12));
  CHECK_FALSE(report.phase(DialoguePhase::ice_breaking).valence.has_value());
  CHECK_FALSE(report.phase(DialoguePhase::ending).arousal.has_value());
  CHECK(report.overall == report.phase(DialoguePhase::spontaneous));

  for (auto& p : pairs) p.first.emotion = EmotionLabel(1, 1);
  const auto flat = phase_segmented_pcc(pairs);
  CHECK_FALSE(flat.phase(DialoguePhase::spontaneous).valence.has_value());
}

TEST_CASE("default simulated user over a 2000-pair session") {
  Rng rng(7);
  const auto plan = make_session_plan({}, 2000, "d", rng);
  const UserBehaviorModel m;
  std::vector<TurnPair> pairs;
  for (const auto& s : plan) pairs.emplace_back(s, react(m, s, rng));
  const auto r = phase_segmented_pcc(pairs);
  CHECK(std::abs(*r.phase(DialoguePhase::spontaneous).valence - 0.54) <= 0.10);
  CHECK(std::abs(*r.overall.arousal - 0.78) <= 0.10);
  for (auto p : {DialoguePhase::ice_breaking, DialoguePhase::ending}) {
    CHECK(*r.phase(p).valence >= -0.15);
    CHECK(*r.phase(p).valence <= 0.25);
  }
}

namespace {

TurnRecord record(bool accepted, EmotionLabel predicted, EmotionLabel actual) {
  TurnRecord r;
  r.emotion_accepted = accepted;
  r.emotion_prediction.valence_dist.setConstant(0.0);
  r.emotion_prediction.arousal_dist.setConstant(0.0);
  r.emotion_prediction.valence_dist(predicted.valence_index()) = 1.0;
  r.emotion_prediction.arousal_dist(predicted.arousal_index()) = 1.0;
  r.emotion_updated = !accepted;
  r.user_turn.speaker = Speaker::user;
  r.user_turn.emotion = actual;
  r.latency_charged = accepted ? 0.0 : 1.0;
  return r;
}

}  // namespace

TEST_CASE("prediction_metrics extremes") {
  std::vector<TurnRecord> all;
  for (int i = 0; i < 10; ++i) all.push_back(record(true, EmotionLabel(1, 1), EmotionLabel(1, 1)));
  auto m = prediction_metrics(all, 5);
  CHECK(m.emotion_acceptance_rate == 1.0);
  CHECK(m.accepted_emotion_accuracy == 1.0);
  CHECK(m.learning_curve.size() == 2);

  std::vector<TurnRecord> none;
  for (int i = 0; i < 10; ++i) none.push_back(record(false, EmotionLabel(1, 1), EmotionLabel(0, 1)));
  m = prediction_metrics(none, 5);
  CHECK(m.emotion_acceptance_rate == 0.0);
  CHECK_FALSE(m.accepted_emotion_accuracy.has_value());
  CHECK(m.overall_emotion_accuracy == 0.0);
  CHECK(m.emotion_updates == 10);
  CHECK(m.total_latency == 10.0);
  CHECK_THROWS_AS(prediction_metrics(none, 0), std::invalid_argument);
}

TEST_CASE("aggregate_metrics pools windows across sessions") {
  std::vector<TurnRecord> a, b;
  for (int i = 0; i < 4; ++i) a.push_back(record(i < 2, EmotionLabel(1, 1), EmotionLabel(1, 1)));
  for (int i = 0; i < 4; ++i) b.push_back(record(true, EmotionLabel(1, 1), i == 0 ? EmotionLabel(0, 0) : EmotionLabel(1, 1)));
  const auto m = aggregate_metrics({a, b}, 2);
  CHECK(m.turns == 8);
  CHECK(m.emotion_acceptance_rate == doctest::Approx(6.0 / 8.0));
  REQUIRE(m.learning_curve.size() == 2);
  CHECK(*m.learning_curve[0] == doctest::Approx(3.0 / 4.0));
  CHECK(*m.learning_curve[1] == 1.0);
  CHECK(m.updates_curve[0] == 0);
  CHECK(m.updates_curve[1] == 2);
}

TEST_CASE("rule-driven run reaches 0.9 in the final window") {
  auto s = testing::rule_run_setup(1);
  const auto r = run_session_with(s.models, s.config, s.plan, testing::rule_user_reaction, s.oracles, 1, 100);
  const auto m = prediction_metrics(r.records, 100);
  REQUIRE(m.learning_curve.back().has_value());
  CHECK(*m.learning_curve.back() >= 0.9);
}
