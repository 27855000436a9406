#include "anticipate/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Core>

namespace anticipate {

double pearson_pcc(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson_pcc: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("pearson_pcc: need at least two samples");
  const auto n = static_cast<Eigen::Index>(xs.size());
  const Eigen::Map<const Eigen::VectorXd> x(xs.data(), n);
  const Eigen::Map<const Eigen::VectorXd> y(ys.data(), n);
  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  const double sxx = dx.squaredNorm();
  const double syy = dy.squaredNorm();
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson_pcc: zero variance");
  const double r = dx.dot(dy) / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double pearson_pcc_or_nan(std::span<const double> xs, std::span<const double> ys) {
  try {
    return pearson_pcc(xs, ys);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<TurnPair> pair_turns(const std::vector<Turn>& turns) {
  std::vector<TurnPair> pairs;
  for (std::size_t i = 0; i + 1 < turns.size(); ++i) {
    const Turn& a = turns[i];
    const Turn& b = turns[i + 1];
    if (a.speaker == Speaker::system && b.speaker == Speaker::user && a.session_id == b.session_id) {
      pairs.emplace_back(a, b);
      ++i;
    }
  }
  return pairs;
}

std::vector<TurnPair> pairs_from_records(const std::vector<TurnRecord>& records) {
  std::vector<TurnPair> pairs;
  pairs.reserve(records.size());
  for (const auto& r : records) pairs.emplace_back(r.system_turn, r.user_turn);
  return pairs;
}

namespace {

std::optional<double> defined(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 2) return std::nullopt;
  try {
    return pearson_pcc(xs, ys);
  } catch (const UndefinedCorrelation&) {
    return std::nullopt;
  }
}

struct Columns {
  std::vector<double> sv, uv, sa, ua;

  void add(const TurnPair& p) {
    sv.push_back(p.first.emotion.valence());
    uv.push_back(p.second.emotion.valence());
    sa.push_back(p.first.emotion.arousal());
    ua.push_back(p.second.emotion.arousal());
  }

  PccCell cell() const { return {defined(sv, uv), defined(sa, ua), sv.size()}; }
};

}  // namespace

PhasePccReport phase_segmented_pcc(const std::vector<TurnPair>& pairs) {
  std::array<Columns, 3> by_phase;
  Columns all;
  for (const auto& p : pairs) {
    // The pair's phase is the phase of the system turn that opened it.
    by_phase[index_of(p.first.phase)].add(p);
    all.add(p);
  }
  PhasePccReport report;
  for (int i = 0; i < 3; ++i) report.phases[i] = by_phase[i].cell();
  report.overall = all.cell();
  return report;
}

PhasePccReport phase_segmented_pcc(const std::vector<TurnRecord>& records) {
  return phase_segmented_pcc(pairs_from_records(records));
}

DaShiftTable da_shift_table(const std::vector<TurnPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("da_shift_table: no pairs");
  std::array<double, kDialogueActCount> sum_dv{}, sum_da{};
  DaShiftTable table;
  for (const auto& [sys, user] : pairs) {
    const int i = index_of(sys.da);
    sum_dv[i] += user.emotion.valence() - sys.emotion.valence();
    sum_da[i] += user.emotion.arousal() - sys.emotion.arousal();
    ++table.rows[i].count;
  }
  for (int i = 0; i < kDialogueActCount; ++i) {
    auto& row = table.rows[i];
    if (row.count == 0) continue;
    row.mean_dv = sum_dv[i] / static_cast<double>(row.count);
    row.mean_da = sum_da[i] / static_cast<double>(row.count);
  }
  return table;
}

std::string da_shift_csv(const DaShiftTable& table) {
  std::string out = "da,mean_dv,mean_da,count\n";
  char line[128];
  for (auto da : kAllDialogueActs) {
    const auto& row = table.row(da);
    if (row.count == 0) continue;
    std::snprintf(line, sizeof line, "%s,%.9g,%.9g,%zu\n", std::string(to_string(da)).c_str(), row.mean_dv,
                  row.mean_da, row.count);
    out += line;
  }
  return out;
}

namespace {

struct Tally {
  std::size_t turns = 0, accepted = 0, accepted_correct = 0, correct = 0, updates = 0;
  std::size_t laughter_turns = 0, laughter_accepted = 0, laughter_accepted_correct = 0, laughter_updates = 0;
  double latency = 0.0;

  void add(const TurnRecord& r) {
    ++turns;
    const bool hit = r.emotion_prediction.argmax() == r.user_turn.emotion;
    correct += hit;
    if (r.emotion_accepted) {
      ++accepted;
      accepted_correct += hit;
    }
    updates += r.emotion_updated;
    latency += r.latency_charged;
    if (r.laughter) {
      ++laughter_turns;
      if (r.laughter->accepted) {
        ++laughter_accepted;
        laughter_accepted_correct += r.laughter->prediction.argmax() == r.laughter->la_actual;
      }
      laughter_updates += r.laughter->model_updated;
    }
  }
};

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

SessionMetrics finish(const Tally& t, const std::vector<Tally>& windows, std::size_t window) {
  SessionMetrics m;
  m.turns = t.turns;
  m.emotion_acceptance_rate = ratio(t.accepted, t.turns).value_or(0.0);
  m.accepted_emotion_accuracy = ratio(t.accepted_correct, t.accepted);
  m.overall_emotion_accuracy = ratio(t.correct, t.turns);
  m.emotion_updates = t.updates;
  m.laughter_turns = t.laughter_turns;
  m.laughter_acceptance_rate = ratio(t.laughter_accepted, t.laughter_turns);
  m.accepted_laughter_accuracy = ratio(t.laughter_accepted_correct, t.laughter_accepted);
  m.laughter_updates = t.laughter_updates;
  m.total_latency = t.latency;
  m.window = window;
  for (const auto& w : windows) {
    m.learning_curve.push_back(ratio(w.accepted_correct, w.accepted));
    m.acceptance_curve.push_back(ratio(w.accepted, w.turns).value_or(0.0));
    m.updates_curve.push_back(w.updates);
  }
  return m;
}

}  // namespace

SessionMetrics prediction_metrics(const std::vector<TurnRecord>& records, std::size_t window) {
  return aggregate_metrics({records}, window);
}

SessionMetrics aggregate_metrics(const std::vector<std::vector<TurnRecord>>& sessions, std::size_t window) {
  if (window == 0) throw std::invalid_argument("prediction_metrics: window must be positive");
  Tally total;
  std::vector<Tally> windows;
  for (const auto& records : sessions) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const std::size_t w = i / window;
      if (windows.size() <= w) windows.resize(w + 1);
      windows[w].add(records[i]);
      total.add(records[i]);
    }
  }
  return finish(total, windows, window);
}

}  // namespace anticipate
