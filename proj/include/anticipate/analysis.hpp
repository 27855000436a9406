#pragma once

// Correlation and shift statistics over (system turn, user turn) pairs, and
// aggregate metrics over controller runs.

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anticipate/controller.hpp"
#include "anticipate/core.hpp"

namespace anticipate {

/// Thrown by pearson_pcc when either sequence has zero variance.
class UndefinedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sample Pearson correlation. Throws std::invalid_argument on length
/// mismatch or fewer than two samples, UndefinedCorrelation on zero variance.
double pearson_pcc(std::span<const double> xs, std::span<const double> ys);

/// pearson_pcc, with NaN in place of any error.
double pearson_pcc_or_nan(std::span<const double> xs, std::span<const double> ys);

/// A system turn and the user turn that answered it.
using TurnPair = std::pair<Turn, Turn>;

/// Pairs each system turn with an immediately following user turn of the
/// same session, in file order.
std::vector<TurnPair> pair_turns(const std::vector<Turn>& turns);

std::vector<TurnPair> pairs_from_records(const std::vector<TurnRecord>& records);

struct PccCell {
  std::optional<double> valence;  // empty when undefined
  std::optional<double> arousal;
  std::size_t pairs = 0;

  friend bool operator==(const PccCell&, const PccCell&) = default;
};

struct PhasePccReport {
  std::array<PccCell, 3> phases;  // indexed by DialoguePhase
  PccCell overall;

  const PccCell& phase(DialoguePhase p) const { return phases[index_of(p)]; }
  friend bool operator==(const PhasePccReport&, const PhasePccReport&) = default;
};

/// Valence and arousal PCC per phase and overall. Groups with fewer than
/// two pairs or zero variance are reported as undefined.
PhasePccReport phase_segmented_pcc(const std::vector<TurnPair>& pairs);
PhasePccReport phase_segmented_pcc(const std::vector<TurnRecord>& records);

struct DaShiftRow {
  double mean_dv = 0.0;  // user valence minus system valence
  double mean_da = 0.0;  // user arousal minus system arousal
  std::size_t count = 0;
};

struct DaShiftTable {
  std::array<DaShiftRow, kDialogueActCount> rows{};  // indexed by system DialogueAct

  const DaShiftRow& row(DialogueAct da) const { return rows[index_of(da)]; }
};

/// Throws std::invalid_argument on an empty pair set.
DaShiftTable da_shift_table(const std::vector<TurnPair>& pairs);

/// CSV with header da,mean_dv,mean_da,count; only acts with samples.
std::string da_shift_csv(const DaShiftTable& table);

/// Metrics over one session's records. Throws std::invalid_argument if
/// window is zero.
SessionMetrics prediction_metrics(const std::vector<TurnRecord>& records, std::size_t window);

/// Metrics pooled over several sessions; curve entries pool the k-th window
/// of every session.
SessionMetrics aggregate_metrics(const std::vector<std::vector<TurnRecord>>& sessions, std::size_t window);

}  // namespace anticipate
