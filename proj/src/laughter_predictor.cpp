#include "anticipate/laughter_predictor.hpp"

namespace anticipate {

LaughterPrediction predict_laughter(const LaughterContagionTable& table, LaughterType la_cur) {
  const Eigen::Vector3d row = table.counts.row(index_of(la_cur)).transpose();
  LaughterPrediction out;
  out.distribution = (row.array() + table.prior_alpha) / (row.sum() + 3.0 * table.prior_alpha);
  out.confidence = out.distribution.maxCoeff();
  return out;
}

LaughterContagionTable update_laughter(LaughterContagionTable table, LaughterType la_cur, LaughterType la_true) {
  table.counts(index_of(la_cur), index_of(la_true)) += 1.0;
  return table;
}

}  // namespace anticipate
