#pragma once

// Laughter contagion table: counts[system laughter][user laughter] with a
// symmetric Dirichlet prior. Prediction is the posterior predictive row.

#include <Eigen/Core>

#include "anticipate/core.hpp"

namespace anticipate {

using LaughterDistribution = Eigen::Vector3d;

struct LaughterContagionTable {
  Eigen::Matrix3d counts = Eigen::Matrix3d::Zero();
  double prior_alpha = 1.0;

  bool is_valid() const { return counts.allFinite() && (counts.array() >= 0.0).all() && prior_alpha > 0.0; }

  bool operator==(const LaughterContagionTable& o) const {
    return counts == o.counts && prior_alpha == o.prior_alpha;
  }
};

struct LaughterPrediction {
  LaughterDistribution distribution = LaughterDistribution::Constant(1.0 / 3.0);
  double confidence = 1.0 / 3.0;

  LaughterType argmax() const {
    Eigen::Index i = 0;
    distribution.maxCoeff(&i);
    return static_cast<LaughterType>(i);
  }

  friend bool operator==(const LaughterPrediction& a, const LaughterPrediction& b) {
    return a.distribution == b.distribution && a.confidence == b.confidence;
  }
};

LaughterPrediction predict_laughter(const LaughterContagionTable& table, LaughterType la_cur);

LaughterContagionTable update_laughter(LaughterContagionTable table, LaughterType la_cur, LaughterType la_true);

}  // namespace anticipate
