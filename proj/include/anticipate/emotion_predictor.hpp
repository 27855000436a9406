#pragma once

// Next-turn emotion predictor: two independent 7-class softmax regressions
// (valence, arousal) over the 27-dim encoding of the system's current
// emotion and dialogue act, updated online by single SGD steps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Core>

#include "anticipate/core.hpp"

namespace anticipate {

template <typename Scalar>
using EmotionWeights = Eigen::Matrix<Scalar, kEmotionLevels, kFeatureDim>;

template <typename Scalar>
using EmotionDistribution = Eigen::Matrix<Scalar, kEmotionLevels, 1>;

template <typename Scalar>
struct BasicEmotionPredictorModel {
  EmotionWeights<Scalar> weights_valence = EmotionWeights<Scalar>::Zero();
  EmotionWeights<Scalar> weights_arousal = EmotionWeights<Scalar>::Zero();
  Scalar learning_rate = Scalar(0.1);
  std::uint64_t update_count = 0;

  bool operator==(const BasicEmotionPredictorModel& o) const {
    return weights_valence == o.weights_valence && weights_arousal == o.weights_arousal &&
           learning_rate == o.learning_rate && update_count == o.update_count;
  }

  bool is_valid() const {
    return weights_valence.allFinite() && weights_arousal.allFinite() && learning_rate > Scalar(0) &&
           std::isfinite(static_cast<double>(learning_rate));
  }
};

template <typename Scalar>
struct BasicEmotionPrediction {
  EmotionDistribution<Scalar> valence_dist;
  EmotionDistribution<Scalar> arousal_dist;
  Scalar confidence = Scalar(0);

  /// Most probable label; ties resolve to the lowest class index.
  EmotionLabel argmax() const {
    Eigen::Index v = 0, a = 0;
    valence_dist.maxCoeff(&v);
    arousal_dist.maxCoeff(&a);
    return EmotionLabel::from_indices(static_cast<int>(v), static_cast<int>(a));
  }
};

using EmotionPredictorModel = BasicEmotionPredictorModel<double>;
using EmotionPrediction = BasicEmotionPrediction<double>;

/// Numerically stable softmax (max-shifted).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, 1> softmax(
    const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar shift = logits.maxCoeff();
  Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, 1> e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

template <typename Scalar>
BasicEmotionPrediction<Scalar> predict(const BasicEmotionPredictorModel<Scalar>& model,
                                       const EmotionLabel& em_cur, DialogueAct da_cur) {
  const FeatureVector<Scalar> x = encode_features<Scalar>(em_cur, da_cur);
  BasicEmotionPrediction<Scalar> out;
  out.valence_dist = softmax(model.weights_valence * x);
  out.arousal_dist = softmax(model.weights_arousal * x);
  out.confidence = out.valence_dist.maxCoeff() * out.arousal_dist.maxCoeff();
  return out;
}

/// Summed cross-entropy of both dimensions for one (input, label) triple.
template <typename Scalar>
Scalar cross_entropy(const BasicEmotionPredictorModel<Scalar>& model, const EmotionLabel& em_cur,
                     DialogueAct da_cur, const EmotionLabel& em_true) {
  const auto p = predict(model, em_cur, da_cur);
  return -std::log(p.valence_dist(em_true.valence_index())) - std::log(p.arousal_dist(em_true.arousal_index()));
}

/// Gradients of cross_entropy w.r.t. both weight matrices:
/// (softmax(Wx) - onehot(y)) * x^T per dimension.
template <typename Scalar>
std::pair<EmotionWeights<Scalar>, EmotionWeights<Scalar>> cross_entropy_gradient(
    const BasicEmotionPredictorModel<Scalar>& model, const EmotionLabel& em_cur, DialogueAct da_cur,
    const EmotionLabel& em_true) {
  const FeatureVector<Scalar> x = encode_features<Scalar>(em_cur, da_cur);
  const auto p = predict(model, em_cur, da_cur);
  EmotionDistribution<Scalar> rv = p.valence_dist;
  EmotionDistribution<Scalar> ra = p.arousal_dist;
  rv(em_true.valence_index()) -= Scalar(1);
  ra(em_true.arousal_index()) -= Scalar(1);
  return {rv * x.transpose(), ra * x.transpose()};
}

/// One SGD step on each dimension, in place.
template <typename Scalar>
void update_in_place(BasicEmotionPredictorModel<Scalar>& model, const EmotionLabel& em_cur, DialogueAct da_cur,
                     const EmotionLabel& em_true) {
  const auto [gv, ga] = cross_entropy_gradient(model, em_cur, da_cur, em_true);
  model.weights_valence.noalias() -= model.learning_rate * gv;
  model.weights_arousal.noalias() -= model.learning_rate * ga;
  ++model.update_count;
}

template <typename Scalar>
BasicEmotionPredictorModel<Scalar> update(BasicEmotionPredictorModel<Scalar> model, const EmotionLabel& em_cur,
                                          DialogueAct da_cur, const EmotionLabel& em_true) {
  update_in_place(model, em_cur, da_cur, em_true);
  return model;
}

struct EmotionTrainingPair {
  EmotionLabel em_cur;
  DialogueAct da_cur = DialogueAct::statement;
  EmotionLabel em_next;
};

/// Epochs of update() over the pairs, reshuffled each epoch from `seed`.
/// Throws std::invalid_argument on empty pairs or zero epochs.
template <typename Scalar>
BasicEmotionPredictorModel<Scalar> train_batch(BasicEmotionPredictorModel<Scalar> model,
                                               const std::vector<EmotionTrainingPair>& pairs, int epochs,
                                               std::uint64_t seed) {
  if (pairs.empty()) throw std::invalid_argument("train_batch: empty training pairs");
  if (epochs < 1) throw std::invalid_argument("train_batch: epochs must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int e = 0; e < epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) update_in_place(model, pairs[i].em_cur, pairs[i].da_cur, pairs[i].em_next);
  }
  return model;
}

/// Mean cross-entropy over a pair set (0 for an empty set).
template <typename Scalar>
Scalar mean_cross_entropy(const BasicEmotionPredictorModel<Scalar>& model,
                          const std::vector<EmotionTrainingPair>& pairs) {
  if (pairs.empty()) return Scalar(0);
  Scalar total(0);
  for (const auto& p : pairs) total += cross_entropy(model, p.em_cur, p.da_cur, p.em_next);
  return total / static_cast<Scalar>(pairs.size());
}

}  // namespace anticipate
