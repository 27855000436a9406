#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "anticipate/perception.hpp"

using namespace anticipate;

namespace {

// Probability that a perturbed label still equals the input, by enumerating
// the (2k+1)^2 equally likely shift pairs.
double exact_match_probability(double error_rate, int k, EmotionLabel e) {
  int same = 0, total = 0;
  for (int dv = -k; dv <= k; ++dv) {
    for (int da = -k; da <= k; ++da) {
      const int v = std::clamp(e.valence() + dv, kEmotionMin, kEmotionMax);
      const int a = std::clamp(e.arousal() + da, kEmotionMin, kEmotionMax);
      same += v == e.valence() && a == e.arousal();
      ++total;
    }
  }
  return (1.0 - error_rate) + error_rate * same / static_cast<double>(total);
}

}  // namespace

TEST_CASE("error-free recognizer is the identity") {
  Rng rng(1);
  for (int v = kEmotionMin; v <= kEmotionMax; ++v) {
    for (int a = kEmotionMin; a <= kEmotionMax; ++a) {
      CHECK(recognize_emotion({0.0, 1}, EmotionLabel(v, a), rng) == EmotionLabel(v, a));
    }
  }
}

TEST_CASE("perturbation clamps at the scale floor") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto e = recognize_emotion({1.0, 1}, EmotionLabel(-3, -3), rng);
    CHECK((e.valence() == -3 || e.valence() == -2));
    CHECK((e.arousal() == -3 || e.arousal() == -2));
  }
}

TEST_CASE("exact-match rate at error rate 0.2") {
  Rng rng(3);
  const EmotionLabel e(0, 1);
  int same = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) same += recognize_emotion({0.2, 1}, e, rng) == e;
  const double rate = same / static_cast<double>(n);
  CHECK(rate >= 0.75);
  CHECK(rate <= 0.89);
  // 4 standard errors of a binomial proportion.
  const double p = exact_match_probability(0.2, 1, e);
  CHECK(std::abs(rate - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("perturbations stay within max_perturbation") {
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const auto e = recognize_emotion({1.0, 2}, EmotionLabel(0, 0), rng);
    CHECK(std::abs(e.valence()) <= 2);
    CHECK(std::abs(e.arousal()) <= 2);
  }
}

TEST_CASE("acoustic prototypes classify as in the annotated laughter table") {
  const LaughDetectorRules rules;
  CHECK(detect_laughter(rules, {0.9, 0.5, 0.4, 1, 1}) == UserLaughKind::social);
  CHECK(detect_laughter(rules, {0.3, 0.6, 1.8, 7, 6}) == UserLaughKind::mirthful);
  CHECK(detect_laughter(rules, {0.5, 0.2, 0.5, 1, 1}) == UserLaughKind::embarrassment);
  CHECK(reciprocation_label(UserLaughKind::social) == LaughterType::social);
  CHECK(reciprocation_label(UserLaughKind::mirthful) == LaughterType::mirthful);
  CHECK(reciprocation_label(UserLaughKind::embarrassment) == LaughterType::none);
}

TEST_CASE("decision list order") {
  const LaughDetectorRules rules;
  // Low power wins over a long jittery laugh.
  CHECK(detect_laughter(rules, {0.3, 0.1, 2.0, 9, 9}) == UserLaughKind::embarrassment);
  // Long but smooth is social; jitter alone suffices for mirthful.
  CHECK(detect_laughter(rules, {0.3, 0.6, 2.0, 1, 1}) == UserLaughKind::social);
  CHECK(detect_laughter(rules, {0.3, 0.6, 1.0, 5, 0}) == UserLaughKind::mirthful);
  CHECK(detect_laughter(rules, {0.3, 0.6, 1.0, 0, 5}) == UserLaughKind::mirthful);
  CHECK(detect_laughter(rules, {0.3, 0.3, 0.5, 0, 0}) == UserLaughKind::embarrassment);
}

TEST_CASE("rule laughter recognizer") {
  const auto rec = make_rule_laughter_recognizer({});
  Rng rng(5);
  Turn u;
  u.speaker = Speaker::user;
  CHECK(rec(u, rng) == LaughterType::none);
  u.laughter_type = LaughterType::none;
  CHECK(rec(u, rng) == LaughterType::none);
  u.laughter_type = LaughterType::mirthful;
  CHECK(rec(u, rng) == LaughterType::mirthful);
  u.laughter_acoustics = LaughterAcoustics{0.5, 0.2, 0.5, 1, 1};
  CHECK(rec(u, rng) == LaughterType::none);
}

TEST_CASE("derive_seed separates streams deterministically") {
  CHECK(derive_seed(7, 0) == derive_seed(7, 0));
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}
