#include <set>
#include <stdexcept>

#include "doctest.h"

#include "anticipate/core.hpp"

using namespace anticipate;

TEST_CASE("encode_features places the neutral statement") {
  const auto x = encode_features(EmotionLabel(0, 0), DialogueAct::statement);
  for (int i = 0; i < kFeatureDim; ++i) {
    const bool hot = i == 0 || i == 1 + 3 || i == 8 + 3 || i == 15 + 0;
    CHECK(x(i) == (hot ? 1.0 : 0.0));
  }
}

TEST_CASE("encode_features boundary indices") {
  const auto x = encode_features(EmotionLabel(-3, 3), DialogueAct::other);
  for (int i = 0; i < kFeatureDim; ++i) {
    const bool hot = i == 0 || i == 1 || i == 14 || i == 26;
    CHECK(x(i) == (hot ? 1.0 : 0.0));
  }
}

TEST_CASE("encode_features is injective with four ones over all 588 inputs") {
  std::set<std::vector<double>> seen;
  for (int v = kEmotionMin; v <= kEmotionMax; ++v) {
    for (int a = kEmotionMin; a <= kEmotionMax; ++a) {
      for (auto da : kAllDialogueActs) {
        const auto x = encode_features(EmotionLabel(v, a), da);
        CHECK(x.sum() == 4.0);
        CHECK(((x.array() == 0.0) || (x.array() == 1.0)).all());
        seen.insert(std::vector<double>(x.data(), x.data() + x.size()));
      }
    }
  }
  CHECK(seen.size() == 588);
}

TEST_CASE("encode_features in single precision matches double") {
  const auto xd = encode_features<double>(EmotionLabel(2, -1), DialogueAct::praise);
  const auto xf = encode_features<float>(EmotionLabel(2, -1), DialogueAct::praise);
  CHECK(xf.cast<double>() == xd);
}

TEST_CASE("EmotionLabel rejects values off the scale") {
  CHECK_THROWS_AS(EmotionLabel(4, 0), std::out_of_range);
  CHECK_THROWS_AS(EmotionLabel(0, -4), std::out_of_range);
  CHECK_NOTHROW(EmotionLabel(-3, 3));
  CHECK(EmotionLabel::from_indices(0, 6) == EmotionLabel(-3, 3));
  CHECK_THROWS_AS(EmotionLabel::from_indices(7, 0), std::out_of_range);
}

TEST_CASE("enum names round-trip") {
  for (auto da : kAllDialogueActs) CHECK(parse_dialogue_act(to_string(da)) == da);
  for (auto t : kAllLaughterTypes) CHECK(parse_laughter_type(to_string(t)) == t);
  for (auto p : kAllPhases) CHECK(parse_phase(to_string(p)) == p);
  for (auto s : {Speaker::system, Speaker::user}) CHECK(parse_speaker(to_string(s)) == s);
  for (auto k : {UserLaughKind::social, UserLaughKind::mirthful, UserLaughKind::embarrassment}) {
    CHECK(parse_user_laugh_kind(to_string(k)) == k);
  }
  CHECK(to_string(DialogueAct::signal_non_understanding) == "signal-non-understanding");
  CHECK_FALSE(parse_dialogue_act("shrug").has_value());
  CHECK(parse_dialogue_act_lenient("shrug") == DialogueAct::other);
}

namespace {

Turn good_turn() {
  Turn t;
  t.session_id = "s";
  t.emotion = EmotionLabel(1, 1);
  t.da = DialogueAct::wh_question;
  return t;
}

bool has(const ValidationResult& r, const std::string& msg) {
  for (const auto& v : r.violations) {
    if (v == msg) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate_turn") {
  CHECK(validate_turn(good_turn()).ok());

  CHECK(has(validate_emotion_values(4, 0), "valence out of range"));
  CHECK(has(validate_emotion_values(0, -5), "arousal out of range"));

  Turn t = good_turn();
  t.laughter_type = LaughterType::none;
  t.laughter_acoustics = LaughterAcoustics{0.5, 0.5, 0.5, 1.0, 1.0};
  CHECK(has(validate_turn(t), "acoustics without laugh"));

  t.laughter_type = LaughterType::social;
  CHECK(validate_turn(t).ok());
  t.laughter_acoustics->duration_s = 0.0;
  CHECK_FALSE(validate_turn(t).ok());
}

TEST_CASE("validate_turn_order wants increasing indices per session") {
  Turn a = good_turn(), b = good_turn(), c = good_turn();
  a.turn_index = 0;
  b.turn_index = 1;
  c.session_id = "other";
  c.turn_index = 0;
  CHECK(validate_turn_order({a, b, c}).ok());
  CHECK_FALSE(validate_turn_order({b, a}).ok());
}
