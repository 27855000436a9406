#include "anticipate/corpus_store.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace anticipate {

namespace {

std::string real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string json_string(std::string_view s) { return json(std::string(s)).dump(); }

template <std::size_t N>
std::string real_array(const std::array<double, N>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ',';
    out += real(xs[i]);
  }
  return out + "]";
}

[[noreturn]] void bad(const std::string& message) { throw std::invalid_argument(message); }

const json* member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& required(const json& obj, const char* key) {
  const json* v = member(obj, key);
  if (!v) bad(std::string("missing key ") + key);
  return *v;
}

int integer_field(const json& obj, const char* key) {
  const json& v = required(obj, key);
  if (!v.is_number_integer()) bad(std::string(key) + " must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < -1000000 || x > 1000000) bad(std::string(key) + " out of range");
  return static_cast<int>(x);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be a number");
  return v.get<double>();
}

std::string string_field(const json& obj, const char* key) {
  const json& v = required(obj, key);
  if (!v.is_string()) bad(std::string(key) + " must be a string");
  return v.get<std::string>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool found = false;
    for (const char* k : known) found = found || it.key() == k;
    if (!found) bad("unknown key " + where + it.key());
  }
}

template <std::size_t N>
std::array<double, N> real_array_field(const json& obj, const char* key) {
  const json& v = required(obj, key);
  if (!v.is_array() || v.size() != N) bad(std::string(key) + " must be an array of " + std::to_string(N));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(v[i], key);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Corpus lines

std::string turn_to_json_line(const Turn& t) {
  std::string s;
  s.reserve(256);
  s += "{\"session_id\":" + json_string(t.session_id);
  s += ",\"turn_index\":" + std::to_string(t.turn_index);
  s += ",\"speaker\":" + json_string(to_string(t.speaker));
  s += ",\"phase\":" + json_string(to_string(t.phase));
  s += ",\"valence\":" + std::to_string(t.emotion.valence());
  s += ",\"arousal\":" + std::to_string(t.emotion.arousal());
  s += ",\"da\":" + json_string(to_string(t.da));
  s += ",\"laughter_type\":" + (t.laughter_type ? json_string(to_string(*t.laughter_type)) : std::string("null"));
  s += ",\"laughter_acoustics\":";
  if (const auto& a = t.laughter_acoustics) {
    s += "{\"f0_flatness\":" + real(a->f0_flatness) + ",\"power_norm\":" + real(a->power_norm) +
         ",\"duration_s\":" + real(a->duration_s) + ",\"jitter_pct\":" + real(a->jitter_pct) +
         ",\"shimmer_pct\":" + real(a->shimmer_pct) + "}";
  } else {
    s += "null";
  }
  s += ",\"transcript\":" + (t.transcript ? json_string(*t.transcript) : std::string("null"));
  s += ",\"prediction\":";
  if (const auto& p = t.prediction) {
    s += "{\"valence_dist\":" + real_array(p->valence_dist) + ",\"arousal_dist\":" + real_array(p->arousal_dist) +
         ",\"confidence\":" + real(p->confidence) + ",\"accepted\":" + (p->accepted ? "true" : "false") + "}";
  } else {
    s += "null";
  }
  s += '}';
  return s;
}

Turn turn_from_json(const json& obj, ParseMode mode) {
  if (!obj.is_object()) bad("line is not a JSON object");
  const bool strict = mode == ParseMode::strict;
  if (strict) {
    reject_unknown(obj,
                   {"session_id", "turn_index", "speaker", "phase", "valence", "arousal", "da", "laughter_type",
                    "laughter_acoustics", "transcript", "prediction"},
                   "");
  }

  Turn t;
  t.session_id = string_field(obj, "session_id");
  const json& idx = required(obj, "turn_index");
  if (!idx.is_number_unsigned()) bad("turn_index must be a non-negative integer");
  t.turn_index = idx.get<std::uint64_t>();

  const auto speaker = parse_speaker(string_field(obj, "speaker"));
  if (!speaker) bad("unknown speaker");
  t.speaker = *speaker;
  const auto phase = parse_phase(string_field(obj, "phase"));
  if (!phase) bad("unknown phase");
  t.phase = *phase;

  const int v = integer_field(obj, "valence");
  const int a = integer_field(obj, "arousal");
  if (auto r = validate_emotion_values(v, a); !r.ok()) bad(r.violations.front());
  t.emotion = EmotionLabel(v, a);

  const std::string da = string_field(obj, "da");
  if (strict) {
    const auto parsed = parse_dialogue_act(da);
    if (!parsed) bad("unknown dialogue act " + da);
    t.da = *parsed;
  } else {
    t.da = parse_dialogue_act_lenient(da);
  }

  if (const json* lt = member(obj, "laughter_type"); lt && !lt->is_null()) {
    if (!lt->is_string()) bad("laughter_type must be a string or null");
    const auto parsed = parse_laughter_type(lt->get<std::string>());
    if (!parsed) bad("unknown laughter_type");
    t.laughter_type = *parsed;
  }

  if (const json* ac = member(obj, "laughter_acoustics"); ac && !ac->is_null()) {
    if (!ac->is_object()) bad("laughter_acoustics must be an object or null");
    if (strict) {
      reject_unknown(*ac, {"f0_flatness", "power_norm", "duration_s", "jitter_pct", "shimmer_pct"},
                     "laughter_acoustics.");
    }
    LaughterAcoustics x;
    x.f0_flatness = number(required(*ac, "f0_flatness"), "f0_flatness");
    x.power_norm = number(required(*ac, "power_norm"), "power_norm");
    x.duration_s = number(required(*ac, "duration_s"), "duration_s");
    x.jitter_pct = number(required(*ac, "jitter_pct"), "jitter_pct");
    x.shimmer_pct = number(required(*ac, "shimmer_pct"), "shimmer_pct");
    t.laughter_acoustics = x;
  }

  if (const json* tr = member(obj, "transcript"); tr && !tr->is_null()) {
    if (!tr->is_string()) bad("transcript must be a string or null");
    t.transcript = tr->get<std::string>();
  }

  if (const json* pr = member(obj, "prediction"); pr && !pr->is_null()) {
    if (!pr->is_object()) bad("prediction must be an object or null");
    if (strict) reject_unknown(*pr, {"valence_dist", "arousal_dist", "confidence", "accepted"}, "prediction.");
    PredictionLog p;
    p.valence_dist = real_array_field<kEmotionLevels>(*pr, "valence_dist");
    p.arousal_dist = real_array_field<kEmotionLevels>(*pr, "arousal_dist");
    p.confidence = number(required(*pr, "confidence"), "confidence");
    const json& acc = required(*pr, "accepted");
    if (!acc.is_boolean()) bad("accepted must be a boolean");
    p.accepted = acc.get<bool>();
    t.prediction = p;
  }

  if (auto r = validate_turn(t); !r.ok()) bad(r.violations.front());
  return t;
}

CorpusLoadResult load_corpus(const std::string& path, ParseMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path);

  CorpusLoadResult result;
  std::map<std::string, std::uint64_t> last_index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        bad(std::string("malformed JSON: ") + e.what());
      }
      Turn t = turn_from_json(obj, mode);
      auto it = last_index.find(t.session_id);
      if (it != last_index.end() && t.turn_index <= it->second) bad("turn_index does not increase within session");
      last_index[t.session_id] = t.turn_index;
      result.turns.push_back(std::move(t));
    } catch (const std::invalid_argument& e) {
      if (mode == ParseMode::strict) throw CorpusError(line_no, e.what());
      ++result.skipped;
    }
  }
  return result;
}

void save_corpus(const std::vector<Turn>& turns, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus " + path);
  for (const auto& t : turns) out << turn_to_json_line(t) << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

std::vector<Turn> records_to_turns(const std::vector<TurnRecord>& records) {
  std::vector<Turn> turns;
  turns.reserve(2 * records.size());
  for (const auto& r : records) {
    Turn sys = r.system_turn;
    PredictionLog p;
    for (int i = 0; i < kEmotionLevels; ++i) {
      p.valence_dist[i] = r.emotion_prediction.valence_dist(i);
      p.arousal_dist[i] = r.emotion_prediction.arousal_dist(i);
    }
    p.confidence = r.emotion_prediction.confidence;
    p.accepted = r.emotion_accepted;
    sys.prediction = p;
    turns.push_back(std::move(sys));
    turns.push_back(r.user_turn);
  }
  return turns;
}

std::vector<std::vector<TurnRecord>> records_from_turns(const std::vector<Turn>& turns,
                                                        const AnticipationConfig& config) {
  std::vector<std::vector<TurnRecord>> sessions;
  std::string current;
  for (const auto& [sys, user] : pair_turns(turns)) {
    if (!sys.prediction) continue;
    if (sessions.empty() || sys.session_id != current) {
      sessions.emplace_back();
      current = sys.session_id;
    }
    const PredictionLog& p = *sys.prediction;
    TurnRecord r;
    r.system_turn = sys;
    r.user_turn = user;
    for (int i = 0; i < kEmotionLevels; ++i) {
      r.emotion_prediction.valence_dist(i) = p.valence_dist[i];
      r.emotion_prediction.arousal_dist(i) = p.arousal_dist[i];
    }
    r.emotion_prediction.confidence = p.confidence;
    r.emotion_accepted = p.accepted;
    if (!p.accepted) r.em_rec = user.emotion;
    r.emotion_updated = !p.accepted || config.learn_on_accept;
    r.latency_charged = p.accepted ? config.latency_anticipation : config.latency_recognition;
    sessions.back().push_back(std::move(r));
  }
  return sessions;
}

// ---------------------------------------------------------------------------
// Run configuration

namespace {

// Walks one JSON object, tracking the path for error messages and
// rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  template <typename F>
  void field(const std::string& key, F&& read) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it != obj_.end()) read(*it, path_ + "." + key);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(path_ + "." + it.key(), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

double read_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

double read_unit(const json& v, const std::string& path) {
  const double x = read_real(v, path);
  if (x < 0.0 || x > 1.0) throw ConfigError(path, "must be in [0,1]");
  return x;
}

double read_non_negative(const json& v, const std::string& path) {
  const double x = read_real(v, path);
  if (x < 0.0) throw ConfigError(path, "must be non-negative");
  return x;
}

double read_positive(const json& v, const std::string& path) {
  const double x = read_real(v, path);
  if (x <= 0.0) throw ConfigError(path, "must be positive");
  return x;
}

int read_int(const json& v, const std::string& path, int lo, int hi) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) {
    throw ConfigError(path, "must be in [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  }
  return static_cast<int>(x);
}

bool read_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
  return v.get<bool>();
}

std::uint64_t read_u64(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw ConfigError(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

EmotionLabel read_emotion_pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [valence, arousal]");
  return EmotionLabel(read_int(v[0], path + "[0]", kEmotionMin, kEmotionMax),
                      read_int(v[1], path + "[1]", kEmotionMin, kEmotionMax));
}

UserBehaviorModel read_user(const json& doc, const std::string& path) {
  UserBehaviorModel m;
  ObjectReader r(doc, path);
  r.field("mimicry_valence", [&](const json& v, const std::string& p) {
    ObjectReader phases(v, p);
    for (auto phase : kAllPhases) {
      phases.field(std::string(to_string(phase)),
                   [&](const json& x, const std::string& q) { m.mimicry_valence[index_of(phase)] = read_unit(x, q); });
    }
    phases.finish();
  });
  r.field("mimicry_arousal", [&](const json& v, const std::string& p) { m.mimicry_arousal = read_unit(v, p); });
  r.field("noise_valence", [&](const json& v, const std::string& p) { m.noise_valence = read_int(v, p, 0, 6); });
  r.field("noise_arousal", [&](const json& v, const std::string& p) { m.noise_arousal = read_int(v, p, 0, 6); });
  r.field("da_rules", [&](const json& v, const std::string& p) {
    if (!v.is_object()) throw ConfigError(p, "expected an object");
    m.da_rules = DaRuleTable{};
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string q = p + "." + it.key();
      const auto da = parse_dialogue_act(it.key());
      if (!da) throw ConfigError(q, "unknown dialogue act");
      DaRule rule;
      ObjectReader rr(it.value(), q);
      rr.field("delta_valence", [&](const json& x, const std::string& s) { rule.delta_valence = read_int(x, s, -6, 6); });
      rr.field("delta_arousal", [&](const json& x, const std::string& s) { rule.delta_arousal = read_int(x, s, -6, 6); });
      rr.field("override", [&](const json& x, const std::string& s) {
        if (!x.is_null()) rule.override = read_emotion_pair(x, s);
      });
      rr.finish();
      m.da_rules[index_of(*da)] = rule;
    }
  });
  r.field("laugh_contagion", [&](const json& v, const std::string& p) {
    ObjectReader rows(v, p);
    for (auto type : kAllLaughterTypes) {
      rows.field(std::string(to_string(type)), [&](const json& x, const std::string& q) {
        if (!x.is_array() || x.size() != 3) throw ConfigError(q, "expected an array of 3 probabilities");
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double pr = read_unit(x[c], q + "[" + std::to_string(c) + "]");
          m.laugh_contagion(index_of(type), c) = pr;
          sum += pr;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(q, "row must sum to 1");
      });
    }
    rows.finish();
  });
  r.field("embarrassment_rate", [&](const json& v, const std::string& p) { m.embarrassment_rate = read_unit(v, p); });
  r.field("valence_cap",
          [&](const json& v, const std::string& p) { m.valence_cap = read_int(v, p, kEmotionMin, kEmotionMax); });
  r.finish();
  return m;
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  RunConfig c;
  ObjectReader r(doc, "$");
  auto& an = c.anticipation;
  r.field("p_thr1", [&](const json& v, const std::string& p) { an.p_thr1 = read_unit(v, p); });
  r.field("p_thr2", [&](const json& v, const std::string& p) { an.p_thr2 = read_unit(v, p); });
  r.field("latency_recognition",
          [&](const json& v, const std::string& p) { an.latency_recognition = read_non_negative(v, p); });
  r.field("latency_anticipation",
          [&](const json& v, const std::string& p) { an.latency_anticipation = read_non_negative(v, p); });
  r.field("learn_on_accept", [&](const json& v, const std::string& p) { an.learn_on_accept = read_bool(v, p); });
  r.field("learning_rate", [&](const json& v, const std::string& p) { c.learning_rate = read_positive(v, p); });
  r.field("prior_alpha", [&](const json& v, const std::string& p) { c.prior_alpha = read_positive(v, p); });
  r.field("metrics_window", [&](const json& v, const std::string& p) {
    c.metrics_window = static_cast<std::size_t>(read_int(v, p, 1, 1000000000));
  });
  r.field("seed", [&](const json& v, const std::string& p) {
    if (!v.is_null()) c.seed = read_u64(v, p);
  });
  r.field("recognizer", [&](const json& v, const std::string& p) {
    ObjectReader rr(v, p);
    rr.field("error_rate", [&](const json& x, const std::string& q) { c.recognizer.error_rate = read_unit(x, q); });
    rr.field("max_perturbation",
             [&](const json& x, const std::string& q) { c.recognizer.max_perturbation = read_int(x, q, 1, 6); });
    rr.finish();
  });
  r.field("laugh_detector", [&](const json& v, const std::string& p) {
    auto& d = c.laugh_detector;
    ObjectReader rr(v, p);
    rr.field("flat_pitch_min", [&](const json& x, const std::string& q) { d.flat_pitch_min = read_unit(x, q); });
    rr.field("long_duration_min_s",
             [&](const json& x, const std::string& q) { d.long_duration_min_s = read_real(x, q); });
    rr.field("jitter_shimmer_min_pct",
             [&](const json& x, const std::string& q) { d.jitter_shimmer_min_pct = read_real(x, q); });
    rr.field("low_power_max", [&](const json& x, const std::string& q) { d.low_power_max = read_unit(x, q); });
    rr.finish();
  });
  r.field("plan", [&](const json& v, const std::string& p) {
    auto& pl = c.plan;
    ObjectReader rr(v, p);
    rr.field("ice_breaking_fraction",
             [&](const json& x, const std::string& q) { pl.ice_breaking_fraction = read_unit(x, q); });
    rr.field("ending_fraction", [&](const json& x, const std::string& q) { pl.ending_fraction = read_unit(x, q); });
    rr.field("emotion_persistence",
             [&](const json& x, const std::string& q) { pl.emotion_persistence = read_unit(x, q); });
    rr.field("laughter_rate", [&](const json& x, const std::string& q) { pl.laughter_rate = read_unit(x, q); });
    rr.field("mirthful_share", [&](const json& x, const std::string& q) { pl.mirthful_share = read_unit(x, q); });
    rr.finish();
    if (pl.ice_breaking_fraction + pl.ending_fraction > 1.0) {
      throw ConfigError(p, "ice_breaking_fraction + ending_fraction must not exceed 1");
    }
  });
  r.field("user", [&](const json& v, const std::string& p) { c.user = read_user(v, p); });
  r.finish();
  return c;
}

json user_model_to_json(const UserBehaviorModel& m) {
  json mv = json::object();
  for (auto phase : kAllPhases) mv[std::string(to_string(phase))] = m.mimicry_valence[index_of(phase)];
  json rules = json::object();
  for (auto da : kAllDialogueActs) {
    const DaRule& rule = m.da_rules[index_of(da)];
    if (rule.is_identity()) continue;
    json o = {{"delta_valence", rule.delta_valence}, {"delta_arousal", rule.delta_arousal}, {"override", nullptr}};
    if (rule.override) o["override"] = {rule.override->valence(), rule.override->arousal()};
    rules[std::string(to_string(da))] = o;
  }
  json contagion = json::object();
  for (auto type : kAllLaughterTypes) {
    const int r = index_of(type);
    contagion[std::string(to_string(type))] = {m.laugh_contagion(r, 0), m.laugh_contagion(r, 1),
                                               m.laugh_contagion(r, 2)};
  }
  return {{"mimicry_valence", mv},
          {"mimicry_arousal", m.mimicry_arousal},
          {"noise_valence", m.noise_valence},
          {"noise_arousal", m.noise_arousal},
          {"da_rules", rules},
          {"laugh_contagion", contagion},
          {"embarrassment_rate", m.embarrassment_rate},
          {"valence_cap", m.valence_cap}};
}

json config_to_json(const RunConfig& c) {
  const auto& an = c.anticipation;
  const auto& d = c.laugh_detector;
  const auto& pl = c.plan;
  json doc = {
      {"p_thr1", an.p_thr1},
      {"p_thr2", an.p_thr2},
      {"latency_recognition", an.latency_recognition},
      {"latency_anticipation", an.latency_anticipation},
      {"learn_on_accept", an.learn_on_accept},
      {"learning_rate", c.learning_rate},
      {"prior_alpha", c.prior_alpha},
      {"metrics_window", c.metrics_window},
      {"seed", nullptr},
      {"recognizer", {{"error_rate", c.recognizer.error_rate}, {"max_perturbation", c.recognizer.max_perturbation}}},
      {"laugh_detector",
       {{"flat_pitch_min", d.flat_pitch_min},
        {"long_duration_min_s", d.long_duration_min_s},
        {"jitter_shimmer_min_pct", d.jitter_shimmer_min_pct},
        {"low_power_max", d.low_power_max}}},
      {"plan",
       {{"ice_breaking_fraction", pl.ice_breaking_fraction},
        {"ending_fraction", pl.ending_fraction},
        {"emotion_persistence", pl.emotion_persistence},
        {"laughter_rate", pl.laughter_rate},
        {"mirthful_share", pl.mirthful_share}}},
      {"user", user_model_to_json(c.user)},
  };
  if (c.seed) doc["seed"] = *c.seed;
  return doc;
}

RunConfig load_config(const std::string& path) {
  json doc;
  try {
    doc = read_json_file(path);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

void save_config(const RunConfig& config, const std::string& path) { write_json_file(config_to_json(config), path); }

// ---------------------------------------------------------------------------
// Models

namespace {

json matrix_rows(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Matrix>
void read_matrix(const json& v, Matrix& m, const std::string& what) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != m.rows()) bad(what + ": wrong row count");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols()) bad(what + ": wrong column count");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], what);
  }
}

}  // namespace

json emotion_model_to_json(const EmotionPredictorModel& model) {
  return {{"weights_valence", matrix_rows(model.weights_valence)},
          {"weights_arousal", matrix_rows(model.weights_arousal)},
          {"learning_rate", model.learning_rate},
          {"update_count", model.update_count}};
}

EmotionPredictorModel emotion_model_from_json(const json& doc) {
  if (!doc.is_object()) bad("emotion model must be a JSON object");
  reject_unknown(doc, {"weights_valence", "weights_arousal", "learning_rate", "update_count"}, "");
  EmotionPredictorModel m;
  read_matrix(required(doc, "weights_valence"), m.weights_valence, "weights_valence");
  read_matrix(required(doc, "weights_arousal"), m.weights_arousal, "weights_arousal");
  m.learning_rate = number(required(doc, "learning_rate"), "learning_rate");
  const json& n = required(doc, "update_count");
  if (!n.is_number_unsigned()) bad("update_count must be a non-negative integer");
  m.update_count = n.get<std::uint64_t>();
  if (!m.is_valid()) bad("emotion model has non-finite weights or a non-positive learning rate");
  return m;
}

void save_emotion_model(const EmotionPredictorModel& model, const std::string& path) {
  write_json_file(emotion_model_to_json(model), path);
}

EmotionPredictorModel load_emotion_model(const std::string& path) { return emotion_model_from_json(read_json_file(path)); }

json laughter_table_to_json(const LaughterContagionTable& table) {
  return {{"counts", matrix_rows(table.counts)}, {"prior_alpha", table.prior_alpha}};
}

LaughterContagionTable laughter_table_from_json(const json& doc) {
  if (!doc.is_object()) bad("laughter table must be a JSON object");
  reject_unknown(doc, {"counts", "prior_alpha"}, "");
  LaughterContagionTable t;
  read_matrix(required(doc, "counts"), t.counts, "counts");
  t.prior_alpha = number(required(doc, "prior_alpha"), "prior_alpha");
  if (!t.is_valid()) bad("laughter table has negative counts or a non-positive prior");
  return t;
}

void save_laughter_table(const LaughterContagionTable& table, const std::string& path) {
  write_json_file(laughter_table_to_json(table), path);
}

LaughterContagionTable load_laughter_table(const std::string& path) {
  return laughter_table_from_json(read_json_file(path));
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json cell_to_json(const PccCell& c) {
  return {{"valence", optional_number(c.valence)}, {"arousal", optional_number(c.arousal)}, {"pairs", c.pairs}};
}

}  // namespace

json pcc_report_to_json(const PhasePccReport& report) {
  json out = json::object();
  for (auto phase : kAllPhases) out[std::string(to_string(phase))] = cell_to_json(report.phase(phase));
  out["overall"] = cell_to_json(report.overall);
  return out;
}

json da_shifts_to_json(const DaShiftTable& table) {
  json rows = json::array();
  for (auto da : kAllDialogueActs) {
    const auto& row = table.row(da);
    if (row.count == 0) continue;
    rows.push_back(
        {{"da", std::string(to_string(da))}, {"mean_dv", row.mean_dv}, {"mean_da", row.mean_da}, {"count", row.count}});
  }
  return rows;
}

json metrics_to_json(const SessionMetrics& m) {
  json curve = json::array();
  for (const auto& x : m.learning_curve) curve.push_back(optional_number(x));
  return {{"turns", m.turns},
          {"emotion_acceptance_rate", m.emotion_acceptance_rate},
          {"accepted_emotion_accuracy", optional_number(m.accepted_emotion_accuracy)},
          {"overall_emotion_accuracy", optional_number(m.overall_emotion_accuracy)},
          {"emotion_updates", m.emotion_updates},
          {"laughter_turns", m.laughter_turns},
          {"laughter_acceptance_rate", optional_number(m.laughter_acceptance_rate)},
          {"accepted_laughter_accuracy", optional_number(m.accepted_laughter_accuracy)},
          {"laughter_updates", m.laughter_updates},
          {"total_latency", m.total_latency},
          {"window", m.window},
          {"learning_curve", curve},
          {"acceptance_curve", m.acceptance_curve},
          {"updates_curve", m.updates_curve}};
}

json make_report(const std::optional<PhasePccReport>& pcc, const std::optional<DaShiftTable>& da_shifts,
                 const std::optional<SessionMetrics>& metrics, const RunConfig& config, std::uint64_t seed) {
  return {{"pcc", pcc ? pcc_report_to_json(*pcc) : json(nullptr)},
          {"da_shifts", da_shifts ? da_shifts_to_json(*da_shifts) : json(nullptr)},
          {"metrics", metrics ? metrics_to_json(*metrics) : json(nullptr)},
          {"config_echo", config_to_json(config)},
          {"seed", seed}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return json::parse(ss.str());
}

void write_json_file(const json& doc, const std::string& path) { write_text_file(doc.dump(2) + "\n", path); }

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace anticipate
