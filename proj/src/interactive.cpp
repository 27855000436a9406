#include "anticipate/interactive.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "anticipate/controller.hpp"

namespace anticipate {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string commitment_digest(std::string_view nonce, std::string_view payload) {
  std::string msg;
  msg.reserve(nonce.size() + 1 + payload.size());
  msg.append(nonce).append(":").append(payload);
  return sha256_hex(msg);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<int> parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

EntryError grammar_error(const std::string& what) { return {what + "; expected " + kEntryGrammar}; }

}  // namespace

ParsedInput parse_human_input(std::string_view line) {
  line = trim(line);
  if (line.empty()) return grammar_error("empty input");

  if (line.front() == ':') {
    const auto space = line.find_first_of(" \t");
    const std::string_view cmd = line.substr(0, space);
    const std::string_view arg = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
    if (cmd == ":quit") return InteractiveCommand{InteractiveCommand::Kind::quit, {}};
    if (cmd == ":stats") return InteractiveCommand{InteractiveCommand::Kind::stats, {}};
    if (cmd == ":save") {
      if (arg.empty()) return EntryError{"usage: :save PATH"};
      return InteractiveCommand{InteractiveCommand::Kind::save, std::string(arg)};
    }
    return EntryError{"unknown command " + std::string(cmd) + "; commands are :quit, :stats, :save PATH"};
  }

  std::optional<int> v, a;
  std::optional<DialogueAct> da;
  std::optional<LaughterType> laugh;
  std::istringstream tokens{std::string(line)};
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) return grammar_error("malformed token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "v" || key == "a") {
      const char* name = key == "v" ? "valence" : "arousal";
      auto& slot = key == "v" ? v : a;
      if (slot) return grammar_error(std::string("duplicate ") + name);
      const auto x = parse_int(value);
      if (!x) return EntryError{std::string(name) + " must be an integer in [-3,3]"};
      if (!EmotionLabel::in_range(*x)) return EntryError{std::string(name) + " must be in [-3,3]"};
      slot = *x;
    } else if (key == "da") {
      if (da) return grammar_error("duplicate da");
      da = parse_dialogue_act(value);
      if (!da) return EntryError{"unknown dialogue act '" + value + "'"};
    } else if (key == "laugh") {
      if (laugh) return grammar_error("duplicate laugh");
      laugh = parse_laughter_type(value);
      if (!laugh) return EntryError{"laugh must be none, social or mirthful"};
    } else {
      return grammar_error("unknown key '" + key + "'");
    }
  }
  if (!v) return grammar_error("missing v");
  if (!a) return grammar_error("missing a");
  if (!da) return grammar_error("missing da");
  return HumanEntry{EmotionLabel(*v, *a), *da, laugh};
}

namespace {

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

std::string emotion_text(const EmotionLabel& e) {
  return "v=" + std::to_string(e.valence()) + " a=" + std::to_string(e.arousal());
}

std::string describe_system_turn(const Turn& t, std::size_t number) {
  return "system: turn=" + std::to_string(number) + " phase=" + std::string(to_string(t.phase)) + " " +
         emotion_text(t.emotion) + " da=" + std::string(to_string(t.da)) +
         " laugh=" + std::string(to_string(t.laughter_type.value_or(LaughterType::none)));
}

std::string nonce_hex(Rng& rng) {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

std::string optional_ratio(std::size_t num, std::size_t den) {
  if (den == 0) return "n/a";
  return fmt("%.3f", static_cast<double>(num) / static_cast<double>(den));
}

void print_stats(std::ostream& out, const char* label, const InteractiveSummary& s) {
  out << label << ": turns=" << s.turns << " accepted=" << s.accepted
      << " acceptance_rate=" << (s.turns ? optional_ratio(s.accepted, s.turns) : std::string("0.000"))
      << " accepted_accuracy=" << optional_ratio(s.correct_accepted, s.accepted)
      << " accuracy=" << optional_ratio(s.correct, s.turns) << '\n';
}

}  // namespace

InteractiveSummary run_interactive(const InteractiveOptions& options, std::istream& in, std::ostream& out) {
  const RunConfig& config = options.config;
  AnticipationModels models;
  models.emotion.learning_rate = config.learning_rate;
  models.laughter.prior_alpha = config.prior_alpha;
  Rng plan_rng(derive_seed(options.seed, 0));
  Rng nonce_rng(derive_seed(options.seed, 2));
  Rng oracle_rng(derive_seed(options.seed, 1));
  const EmotionRecognizer human_emotion = make_exact_recognizer();
  const LaughterRecognizer human_laugh = make_rule_laughter_recognizer(config.laugh_detector);

  InteractiveSummary summary;
  std::vector<TurnRecord> records;
  std::optional<Turn> previous;

  out << "interactive session, seed " << options.seed << "\n"
      << "reply with: " << kEntryGrammar << "   commands: :quit :stats :save PATH\n";

  for (std::size_t n = 1;; ++n) {
    if (options.max_turns && summary.turns >= *options.max_turns) break;
    const DialoguePhase phase = n <= options.ice_breaking_turns ? DialoguePhase::ice_breaking : DialoguePhase::spontaneous;
    Turn sys = sample_system_turn(config.plan, phase, previous ? &*previous : nullptr, plan_rng);
    sys.session_id = "interactive";
    sys.turn_index = 2 * (n - 1);

    // Predict and commit before the human answers.
    const EmotionPrediction emotion_pred = predict(models.emotion, sys.emotion, sys.da);
    std::string payload = emotion_text(emotion_pred.argmax()) + " confidence=" + fmt("%.9g", emotion_pred.confidence);
    if (sys.laughs()) {
      const LaughterPrediction lp = predict_laughter(models.laughter, *sys.laughter_type);
      payload += " laugh=" + std::string(to_string(lp.argmax())) + " laugh_confidence=" + fmt("%.9g", lp.confidence);
    }
    const std::string nonce = nonce_hex(nonce_rng);
    const std::string commit = commitment_digest(nonce, payload);

    out << describe_system_turn(sys, n) << '\n' << "commit: " << commit << '\n';

    std::optional<HumanEntry> entry;
    while (!entry) {
      out << "> " << std::flush;
      std::string line;
      if (!std::getline(in, line)) {
        print_stats(out, "final", summary);
        return summary;
      }
      ParsedInput parsed = parse_human_input(line);
      if (auto* e = std::get_if<EntryError>(&parsed)) {
        out << "error: " << e->message << '\n';
      } else if (auto* c = std::get_if<InteractiveCommand>(&parsed)) {
        switch (c->kind) {
          case InteractiveCommand::Kind::quit:
            print_stats(out, "final", summary);
            return summary;
          case InteractiveCommand::Kind::stats:
            print_stats(out, "stats", summary);
            break;
          case InteractiveCommand::Kind::save:
            try {
              save_corpus(records_to_turns(records), c->argument);
              out << "saved " << records.size() << " exchanges to " << c->argument << '\n';
            } catch (const std::exception& ex) {
              out << "error: " << ex.what() << '\n';
            }
            break;
        }
      } else {
        entry = std::get<HumanEntry>(parsed);
      }
    }

    Turn user;
    user.session_id = sys.session_id;
    user.turn_index = sys.turn_index + 1;
    user.speaker = Speaker::user;
    user.phase = sys.phase;
    user.emotion = entry->emotion;
    user.da = entry->da;
    user.laughter_type = entry->laugh;
    auto provider = [&user](const Turn&) { return user; };

    out << "reveal: nonce=" << nonce << " prediction=" << payload << '\n';
    out << "verify: " << (commitment_digest(nonce, payload) == commit ? "ok" : "MISMATCH") << '\n';

    auto emotion = run_emotion_turn(models.emotion, config.anticipation, sys, provider, human_emotion, oracle_rng);
    models.emotion = std::move(emotion.model);
    TurnRecord rec = std::move(emotion.record);
    const bool hit = rec.emotion_prediction.argmax() == user.emotion;
    ++summary.turns;
    summary.correct += hit;
    if (rec.emotion_accepted) {
      ++summary.accepted;
      summary.correct_accepted += hit;
    }
    out << "emotion: " << (rec.emotion_accepted ? "accepted" : "rejected")
        << " confidence=" << fmt("%.4f", rec.emotion_prediction.confidence)
        << " threshold=" << fmt("%.4f", config.anticipation.p_thr1) << " hit=" << (hit ? "yes" : "no")
        << (rec.emotion_updated ? " model=updated" : " model=unchanged") << '\n';

    if (sys.laughs()) {
      auto laughter = run_laughter_turn(models.laughter, config.anticipation, sys, provider, human_laugh, oracle_rng);
      models.laughter = laughter.table;
      const auto& lr = laughter.record;
      out << "laughter: " << (lr.accepted ? "accepted" : "rejected")
          << " confidence=" << fmt("%.4f", lr.prediction.confidence)
          << " threshold=" << fmt("%.4f", config.anticipation.p_thr2)
          << " predicted=" << to_string(lr.prediction.argmax()) << " actual=" << to_string(lr.la_actual)
          << (lr.model_updated ? " model=updated" : " model=unchanged") << '\n';
      rec.laughter = lr;
    }
    print_stats(out, "running", summary);
    records.push_back(std::move(rec));
    previous = std::move(sys);
  }
  print_stats(out, "final", summary);
  return summary;
}

}  // namespace anticipate
