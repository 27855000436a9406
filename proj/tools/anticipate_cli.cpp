// anticipate: batch simulation, predictor training, corpus analysis,
// user-model calibration and an interactive session.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "anticipate/analysis.hpp"
#include "anticipate/controller.hpp"
#include "anticipate/corpus_store.hpp"
#include "anticipate/interactive.hpp"
#include "anticipate/simulated_user.hpp"

namespace fs = std::filesystem;
using namespace anticipate;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("ANTICIPATE_LOG");
  if (!env) return LogLevel::error;
  const std::string v = env;
  if (v == "debug") return LogLevel::debug;
  if (v == "info") return LogLevel::info;
  return LogLevel::error;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[info] " << msg << '\n';
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << "[debug] " << msg << '\n';
}

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, const std::string& out_help) {
  cmd->add_option("--config", o.config_path, "Run configuration (JSON)");
  cmd->add_option("--seed", o.seed, "Random seed; drawn from entropy when omitted");
  if (!out_help.empty()) cmd->add_option("--out", o.out, out_help);
  cmd->add_flag("--quiet", o.quiet, "Suppress the summary line");
}

RunConfig load_run_config(const CommonOptions& o) {
  if (o.config_path.empty()) return {};
  try {
    return load_config(o.config_path);
  } catch (const ConfigError& e) {
    throw UsageError(std::string("config error ") + e.what());
  }
}

// --seed, then the config's seed, then entropy (announced on stderr).
std::uint64_t resolve_seed(const CommonOptions& o, const RunConfig& config) {
  if (o.seed) return *o.seed;
  if (config.seed) return *config.seed;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::cerr << "seed: " << seed << '\n';
  return seed;
}

std::string fmt_opt(const std::optional<double>& x) {
  if (!x) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *x);
  return buf;
}

std::string fmt(double x) { return fmt_opt(x); }

// ---------------------------------------------------------------------------

struct SimulateOptions {
  CommonOptions common;
  long long sessions = 1;
  long long turns = 500;
};

int run_simulate(const SimulateOptions& o) {
  if (o.sessions < 1) throw UsageError("sessions must be ≥ 1");
  if (o.turns < 1) throw UsageError("turns must be ≥ 1");
  RunConfig config = load_run_config(o.common);
  const std::uint64_t seed = resolve_seed(o.common, config);
  config.seed = seed;
  const fs::path out_dir = o.common.out.empty() ? fs::path("out") : fs::path(o.common.out);
  fs::create_directories(out_dir);

  const Oracles oracles{make_noisy_recognizer(config.recognizer), make_rule_laughter_recognizer(config.laugh_detector)};
  auto one_session = [&](std::size_t index) {
    char id[32];
    std::snprintf(id, sizeof id, "session-%03zu", index);
    Rng plan_rng(derive_seed(seed, 2 * index));
    const auto plan = make_session_plan(config.plan, static_cast<std::size_t>(o.turns), id, plan_rng);
    AnticipationModels models;
    models.emotion.learning_rate = config.learning_rate;
    models.laughter.prior_alpha = config.prior_alpha;
    return run_session(models, config.anticipation, plan, config.user, oracles, derive_seed(seed, 2 * index + 1),
                       config.metrics_window);
  };

  std::vector<std::future<SessionResult>> futures;
  for (long long i = 0; i < o.sessions; ++i) {
    futures.push_back(std::async(std::launch::async, one_session, static_cast<std::size_t>(i)));
  }
  std::vector<std::vector<TurnRecord>> sessions;
  std::vector<Turn> all_turns;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    SessionResult r = futures[i].get();
    const auto turns = records_to_turns(r.records);
    char name[32];
    std::snprintf(name, sizeof name, "session_%03zu.jsonl", i);
    save_corpus(turns, (out_dir / name).string());
    all_turns.insert(all_turns.end(), turns.begin(), turns.end());
    sessions.push_back(std::move(r.records));
    log_debug(std::string("session ") + std::to_string(i) + " done");
  }
  save_corpus(all_turns, (out_dir / "corpus.jsonl").string());

  const auto pairs = pair_turns(all_turns);
  const PhasePccReport pcc = phase_segmented_pcc(pairs);
  const DaShiftTable shifts = da_shift_table(pairs);
  const SessionMetrics metrics = aggregate_metrics(sessions, config.metrics_window);
  write_json_file(make_report(pcc, shifts, metrics, config, seed), (out_dir / "report.json").string());
  write_text_file(da_shift_csv(shifts), (out_dir / "da_shifts.csv").string());
  log_info("wrote " + (out_dir / "report.json").string());

  if (!o.common.quiet) {
    std::cout << "sessions=" << o.sessions << " turns=" << metrics.turns
              << " acceptance=" << fmt(metrics.emotion_acceptance_rate)
              << " accepted_accuracy=" << fmt_opt(metrics.accepted_emotion_accuracy)
              << " overall_accuracy=" << fmt_opt(metrics.overall_emotion_accuracy)
              << " laughter_acceptance=" << fmt_opt(metrics.laughter_acceptance_rate)
              << " valence_pcc_spontaneous=" << fmt_opt(pcc.phase(DialoguePhase::spontaneous).valence)
              << " valence_pcc_ice_breaking=" << fmt_opt(pcc.phase(DialoguePhase::ice_breaking).valence)
              << " valence_pcc_ending=" << fmt_opt(pcc.phase(DialoguePhase::ending).valence)
              << " arousal_pcc=" << fmt_opt(pcc.overall.arousal) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainOptions {
  CommonOptions common;
  std::string corpus;
  int epochs = 20;
};

std::vector<Turn> load_strict_corpus(const std::string& path) {
  try {
    return load_corpus(path, ParseMode::strict).turns;
  } catch (const CorpusError& e) {
    throw UsageError(std::string("unparseable corpus: ") + e.what());
  }
}

int run_train(const TrainOptions& o) {
  if (o.epochs < 1) throw UsageError("epochs must be ≥ 1");
  if (o.common.out.empty()) throw UsageError("--out MODEL is required");
  const RunConfig config = load_run_config(o.common);
  const auto turns = load_strict_corpus(o.corpus);
  std::vector<EmotionTrainingPair> pairs;
  for (const auto& [sys, user] : pair_turns(turns)) pairs.push_back({sys.emotion, sys.da, user.emotion});
  if (pairs.empty()) throw UsageError("corpus has no adjacent system→user pairs");

  const std::uint64_t seed = resolve_seed(o.common, config);
  EmotionPredictorModel model;
  model.learning_rate = config.learning_rate;
  model = train_batch(model, pairs, o.epochs, seed);
  save_emotion_model(model, o.common.out);
  if (!o.common.quiet) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "pairs=%zu epochs=%d cross_entropy=%.6f", pairs.size(), o.epochs,
                  mean_cross_entropy(model, pairs));
    std::cout << buf << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct AnalyzeOptions {
  CommonOptions common;
  std::string corpus;
  std::string csv;
};

int run_analyze(const AnalyzeOptions& o) {
  if (o.common.out.empty()) throw UsageError("--out REPORT is required");
  const RunConfig config = load_run_config(o.common);
  const auto turns = load_strict_corpus(o.corpus);
  const auto pairs = pair_turns(turns);

  const PhasePccReport pcc = phase_segmented_pcc(pairs);
  std::optional<DaShiftTable> shifts;
  if (!pairs.empty()) shifts = da_shift_table(pairs);
  std::optional<SessionMetrics> metrics;
  const auto sessions = records_from_turns(turns, config.anticipation);
  if (!sessions.empty()) metrics = aggregate_metrics(sessions, config.metrics_window);

  const std::uint64_t seed = o.common.seed.value_or(config.seed.value_or(0));
  write_json_file(make_report(pcc, shifts, metrics, config, seed), o.common.out);
  if (!o.csv.empty()) write_text_file(da_shift_csv(shifts.value_or(DaShiftTable{})), o.csv);
  if (!o.common.quiet) {
    std::cout << "pairs=" << pairs.size()
              << " valence_pcc_spontaneous=" << fmt_opt(pcc.phase(DialoguePhase::spontaneous).valence)
              << " valence_pcc_overall=" << fmt_opt(pcc.overall.valence)
              << " arousal_pcc=" << fmt_opt(pcc.overall.arousal) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct CalibrateOptions {
  CommonOptions common;
  std::string targets;
  int trials = 2000;
};

CalibrationTargets parse_targets(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error&) {
    std::ifstream in(text);
    if (!in) throw UsageError("targets must be a JSON object or a path to one");
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("invalid targets JSON: ") + e.what());
    }
  }
  if (!doc.is_object()) throw UsageError("targets must be a JSON object");
  CalibrationTargets t;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::optional<double>* slot = nullptr;
    if (it.key() == "ice_breaking_valence") slot = &t.ice_breaking_valence;
    if (it.key() == "spontaneous_valence") slot = &t.spontaneous_valence;
    if (it.key() == "ending_valence") slot = &t.ending_valence;
    if (it.key() == "arousal") slot = &t.arousal;
    if (!slot) throw UsageError("unknown target " + it.key());
    if (!it->is_number()) throw UsageError(it.key() + ": PCC must be a number");
    const double x = it->get<double>();
    if (!(x >= -1.0 && x <= 1.0)) throw UsageError("PCC must be in [-1,1]");
    *slot = x;
  }
  return t;
}

int run_calibrate(const CalibrateOptions& o) {
  if (o.common.out.empty()) throw UsageError("--out CONFIG is required");
  if (o.trials < 2) throw UsageError("trials must be ≥ 2");
  const CalibrationTargets targets = parse_targets(o.targets);
  RunConfig config = load_run_config(o.common);
  const std::uint64_t seed = resolve_seed(o.common, config);
  const CalibrationResult result = calibrate(config.user, targets, o.trials, seed, config.plan);
  config.user = result.model;
  save_config(config, o.common.out);
  if (!o.common.quiet) {
    auto line = [](const char* name, const std::optional<CalibrationOutcome>& c) {
      if (!c) return;
      std::cout << name << ": target=" << fmt(c->target) << " achieved=" << fmt_opt(c->achieved)
                << " weight=" << fmt(c->weight) << '\n';
    };
    line("ice_breaking_valence", result.ice_breaking_valence);
    line("spontaneous_valence", result.spontaneous_valence);
    line("ending_valence", result.ending_valence);
    line("arousal", result.arousal);
    std::cout << "residual=" << fmt(result.residual) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

int run_interactive_cmd(const CommonOptions& o) {
  InteractiveOptions options;
  options.config = load_run_config(o);
  options.seed = resolve_seed(o, options.config);
  run_interactive(options, std::cin, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anticipatory affective dialogue engine"};
  app.require_subcommand(1, 1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run sessions against the simulated user");
  simulate->add_option("--sessions", sim.sessions, "Number of sessions")->capture_default_str();
  simulate->add_option("--turns", sim.turns, "System turns per session")->capture_default_str();
  add_common(simulate, sim.common, "Output directory");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Pre-train the emotion predictor on a corpus");
  train_cmd->add_option("--corpus", train.corpus, "Corpus (.jsonl)")->required();
  train_cmd->add_option("--epochs", train.epochs, "Training epochs")->capture_default_str();
  add_common(train_cmd, train.common, "Model file to write");

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Correlation and shift analysis of a corpus");
  analyze_cmd->add_option("--corpus", analyze.corpus, "Corpus (.jsonl)")->required();
  analyze_cmd->add_option("--csv", analyze.csv, "Also write the dialogue-act shift table as CSV");
  add_common(analyze_cmd, analyze.common, "Report file to write");

  CalibrateOptions cal;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit simulated-user mimicry weights to target PCCs");
  calibrate_cmd->add_option("--targets", cal.targets, "Targets as JSON text or a JSON file")->required();
  calibrate_cmd->add_option("--trials", cal.trials, "Simulated pairs per candidate")->capture_default_str();
  add_common(calibrate_cmd, cal.common, "Config file to write");

  CommonOptions inter;
  auto* interactive = app.add_subcommand("interactive", "Play the user against the engine in the terminal");
  add_common(interactive, inter, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*train_cmd) return run_train(train);
    if (*analyze_cmd) return run_analyze(analyze);
    if (*calibrate_cmd) return run_calibrate(cal);
    if (*interactive) return run_interactive_cmd(inter);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
