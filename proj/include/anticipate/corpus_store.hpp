#pragma once

// Files: JSON Lines corpora and session logs, the run configuration
// document, predictor model files and analysis reports.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "anticipate/analysis.hpp"
#include "anticipate/controller.hpp"
#include "anticipate/core.hpp"
#include "anticipate/emotion_predictor.hpp"
#include "anticipate/laughter_predictor.hpp"
#include "anticipate/perception.hpp"
#include "anticipate/simulated_user.hpp"

namespace anticipate {

using nlohmann::json;

/// A bad corpus line. line() is 1-based.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A bad configuration value; path() is a JSON path such as "$.p_thr1".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseMode { strict, lenient };

// ---------------------------------------------------------------------------
// Corpus lines

/// One line, keys in the fixed order session_id, turn_index, speaker,
/// phase, valence, arousal, da, laughter_type, laughter_acoustics,
/// transcript, prediction. Reals use at most 9 significant digits.
std::string turn_to_json_line(const Turn& turn);

/// Throws std::invalid_argument describing the first problem. Lenient mode
/// ignores unknown keys and maps unknown dialogue acts to `other`.
Turn turn_from_json(const json& obj, ParseMode mode);

struct CorpusLoadResult {
  std::vector<Turn> turns;
  std::size_t skipped = 0;
};

/// Strict mode throws CorpusError on the first bad line; lenient mode skips
/// bad lines and counts them. Blank lines are ignored. Missing file -> IoError.
CorpusLoadResult load_corpus(const std::string& path, ParseMode mode);

/// Throws IoError when the file cannot be written.
void save_corpus(const std::vector<Turn>& turns, const std::string& path);

/// System turns of `records` carrying their logged prediction, each followed
/// by its user turn.
std::vector<Turn> records_to_turns(const std::vector<TurnRecord>& records);

/// Inverse of records_to_turns for analysis: every pair whose system turn
/// carries a prediction. Recognition and latency fields are reconstructed
/// from the accepted flag and `config`.
std::vector<std::vector<TurnRecord>> records_from_turns(const std::vector<Turn>& turns,
                                                        const AnticipationConfig& config);

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  AnticipationConfig anticipation;
  UserBehaviorModel user;
  NoisyRecognizerConfig recognizer;
  LaughDetectorRules laugh_detector;
  double learning_rate = 0.1;
  double prior_alpha = 1.0;
  SessionPlanParams plan;
  std::size_t metrics_window = 100;
  std::optional<std::uint64_t> seed;

  bool operator==(const RunConfig&) const = default;
};

/// Every key optional; unknown keys, type mismatches and range violations
/// throw ConfigError naming the JSON path.
RunConfig config_from_json(const json& doc);
json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

json user_model_to_json(const UserBehaviorModel& model);

// ---------------------------------------------------------------------------
// Models

json emotion_model_to_json(const EmotionPredictorModel& model);
/// Throws std::invalid_argument on a malformed document.
EmotionPredictorModel emotion_model_from_json(const json& doc);
void save_emotion_model(const EmotionPredictorModel& model, const std::string& path);
EmotionPredictorModel load_emotion_model(const std::string& path);

json laughter_table_to_json(const LaughterContagionTable& table);
LaughterContagionTable laughter_table_from_json(const json& doc);
void save_laughter_table(const LaughterContagionTable& table, const std::string& path);
LaughterContagionTable load_laughter_table(const std::string& path);

// ---------------------------------------------------------------------------
// Reports

json pcc_report_to_json(const PhasePccReport& report);
json da_shifts_to_json(const DaShiftTable& table);
json metrics_to_json(const SessionMetrics& metrics);

/// {"pcc", "da_shifts", "metrics", "config_echo", "seed"}; absent parts are null.
json make_report(const std::optional<PhasePccReport>& pcc, const std::optional<DaShiftTable>& da_shifts,
                 const std::optional<SessionMetrics>& metrics, const RunConfig& config, std::uint64_t seed);

json read_json_file(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const json& doc, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);

}  // namespace anticipate
