#pragma once

// Terminal session where a human plays the user. Before each reply the
// engine prints a SHA-256 commitment to its prediction and reveals the
// committed text afterwards, so the prediction provably precedes the input.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "anticipate/core.hpp"
#include "anticipate/corpus_store.hpp"

namespace anticipate {

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// Digest of "<nonce>:<payload>".
std::string commitment_digest(std::string_view nonce, std::string_view payload);

struct HumanEntry {
  EmotionLabel emotion;
  DialogueAct da = DialogueAct::statement;
  std::optional<LaughterType> laugh;
};

struct InteractiveCommand {
  enum class Kind { quit, stats, save } kind = Kind::quit;
  std::string argument;
};

struct EntryError {
  std::string message;
};

using ParsedInput = std::variant<HumanEntry, InteractiveCommand, EntryError>;

inline constexpr const char* kEntryGrammar = "v=INT a=INT da=TAG [laugh=none|social|mirthful]";

/// Parses one line typed by the human. Never throws.
ParsedInput parse_human_input(std::string_view line);

struct InteractiveOptions {
  RunConfig config;
  std::uint64_t seed = 0;
  std::size_t ice_breaking_turns = 3;
  std::optional<std::size_t> max_turns;  // stop after this many turns (used by tests)
};

struct InteractiveSummary {
  std::size_t turns = 0;
  std::size_t accepted = 0;
  std::size_t correct_accepted = 0;
  std::size_t correct = 0;
};

/// Runs the loop until `:quit`, end of input or max_turns. Returns the
/// summary; output goes to `out`.
InteractiveSummary run_interactive(const InteractiveOptions& options, std::istream& in, std::ostream& out);

}  // namespace anticipate
