#pragma once

// Orchestration: flat key/value experiment configs, dispatch to the
// computational modules, parameter sweeps and CSV/JSON emission.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fraclab::runner {

enum class Command { Count, Lattice, Continuum, Fock, Converge };
enum class Emit { Json, Csv };

std::string_view to_string(Command c) noexcept;
Command parse_command(std::string_view name);

/// Keys are flag names without the leading dashes ("delta-t", "walls").
struct ExperimentConfig {
  Command command = Command::Lattice;
  std::map<std::string, std::string> values;
};

/// Keys accepted by `command` (global keys "emit" and "jobs" included).
const std::vector<std::string>& allowed_keys(Command command);

/// JSON object if the text starts with '{', else key=value lines ('#'
/// comments). Unknown keys are rejected with ConfigInvalid.
ExperimentConfig parse_config_text(Command command, std::string_view text);
ExperimentConfig load_config_file(Command command, const std::string& path);

/// Throws ConfigInvalid for unknown keys or a missing required key.
void check_keys(const ExperimentConfig& config);

struct ResultRecord {
  std::string command;
  nlohmann::ordered_json config;  // echo
  nlohmann::ordered_json result;
  double duration_seconds = 0.0;

  nlohmann::ordered_json to_json() const;
  static ResultRecord from_json(const nlohmann::ordered_json& j);
  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// Validates and dispatches. Module errors propagate as fraclab::Error.
ResultRecord run(const ExperimentConfig& config);

/// Lattice CSV columns, in order.
const std::vector<std::string>& lattice_csv_columns();

/// One lattice row per value of `axis`, in input order. Failed rows keep
/// their config columns and carry the message in the trailing error column.
std::string sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<std::string>& values, int jobs = 1);

/// Serialized output of a record: JSON document, or a header plus rows.
std::string emit(const ResultRecord& record, Emit format);

/// %.17g
std::string format_double(double v);

}  // namespace fraclab::runner
