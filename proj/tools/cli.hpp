#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "annulus/interval.hpp"

namespace annulus::cli {

enum class Command {
  gamma,
  areas,
  moments,
  ck,
  model_ck,
  avg_ck,
  pair_corr,
  mixed_corr,
  joint_hist,
  sector_var,
  equidist,
  diag_rect,
  limit_dist,
};

enum class Format { csv, json };

/// Everything a run depends on. Two runs with equal configs write identical
/// bytes.
struct RunConfig {
  Command command = Command::gamma;
  double radius = 0.0;
  std::vector<std::int64_t> k;
  std::int64_t M = 0;
  std::int64_t L = 0;
  std::optional<Interval> I;
  std::optional<Interval> I1;
  std::optional<Interval> I2;
  std::optional<Interval> J;
  std::uint64_t seed = 42;
  std::int64_t samples = 1000000;
  std::optional<double> width;
  std::optional<double> width_exponent;
  std::optional<std::int64_t> grid;
  double c = 0.0;
  double d = 0.0;
  int bins = 8;
  double cprime = 2.0;
  double tail = 1e-4;
  /// avg-ck: also average the random-model C_k over the same lags.
  bool with_model = false;
  unsigned threads = 0;
  std::string out;
  std::optional<Format> format;
};

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kValidationError = 2;

/// Thrown for malformed command lines.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Report {
  nlohmann::json json;
  /// Tidy CSV form, empty for commands that only have a JSON form.
  std::string csv;
  /// One line with the key statistic.
  std::string summary;
};

std::string command_name(Command command);
Command parse_command(const std::string& name);

/// "3", "1..8" or "1,2,5".
std::vector<std::int64_t> parse_k_list(const std::string& text);

/// Integer given as decimal or in exponent form ("1e6").
std::int64_t parse_count(const std::string& text);

/// Runs one experiment in memory. Throws on invalid input.
Report execute(const RunConfig& config);

/// Runs an experiment and writes its report. Returns an exit code; messages
/// go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses a command line (without the program name) into a RunConfig.
/// Throws UsageError.
RunConfig parse_run_args(const std::vector<std::string>& args);

/// Reruns every *.json golden record in `golden_dir` and compares the stored
/// values within their tolerances. 0 when all pass, 1 on any mismatch, 2
/// when the directory is missing or a record is malformed.
int verify(const std::string& golden_dir, std::ostream& out, std::ostream& err);

/// Output path for a run: --out as given, else ANNULUS_OUT_DIR/<command>.<ext>
/// when that variable is set, else empty (no file).
std::string output_path(const RunConfig& config, Format format);

/// Entry point shared by the binary and the tests.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace annulus::cli
