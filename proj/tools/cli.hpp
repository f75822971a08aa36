#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tapearm/model.hpp"

namespace tapearm::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kIo = 3,
};

enum class AngleUnit { Degrees, Radians };
enum class OutputFormat { Csv, Svg, Both };

struct CliConfig {
  std::filesystem::path params_file;  // empty: defaults, or $TAPEARM_PARAMS
  std::filesystem::path out_dir = ".";
  AngleUnit unit = AngleUnit::Degrees;
  OutputFormat format = OutputFormat::Both;

  bool wants_csv() const { return format != OutputFormat::Svg; }
  bool wants_svg() const { return format != OutputFormat::Csv; }
};

inline constexpr const char* kParamsEnvVar = "TAPEARM_PARAMS";

/// Parses "16.7deg", "0.3rad" or a bare number in `unit`. Throws
/// std::invalid_argument on malformed text.
double parse_angle(const std::string& text, AngleUnit unit);
double parse_length(const std::string& text);

/// Shortest round-trip decimal text for a double, used for every numeric field.
std::string format_number(double v);

/// Runs one command line (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tapearm::cli
