#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace nlsgs::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::string output_dir;
  std::size_t workers = 1;
  std::optional<std::string> scheme;
  std::optional<double> tau;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iters;
  std::optional<std::vector<double>> seed_shift;
  std::string field_out;    ///< solve: field CSV path (default <dir>/field.csv)
  std::string history_out;  ///< solve: history CSV path (default <dir>/history.csv)
};

const std::vector<std::string>& command_names();

/// Runs one subcommand. Errors are reported on `err` and mapped to exit codes.
int run_command(const std::string& name, RunConfig cfg, const Overrides& ov, std::ostream& out,
                std::ostream& err);

/// Maps the exception currently being handled to an exit code, printing its message.
int report_exception(std::ostream& err);

}  // namespace nlsgs::cli
