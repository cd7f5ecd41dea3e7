#pragma once

// The CLI subcommands as functions from a RunConfig to a JSON report.

#include <optional>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace kperec::cli {

enum ExitCode : int { Success = 0, BadInput = 1, OverBudget = 2, InvariantViolation = 3 };

struct RunConfig {
  std::optional<std::uint32_t> p;
  /// Inline JSON, or a path to a file holding it.
  std::string curve;
  std::string point;
  std::uint32_t level = 0;
  std::string bound;
  std::string epsilon = "1/1000000";
  /// Defaults to 0, or 2 for demo-isotrivial.
  std::optional<std::uint32_t> max_level;
  std::string search_bound = "1";
  std::uint64_t budget = 5000000;
  bool json = false;
  std::string out;
  /// gs-survey grid: {"p": 5, "a": [[a1 choices], [a2 ...], [a3 ...], [a4 ...], [a6 ...]]}.
  std::string family;
};

struct Report {
  ordered_json body;
  int exit_code = Success;
  /// Set for gs-survey, whose plain output is CSV.
  std::optional<std::string> csv;
};

Report cmd_invariants(const RunConfig& cfg);
Report cmd_disc(const RunConfig& cfg);
Report cmd_height(const RunConfig& cfg);
Report cmd_canheight(const RunConfig& cfg);
Report cmd_torsion(const RunConfig& cfg);
Report cmd_enumerate(const RunConfig& cfg);
Report cmd_descend(const RunConfig& cfg);
Report cmd_gs_check(const RunConfig& cfg);
Report cmd_gs_survey(const RunConfig& cfg);
Report cmd_demo_isotrivial(const RunConfig& cfg);

/// The default survey grid: a4 in {0..4}, a6 in {t, t+1, ..., t+4}.
std::string default_family(std::uint32_t p);

/// Runs the named subcommand, mapping exceptions to exit codes; the error
/// message, if any, goes to `error`.
Report run(const std::string& name, const RunConfig& cfg, std::string& error);

/// Indented key: value rendering of a report.
std::string render_plain(const ordered_json& j);

}  // namespace kperec::cli
