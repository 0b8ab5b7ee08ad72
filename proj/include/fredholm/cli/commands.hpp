#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fredholm/cli/document.hpp"

namespace fredholm::cli {

enum ExitStatus : int { kSuccess = 0, kError = 1, kNotWellPosed = 2 };

enum class OutputFormat { Text, Machine };

struct CommandOptions {
    std::size_t nodes = Grid::kDefaultNodes;
    std::optional<double> rank_tol;  // relative to sigma_max * max(q, rm)
    std::optional<std::vector<double>> schedule;
    std::optional<std::size_t> series_cap;
    OutputFormat format = OutputFormat::Text;
};

struct CommandResult {
    OrderedJson report;
    std::string text;
    int status = kSuccess;

    std::string render(OutputFormat format) const;
};

CommandResult analyze_command(const ProblemDocument& doc, const CommandOptions& options);
CommandResult solve_command(const ProblemDocument& doc, const CommandOptions& options);
CommandResult family_command(const ProblemDocument& doc, const CommandOptions& options);
/// `target` is a file path or one of the builtin names ex1..ex5.
CommandResult oracle_check_command(const std::string& target, const CommandOptions& options);

/// Deterministic sample configuration for ex1..ex5.
ProblemDocument builtin_document(const std::string& name);
bool is_builtin_name(const std::string& name);

/// Command-line entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fredholm::cli
