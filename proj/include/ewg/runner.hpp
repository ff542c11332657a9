#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ewg/config.hpp"
#include "ewg/report.hpp"

namespace ewg {

struct RunOutcome {
    std::vector<Table> tables;
    std::size_t rows = 0;
    std::size_t failures = 0;  // points whose solve raised an error
    std::size_t flagged = 0;   // rows off in flux sum or truncation convergence by more than the tolerance
    std::vector<std::string> messages;
    std::string summary;

    // Nonzero in strict mode whenever a point failed or was flagged.
    int exit_code(bool strict) const;
};

// Column name of a channel probability, e.g. "p[2]" or "p[-2:m=-1/2]".
std::string channel_column(Model model, int order, InternalState internal, const std::string& prefix = "p");

// Runs the configured command and returns its tables without writing anything.
RunOutcome execute(const RunConfig& config);

// execute + emit_results; the summary and messages go to `log`.
int run(const ParsedConfig& parsed, std::ostream& console, std::ostream& log);

}  // namespace ewg
