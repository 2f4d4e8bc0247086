// commands.hpp: subcommands of the weylchsh tool

#pragma once

#include <iosfwd>
#include <string>

#include "cli/config.hpp"

namespace weylchsh::cli {

enum ExitCode { kSuccess = 0, kNumericalFailure = 1, kInvalidConfig = 2 };

struct Report {
    ordered_json result;
    std::string csv;
    int status{kSuccess};
    std::string diagnostic;
};

Report cmd_correlator(const RunConfig& c);
Report cmd_oracle(const RunConfig& c);
Report cmd_jc(const RunConfig& c);
Report cmd_spin(const RunConfig& c);
Report cmd_optimize(const RunConfig& c);
Report cmd_sweep(const RunConfig& c);

// Envelope with tool name, version, command and resolved config.
ordered_json envelope(const std::string& command, const RunConfig& c, const Report& r);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace weylchsh::cli
