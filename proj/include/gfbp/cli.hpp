#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gfbp/solver.hpp"

namespace gfbp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kParameterError = 1,
    kDivergence = 2,
    kVerificationFailure = 3,
};

struct RunConfig {
    std::string experiment;  ///< elastic-net, heron, custom, verify

    // elastic-net
    std::size_t m = 20;
    std::size_t n = 50;
    double gamma = 0.5;
    bool split = false;
    std::optional<std::size_t> hilbert;
    std::string csv_a;
    std::string csv_b;

    // heron
    std::size_t dim = 2;
    std::size_t targets = 10;
    std::size_t samples = 1;
    bool identity_a = false;

    // custom
    std::string problem_path;

    // shared
    std::string start;  ///< "zero" or "random"; empty picks the experiment default
    double a = 1.0;
    double p = 1.0;
    std::optional<double> xi;  ///< absolute penalty scale
    double xi_scale = 0.9;     ///< ξ = xi_scale·cocoercivity(C) when xi is unset
    double q = 1.0;
    bool strict_schedule = false;
    double tol = 1e-5;
    std::size_t max_iters = 200000;
    StopMode stop = StopMode::RelativeChange;
    std::uint64_t seed = 42;
    std::size_t trace_every = 1;
    std::string trace_path;
    std::string summary_path;
    bool json = false;
};

/// Trace CSV: k,F,g,norm_C,inner_disp,alpha,beta,elapsed_s with 17 significant digits.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

int cmd_elastic_net(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_heron(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_custom(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(bool json, std::ostream& out);

/// Parses argv (subcommand first) plus an optional --config JSON file whose
/// keys are the long flag names; flags given on the command line win.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gfbp::cli
