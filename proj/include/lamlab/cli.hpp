#pragma once

#include "lamlab/energy.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lamlab {

/// Settings shared by all subcommands; JSON file values first, flags override.
struct Config {
    double theta = kPi / 4.0;
    bool explicit_vectors = false;
    Vector2 v1;
    Vector2 v2;
    double lambda = 0.5;
    double manifold_tol = kDefaultTol;
    double laminate_tol = kDefaultTol;
    double range = 3.0;
    int n = 61;
    int n_dirs = 720;

    SlipSystem slip() const;
};

/// Parses a config document (see README for the schema). Throws InvalidSlipSystem on
/// bad shapes or values.
Config parse_config(const std::string& json_text);

/// "%.17g", or "inf" for +infinity.
std::string format_number(double x);

/// Entry point behind the lamlab executable. args excludes the program name.
/// Exit codes: 0 success, 2 usage/config error, 3 domain error (e.g. det F != 1).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lamlab
