#pragma once

#include <cstdint>
#include <string>

#include "cvop/benson.hpp"

namespace cvop {

enum class Algorithm { Recession, Primal, Dual };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

struct RunConfig {
    std::string problem;
    Algorithm algorithm = Algorithm::Primal;
    double epsilon = 0.01;
    double delta = 0.1;
    double lambda = 0.5;
    double cap = 1e8;
    double solver_tol = 1e-6;
    int max_iter = 500;
    std::string out = "solution.json";
    std::string plot_dir;
    std::uint64_t seed = 0;
    int samples = 200;  // feasible points sampled for the certificate; 0 disables it

    /// Throws std::invalid_argument unless eps, delta > 0 and lambda in (0, 1).
    void validate() const;
};

enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 1,
    kExitInfeasible = 2,
    kExitNumerical = 3,
    kExitIterationCap = 4,
    kExitDualRedirect = 5,
};

int exit_code(SolveStatus s);
int exit_code(RecessionStatus s);

/// Feasible points of the problem sampled around x0, mapped through Gamma.
std::vector<Vec> sample_upper_image(const ProblemSpec& spec, const Vec& x0, int count, std::uint64_t seed);

/// Loads the problem, runs the chosen algorithm and writes the solution JSON,
/// `iterations.jsonl` next to it and, with a plot directory, the CSV files.
int run(const RunConfig& cfg);

}  // namespace cvop
