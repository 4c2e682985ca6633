#include <CLI11.hpp>

#include "cvop/log.hpp"
#include "cvop/run.hpp"

int main(int argc, char** argv) {
    cvop::log::init_from_env();
    CLI::App app{"cvop: outer and inner approximations of convex vector optimization problems"};
    cvop::RunConfig cfg;
    std::string algorithm = "primal";
    app.add_option("--problem", cfg.problem, "problem file")->required()->check(CLI::ExistingFile);
    app.add_option("--algorithm", algorithm, "recession | primal | dual")
        ->check(CLI::IsMember({"recession", "primal", "dual"}));
    app.add_option("--epsilon", cfg.epsilon, "approximation tolerance for the upper image");
    app.add_option("--delta", cfg.delta, "approximation tolerance for the recession cone");
    app.add_option("--lambda", cfg.lambda, "direction mixing weight in (0, 1)");
    app.add_option("--cap", cfg.cap, "unboundedness cap for the barrier solver");
    app.add_option("--solver-tol", cfg.solver_tol, "scalar solver tolerance");
    app.add_option("--max-iter", cfg.max_iter, "iteration cap for the recession cone loop");
    app.add_option("--out", cfg.out, "solution JSON path");
    app.add_option("--plot-dir", cfg.plot_dir, "directory for CSV plot data");
    app.add_option("--seed", cfg.seed, "seed for the sampled certificate");
    app.add_option("--samples", cfg.samples, "number of sampled points for the certificate (0 disables)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cvop::kExitParse;
    }
    cfg.algorithm = cvop::parse_algorithm(algorithm);
    return cvop::run(cfg);
}
