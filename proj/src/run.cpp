#include "cvop/run.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "cvop/json_io.hpp"
#include "cvop/lp.hpp"
#include "cvop/log.hpp"
#include "cvop/plot.hpp"

namespace cvop {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Recession: return "recession";
        case Algorithm::Primal: return "primal";
        case Algorithm::Dual: return "dual";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& s) {
    if (s == "recession") return Algorithm::Recession;
    if (s == "primal") return Algorithm::Primal;
    if (s == "dual") return Algorithm::Dual;
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

void RunConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0, 1)");
    if (!(cap > 0.0)) throw std::invalid_argument("cap must be positive");
    if (!(solver_tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("max-iter must be at least 1");
}

int exit_code(SolveStatus s) {
    switch (s) {
        case SolveStatus::Done:
        case SolveStatus::Bounded: return kExitOk;
        case SolveStatus::Infeasible:
        case SolveStatus::SlaterFailure: return kExitInfeasible;
        case SolveStatus::IterationLimit: return kExitIterationCap;
        case SolveStatus::DualRedirect: return kExitDualRedirect;
        case SolveStatus::NumericalFailure: return kExitNumerical;
    }
    return kExitNumerical;
}

int exit_code(RecessionStatus s) {
    switch (s) {
        case RecessionStatus::Done:
        case RecessionStatus::Bounded: return kExitOk;
        case RecessionStatus::Infeasible:
        case RecessionStatus::SlaterFailure: return kExitInfeasible;
        case RecessionStatus::IterationLimit: return kExitIterationCap;
    }
    return kExitNumerical;
}

std::vector<Vec> sample_upper_image(const ProblemSpec& spec, const Vec& x0, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Vec> out;
    const double scales[] = {0.1, 1.0, 10.0};
    for (int attempt = 0; attempt < 50 * count && static_cast<int>(out.size()) < count; ++attempt) {
        Vec x(spec.n);
        for (int i = 0; i < spec.n; ++i) x(i) = gauss(rng);
        x = x0 + scales[attempt % 3] * x;
        bool ok = true;
        try {
            for (const auto& g : spec.constraints)
                if (evaluate(*g, x) > 0.0) ok = false;
            if (!ok) continue;
            Vec y = spec.objective_values(x);
            // Points above Gamma(x) in a random cone direction belong to the upper image too.
            Vec shift = Vec::Zero(spec.q);
            for (const auto& r : spec.cone.R) shift += std::abs(unit(rng)) * r;
            out.push_back(y + shift);
        } catch (const DomainError&) {
        }
    }
    return out;
}

namespace {

void write_json(const std::string& path, const Json& j) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << '\n';
}

void write_iterations(const std::string& out, const ConeApproximation& a) {
    const auto path = std::filesystem::path(out).parent_path() / "iterations.jsonl";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    for (const auto& r : a.log) os << to_json(r).dump() << '\n';
}

void write_plots(const RunConfig& cfg, const ProblemSpec& spec, const ConeApproximation& a, const Polyhedron* outer,
                 const Polyhedron* inner) {
    if (cfg.plot_dir.empty()) return;
    std::filesystem::create_directories(cfg.plot_dir);
    emit_plot_data(cfg.plot_dir, a);
    if (spec.q == 2) {
        const auto p0 = a.outer();
        if (!p0.halfspaces.empty()) {
            std::ofstream os(std::filesystem::path(cfg.plot_dir) / "p0.csv");
            os << "set,x,y\n";
            auto v = hrep_to_vrep(p0);
            if (v)
                for (const auto& p : counterclockwise(v->vertices)) os << "vertex," << p(0) << ',' << p(1) << '\n';
        }
        if (outer && inner) write_upper_image_csv(cfg.plot_dir, spec, *outer, *inner);
    }
    if (spec.q == 3 && !a.y_in.empty() && !a.y_out.empty()) write_cross_section_csv(cfg.plot_dir, a.y_in, a.y_out);
}

}  // namespace

int run(const RunConfig& cfg) {
    ProblemSpec spec;
    try {
        cfg.validate();
        spec = load_problem(cfg.problem);
    } catch (const ProblemError& e) {
        log::warn(std::string("problem file: ") + e.what());
        return kExitParse;
    } catch (const std::exception& e) {
        log::warn(e.what());
        return kExitParse;
    }
    log::info("loaded '" + spec.name + "': n=" + std::to_string(spec.n) + " q=" + std::to_string(spec.q));

    BensonOptions opts;
    opts.epsilon = cfg.epsilon;
    opts.recession.delta = cfg.delta;
    opts.recession.max_iter = cfg.max_iter;
    opts.recession.solver.lambda = cfg.lambda;
    opts.recession.solver.cap = cfg.cap;
    opts.recession.solver.tol = cfg.solver_tol;

    try {
        if (cfg.algorithm == Algorithm::Recession) {
            const TMatrix T = TMatrix::standard(spec.cone.c);
            const auto a = approximate_recession_cone(spec, T, opts.recession);
            Json j = approximation_json(spec, a, cfg.delta);
            if (a.status == RecessionStatus::Done || a.status == RecessionStatus::Bounded) {
                const auto rep = certify_delta(a.y_in, a.y_out, cfg.delta);
                j["delta_certificate"] = {{"ok", rep.ok}, {"distance", rep.distance}, {"message", rep.message}};
            }
            write_json(cfg.out, j);
            write_iterations(cfg.out, a);
            write_plots(cfg, spec, a, nullptr, nullptr);
            log::info("status: " + to_string(a.status));
            return exit_code(a.status);
        }

        const auto sol = cfg.algorithm == Algorithm::Primal ? solve_primal(spec, opts) : solve_dual(spec, opts);
        Json j = solution_json(sol);
        if (cfg.samples > 0 && (sol.status == SolveStatus::Done || sol.status == SolveStatus::Bounded)) {
            const auto pts = sample_upper_image(spec, sol.approx.x0, cfg.samples, cfg.seed);
            const auto rep = certify_solution(spec, sol, pts);
            j["certificate"] = {{"ok", rep.ok}, {"samples", pts.size()}, {"worst", rep.worst}, {"seed", cfg.seed}};
            if (!rep.ok) log::warn("sampled certificate failed: " + rep.message);
        }
        write_json(cfg.out, j);
        write_iterations(cfg.out, sol.approx);
        write_plots(cfg, spec, sol.approx, &sol.outer, &sol.inner);
        if (sol.status == SolveStatus::DualRedirect) log::warn(sol.message + "; rerun with --algorithm primal");
        log::info("status: " + to_string(sol.status));
        return exit_code(sol.status);
    } catch (const NumericalFailure& e) {
        log::warn(std::string("numerical failure: ") + e.what());
        return kExitNumerical;
    } catch (const LpFailure& e) {
        log::warn(std::string("LP failure: ") + e.what());
        return kExitNumerical;
    }
}

}  // namespace cvop
