#include "ncstokes/cli.hpp"

#include "ncstokes/analysis.hpp"
#include "ncstokes/discretization.hpp"
#include "ncstokes/errors.hpp"
#include "ncstokes/output.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <atomic>
#include <charconv>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace ncstokes {

namespace {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string pair = "ncp1-p1";
    std::string problem;
    std::string levels;
    std::optional<double> nu;
    std::string mesh;
    std::string out;
    std::string solver = "direct";
    std::string stab = "auto";
    std::string pattern = "diagonal";
    int jobs = 1;
    int threads = 1;
};

std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> levels;
    std::size_t pos = 0;
    while (pos <= text.size() && !text.empty()) {
        const auto comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc() || ptr != item.data() + item.size() || value < 1) {
            throw ConfigError("invalid level '" + item + "' (expected positive integers separated by commas)");
        }
        if (!levels.empty() && value <= levels.back()) {
            throw ConfigError("levels must be strictly increasing");
        }
        levels.push_back(value);
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    if (levels.empty()) {
        throw ConfigError("no levels given");
    }
    return levels;
}

Scheme resolve_scheme(const RunConfig& cfg) {
    const auto pair = parse_pair(cfg.pair);
    if (!pair) {
        throw ConfigError("unknown pair '" + cfg.pair + "' (expected ncp1-p0, ncp1-p1, ncp1-p1-stab or p1-p1-stab)");
    }
    Scheme s = scheme(*pair);
    if (cfg.stab == "on") {
        s.stabilized = true;
    } else if (cfg.stab == "off") {
        s.stabilized = false;
    } else if (cfg.stab != "auto") {
        throw ConfigError("--stab expects on, off or auto");
    }
    try {
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

MeshPattern resolve_pattern(const std::string& name) {
    if (name == "diagonal") {
        return MeshPattern::Diagonal;
    }
    if (name == "skew3") {
        return MeshPattern::Skew3;
    }
    throw ConfigError("unknown mesh pattern '" + name + "' (expected diagonal or skew3)");
}

SolveOptions resolve_solve_options(const RunConfig& cfg) {
    SolveOptions opts;
    opts.assembly.threads = cfg.threads;
    if (cfg.solver == "direct") {
        opts.saddle.method = SaddleMethod::Direct;
    } else if (cfg.solver == "uzawa") {
        opts.saddle.method = SaddleMethod::Uzawa;
    } else {
        throw ConfigError("--solver expects direct or uzawa");
    }
    return opts;
}

ProblemSpec resolve_problem(const RunConfig& cfg) {
    try {
        return make_problem(cfg.problem, cfg.nu);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

// Runs job(i) for i in [0, count) on up to `jobs` threads. Results are stored
// by index, so output order never depends on completion order.
void run_parallel(int count, int jobs, const std::function<void(int)>& job) {
    const int workers = std::clamp(jobs, 1, std::max(1, count));
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void emit(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (cfg.out.empty() || cfg.out == "-") {
        write(out);
    } else {
        write_file(cfg.out, write);
    }
}

int cmd_convergence(RunConfig cfg, std::ostream& out, std::ostream& err) {
    if (cfg.problem.empty()) {
        cfg.problem = "mms1";
    }
    if (!cfg.mesh.empty()) {
        throw ConfigError("convergence runs use structured meshes; --mesh is not accepted");
    }
    const auto scheme = resolve_scheme(cfg);
    const auto problem = resolve_problem(cfg);
    if (!problem.exact) {
        throw ConfigError("problem '" + problem.name + "' has no exact solution");
    }
    const auto levels = parse_levels(cfg.levels);
    const auto pattern = resolve_pattern(cfg.pattern);
    const auto opts = resolve_solve_options(cfg);

    std::vector<ConvergenceRecord> records(levels.size());
    run_parallel(static_cast<int>(levels.size()), cfg.jobs, [&](int i) {
        const int n = levels[static_cast<std::size_t>(i)];
        const auto mesh = build_structured_mesh(n, pattern);
        const auto d = solve_problem(mesh, scheme, problem, opts);
        auto& r = records[static_cast<std::size_t>(i)];
        r.n = n;
        r.h = mesh.h();
        r.errors = error_norms(mesh, d.velocity, d.pressure, d.solution, *problem.exact);
        if (d.system.n_constraints() > 1) {
            fmt::print(err, "note: n={} has {} spurious pressure modes; pressure constrained orthogonal to them\n", n,
                       d.system.n_constraints() - 1);
        }
    });
    records = convergence_rates(std::move(records));
    emit(cfg, out, [&](std::ostream& o) { write_convergence_csv(o, records); });
    return kExitOk;
}

int cmd_solve(RunConfig cfg, std::ostream& out, std::ostream&) {
    if (cfg.problem.empty()) {
        cfg.problem = "cavity";
    }
    const auto scheme = resolve_scheme(cfg);
    const auto problem = resolve_problem(cfg);
    const auto opts = resolve_solve_options(cfg);
    if (cfg.out.empty()) {
        throw ConfigError("solve needs --out <file.vtk>");
    }
    std::optional<Mesh> mesh;
    if (!cfg.mesh.empty()) {
        if (!cfg.levels.empty()) {
            throw ConfigError("give either --mesh or --levels, not both");
        }
        mesh.emplace(read_mesh(std::filesystem::path(cfg.mesh)));
    } else {
        const auto levels = parse_levels(cfg.levels);
        if (levels.size() != 1) {
            throw ConfigError("solve takes a single level");
        }
        mesh.emplace(build_structured_mesh(levels.front(), resolve_pattern(cfg.pattern)));
    }
    const auto d = solve_problem(*mesh, scheme, problem, opts);
    emit(cfg, out, [&](std::ostream& o) { write_vtk(o, *mesh, d.velocity, d.pressure, d.solution); });
    return kExitOk;
}

int cmd_infsup(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto scheme = resolve_scheme(cfg);
    const auto levels = parse_levels(cfg.levels);
    const auto pattern = resolve_pattern(cfg.pattern);
    if (scheme.velocity != SpaceKind::NCP1_vector) {
        throw ConfigError("infsup supports the NCP1 velocity pairs");
    }
    InfSupOptions opts;
    if (cfg.nu) {
        if (!(*cfg.nu > 0.0)) {
            throw ConfigError("--nu must be positive");
        }
        opts.nu = *cfg.nu;
    }
    opts.assembly.threads = cfg.threads;
    std::vector<InfSupEstimate> estimates(levels.size());
    run_parallel(static_cast<int>(levels.size()), cfg.jobs, [&](int i) {
        estimates[static_cast<std::size_t>(i)] = estimate_infsup(levels[static_cast<std::size_t>(i)], pattern, scheme, opts);
    });
    for (const auto& e : estimates) {
        if (e.spurious_modes > 0) {
            fmt::print(err, "n={}: {} spurious pressure modes, beta_h = 0; on their complement beta = {:.10g}\n", e.n,
                       e.spurious_modes, e.beta_reduced);
        }
    }
    emit(cfg, out, [&](std::ostream& o) { write_infsup_csv(o, estimates); });
    return kExitOk;
}

void add_common(CLI::App& cmd, RunConfig& cfg) {
    cmd.add_option("--pair", cfg.pair, "ncp1-p0 | ncp1-p1 | ncp1-p1-stab | p1-p1-stab")->capture_default_str();
    cmd.add_option("--levels", cfg.levels, "comma-separated mesh sizes n, strictly increasing");
    cmd.add_option("--out", cfg.out, "output file (default: standard output for CSV)");
    cmd.add_option("--stab", cfg.stab, "on | off | auto (pair default)")->capture_default_str();
    cmd.add_option("--pattern", cfg.pattern, "structured mesh diagonals: diagonal | skew3")->capture_default_str();
    cmd.add_option("--jobs", cfg.jobs, "levels processed concurrently")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--threads", cfg.threads, "assembly threads per level")->check(CLI::PositiveNumber)->capture_default_str();
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Crouzeix-Raviart / P1 Stokes solver and convergence studies", "ncstokes"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* conv = app.add_subcommand("convergence", "error table over a sequence of structured meshes");
    add_common(*conv, cfg);
    conv->add_option("--problem", cfg.problem, "mms1 (default)");
    conv->add_option("--nu", cfg.nu, "viscosity (default: problem default)");
    conv->add_option("--mesh", cfg.mesh, "not accepted; present for a uniform flag set");
    conv->add_option("--solver", cfg.solver, "direct | uzawa")->capture_default_str();

    auto* solve = app.add_subcommand("solve", "single solve written as legacy VTK");
    add_common(*solve, cfg);
    solve->add_option("--problem", cfg.problem, "mms1 | cavity (default)");
    solve->add_option("--nu", cfg.nu, "viscosity (default: problem default)");
    solve->add_option("--mesh", cfg.mesh, "mesh file instead of a structured level");
    solve->add_option("--solver", cfg.solver, "direct | uzawa")->capture_default_str();

    auto* infsup = app.add_subcommand("infsup", "discrete inf-sup constants");
    add_common(*infsup, cfg);
    infsup->add_option("--nu", cfg.nu, "stiffness viscosity (the estimate is rescaled)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (conv->parsed()) {
            return cmd_convergence(cfg, out, err);
        }
        if (solve->parsed()) {
            return cmd_solve(cfg, out, err);
        }
        return cmd_infsup(cfg, out, err);
    } catch (const NumericalError& e) {
        fmt::print(err, "numerical failure: {}\n", e.what());
        return kExitNumerical;
    } catch (const IoError& e) {
        fmt::print(err, "I/O error: {}\n", e.what());
        return kExitIo;
    } catch (const Error& e) {
        fmt::print(err, "input error: {}\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        fmt::print(err, "configuration error: {}\n", e.what());
        return kExitConfig;
    }
}

} // namespace ncstokes
