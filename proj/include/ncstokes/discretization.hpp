#pragma once

#include "ncstokes/assembly.hpp"
#include "ncstokes/femspace.hpp"
#include "ncstokes/mesh.hpp"
#include "ncstokes/problems.hpp"
#include "ncstokes/solver.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace ncstokes {

/// The four velocity-pressure pairs of the benchmark tables.
enum class PairId { Ncp1P0, Ncp1P1, Ncp1P1Stab, P1P1Stab };

/// "ncp1-p0", "ncp1-p1", "ncp1-p1-stab", "p1-p1-stab"
std::string_view to_string(PairId pair);
std::optional<PairId> parse_pair(std::string_view name);
std::span<const PairId> all_pairs();

/// Spaces plus the stabilization switch.
struct Scheme {
    SpaceKind velocity = SpaceKind::NCP1_vector;
    SpaceKind pressure = SpaceKind::P1_scalar;
    bool stabilized = false;
};

Scheme scheme(PairId pair);

/// Throws std::invalid_argument for combinations without a well-posed
/// discrete problem: stabilization on P0 pressure, unstabilized P1-P1, or a
/// scalar velocity space.
void validate(const Scheme& scheme);

struct SolveOptions {
    AssemblyOptions assembly;
    SaddleOptions saddle;
};

/// Everything produced by one discrete solve.
struct Discretization {
    DofMap velocity;
    DofMap pressure;
    ReducedSystem system;
    SolutionField solution;
};

Discretization solve_problem(const Mesh& mesh, const Scheme& scheme, const ProblemSpec& problem,
                             const SolveOptions& opts = {});

} // namespace ncstokes
