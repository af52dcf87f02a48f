#include "ncstokes/discretization.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace ncstokes {

namespace {

constexpr std::array<PairId, 4> kPairs{PairId::Ncp1P0, PairId::Ncp1P1, PairId::Ncp1P1Stab, PairId::P1P1Stab};

} // namespace

std::string_view to_string(PairId pair) {
    switch (pair) {
    case PairId::Ncp1P0:
        return "ncp1-p0";
    case PairId::Ncp1P1:
        return "ncp1-p1";
    case PairId::Ncp1P1Stab:
        return "ncp1-p1-stab";
    case PairId::P1P1Stab:
        return "p1-p1-stab";
    }
    return "?";
}

std::optional<PairId> parse_pair(std::string_view name) {
    for (PairId p : kPairs) {
        if (to_string(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

std::span<const PairId> all_pairs() {
    return kPairs;
}

Scheme scheme(PairId pair) {
    switch (pair) {
    case PairId::Ncp1P0:
        return {SpaceKind::NCP1_vector, SpaceKind::P0_scalar, false};
    case PairId::Ncp1P1:
        return {SpaceKind::NCP1_vector, SpaceKind::P1_scalar, false};
    case PairId::Ncp1P1Stab:
        return {SpaceKind::NCP1_vector, SpaceKind::P1_scalar, true};
    case PairId::P1P1Stab:
        return {SpaceKind::P1_vector, SpaceKind::P1_scalar, true};
    }
    throw std::invalid_argument("unknown pair");
}

void validate(const Scheme& s) {
    if (components(s.velocity) != 2) {
        throw std::invalid_argument("velocity space must be vector valued");
    }
    if (components(s.pressure) != 1) {
        throw std::invalid_argument("pressure space must be scalar");
    }
    if (s.stabilized && s.pressure != SpaceKind::P1_scalar) {
        throw std::invalid_argument("projection stabilization requires P1 pressure");
    }
    if (s.velocity == SpaceKind::P1_vector && s.pressure == SpaceKind::P1_scalar && !s.stabilized) {
        throw std::invalid_argument("the equal-order P1-P1 pair needs stabilization");
    }
}

Discretization solve_problem(const Mesh& mesh, const Scheme& s, const ProblemSpec& problem, const SolveOptions& opts) {
    validate(s);
    auto velocity = build_dofmap(mesh, s.velocity);
    auto pressure = build_dofmap(mesh, s.pressure);
    const auto saddle = assemble_saddle(mesh, velocity, pressure, problem.nu, problem.f, s.stabilized, opts.assembly);
    const auto bc = interpolate_dirichlet(mesh, velocity, problem.dirichlet);
    auto system = apply_constraints(saddle, bc, velocity);
    auto solution = solve_saddle(system, opts.saddle);
    return {std::move(velocity), std::move(pressure), std::move(system), std::move(solution)};
}

} // namespace ncstokes
