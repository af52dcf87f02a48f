#pragma once

#include "ncstokes/analysis.hpp"
#include "ncstokes/femspace.hpp"
#include "ncstokes/mesh.hpp"
#include "ncstokes/solver.hpp"

#include <filesystem>
#include <functional>
#include <ostream>
#include <span>

namespace ncstokes {

/// Header n,h,rel_l2_u,rel_h1_u,rel_l2_p,rate_l2,rate_h1,rate_p. Errors with 6
/// significant digits, rates with 4 decimals, empty rate cells on the first row.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRecord> records);

/// Header n,h,beta_h.
void write_infsup_csv(std::ostream& out, std::span<const InfSupEstimate> estimates);

/// Legacy VTK ASCII unstructured grid. Velocity is written per cell as the
/// element average; P1 pressure per point, P0 pressure per cell.
void write_vtk(std::ostream& out, const Mesh& mesh, const DofMap& velocity, const DofMap& pressure,
               const SolutionField& solution);

/// Opens `path` and calls `write`; throws IoError if the file cannot be
/// created or written.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& write);

} // namespace ncstokes
