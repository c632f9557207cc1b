#pragma once

#include <fstream>
#include <iosfwd>
#include <string>

#include "nlsgs/errors.hpp"
#include "nlsgs/flows.hpp"
#include "nlsgs/grid.hpp"

namespace nlsgs {

/// Raised when a file cannot be opened, written or parsed (CLI exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Field CSV. 1D: `x,value` over every grid node including the Dirichlet zeros.
/// 2D: a `# nx=..,ny=..,bounds=ax,bx,ay,by` line, then `x,y,value` row-major (y fastest),
/// boundary included. Radial fields write r in the first column.
void write_field_csv(std::ostream& os, const Field& phi);
void write_field_csv(const std::string& path, const Field& phi);

/// Reads values back onto `grid`; node coordinates must match within 1e-9·h.
Field read_field_csv(std::istream& is, const GridPtr& grid);
Field read_field_csv(const std::string& path, const GridPtr& grid);

/// `n,S_omega,lambda,step_norm`, one row per recorded iteration (n = 0 is the seed).
void write_history_csv(std::ostream& os, const SolveReport& rep);
void write_history_csv(const std::string& path, const SolveReport& rep);

/// Opens `path` for writing, creating parent directories; throws IoError.
std::ofstream open_output(const std::string& path);

}  // namespace nlsgs
