#include "nlsgs/io.hpp"

#include <cmath>
#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "nlsgs/format.hpp"

namespace nlsgs {

namespace {

// Node coordinates along one axis including the boundary, and the dof offset of the
// first node (-1 marks a Dirichlet node).
struct AxisNodes {
  std::vector<double> x;
  std::vector<long> dof;
};

AxisNodes axis_nodes(const Grid& g, std::size_t axis) {
  const Axis& ax = g.axes()[axis];
  const long total = static_cast<long>(ax.intervals) * g.nodes_per_cell() + 1;
  const double dx = g.node_spacing(axis);
  const bool radial = g.geometry() == Geometry::Radial;
  AxisNodes out;
  for (long k = 0; k < total; ++k) {
    out.x.push_back(ax.a + static_cast<double>(k) * dx);
    long d = radial ? k : k - 1;
    if (k == total - 1 || d < 0) d = -1;
    out.dof.push_back(d);
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() && s.find_first_not_of(" \t\r", used) != std::string::npos)
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("field CSV line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

}  // namespace

void write_field_csv(std::ostream& os, const Field& phi) {
  if (!phi.grid) throw ContractViolation("write_field_csv: field without grid");
  const Grid& g = *phi.grid;
  if (g.axes().size() == 1) {
    const auto n = axis_nodes(g, 0);
    os << (g.geometry() == Geometry::Radial ? "r,value\n" : "x,value\n");
    for (std::size_t k = 0; k < n.x.size(); ++k)
      os << format_double(n.x[k]) << ','
         << format_double(n.dof[k] < 0 ? 0.0 : phi.values[n.dof[k]]) << '\n';
  } else {
    const auto nx = axis_nodes(g, 0), ny = axis_nodes(g, 1);
    const auto& ax = g.axes();
    os << "# nx=" << nx.x.size() << ",ny=" << ny.x.size() << ",bounds="
       << join_csv({ax[0].a, ax[0].b, ax[1].a, ax[1].b}) << '\n';
    os << "x,y,value\n";
    const std::size_t cy = g.count(1);
    for (std::size_t i = 0; i < nx.x.size(); ++i)
      for (std::size_t j = 0; j < ny.x.size(); ++j) {
        double v = 0.0;
        if (nx.dof[i] >= 0 && ny.dof[j] >= 0)
          v = phi.values[static_cast<std::size_t>(nx.dof[i]) * cy + ny.dof[j]];
        os << format_double(nx.x[i]) << ',' << format_double(ny.x[j]) << ',' << format_double(v)
           << '\n';
      }
  }
  if (!os) throw IoError("write_field_csv: stream write failed");
}

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

void write_field_csv(const std::string& path, const Field& phi) {
  auto os = open_output(path);
  write_field_csv(os, phi);
}

Field read_field_csv(std::istream& is, const GridPtr& grid) {
  if (!grid) throw ContractViolation("read_field_csv: null grid");
  const Grid& g = *grid;
  const bool two_d = g.axes().size() == 2;
  std::vector<AxisNodes> nodes;
  for (std::size_t a = 0; a < g.axes().size(); ++a) nodes.push_back(axis_nodes(g, a));

  Field phi(grid);
  std::string line;
  std::size_t lineno = 0, rows = 0;
  bool header = false;
  const std::size_t ncol = two_d ? 3 : 2;
  const std::size_t expected = two_d ? nodes[0].x.size() * nodes[1].x.size() : nodes[0].x.size();
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      if (line.find_first_of("0123456789") == std::string::npos ||
          std::isalpha(static_cast<unsigned char>(line[0])))
        continue;
    }
    const auto parts = split(line, ',');
    if (parts.size() != ncol)
      throw IoError("field CSV line " + std::to_string(lineno) + ": expected " +
                    std::to_string(ncol) + " columns");
    if (rows >= expected) throw IoError("field CSV has more rows than the grid has nodes");
    std::size_t idx[2] = {rows, 0};
    if (two_d) {
      idx[0] = rows / nodes[1].x.size();
      idx[1] = rows % nodes[1].x.size();
    }
    long dof = 0;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      const double x = parse_number(parts[a], lineno);
      const double tol = 1e-9 * g.node_spacing(a);
      if (std::abs(x - nodes[a].x[idx[a]]) > tol)
        throw IoError("field CSV line " + std::to_string(lineno) +
                      ": coordinate does not match the grid");
      const long d = nodes[a].dof[idx[a]];
      dof = (d < 0 || dof < 0) ? -1 : (a == 0 ? d : dof * static_cast<long>(g.count(1)) + d);
    }
    const double v = parse_number(parts[ncol - 1], lineno);
    if (dof >= 0) phi.values[static_cast<std::size_t>(dof)] = v;
    ++rows;
  }
  if (rows != expected)
    throw IoError("field CSV has " + std::to_string(rows) + " rows, grid needs " +
                  std::to_string(expected));
  return phi;
}

Field read_field_csv(const std::string& path, const GridPtr& grid) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_field_csv(is, grid);
}

void write_history_csv(std::ostream& os, const SolveReport& rep) {
  os << "n,S_omega,lambda,step_norm\n";
  const std::size_t na = rep.action_history.size();
  const std::size_t first = rep.iterations + 1 - na;
  const std::size_t soff = rep.iterations - rep.step_norm_history.size();
  for (std::size_t k = 0; k < na; ++k) {
    const std::size_t n = first + k;
    const double lambda = k < rep.lambda_history.size() ? rep.lambda_history[k] : std::nan("");
    double step = std::nan("");
    if (n >= 1 && n - 1 >= soff && n - 1 - soff < rep.step_norm_history.size())
      step = rep.step_norm_history[n - 1 - soff];
    os << n << ',' << join_csv({rep.action_history[k], lambda, step}) << '\n';
  }
  if (!os) throw IoError("write_history_csv: stream write failed");
}

void write_history_csv(const std::string& path, const SolveReport& rep) {
  auto os = open_output(path);
  write_history_csv(os, rep);
}

}  // namespace nlsgs
