#include "hmlab/field.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hmlab/dirichlet.hpp"
#include "hmlab/kernels.hpp"

namespace hmlab {

ComplexField conj(const ComplexField& f) {
  ComplexField out(f.grid_ptr());
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f.grid().defined(k)) out[k] = std::conj(f[k]);
  return out;
}

RealField real_part(const ComplexField& f) {
  RealField out(f.grid_ptr());
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f.grid().defined(k)) out[k] = f[k].real();
  return out;
}

RealField modulus(const ComplexField& f) {
  RealField out(f.grid_ptr());
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f.grid().defined(k)) out[k] = std::abs(f[k]);
  return out;
}

ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid_ptr());
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f.grid().defined(k)) out[k] = f[k];
  return out;
}

ComplexField wirtinger_dz(const ComplexField& f) {
  f.require_defined("wirtinger_dz");
  ComplexField dz(f.grid_ptr()), dzbar(f.grid_ptr());
  kernels::parallel::wirtinger(f.grid(), f.values(), dz.values(), dzbar.values());
  return dz;
}

ComplexField wirtinger_dzbar(const ComplexField& f) {
  f.require_defined("wirtinger_dzbar");
  ComplexField dz(f.grid_ptr()), dzbar(f.grid_ptr());
  kernels::parallel::wirtinger(f.grid(), f.values(), dz.values(), dzbar.values());
  return dzbar;
}

ComplexField laplacian(const ComplexField& f) {
  f.require_defined("laplacian");
  ComplexField out(f.grid_ptr());
  kernels::parallel::laplacian(f.grid(), f.values(), out.values());
  return out;
}

RealField laplacian(const RealField& f) {
  f.require_defined("laplacian");
  RealField out(f.grid_ptr());
  kernels::parallel::laplacian(f.grid(), f.values(), out.values());
  return out;
}

ComplexField poisson_solve(const ComplexField& rhs, const ComplexField& bc) {
  return poisson_solve(rhs, bc, LinearSolveOptions{});
}

ComplexField poisson_solve(const ComplexField& rhs, const ComplexField& bc, const LinearSolveOptions& options) {
  require_conformable(rhs, bc, "poisson_solve");
  rhs.require_interior("poisson_solve rhs");
  const Grid& g = rhs.grid();
  for (std::size_t k : g.boundary_nodes()) {
    if (!is_finite(bc[k])) throw InvalidField("poisson_solve bc: undefined value at boundary node " + std::to_string(k));
  }
  DirichletSolver solver(rhs.grid_ptr(), Closure::node, options);
  std::vector<cplx> data;
  data.reserve(g.crossings().size());
  for (const Crossing& c : g.crossings()) data.push_back(bc[c.outer]);
  std::vector<cplx> b(g.interior_nodes().size()), x(g.interior_nodes().size(), 0.0);
  for (std::size_t m = 0; m < b.size(); ++m) b[m] = rhs[g.interior_nodes()[m]];
  solver.solve(b, data, x);
  return solver.assemble(x, data, &bc);
}

namespace {

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_csv(std::ostream& os, const ComplexField& f) {
  const Grid& g = f.grid();
  os << "x,y,re,im\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.defined(k)) continue;
    const cplx z = g.point(k);
    os << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(f[k].real()) << ',' << fmt17(f[k].imag()) << '\n';
  }
}

void write_csv(std::ostream& os, const RealField& f) {
  const Grid& g = f.grid();
  os << "x,y,val\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.defined(k)) continue;
    const cplx z = g.point(k);
    os << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(f[k]) << '\n';
  }
}

ComplexField read_complex_csv(std::istream& is, GridPtr grid) {
  std::string line;
  if (!std::getline(is, line) || line != "x,y,re,im") throw InvalidInput("field CSV: expected header 'x,y,re,im'");
  ComplexField out(grid);
  std::vector<char> seen(grid->size(), 0);
  std::size_t count = 0, line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    double v[4];
    std::size_t pos = 0;
    for (int c = 0; c < 4; ++c) {
      const std::size_t end = c < 3 ? line.find(',', pos) : line.size();
      if (end == std::string::npos) throw InvalidInput(fmt::format("field CSV line {}: expected 4 columns", line_no));
      const std::string cell = line.substr(pos, end - pos);
      char* stop = nullptr;
      v[c] = std::strtod(cell.c_str(), &stop);
      if (cell.empty() || *stop != '\0') throw InvalidInput(fmt::format("field CSV line {}: bad number '{}'", line_no, cell));
      pos = end + 1;
    }
    const double fi = (v[0] - grid->origin().real()) / grid->h();
    const double fj = (v[1] - grid->origin().imag()) / grid->h();
    const int i = static_cast<int>(std::lround(fi));
    const int j = static_cast<int>(std::lround(fj));
    if (!std::isfinite(fi) || !std::isfinite(fj) || std::abs(fi - i) > 1e-6 || std::abs(fj - j) > 1e-6 ||
        !grid->defined(i, j)) {
      throw InvalidInput(fmt::format("field CSV line {}: point is not a grid node", line_no));
    }
    const std::size_t k = grid->index(i, j);
    if (seen[k]) throw InvalidInput(fmt::format("field CSV line {}: duplicate node", line_no));
    seen[k] = 1;
    ++count;
    out[k] = cplx(v[2], v[3]);
  }
  if (count != grid->interior_nodes().size() + grid->boundary_nodes().size()) {
    throw InvalidInput(fmt::format("field CSV: {} nodes, grid has {}", count,
                                   grid->interior_nodes().size() + grid->boundary_nodes().size()));
  }
  return out;
}

}  // namespace hmlab
