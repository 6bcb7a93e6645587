#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "pmchwt/fields.hpp"

namespace pmchwt::fields {

namespace {

std::ofstream open_vtk(const std::string& path, const char* title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(9) << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  return out;
}

}  // namespace

void write_surface_vtk(const std::string& path, const spaces::TraceSpace& rwg, const VectorXc& traces) {
  const int n = rwg.size();
  if (rwg.flavour != spaces::Flavour::rwg) throw std::invalid_argument("write_surface_vtk: needs an RWG space");
  if (traces.size() != 2 * n) throw std::invalid_argument("write_surface_vtk: trace vector size mismatch");
  const auto& s = *rwg.surface;
  const auto em = rwg.expand(VectorXc(traces.head(n)));
  const auto ej = rwg.expand(VectorXc(traces.tail(n)));
  auto out = open_vtk(path, "surface traces");
  out << "DATASET POLYDATA\nPOINTS " << s.vertices.size() << " double\n";
  for (const auto& v : s.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  out << "POLYGONS " << s.triangles.size() << ' ' << 4 * s.triangles.size() << '\n';
  for (const auto& t : s.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_DATA " << s.triangles.size() << "\nSCALARS abs_m double 1\nLOOKUP_TABLE default\n";
  for (std::size_t t = 0; t < s.size(); ++t)
    out << evaluate(rwg, em, static_cast<int>(t), rwg.support->tris[t].centroid).norm() << '\n';
  out << "SCALARS abs_j double 1\nLOOKUP_TABLE default\n";
  for (std::size_t t = 0; t < s.size(); ++t)
    out << evaluate(rwg, ej, static_cast<int>(t), rwg.support->tris[t].centroid).norm() << '\n';
}

void write_points_vtk(const std::string& path, const NearFieldSample& s) {
  auto out = open_vtk(path, "near field");
  const std::size_t n = s.points.size();
  out << "DATASET POLYDATA\nPOINTS " << n << " double\n";
  for (const auto& p : s.points) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  out << "VERTICES " << n << ' ' << 2 * n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << "1 " << i << '\n';
  out << "POINT_DATA " << n << "\nSCALARS abs_e double 1\nLOOKUP_TABLE default\n";
  for (const auto& e : s.e) out << e.norm() << '\n';
  out << "SCALARS abs_h double 1\nLOOKUP_TABLE default\n";
  for (const auto& h : s.h) out << h.norm() << '\n';
  out << "VECTORS re_e double\n";
  for (const auto& e : s.e) out << e[0].real() << ' ' << e[1].real() << ' ' << e[2].real() << '\n';
  out << "VECTORS re_h double\n";
  for (const auto& h : s.h) out << h[0].real() << ' ' << h[1].real() << ' ' << h[2].real() << '\n';
}

}  // namespace pmchwt::fields
