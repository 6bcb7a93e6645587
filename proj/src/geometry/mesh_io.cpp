#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "pmchwt/geometry.hpp"

namespace pmchwt::geometry {

namespace {

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw GeometryError("mesh parse error at line " + std::to_string(line) + ": " + what);
}

bool next_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

SkeletonMesh parse_mesh(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_line(in, line, lineno)) parse_error(lineno, "missing header");
  std::istringstream hs(line);
  std::string magic, version;
  long nv = -1, nt = -1, nd = -1;
  if (!(hs >> magic >> version >> nv >> nt >> nd) || magic != "composite-mesh" || version != "v1")
    parse_error(lineno, "expected 'composite-mesh v1 <nv> <nt> <ndom>'");
  if (nv < 3 || nt < 1 || nd < 2) parse_error(lineno, "invalid counts in header");

  SkeletonMesh mesh;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, line, lineno)) parse_error(lineno, "unexpected end of file in vertex block");
    std::istringstream ls(line);
    Vec3 p;
    if (!(ls >> p[0] >> p[1] >> p[2])) parse_error(lineno, "expected 'x y z'");
    mesh.vertices.push_back(p);
  }
  int max_domain = 0;
  for (long i = 0; i < nt; ++i) {
    if (!next_line(in, line, lineno)) parse_error(lineno, "unexpected end of file in triangle block");
    std::istringstream ls(line);
    std::array<int, 3> t{};
    std::array<int, 2> d{};
    if (!(ls >> t[0] >> t[1] >> t[2] >> d[0] >> d[1])) parse_error(lineno, "expected 'v1 v2 v3 dplus dminus'");
    for (int k = 0; k < 3; ++k)
      if (t[k] < 0 || t[k] >= nv)
        parse_error(lineno, "triangle " + std::to_string(i) + " references vertex index " + std::to_string(t[k]));
    if (d[0] < 0 || d[1] < 0) parse_error(lineno, "negative domain tag");
    max_domain = std::max({max_domain, d[0], d[1]});
    mesh.triangles.push_back(t);
    mesh.adjacency.push_back(d);
  }
  mesh.domain_count = max_domain + 1;
  if (mesh.domain_count != nd)
    parse_error(1, "header declares " + std::to_string(nd) + " domains but tags imply " +
                       std::to_string(mesh.domain_count));
  validate(mesh);
  return mesh;
}

SkeletonMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open mesh file " + path);
  return parse_mesh(in);
}

void write_mesh(const SkeletonMesh& mesh, std::ostream& out) {
  out << "composite-mesh v1 " << mesh.vertices.size() << ' ' << mesh.triangles.size() << ' ' << mesh.domain_count
      << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.adjacency[t][0] << ' ' << mesh.adjacency[t][1]
        << '\n';
  }
}

void write_mesh(const SkeletonMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GeometryError("cannot write mesh file " + path);
  write_mesh(mesh, out);
}

}  // namespace pmchwt::geometry
