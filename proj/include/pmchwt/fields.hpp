#pragma once

#include <string>
#include <vector>

#include "pmchwt/formulations.hpp"
#include "pmchwt/operators.hpp"
#include "pmchwt/spaces.hpp"

namespace pmchwt::fields {

/// Observation direction in spherical angles (radians), theta from +z.
struct Direction {
  double theta = 0.0;
  double phi = 0.0;
  Vec3 unit() const;
};

/// `n` directions from theta = 0 to pi in the xz-plane (the E-plane of an x-polarised wave).
std::vector<Direction> e_plane(int n = 181);

struct FarFieldPattern {
  std::vector<Direction> directions;
  std::vector<CVec3> amplitude;  // E ~ amplitude exp(-i k r) / r
  std::vector<double> rcs;       // 4 pi |amplitude|^2 [m^2]

  std::vector<double> rcs_db() const;
};

/// Relative L2 distance of two RCS curves over common directions.
double relative_l2(const std::vector<double>& a, const std::vector<double>& reference);

struct MieOptions {
  int extra_terms = 0;        // added to the standard truncation
  double tail_tolerance = 1e-6;  // last term relative to the largest
};

/// Series truncation ceil(x + 4 x^(1/3) + 2).
int mie_truncation(double size_parameter);

/// Bistatic RCS of a homogeneous sphere centred at the origin for the default
/// plane wave (x-polarised, travelling towards +z).
FarFieldPattern mie_rcs(double radius, const operators::Material& sphere, const operators::Material& background,
                        double kappa0, const std::vector<Direction>& directions, const MieOptions& opt = {});

/// Far-field amplitude radiated into domain 0 by its Cauchy data (m_0, eta0 j_0)
/// given as RWG coefficients on the domain-0 boundary (normals into the scatterer).
FarFieldPattern far_field(const spaces::TraceSpace& rwg0, const VectorXc& traces, double kappa0, cplx eta0,
                          const std::vector<Direction>& directions);
FarFieldPattern far_field(const formulations::Problem& p, const VectorXc& w, const std::vector<Direction>& directions);

struct NearFieldSample {
  std::vector<Vec3> points;
  std::vector<CVec3> e, h;  // h is eta0 H
};

/// Stratton-Chu reconstruction in domain d from its Cauchy data (RWG coefficients,
/// size 2 * dim). For domain 0 the incident field is added.
NearFieldSample stratton_chu(const formulations::Problem& p, int d, const VectorXc& traces,
                             const std::vector<Vec3>& points, const operators::PlaneWave& pw);

/// Domain-d block (m then j) of a full multi-trace vector.
VectorXc domain_traces(const spaces::MultiTraceSpace& space, const VectorXc& u, int d);

/// sqrt(u^H T u) with the block-diagonal energy matrix of `space`.
double energy_norm(const VectorXc& u, const spaces::MultiTraceSpace& space, const operators::EnergyMatrix& e);

/// Incident-wave Cauchy data interpolated on every domain boundary of the full
/// RWG space, each with its own outward normal, for a domain-independent wave.
VectorXc incident_interpolant(const formulations::Problem& p, const operators::PlaneWave& pw);

/// RWG coefficients on `fine` of a field given by RWG coefficients on `coarse`,
/// through edge-flux functionals. Both spaces cover the same polyhedral surface.
VectorXc transfer(const spaces::TraceSpace& coarse, const VectorXc& coeffs, const spaces::TraceSpace& fine);
VectorXc transfer(const spaces::MultiTraceSpace& coarse, const VectorXc& u, const spaces::MultiTraceSpace& fine);

/// Field value of a coefficient vector at a point of support triangle t.
CVec3 evaluate(const spaces::TraceSpace& sp, const std::vector<std::array<cplx, 3>>& expanded, int t, const Vec3& x);

/// Legacy ASCII VTK: triangles of one surface with per-cell |m| and |j|.
void write_surface_vtk(const std::string& path, const spaces::TraceSpace& rwg, const VectorXc& traces);
/// Legacy ASCII VTK: point cloud with |E|, |H| and the real parts of E and H.
void write_points_vtk(const std::string& path, const NearFieldSample& s);

}  // namespace pmchwt::fields
