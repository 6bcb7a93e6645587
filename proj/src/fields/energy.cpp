#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pmchwt/fields.hpp"

namespace pmchwt::fields {

double energy_norm(const VectorXc& u, const spaces::MultiTraceSpace& space, const operators::EnergyMatrix& e) {
  const double q = e.quadratic_form(space, u);
  double scale = 0.0;
  for (std::size_t d = 0; d < e.blocks.size(); ++d)
    if (e.blocks[d].size() > 0) scale = std::max(scale, e.blocks[d].diagonal().cwiseAbs().maxCoeff());
  if (q < -1e-12 * scale * u.squaredNorm()) {
    std::ostringstream msg;
    msg << "energy_norm: negative quadratic form " << q;
    throw std::runtime_error(msg.str());
  }
  return std::sqrt(std::max(q, 0.0));
}

VectorXc incident_interpolant(const formulations::Problem& p, const operators::PlaneWave& pw) {
  VectorXc u(p.rwg.size());
  for (int d = 0; d < static_cast<int>(p.rwg.domains.size()); ++d) {
    if (p.rwg.dim(d) == 0) continue;
    u.segment(p.rwg.block(d), 2 * p.rwg.dim(d)) =
        operators::planewave_traces(p.rwg.domains[d], pw, p.kappa(0), p.eta(0));
  }
  return u;
}

}  // namespace pmchwt::fields
