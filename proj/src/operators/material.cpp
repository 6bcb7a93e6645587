#include <sstream>
#include <stdexcept>

#include "pmchwt/operators.hpp"

namespace pmchwt::operators {

Material Material::relative(cplx eps_r, cplx mu_r) { return {eps_r * kEps0, mu_r * kMu0}; }

cplx Material::kappa(double omega) const { return omega * std::sqrt(epsilon * mu); }

cplx Material::eta() const { return std::sqrt(mu / epsilon); }

cplx Material::kappa_from(double kappa0) const { return kappa0 * std::sqrt(eps_r() * mu_r()); }

cplx Material::eta_rel() const { return std::sqrt(mu_r() / eps_r()); }

void validate(const Material& m) {
  if (!(m.epsilon.real() > 0.0) || !(m.mu.real() > 0.0)) {
    std::ostringstream msg;
    msg << "material needs Re(eps) > 0 and Re(mu) > 0, got eps_r = " << m.eps_r() << ", mu_r = " << m.mu_r();
    throw std::invalid_argument(msg.str());
  }
}

KernelSpec KernelSpec::helmholtz(cplx kappa) {
  if (kappa == cplx(0.0)) throw std::invalid_argument("helmholtz kernel needs kappa != 0");
  KernelSpec k;
  k.kind = KernelKind::helmholtz;
  k.kappa = kappa;
  return k;
}

KernelSpec KernelSpec::screened(double delta, double cutoff_factor, Screening s) {
  if (!(delta > 0.0)) throw std::invalid_argument("screened kernel needs delta > 0");
  if (!(cutoff_factor > 0.0)) throw std::invalid_argument("screened kernel needs cutoff_factor > 0");
  KernelSpec k;
  k.kind = KernelKind::screened;
  k.delta = delta;
  k.cutoff_factor = cutoff_factor;
  k.screening = s;
  return k;
}

KernelSpec KernelSpec::decaying(double kappa0) {
  if (!(kappa0 > 0.0)) throw std::invalid_argument("decaying kernel needs kappa0 > 0");
  KernelSpec k;
  k.kind = KernelKind::decaying;
  k.kappa0 = kappa0;
  return k;
}

cplx KernelSpec::value(double r) const {
  const double g = 1.0 / (4.0 * kPi * r);
  switch (kind) {
    case KernelKind::helmholtz:
      return std::exp(-kI * kappa * r) * g;
    case KernelKind::screened: {
      if (r > cutoff_factor * delta) return 0.0;
      const double a = screening == Screening::gaussian ? r * r / (delta * delta) : r / (delta * delta);
      return std::exp(-a) * g;
    }
    case KernelKind::decaying:
      return std::exp(-kappa0 * r) * g;
  }
  return 0.0;
}

double KernelSpec::scale() const {
  switch (kind) {
    case KernelKind::helmholtz:
      return std::abs(kappa);
    case KernelKind::screened:
      return screening == Screening::gaussian ? 1.0 / delta : 1.0 / (delta * delta);
    case KernelKind::decaying:
      return kappa0;
  }
  return 0.0;
}

}  // namespace pmchwt::operators
