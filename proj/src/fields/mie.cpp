#include <cmath>
#include <stdexcept>

#include "pmchwt/fields.hpp"

namespace pmchwt::fields {

Vec3 Direction::unit() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::vector<Direction> e_plane(int n) {
  if (n < 2) throw std::invalid_argument("e_plane: need at least 2 directions");
  std::vector<Direction> out(n);
  for (int i = 0; i < n; ++i) out[i] = {kPi * i / (n - 1), 0.0};
  return out;
}

std::vector<double> FarFieldPattern::rcs_db() const {
  std::vector<double> out(rcs.size());
  for (std::size_t i = 0; i < rcs.size(); ++i) out[i] = 10.0 * std::log10(std::max(rcs[i], 1e-300));
  return out;
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& reference) {
  if (a.size() != reference.size()) throw std::invalid_argument("relative_l2: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - reference[i]) * (a[i] - reference[i]);
    den += reference[i] * reference[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

int mie_truncation(double x) { return static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 2.0)); }

FarFieldPattern mie_rcs(double radius, const operators::Material& sphere, const operators::Material& background,
                        double kappa0, const std::vector<Direction>& directions, const MieOptions& opt) {
  if (!(radius > 0.0) || !(kappa0 > 0.0)) throw std::invalid_argument("mie: radius and kappa0 must be positive");
  operators::validate(sphere);
  operators::validate(background);
  // The series below is written for exp(-i w t); conjugating the material data
  // maps the lossy case of the exp(+i w t) convention onto it.
  const cplx kb = background.kappa_from(kappa0);
  if (std::abs(kb.imag()) > 1e-14 * std::abs(kb)) throw std::invalid_argument("mie: background must be lossless");
  const double k = kb.real();
  const double x = k * radius;
  const cplx m = std::conj(sphere.kappa_from(kappa0) / kb);
  const cplx mu_rel = std::conj(sphere.mu_r() / background.mu_r());
  const int n_max = mie_truncation(x) + opt.extra_terms;
  if (n_max > 2000) throw std::runtime_error("mie: size parameter too large for the series");

  // logarithmic derivative D_n(mx) by downward recurrence
  const cplx z = m * x;
  const int n_start = static_cast<int>(std::max<double>(n_max, std::abs(z))) + 16;
  std::vector<cplx> dn(n_start + 1, 0.0);
  for (int n = n_start; n > 0; --n) dn[n - 1] = static_cast<double>(n) / z - 1.0 / (dn[n] + static_cast<double>(n) / z);

  std::vector<cplx> a(n_max + 1), b(n_max + 1);
  double psi_prev = std::cos(x), psi = std::sin(x);
  double chi_prev = -std::sin(x), chi = std::cos(x);
  double largest = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double psi_n = (2.0 * n - 1.0) / x * psi - psi_prev;
    const double chi_n = (2.0 * n - 1.0) / x * chi - chi_prev;
    const cplx xi_n(psi_n, -chi_n), xi_prev(psi, -chi);
    const cplx da = dn[n] / (m * mu_rel) + static_cast<double>(n) / x;
    const cplx db = mu_rel * m * dn[n] + static_cast<double>(n) / x;
    a[n] = (da * psi_n - psi) / (da * xi_n - xi_prev);
    b[n] = (db * psi_n - psi) / (db * xi_n - xi_prev);
    if (!std::isfinite(std::abs(a[n])) || !std::isfinite(std::abs(b[n])))
      throw std::runtime_error("mie: series coefficients overflowed");
    largest = std::max({largest, std::abs(a[n]), std::abs(b[n])});
    psi_prev = psi;
    psi = psi_n;
    chi_prev = chi;
    chi = chi_n;
  }
  // coefficients are bounded by 1; below 1e-12 the sphere does not scatter
  if (largest > 1e-12 && std::abs(a[n_max]) + std::abs(b[n_max]) > opt.tail_tolerance * largest)
    throw std::runtime_error("mie: series tail has not decayed");

  FarFieldPattern out;
  out.directions = directions;
  for (const auto& d : directions) {
    const double mu = std::cos(d.theta);
    cplx s1 = 0.0, s2 = 0.0;
    double pi_prev = 0.0, pi = 1.0;
    for (int n = 1; n <= n_max; ++n) {
      const double tau = n * mu * pi - (n + 1) * pi_prev;
      const double f = (2.0 * n + 1.0) / (n * (n + 1.0));
      s1 += f * (a[n] * pi + b[n] * tau);
      s2 += f * (a[n] * tau + b[n] * pi);
      const double pi_next = ((2.0 * n + 1.0) * mu * pi - (n + 1.0) * pi_prev) / n;
      pi_prev = pi;
      pi = pi_next;
    }
    const Vec3 th(std::cos(d.theta) * std::cos(d.phi), std::cos(d.theta) * std::sin(d.phi), -std::sin(d.theta));
    const Vec3 ph(-std::sin(d.phi), std::cos(d.phi), 0.0);
    const CVec3 f_bh = (s2 * std::cos(d.phi) * th.cast<cplx>() - s1 * std::sin(d.phi) * ph.cast<cplx>()) / (-kI * k);
    const CVec3 f = f_bh.conjugate();
    out.amplitude.push_back(f);
    out.rcs.push_back(4.0 * kPi * f.squaredNorm());
  }
  return out;
}

}  // namespace pmchwt::fields
