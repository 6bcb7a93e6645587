#pragma once

#include <vector>

#include "pmchwt/spaces.hpp"
#include "pmchwt/types.hpp"

namespace pmchwt::operators {

constexpr double kEps0 = 8.8541878128e-12;
constexpr double kMu0 = 1.25663706212e-6;

/// Homogeneous material in SI units.
struct Material {
  cplx epsilon{kEps0};
  cplx mu{kMu0};

  static Material relative(cplx eps_r, cplx mu_r);
  static Material vacuum() { return {}; }

  cplx eps_r() const { return epsilon / kEps0; }
  cplx mu_r() const { return mu / kMu0; }
  cplx kappa(double omega) const;
  cplx eta() const;
  /// Wavenumber for the background wavenumber kappa0 of vacuum.
  cplx kappa_from(double kappa0) const;
  /// Impedance relative to vacuum.
  cplx eta_rel() const;
};

/// Throws on Re(eps) <= 0 or Re(mu) <= 0.
void validate(const Material& m);

enum class KernelKind { helmholtz, screened, decaying };
enum class Screening { gaussian, literal };

struct KernelSpec {
  KernelKind kind = KernelKind::helmholtz;
  cplx kappa{1.0};        // helmholtz
  double delta = 1.0;     // screened
  double cutoff_factor = 3.5;
  Screening screening = Screening::gaussian;
  double kappa0 = 1.0;    // decaying

  static KernelSpec helmholtz(cplx kappa);
  static KernelSpec screened(double delta, double cutoff_factor = 3.5, Screening s = Screening::gaussian);
  static KernelSpec decaying(double kappa0);

  /// Kernel value at distance r > 0.
  cplx value(double r) const;
  /// Oscillation or decay scale used to pick quadrature orders.
  double scale() const;
};

struct QuadratureOptions {
  int singular_order = 4;  // Gauss points per parameter for touching pairs
  int boost = 0;           // added to every order
};

/// Raw 3x3 local blocks of one triangle pair in canonical slot frames:
/// vector[k][l] = int int G phi_k . psi_l, scalar = int int G div phi_k div psi_l
/// (slot independent), dlp[k][l] = int int phi_k . (grad_x G x psi_l).
struct PairBlocks {
  std::array<std::array<cplx, 3>, 3> vector{};
  cplx scalar{0.0};
  std::array<std::array<cplx, 3>, 3> dlp{};
};

PairBlocks pair_blocks(const spaces::TriangleGeom& s, const spaces::TriangleGeom& t, const KernelSpec& kernel,
                       bool want_dlp, const QuadratureOptions& q = {});

/// True when the triangles lie in one plane; the double-layer block then vanishes.
bool coplanar(const spaces::TriangleGeom& s, const spaces::TriangleGeom& t);

/// x-paired single layer  -i kappa V + (i / kappa) D  (the EFIE matrix).
MatrixXc assemble_single_layer(const spaces::TraceSpace& space, cplx kappa, const QuadratureOptions& q = {});

/// x-paired principal-value double layer.
MatrixXc assemble_double_layer_pv(const spaces::TraceSpace& space, cplx kappa, const QuadratureOptions& q = {});

/// Both at once, sharing kernel evaluations.
struct LayerPair {
  MatrixXc T, K;
};
LayerPair assemble_layers(const spaces::TraceSpace& space, cplx kappa, const QuadratureOptions& q = {});

/// Split single-layer terms V and D for prefactor diagnostics.
struct SingleLayerTerms {
  MatrixXc vector, scalar;
};
SingleLayerTerms assemble_single_layer_terms(const spaces::TraceSpace& space, cplx kappa,
                                             const QuadratureOptions& q = {});

/// Scalar block kappa0 V + D / kappa0 with kernel exp(-kappa0 r) / (4 pi r).
Eigen::MatrixXd assemble_energy_block(const spaces::TraceSpace& space, double kappa0, const QuadratureOptions& q = {});

/// Energy form over a multi-trace space: one real SPD block per domain, shared by both components.
struct EnergyMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  double quadratic_form(const spaces::MultiTraceSpace& space, const VectorXc& u) const;
  Eigen::MatrixXd dense(const spaces::MultiTraceSpace& space) const;
};
EnergyMatrix assemble_energy(const spaces::MultiTraceSpace& space, double kappa0, const QuadratureOptions& q = {});

/// Screened form on BC spaces. `scalar` holds s over all domain pairs, rows the
/// test dofs and columns the trial dofs. The multi-trace form couples electric
/// test to magnetic trial with + and magnetic test to electric trial with -.
struct ScreenedMatrix {
  spaces::SparseMatrix scalar;
  std::vector<int> test_offset, trial_offset;  // scalar offsets per domain

  int rows() const { return 2 * static_cast<int>(scalar.rows()); }
  int cols() const { return 2 * static_cast<int>(scalar.cols()); }
  VectorXc apply(const VectorXc& x) const;
  spaces::SparseMatrix expanded() const;
  double nnz_per_column() const;
};
ScreenedMatrix assemble_screened(const spaces::MultiTraceSpace& test, const spaces::MultiTraceSpace& trial,
                                 const KernelSpec& kernel, const QuadratureOptions& q = {});

/// Plane wave e = polarization exp(-i kappa d . x), h = (1 / eta) d x e.
struct PlaneWave {
  Vec3 direction{0.0, 0.0, 1.0};
  Vec3 polarization{1.0, 0.0, 0.0};
  cplx amplitude{1.0};

  void validate() const;
  CVec3 e(const Vec3& x, cplx kappa) const;
  /// eta0 h for a relative impedance eta.
  CVec3 h(const Vec3& x, cplx kappa, cplx eta) const;
};

/// RWG interpolants of the Cauchy data (m, eta0 j) = (e x n, eta0 n x h) of a
/// plane wave in a material, on one oriented surface. eta is relative.
VectorXc planewave_traces(const spaces::TraceSpace& rwg, const PlaneWave& pw, cplx kappa, cplx eta);

/// x-pairing of domain-0 test functions with the incident traces, integrated
/// exactly per triangle; zero on other domains.
VectorXc planewave_rhs(const spaces::MultiTraceSpace& space, const PlaneWave& pw, double kappa0);

}  // namespace pmchwt::operators
