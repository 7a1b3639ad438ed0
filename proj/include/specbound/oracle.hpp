#pragma once

#include "specbound/model.hpp"

#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

namespace specbound::oracle {

using model::DiagonalWeight;
using model::Matrix;
using model::Point;
using model::Potential;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

struct GridTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OverflowGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularMass : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform tensor grid on [-R, R]^d.
struct Grid {
  int dim = 1;
  double radius = 8.0;
  int n = 0;  // points per axis, >= 16

  double h() const { return 2.0 * radius / (n - 1); }
  long total_nodes() const {
    long t = 1;
    for (int i = 0; i < dim; ++i) t *= n;
    return t;
  }
  Point coords(long flat) const;
  static constexpr long kNodeCap = 4'000'000;
};

/// Discretized Dirichlet form: K u = lambda M u with M = diag(mass),
/// mass normalized to sum 1.  Neumann (no-flux) truncation.
struct DiscreteOperator {
  Grid grid;
  SparseMatrix stiffness;  // K, symmetric PSD, K * 1 = 0
  Vector mass;             // node weights ~ e^{-V} h^d, sum 1

  long size() const { return stiffness.rows(); }
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;
  Grid grid;
  bool converged = true;
  std::optional<std::vector<double>> richardson;  // from two-grid extrapolation
};

/// Assembles K and mass: edge conductance e^{-V(midpoint)} h^{d-2}, node
/// weight e^{-V(node)} h^d, both normalized by the total node weight.
DiscreteOperator discretize(const Potential& V, const Grid& grid);

/// k smallest generalized eigenvalues.  Dense solve for size <= 3000, else
/// shift-invert block subspace iteration on the mass-normalized form;
/// deterministic for a fixed seed.
SpectrumResult lowest_eigs(const DiscreteOperator& op, int k, double tol = 1e-8,
                           unsigned long seed = 0);

/// Same, for the Schrodinger-type form (K + M diag(q)) u = lambda M u.
SpectrumResult lowest_eigs_with_potential(const DiscreteOperator& op,
                                          const Vector& q, int k,
                                          double tol = 1e-8,
                                          unsigned long seed = 0);

/// Second-order Richardson extrapolation from a coarse/fine eigenvalue pair.
std::vector<double> richardson_extrapolate(const std::vector<double>& coarse,
                                           const std::vector<double>& fine);

/// Solves L g = f for centered f (projection enforced): K g = -M f by
/// conjugate gradient on the singular-consistent system, g mu-centered,
/// relative residual <= 1e-10.
Vector solve_poisson(const DiscreteOperator& op, const Vector& f);

double integrate(const DiscreteOperator& op, const Vector& f);
double variance(const DiscreteOperator& op, const Vector& f);
double dirichlet_energy(const DiscreteOperator& op, const Vector& f);

/// m_S(F) = (int S dmu)^{-1} int S F dmu for diagonal S (per-coordinate
/// ratio).  S and F are node arrays of shape (nodes, d).
Vector weighted_mean_mS(const DiscreteOperator& op, const Matrix& S,
                        const Matrix& F);

/// Node values of a scalar field, and centered-difference gradients.
Vector sample(const DiscreteOperator& op,
              const std::function<double(const Point&)>& f);
Matrix node_gradient(const DiscreteOperator& op, const Vector& f);

struct IneqCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  long excluded_nodes = 0;
};

struct CorderoCheck : IneqCheck {
  Vector centering_residual;
};

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double mismatch = 0.0;  // relative
};

struct JohnsenCheck {
  std::vector<double> spec_scalar;
  std::vector<double> spec_schrodinger;
  double max_diff = 0.0;
};

/// Classical (W absent) or weighted Brascamp-Lieb check:
/// Var(f) <= int (grad f)^T M^{-1} grad f dmu.
IneqCheck verify_bl(const DiscreteOperator& op, const Potential& V,
                    const DiagonalWeight* W, const Vector& f);

/// Second-order check with the lambda_1 shift; f is first projected against
/// constants and coordinates in L^2(mu).
CorderoCheck verify_cordero(const DiscreteOperator& op, const Potential& V,
                            const Vector& f, double lambda1);

/// d=1 variance identity through the Poisson solution.
IdentityCheck verify_variance_identity_1d(const DiscreteOperator& op,
                                          const Potential& V,
                                          const DiagonalWeight& W,
                                          const Vector& f);

/// d=1 second-order inequality with the weighted gap lambda1A.
IneqCheck verify_second_order_1d(const DiscreteOperator& op, const Potential& V,
                                 const DiagonalWeight& W, const Vector& f,
                                 double lambda1A);

/// d=1 spectrum identity: nonzero eigenvalues of -L vs the Schrodinger form
/// -L + V'' on L^2(mu).
JohnsenCheck johnsen_check_1d(const DiscreteOperator& op, const Potential& V,
                              int k, double tol = 1e-8);

/// CSV dumps (stiffness triplets, mass weights, optional eigenvectors).
void dump_operator_csv(const DiscreteOperator& op, const std::string& prefix);
void dump_spectrum_csv(const SpectrumResult& spec, const std::string& path);

}  // namespace specbound::oracle
