#pragma once

#include "specbound/model.hpp"

#include <array>

namespace specbound::intertwine {

using model::DiagonalWeight;
using model::Matrix;
using model::Point;
using model::Potential;

struct WeightVanished : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar field with optional analytic derivatives; finite-difference
/// fallbacks are used when an evaluator is missing.
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<Matrix(const Point&)> hessian;

  Point grad(const Point& x) const {
    return gradient ? gradient(x) : model::fd_gradient(value, x);
  }
  Matrix hess(const Point& x) const {
    return hessian ? hessian(x) : model::fd_hessian(value, x);
  }
};

/// Pointwise matrix field A(x), possibly non-diagonal (symmetry checks only).
struct MatrixField {
  int dim = 0;
  std::function<Matrix(const Point&)> evaluate;
  double symmetry_tol = 1e-9;
};

MatrixField weight_field(const DiagonalWeight& w);  // A = diag(1/g_i)
MatrixField identity_field(int d);

struct SymmetryReport {
  // one entry per assertion: grad A^-1, L A^-1, S*M_A, A^-1 M_A A
  std::array<bool, 4> passed{};
  std::array<double, 4> worst_asymmetry{};
  std::array<Point, 4> worst_point{};
  bool all() const { return passed[0] && passed[1] && passed[2] && passed[3]; }
};

struct InfRhoResult {
  double value = 0.0;
  Point argmin;
  double box_radius = 0.0;
  int grid_n = 0;
  bool refined = false;
  bool bounded_below_positively() const { return value > 0.0; }
};

/// L f = Delta f - (grad V)^T grad f at x.
double apply_generator(const Potential& V, const ScalarField& f, const Point& x);

/// Gamma(f,g) = (grad f)^T grad g at x.
double carre_du_champ(const ScalarField& f, const ScalarField& g, const Point& x);

/// The matrix -J_{LH}^T (J_H^T)^{-1} for a diagonal weight:
///   off-diagonal (i,j): d^2 V / dx_i dx_j
///   diagonal (i,i):     d^2_ii V - h_i'''/h_i' + d_i V * h_i''/h_i'
/// which is -d_i(L h_i)/h_i' with L h_i = h_i'' - d_i V h_i'.
Matrix curvature_matrix(const Potential& V, const DiagonalWeight& W, const Point& x);

/// Closed form for product potentials with the exp_eps_u weight:
///   hess(phi) + diag[(1-e_i)(U_i'' + e_i U_i'^2) + e_i d_i(phi) U_i'].
Matrix curvature_matrix_product_form(const Potential& V, const DiagonalWeight& W,
                                     const Point& x);

/// Checks the four equivalent symmetry assertions at sampled points of
/// [-R,R]^d (finite differences; deterministic seeded sampling).
SymmetryReport symmetry_report(const Potential& V, const MatrixField& A,
                               double box_radius, int n_samples,
                               unsigned long seed = 0);

/// Infimum of the smallest curvature eigenvalue over [-R,R]^d: full grid scan
/// followed by coordinate-descent refinement around the argmin.
InfRhoResult inf_rho(const Potential& V, const DiagonalWeight& W,
                     double box_radius, int grid_n);

/// Same scan applied to hess(V) itself (used by the Cordero bound).
InfRhoResult inf_rho_hessian(const Potential& V, double box_radius, int grid_n);

/// Residual of A grad(Lf) = L_A(A grad f) - M_A (A grad f) at x, all outer
/// derivatives by central differences with the given step; O(step^2).
Point check_intertwining(const Potential& V, const DiagonalWeight& W,
                         const ScalarField& f, const Point& x, double step);

}  // namespace specbound::intertwine
