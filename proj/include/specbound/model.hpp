#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specbound::model {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Second derivative of the power component |y|^a/a diverges at the origin for
// a in (1,2); evaluators cap it at kCurvatureCap inside |y| < kPuncture and
// infimum searches stay outside a puncture of radius kPunctureSearch.
inline constexpr double kCurvatureCap = 1e12;
inline constexpr double kPuncture = 1e-12;
inline constexpr double kPunctureSearch = 1e-9;

enum class ComponentFamily { Power, Quadratic, Custom };

/// One-dimensional potential U with derivatives U', U''.
struct OneDimComponent {
  ComponentFamily family = ComponentFamily::Custom;
  double exponent = 0.0;  // power family: U(y) = |y|^a / a
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  bool convex = true;
};

OneDimComponent make_power_component(double a);
OneDimComponent make_quadratic_component();

/// Smoothed nearest-neighbor interaction
///   phi_tau(x) = c * sum_i sqrt(tau^2 + (x_{i+1} - x_i)^2),   x_{d+1} := x_1.
struct InteractionTerm {
  int dim = 0;
  double smoothing = 0.0;  // tau > 0
  double coupling = 0.0;   // c >= 0

  double value(const Point& x) const;
  Point gradient(const Point& x) const;
  Matrix hessian(const Point& x) const;

  // phi_tau is convex so inf rho(hess) >= 0; along the constant direction the
  // cyclic differences vanish, hence the sharp constant is 0.
  double curvature_lower_bound() const { return 0.0; }
  // each coordinate appears in exactly two chain terms, each with slope <= c
  double partial_sup_bound() const { return 2.0 * coupling; }
};

struct ProductStructure {
  std::vector<OneDimComponent> components;
  std::optional<InteractionTerm> interaction;
};

enum class PotentialFamily { Gaussian, ProductPerturbed, Custom };

/// Smooth scalar potential V on R^d with evaluable value/gradient/Hessian.
/// Immutable after construction; evaluators are pure.
struct Potential {
  int dim = 0;
  PotentialFamily family = PotentialFamily::Custom;
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<Matrix(const Point&)> hessian;
  std::optional<ProductStructure> structure;

  bool has_product_structure() const { return structure.has_value(); }
};

/// V(x) = sum_i |x_i|^a / a + phi_tau(x).  Requires a in (1,2), tau > 0.
Potential make_power_product(int d, double a, double c, double tau);

/// V(x) = |x|^2 / 2, with quadratic product structure attached.
Potential make_gaussian(int d);

/// Potential from closed-form evaluators (no structure).
Potential make_custom(int d, std::function<double(const Point&)> value,
                      std::function<Point(const Point&)> gradient = nullptr,
                      std::function<Matrix(const Point&)> hessian = nullptr);

enum class WeightFamily { Identity, ExpEpsU, Custom };

/// Diagonal diffeomorphism weight H_i(x) = h_i(x_i), represented by
/// g_i = h_i' > 0 and its derivatives.  Induces A = diag(1/g_i) and
/// S = diag(g_i^2).
struct DiagonalWeight {
  int dim = 0;
  WeightFamily family = WeightFamily::Identity;
  std::vector<double> eps;  // ExpEpsU parameters, one per coordinate
  std::vector<std::function<double(double)>> g;    // h_i'
  std::vector<std::function<double(double)>> dg;   // h_i''
  std::vector<std::function<double(double)>> ddg;  // h_i'''

  /// h_i(y) = int_0^y g_i(t) dt by adaptive quadrature.
  double antiderivative(int i, double y) const;
};

DiagonalWeight make_identity_weight(int d);

/// h_i' = e^{eps_i U_i}, eps_i in (0,1/2); requires product structure.
DiagonalWeight make_weight(const Potential& potential, WeightFamily family,
                           const std::vector<double>& eps = {});

// Finite-difference fallbacks (central, O(step^2)).
Point fd_gradient(const std::function<double(const Point&)>& f, const Point& x,
                  double step = 1e-5);
Matrix fd_hessian(const std::function<double(const Point&)>& f, const Point& x,
                  double step = 1e-4);

}  // namespace specbound::model
