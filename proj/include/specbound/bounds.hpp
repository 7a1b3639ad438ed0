#pragma once

#include "specbound/intertwine.hpp"
#include "specbound/oracle.hpp"

#include <string>
#include <vector>

namespace specbound::bounds {

using model::DiagonalWeight;
using model::Point;
using model::Potential;

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  double margin = 0.0;
};

struct Constituent {
  std::string name;
  double value = 0.0;
  std::string provenance;  // analytic-closed-form | grid-infimum | oracle-eigensolve
};

struct BoundResult {
  std::string target;  // "lambda_1" | "lambda_d_plus_1"
  std::string method;
  double value = 0.0;
  bool applicable = false;
  std::vector<HypothesisCheck> checks;
  std::vector<Constituent> constituents;
  std::string note;
};

/// The reweighted potential V_A^i = V - log S_ii = V - 2 log g_i.
Potential reweighted_potential(const Potential& V, const DiagonalWeight& W, int i);

/// lambda_1 >= inf rho(curvature matrix); hypothesis: infimum positive.
BoundResult first_order_bound(const Potential& V, const DiagonalWeight& W,
                              double box_radius, int grid_n);

/// lambda_{d+1} >= lambda_1 + inf rho(hess V); lambda_1 supplied externally.
BoundResult cordero_bound(const Potential& V, double lambda1,
                          const std::string& lambda1_provenance,
                          double box_radius, int grid_n);

/// lambda_{d+1} >= lambda_1^A + inf rho(curvature matrix); lambda_1^A stands
/// in for the restricted gap, which is only larger.
BoundResult second_order_bound(const Potential& V, const DiagonalWeight& W,
                               double lambda1A,
                               const std::string& lambda1A_provenance,
                               double box_radius, int grid_n);

/// Spectral gap of mu_A^i, discretized: difference of the two lowest
/// generalized eigenvalues of the reweighted operator.
double weighted_gap_oracle(const Potential& V, const DiagonalWeight& W, int i,
                           const oracle::Grid& grid, double tol = 1e-8,
                           unsigned long seed = 0);

struct AlphaBeta {
  std::vector<double> alpha;
  std::vector<double> beta;
  double c1 = 0.0;  // inf rho(hess phi)
  double c2 = 0.0;  // max_i sup |d_i phi|
  bool applicable = false;
};

/// The per-coordinate criteria constants via the separated route
/// (phi bounded by c1, c2; one-dimensional infima by grid + refinement).
AlphaBeta alpha_beta(const Potential& V, const std::vector<double>& eps,
                     double box_radius = 8.0);

/// Analytic gap of mu_A^i: min(min_{j != i} alpha_j, beta_i).
double weighted_gap_analytic(const Potential& V, const DiagonalWeight& W, int i,
                             double box_radius = 8.0);

double lambda_1_A_oracle(const Potential& V, const DiagonalWeight& W,
                         const oracle::Grid& grid, double tol = 1e-8,
                         unsigned long seed = 0);
double lambda_1_A_analytic(const Potential& V, const DiagonalWeight& W,
                           double box_radius = 8.0);

/// lambda_1 >= gamma + c1 - c2^2/2 and lambda_{d+1} >= 2 gamma + c1 - c2^2/2
/// for convex product components with a bounded interaction.
std::pair<BoundResult, BoundResult> prop41(const Potential& V,
                                           const std::vector<double>& eps,
                                           double box_radius = 8.0);

/// inf_y U'' + eps U'^2 for U(y) = |y|^a / a:
///   (a-1) t^{1-2/a} + eps t^{2-2/a},  t = (2-a)/(2 eps).
double closed_form_inf_power(double a, double eps);

/// 1D brute-force counterpart of the closed form (grid + local refinement).
double brute_force_inf_power(double a, double eps, double box_radius = 8.0,
                             long grid_n = 1'000'000);

enum class EpsObjective { Gamma, Lambda1Bound };

struct EpsOptimum {
  std::vector<double> eps;
  double value = 0.0;
};

/// Per-coordinate golden-section search over eps in (0, 1/2); for power
/// components the closed-form criterion value is also seeded at eps = 1-a/2
/// so the result weakly dominates that choice.
EpsOptimum optimize_eps(const Potential& V, EpsObjective objective,
                        double box_radius = 8.0);

}  // namespace specbound::bounds
