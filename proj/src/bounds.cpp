#include "specbound/bounds.hpp"

#include "specbound/optimize.hpp"

#include <cmath>

namespace specbound::bounds {

namespace {

void require_diagonal_eps(const Potential& V, const std::vector<double>& eps) {
  if (!V.has_product_structure())
    throw std::invalid_argument("operation requires a product-structured potential");
  if (eps.size() != static_cast<size_t>(V.dim))
    throw std::invalid_argument("one eps per coordinate required");
  for (double e : eps)
    if (!(e > 0.0 && e < 0.5))
      throw std::invalid_argument("eps must lie in (0,1/2)");
}

// inf over [-R,R] of a 1d criterion, puncture-aware for power components
double inf_1d(const model::OneDimComponent& u,
              const std::function<double(double)>& crit, double box_radius) {
  auto guarded = [&](double y) {
    if (u.family == model::ComponentFamily::Power &&
        std::abs(y) < model::kPunctureSearch)
      return std::numeric_limits<double>::infinity();
    return crit(y);
  };
  auto [x, v] = optimize::grid_then_golden_min(guarded, -box_radius, box_radius,
                                               20001, 1e-10);
  (void)x;
  return v;
}

double component_criterion_inf(const model::OneDimComponent& u, double q2,
                               double q1, double box_radius) {
  // q2 * U'' + q1 * U'^2
  return inf_1d(
      u,
      [&](double y) {
        double d1 = u.d1(y);
        return q2 * u.d2(y) + q1 * d1 * d1;
      },
      box_radius);
}

// (1 - 3e/2)(1 - 2e)^2 * inf(U'' + e U'^2); closed form for the power family
double gamma_component(const model::OneDimComponent& u, double e,
                       double box_radius) {
  double prefactor = (1.0 - 1.5 * e) * (1.0 - 2.0 * e) * (1.0 - 2.0 * e);
  double inf;
  if (u.family == model::ComponentFamily::Power)
    inf = closed_form_inf_power(u.exponent, e);
  else
    inf = inf_1d(
        u,
        [&](double y) {
          double d1 = u.d1(y);
          return u.d2(y) + e * d1 * d1;
        },
        box_radius);
  return prefactor * inf;
}

}  // namespace

Potential reweighted_potential(const Potential& V, const DiagonalWeight& W, int i) {
  if (i < 0 || i >= V.dim) throw std::out_of_range("coordinate index");
  auto g = W.g[i];
  auto base = V.value;
  auto value = [base, g, i](const Point& x) {
    return base(x) - 2.0 * std::log(g(x[i]));
  };
  return model::make_custom(V.dim, value);
}

BoundResult first_order_bound(const Potential& V, const DiagonalWeight& W,
                              double box_radius, int grid_n) {
  intertwine::InfRhoResult ir = intertwine::inf_rho(V, W, box_radius, grid_n);
  BoundResult r;
  r.target = "lambda_1";
  r.method = "first_order";
  r.value = ir.value;
  r.constituents.push_back({"inf_rho", ir.value, "grid-infimum"});
  r.checks.push_back({"inf_rho_positive", ir.value > 0.0, ir.value});
  r.applicable = ir.value > 0.0;
  return r;
}

BoundResult cordero_bound(const Potential& V, double lambda1,
                          const std::string& lambda1_provenance,
                          double box_radius, int grid_n) {
  intertwine::InfRhoResult ir = intertwine::inf_rho_hessian(V, box_radius, grid_n);
  BoundResult r;
  r.target = "lambda_d_plus_1";
  r.method = "cordero";
  r.value = lambda1 + ir.value;
  r.constituents.push_back({"lambda_1", lambda1, lambda1_provenance});
  r.constituents.push_back({"inf_rho_hessian", ir.value, "grid-infimum"});
  r.checks.push_back({"hessian_uniformly_convex", ir.value > 0.0, ir.value});
  r.checks.push_back({"lambda_1_positive", lambda1 > 0.0, lambda1});
  r.applicable = ir.value > 0.0 && lambda1 > 0.0;
  return r;
}

BoundResult second_order_bound(const Potential& V, const DiagonalWeight& W,
                               double lambda1A,
                               const std::string& lambda1A_provenance,
                               double box_radius, int grid_n) {
  intertwine::InfRhoResult ir = intertwine::inf_rho(V, W, box_radius, grid_n);
  BoundResult r;
  r.target = "lambda_d_plus_1";
  r.method = "second_order";
  r.value = lambda1A + ir.value;
  r.constituents.push_back({"lambda_1_A", lambda1A, lambda1A_provenance});
  r.constituents.push_back({"inf_rho", ir.value, "grid-infimum"});
  r.checks.push_back({"curvature_uniformly_positive", ir.value > 0.0, ir.value});
  r.checks.push_back({"lambda_1_A_positive", lambda1A > 0.0, lambda1A});
  r.applicable = ir.value > 0.0 && lambda1A > 0.0;
  r.note = "lambda_1_A used in place of the restricted gap (a lower bound)";
  return r;
}

double weighted_gap_oracle(const Potential& V, const DiagonalWeight& W, int i,
                           const oracle::Grid& grid, double tol,
                           unsigned long seed) {
  Potential vi = reweighted_potential(V, W, i);
  oracle::DiscreteOperator op = oracle::discretize(vi, grid);
  oracle::SpectrumResult spec = oracle::lowest_eigs(op, 2, tol, seed);
  if (!spec.converged)
    throw oracle::NoConvergence("weighted gap eigensolve did not converge");
  return spec.eigenvalues[1] - spec.eigenvalues[0];
}

AlphaBeta alpha_beta(const Potential& V, const std::vector<double>& eps,
                     double box_radius) {
  require_diagonal_eps(V, eps);
  const auto& s = *V.structure;

  AlphaBeta ab;
  if (s.interaction) {
    ab.c1 = s.interaction->curvature_lower_bound();
    ab.c2 = s.interaction->partial_sup_bound();
  }
  double offset = ab.c1 - 0.5 * ab.c2 * ab.c2;

  ab.applicable = true;
  for (int i = 0; i < V.dim; ++i) {
    const auto& u = s.components[i];
    double e = eps[i];
    double a = offset + component_criterion_inf(u, 1.0 - e,
                                                e * (1.0 - 1.5 * e), box_radius);
    double onem2e = 1.0 - 2.0 * e;
    double b = offset +
               component_criterion_inf(u, (1.0 - e) * onem2e,
                                       e * (1.0 - 1.5 * e) * onem2e * onem2e,
                                       box_radius);
    ab.alpha.push_back(a);
    ab.beta.push_back(b);
    ab.applicable = ab.applicable && a > 0.0 && b > 0.0;
  }
  return ab;
}

double weighted_gap_analytic(const Potential& V, const DiagonalWeight& W, int i,
                             double box_radius) {
  if (W.family != model::WeightFamily::ExpEpsU)
    throw intertwine::UnsupportedWeight(
        "analytic weighted gap needs the exp_eps_u weight");
  if (i < 0 || i >= V.dim) throw std::out_of_range("coordinate index");
  AlphaBeta ab = alpha_beta(V, W.eps, box_radius);
  double best = ab.beta[i];
  for (int j = 0; j < V.dim; ++j)
    if (j != i) best = std::min(best, ab.alpha[j]);
  return best;
}

double lambda_1_A_oracle(const Potential& V, const DiagonalWeight& W,
                         const oracle::Grid& grid, double tol,
                         unsigned long seed) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < V.dim; ++i)
    best = std::min(best, weighted_gap_oracle(V, W, i, grid, tol, seed));
  return best;
}

double lambda_1_A_analytic(const Potential& V, const DiagonalWeight& W,
                           double box_radius) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < V.dim; ++i)
    best = std::min(best, weighted_gap_analytic(V, W, i, box_radius));
  return best;
}

std::pair<BoundResult, BoundResult> prop41(const Potential& V,
                                           const std::vector<double>& eps,
                                           double box_radius) {
  require_diagonal_eps(V, eps);
  const auto& s = *V.structure;
  for (const auto& u : s.components)
    if (!u.convex)
      throw std::invalid_argument("prop41 requires convex one-dimensional components");

  double c1 = 0.0, c2 = 0.0;
  if (s.interaction) {
    c1 = s.interaction->curvature_lower_bound();
    c2 = s.interaction->partial_sup_bound();
  }
  double gamma = std::numeric_limits<double>::infinity();
  for (int i = 0; i < V.dim; ++i)
    gamma = std::min(gamma, gamma_component(s.components[i], eps[i], box_radius));

  auto make = [&](const std::string& target, double value) {
    BoundResult r;
    r.target = target;
    r.method = "prop41";
    r.value = value;
    std::string gamma_prov =
        s.components[0].family == model::ComponentFamily::Power
            ? "analytic-closed-form"
            : "grid-infimum";
    r.constituents.push_back({"gamma", gamma, gamma_prov});
    r.constituents.push_back({"c_1", c1, "analytic-closed-form"});
    r.constituents.push_back({"c_2", c2, "analytic-closed-form"});
    r.checks.push_back({"gamma_positive", gamma > 0.0, gamma});
    r.checks.push_back({"bound_positive", value > 0.0, value});
    r.applicable = gamma > 0.0 && value > 0.0;
    return r;
  };
  double base = c1 - 0.5 * c2 * c2;
  return {make("lambda_1", gamma + base), make("lambda_d_plus_1", 2.0 * gamma + base)};
}

double closed_form_inf_power(double a, double eps) {
  if (!(a > 1.0 && a < 2.0))
    throw std::invalid_argument("closed form requires a in (1,2)");
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("closed form requires eps in (0,1/2)");
  double t = (2.0 - a) / (2.0 * eps);
  return (a - 1.0) * std::pow(t, 1.0 - 2.0 / a) + eps * std::pow(t, 2.0 - 2.0 / a);
}

double brute_force_inf_power(double a, double eps, double box_radius,
                             long grid_n) {
  model::OneDimComponent u = model::make_power_component(a);
  // the criterion is even in y; scan (0, R]
  double best = std::numeric_limits<double>::infinity();
  double best_y = 0.0;
  double h = box_radius / static_cast<double>(grid_n);
  for (long i = 1; i <= grid_n; ++i) {
    double y = i * h;
    double d1 = u.d1(y);
    double v = u.d2(y) + eps * d1 * d1;
    if (v < best) {
      best = v;
      best_y = y;
    }
  }
  auto crit = [&](double y) {
    if (y < model::kPunctureSearch) return std::numeric_limits<double>::infinity();
    double d1 = u.d1(y);
    return u.d2(y) + eps * d1 * d1;
  };
  auto [y, v] = optimize::golden_min(crit, std::max(best_y - h, 0.0),
                                     std::min(best_y + h, box_radius), 1e-12);
  (void)y;
  return std::min(best, v);
}

EpsOptimum optimize_eps(const Potential& V, EpsObjective objective,
                        double box_radius) {
  if (!V.has_product_structure())
    throw std::invalid_argument("optimize_eps requires a product structure");
  const auto& s = *V.structure;

  const double lo = 1e-3, hi = 0.5 - 1e-3;
  EpsOptimum best;
  double gamma = std::numeric_limits<double>::infinity();
  for (int i = 0; i < V.dim; ++i) {
    const auto& u = s.components[i];
    auto neg = [&](double e) { return -gamma_component(u, e, box_radius); };
    auto [e_star, neg_v] = optimize::grid_then_golden_min(neg, lo, hi, 64, 1e-8);
    double v_star = -neg_v;
    if (u.family == model::ComponentFamily::Power) {
      double e_paper = 1.0 - u.exponent / 2.0;
      double v_paper = gamma_component(u, e_paper, box_radius);
      if (v_paper >= v_star) {
        e_star = e_paper;
        v_star = v_paper;
      }
    }
    best.eps.push_back(e_star);
    gamma = std::min(gamma, v_star);
  }
  best.value = gamma;
  if (objective == EpsObjective::Lambda1Bound && s.interaction) {
    double c1 = s.interaction->curvature_lower_bound();
    double c2 = s.interaction->partial_sup_bound();
    best.value = gamma + c1 - 0.5 * c2 * c2;
  }
  return best;
}

}  // namespace specbound::bounds
