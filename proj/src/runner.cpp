#include "specbound/runner.hpp"

#include "specbound/bounds.hpp"
#include "specbound/expr.hpp"
#include "specbound/intertwine.hpp"
#include "specbound/oracle.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

namespace specbound::runner {

namespace {

using json = nlohmann::json;
using model::DiagonalWeight;
using model::Point;
using model::Potential;

constexpr double kBoundVsOracleTol = 2e-2;

Potential build_potential(const config::RunConfig& cfg) {
  const auto& p = cfg.problem;
  if (p.family == "gaussian") return model::make_gaussian(p.dim);
  if (p.family == "power_product")
    return model::make_power_product(p.dim, p.a, p.c, p.tau);
  return expr::make_expression_potential(p.expr, p.dim);
}

DiagonalWeight build_weight(const config::RunConfig& cfg, const Potential& V,
                            std::vector<double>* eps_used) {
  const auto& w = cfg.weight;
  if (w.family == "identity") return model::make_identity_weight(V.dim);
  std::vector<double> eps = w.eps;
  if (w.family == "optimize") {
    bounds::EpsOptimum opt = bounds::optimize_eps(V, bounds::EpsObjective::Gamma);
    eps = opt.eps;
  } else if (eps.size() == 1 && V.dim > 1) {
    eps.assign(V.dim, eps[0]);  // broadcast a single value
  }
  if (eps_used) *eps_used = eps;
  return model::make_weight(V, model::WeightFamily::ExpEpsU, eps);
}

int inf_grid_for(int dim) {
  switch (dim) {
    case 1: return 4097;
    case 2: return 129;
    default: return 33;
  }
}

json to_json(const bounds::BoundResult& r) {
  json j;
  j["target"] = r.target;
  j["method"] = r.method;
  j["value"] = r.value;
  j["applicable"] = r.applicable;
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"margin", c.margin}});
  j["hypothesis_checks"] = checks;
  json consts = json::array();
  for (const auto& c : r.constituents)
    consts.push_back({{"name", c.name}, {"value", c.value}, {"provenance", c.provenance}});
  j["constituents"] = consts;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

intertwine::ScalarField poly_field(
    std::function<double(const Point&)> v, std::function<Point(const Point&)> g,
    std::function<model::Matrix(const Point&)> h) {
  intertwine::ScalarField f;
  f.value = std::move(v);
  f.gradient = std::move(g);
  f.hessian = std::move(h);
  return f;
}

std::vector<std::pair<std::string, intertwine::ScalarField>> test_functions(int d) {
  std::vector<std::pair<std::string, intertwine::ScalarField>> fs;
  auto zero_mat = [d](const Point&) { return model::Matrix::Zero(d, d); };
  fs.emplace_back("x1", poly_field([](const Point& x) { return x[0]; },
                                   [d](const Point&) {
                                     Point g = Point::Zero(d);
                                     g[0] = 1.0;
                                     return g;
                                   },
                                   zero_mat));
  fs.emplace_back("x1^2",
                  poly_field([](const Point& x) { return x[0] * x[0]; },
                             [d](const Point& x) {
                               Point g = Point::Zero(d);
                               g[0] = 2.0 * x[0];
                               return g;
                             },
                             [d](const Point&) {
                               model::Matrix h = model::Matrix::Zero(d, d);
                               h(0, 0) = 2.0;
                               return h;
                             }));
  if (d >= 2) {
    fs.emplace_back("x1*x2",
                    poly_field([](const Point& x) { return x[0] * x[1]; },
                               [d](const Point& x) {
                                 Point g = Point::Zero(d);
                                 g[0] = x[1];
                                 g[1] = x[0];
                                 return g;
                               },
                               [d](const Point&) {
                                 model::Matrix h = model::Matrix::Zero(d, d);
                                 h(0, 1) = h(1, 0) = 1.0;
                                 return h;
                               }));
  } else {
    fs.emplace_back("x1^3-x1",
                    poly_field([](const Point& x) { return x[0] * x[0] * x[0] - x[0]; },
                               [d](const Point& x) {
                                 Point g = Point::Zero(d);
                                 g[0] = 3.0 * x[0] * x[0] - 1.0;
                                 return g;
                               },
                               [d](const Point& x) {
                                 model::Matrix h = model::Matrix::Zero(d, d);
                                 h(0, 0) = 6.0 * x[0];
                                 return h;
                               }));
  }
  return fs;
}

}  // namespace

RunOutcome run(const config::RunConfig& cfg) {
  RunOutcome outcome;
  json& report = outcome.report;
  auto t_start = std::chrono::steady_clock::now();

  Potential V = build_potential(cfg);
  std::vector<double> eps_used;
  DiagonalWeight W = build_weight(cfg, V, &eps_used);

  double R = cfg.effective_radius();
  int oracle_n = cfg.effective_n();
  int inf_n = inf_grid_for(V.dim);

  report["schema_version"] = cfg.schema_version;
  report["problem"] = {{"family", cfg.problem.family}, {"d", cfg.problem.dim}};
  if (cfg.problem.family == "power_product") {
    report["problem"]["a"] = cfg.problem.a;
    report["problem"]["c"] = cfg.problem.c;
    report["problem"]["tau"] = cfg.problem.tau;
  }
  if (cfg.problem.family == "custom") report["problem"]["expr"] = cfg.problem.expr;
  report["weight"] = {{"family", cfg.weight.family}};
  if (!eps_used.empty()) report["weight"]["eps"] = eps_used;
  report["grid"] = {{"radius", R}, {"n", oracle_n}};
  report["seed"] = cfg.seed;

  std::optional<oracle::DiscreteOperator> op;
  auto ensure_op = [&]() -> const oracle::DiscreteOperator& {
    if (!op) op = oracle::discretize(V, oracle::Grid{V.dim, R, oracle_n});
    return *op;
  };

  std::vector<bounds::BoundResult> bound_results;
  std::optional<oracle::SpectrumResult> spectrum;
  bool nonconverged = false;

  for (config::Command cmd : cfg.commands) {
    if (cmd == config::Command::Bound) {
      bounds::BoundResult first = bounds::first_order_bound(V, W, R, inf_n);
      bound_results.push_back(first);

      double lambda1 = first.value;
      std::string prov = "first-order-bound";
      if (spectrum && spectrum->eigenvalues.size() >= 2) {
        lambda1 = spectrum->eigenvalues[1];
        prov = "oracle-eigensolve";
      }
      if (lambda1 > 0.0)
        bound_results.push_back(bounds::cordero_bound(V, lambda1, prov, R, inf_n));

      if (W.family == model::WeightFamily::ExpEpsU && V.has_product_structure()) {
        double l1a = bounds::lambda_1_A_analytic(V, W, R);
        bound_results.push_back(
            bounds::second_order_bound(V, W, l1a, "analytic-closed-form", R, inf_n));
        try {
          auto [p1, pd] = bounds::prop41(V, eps_used, R);
          bound_results.push_back(p1);
          bound_results.push_back(pd);
        } catch (const std::invalid_argument&) {
          // non-convex components: prop41 out of reach, skip
        }
      } else if (first.applicable) {
        // identity weight: lambda_1^A reduces to lambda_1
        bound_results.push_back(bounds::second_order_bound(
            V, W, first.value, "first-order-bound", R, inf_n));
      }
    } else if (cmd == config::Command::Eigs) {
      int k = std::min(V.dim + 2, 20);
      spectrum = oracle::lowest_eigs(ensure_op(), k, 1e-8, cfg.seed);
      nonconverged = nonconverged || !spectrum->converged;
    } else if (cmd == config::Command::Verify) {
      json verify;
      // intertwining residuals at a fixed off-axis sample point
      Point x0(V.dim);
      for (int i = 0; i < V.dim; ++i) x0[i] = 0.6 + 0.2 * i;
      json residuals = json::object();
      for (const auto& [name, f] : test_functions(V.dim)) {
        Point r = intertwine::check_intertwining(V, W, f, x0, 1e-3);
        residuals[name] = r.cwiseAbs().maxCoeff();
      }
      verify["intertwining_residuals"] = residuals;

      const oracle::DiscreteOperator& d_op = ensure_op();
      json bl = json::array();
      for (const auto& [name, f] : test_functions(V.dim)) {
        oracle::Vector fn = oracle::sample(d_op, f.value);
        oracle::IneqCheck c = oracle::verify_bl(d_op, V, nullptr, fn);
        bl.push_back({{"f", name},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"slack", c.slack},
                      {"excluded_nodes", c.excluded_nodes}});
      }
      verify["brascamp_lieb"] = bl;

      if (V.dim == 1) {
        json lemma = json::array();
        for (const auto& [name, f] : test_functions(1)) {
          oracle::Vector fn = oracle::sample(d_op, f.value);
          oracle::IdentityCheck c =
              oracle::verify_variance_identity_1d(d_op, V, W, fn);
          lemma.push_back({{"f", name},
                           {"lhs", c.lhs},
                           {"rhs", c.rhs},
                           {"mismatch", c.mismatch}});
        }
        verify["variance_identity"] = lemma;

        oracle::JohnsenCheck jc = oracle::johnsen_check_1d(d_op, V, 5);
        verify["johnsen"] = {{"spec_scalar", jc.spec_scalar},
                             {"spec_schrodinger", jc.spec_schrodinger},
                             {"max_diff", jc.max_diff}};
      }
      report["verify"] = verify;
    } else if (cmd == config::Command::Report) {
      // serialization happens below once everything is assembled
    }
  }

  json bjson = json::array();
  for (const auto& b : bound_results) bjson.push_back(to_json(b));
  report["bounds"] = bjson;
  if (spectrum) {
    report["spectrum"] = {{"eigenvalues", spectrum->eigenvalues},
                          {"residuals", spectrum->residuals},
                          {"converged", spectrum->converged}};
  }

  // every reported bound must sit below the oracle value when both exist
  json violations = json::array();
  if (spectrum) {
    const auto& ev = spectrum->eigenvalues;
    for (const auto& b : bound_results) {
      if (!b.applicable) continue;
      std::optional<double> oracle_value;
      if (b.target == "lambda_1" && ev.size() >= 2) oracle_value = ev[1];
      if (b.target == "lambda_d_plus_1" &&
          ev.size() >= static_cast<size_t>(V.dim) + 2)
        oracle_value = ev[V.dim + 1];
      if (oracle_value && b.value > *oracle_value + kBoundVsOracleTol) {
        violations.push_back({{"method", b.method},
                              {"target", b.target},
                              {"bound", b.value},
                              {"oracle", *oracle_value}});
      }
    }
  }
  report["violations"] = violations;

  auto t_end = std::chrono::steady_clock::now();
  report["metadata"] = {
      {"version", "0.1.0"},
      {"timings",
       {{"total_seconds",
         std::chrono::duration<double>(t_end - t_start).count()}}}};

  if (cfg.dump_matrices && op) {
    std::filesystem::create_directories(cfg.output_dir);
    oracle::dump_operator_csv(*op, cfg.output_dir + "/operator");
  }

  if (nonconverged)
    outcome.exit_code = 3;
  else if (!violations.empty())
    outcome.exit_code = 2;
  return outcome;
}

void write_report(const config::RunConfig& cfg, const json& report) {
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream out(cfg.output_dir + "/report.json");
  out << report.dump(2) << "\n";

  if (cfg.write_csv) {
    if (report.contains("spectrum")) {
      std::ofstream csv(cfg.output_dir + "/eigenvalues.csv");
      csv << "index,eigenvalue,residual\n";
      const auto& ev = report["spectrum"]["eigenvalues"];
      const auto& res = report["spectrum"]["residuals"];
      for (size_t i = 0; i < ev.size(); ++i)
        csv << i << "," << ev[i].get<double>() << "," << res[i].get<double>()
            << "\n";
    }
    if (report.contains("bounds")) {
      std::ofstream csv(cfg.output_dir + "/bounds.csv");
      csv << "method,target,value,applicable\n";
      for (const auto& b : report["bounds"])
        csv << b["method"].get<std::string>() << ","
            << b["target"].get<std::string>() << "," << b["value"].get<double>()
            << "," << (b["applicable"].get<bool>() ? 1 : 0) << "\n";
    }
  }
}

}  // namespace specbound::runner
