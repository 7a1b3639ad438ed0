#include "specbound/intertwine.hpp"

#include "specbound/optimize.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace specbound::intertwine {

namespace {

constexpr double kFdSymmetryTol = 1e-5;  // FD-based symmetry checks
constexpr double kFdStep = 1e-4;

double relative_asymmetry(const Matrix& m) {
  double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-12);
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

double smallest_eigenvalue(const Matrix& m) {
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool lex_less(const Point& a, const Point& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

bool in_puncture(const Potential& V, const Point& x) {
  if (V.family != model::PotentialFamily::ProductPerturbed) return false;
  for (int i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) < model::kPunctureSearch) return true;
  return false;
}

}  // namespace

MatrixField weight_field(const DiagonalWeight& w) {
  MatrixField A;
  A.dim = w.dim;
  A.evaluate = [w](const Point& x) {
    Matrix a = Matrix::Zero(w.dim, w.dim);
    for (int i = 0; i < w.dim; ++i) {
      double gi = w.g[i](x[i]);
      if (!(gi > 0.0)) throw WeightVanished("weight g_i <= 0 at sample point");
      a(i, i) = 1.0 / gi;
    }
    return a;
  };
  return A;
}

MatrixField identity_field(int d) {
  MatrixField A;
  A.dim = d;
  A.evaluate = [d](const Point&) { return Matrix::Identity(d, d); };
  return A;
}

double apply_generator(const Potential& V, const ScalarField& f, const Point& x) {
  return f.hess(x).trace() - V.gradient(x).dot(f.grad(x));
}

double carre_du_champ(const ScalarField& f, const ScalarField& g, const Point& x) {
  return f.grad(x).dot(g.grad(x));
}

Matrix curvature_matrix(const Potential& V, const DiagonalWeight& W, const Point& x) {
  if (W.dim != V.dim) throw std::invalid_argument("weight/potential dimension mismatch");
  Matrix m = V.hessian(x);
  Point grad = V.gradient(x);
  for (int i = 0; i < V.dim; ++i) {
    double gi = W.g[i](x[i]);
    if (!(gi > 0.0)) throw WeightVanished("weight g_i <= 0");
    m(i, i) += -W.ddg[i](x[i]) / gi + grad[i] * W.dg[i](x[i]) / gi;
  }
  // diagonal weights always yield a symmetric matrix
  return 0.5 * (m + m.transpose());
}

Matrix curvature_matrix_product_form(const Potential& V, const DiagonalWeight& W,
                                     const Point& x) {
  if (W.family == model::WeightFamily::Identity) return V.hessian(x);
  if (W.family != model::WeightFamily::ExpEpsU || !V.has_product_structure())
    throw UnsupportedWeight("product closed form needs exp_eps_u weight");
  const auto& s = *V.structure;
  int d = V.dim;
  Matrix m = Matrix::Zero(d, d);
  Point phi_grad = Point::Zero(d);
  if (s.interaction) {
    m = s.interaction->hessian(x);
    phi_grad = s.interaction->gradient(x);
  }
  for (int i = 0; i < d; ++i) {
    const auto& u = s.components[i];
    double e = W.eps[i];
    double u1 = u.d1(x[i]);
    m(i, i) += (1.0 - e) * (u.d2(x[i]) + e * u1 * u1) + e * phi_grad[i] * u1;
  }
  return m;
}

namespace {

// L applied entrywise to the matrix field A^{-1}, by central differences.
Matrix generator_of_inverse(const Potential& V, const MatrixField& A,
                            const Point& x, const Matrix& inv0) {
  int d = A.dim;
  Point gradV = V.gradient(x);
  Matrix out = -2.0 * d * inv0 / (kFdStep * kFdStep);
  Point xp = x;
  for (int k = 0; k < d; ++k) {
    xp[k] = x[k] + kFdStep;
    Matrix ip = A.evaluate(xp).inverse();
    xp[k] = x[k] - kFdStep;
    Matrix im = A.evaluate(xp).inverse();
    xp[k] = x[k];
    out += (ip + im) / (kFdStep * kFdStep);
    out -= gradV[k] * (ip - im) / (2.0 * kFdStep);
  }
  return out;
}

}  // namespace

SymmetryReport symmetry_report(const Potential& V, const MatrixField& A,
                               double box_radius, int n_samples,
                               unsigned long seed) {
  int d = A.dim;
  SymmetryReport report;
  report.passed.fill(true);
  for (auto& p : report.worst_point) p = Point::Zero(d);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-box_radius, box_radius);

  for (int s = 0; s < n_samples; ++s) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = unif(rng);
    if (in_puncture(V, x)) continue;

    Matrix a = A.evaluate(x);
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible())
      throw SingularWeight("matrix field A singular at sample point");
    Matrix inv = lu.inverse();

    auto record = [&](int idx, const Matrix& m) {
      double asym = relative_asymmetry(m);
      if (asym > report.worst_asymmetry[idx]) {
        report.worst_asymmetry[idx] = asym;
        report.worst_point[idx] = x;
      }
      if (asym > kFdSymmetryTol) report.passed[idx] = false;
    };

    // 1: (A^-1)^T d_k A^-1 symmetric for every direction k
    Point xp = x;
    for (int k = 0; k < d; ++k) {
      xp[k] = x[k] + kFdStep;
      Matrix ip = A.evaluate(xp).inverse();
      xp[k] = x[k] - kFdStep;
      Matrix im = A.evaluate(xp).inverse();
      xp[k] = x[k];
      record(0, inv.transpose() * ((ip - im) / (2.0 * kFdStep)));
    }

    Matrix l_inv = generator_of_inverse(V, A, x, inv);
    record(1, inv.transpose() * l_inv);

    Matrix hess = V.hessian(x);
    Matrix m_a = a * hess * inv - a * l_inv;
    Matrix s_mat = (a * a.transpose()).inverse();
    record(2, s_mat * m_a);
    record(3, hess - l_inv * a);
  }
  return report;
}

namespace {

InfRhoResult scan_field(const Potential& V,
                        const std::function<Matrix(const Point&)>& field,
                        double box_radius, int grid_n) {
  if (grid_n < 8) throw std::invalid_argument("inf_rho requires grid_n >= 8");
  int d = V.dim;
  double h = 2.0 * box_radius / (grid_n - 1);

  InfRhoResult result;
  result.box_radius = box_radius;
  result.grid_n = grid_n;
  result.value = std::numeric_limits<double>::infinity();
  result.argmin = Point::Zero(d);

  std::vector<int> idx(d, 0);
  Point x(d);
  long total = 1;
  for (int i = 0; i < d; ++i) total *= grid_n;
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int i = 0; i < d; ++i) {
      idx[i] = static_cast<int>(rem % grid_n);
      rem /= grid_n;
      x[i] = -box_radius + idx[i] * h;
    }
    if (in_puncture(V, x)) continue;
    double rho = smallest_eigenvalue(field(x));
    if (rho < result.value ||
        (rho == result.value && lex_less(x, result.argmin))) {
      result.value = rho;
      result.argmin = x;
    }
  }

  // coordinate-descent refinement around the grid argmin
  Point y = result.argmin;
  auto eval = [&](const Point& p) {
    if (in_puncture(V, p)) return std::numeric_limits<double>::infinity();
    return smallest_eigenvalue(field(p));
  };
  for (int sweep = 0; sweep < 50; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < d; ++i) {
      Point p = y;
      auto line = [&](double t) {
        p[i] = t;
        return eval(p);
      };
      auto [t, v] = optimize::grid_then_golden_min(
          line, std::max(-box_radius, y[i] - h), std::min(box_radius, y[i] + h),
          33, 1e-9);
      moved = std::max(moved, std::abs(t - y[i]));
      y[i] = t;
      (void)v;
    }
    if (moved < 1e-8) break;
  }
  double refined = eval(y);
  if (refined < result.value) {
    result.value = refined;
    result.argmin = y;
  }
  result.refined = true;
  return result;
}

}  // namespace

InfRhoResult inf_rho(const Potential& V, const DiagonalWeight& W,
                     double box_radius, int grid_n) {
  return scan_field(
      V, [&](const Point& x) { return curvature_matrix(V, W, x); }, box_radius,
      grid_n);
}

InfRhoResult inf_rho_hessian(const Potential& V, double box_radius, int grid_n) {
  return scan_field(
      V, [&](const Point& x) { return V.hessian(x); }, box_radius, grid_n);
}

Point check_intertwining(const Potential& V, const DiagonalWeight& W,
                         const ScalarField& f, const Point& x, double step) {
  int d = V.dim;
  auto weighted_grad = [&](const Point& y) {
    Point F = f.grad(y);
    for (int i = 0; i < d; ++i) {
      double gi = W.g[i](y[i]);
      if (!(gi > 0.0)) throw WeightVanished("weight g_i <= 0");
      F[i] /= gi;
    }
    return F;
  };
  auto lf = [&](const Point& y) { return apply_generator(V, f, y); };

  // left side: A grad(Lf)
  Point lhs = Point::Zero(d);
  Point xp = x;
  for (int i = 0; i < d; ++i) {
    xp[i] = x[i] + step;
    double fp = lf(xp);
    xp[i] = x[i] - step;
    double fm = lf(xp);
    xp[i] = x[i];
    lhs[i] = (fp - fm) / (2.0 * step) / W.g[i](x[i]);
  }

  // right side: L_A F - M_A F with F = A grad f
  Point F0 = weighted_grad(x);
  Point gradV = V.gradient(x);
  Matrix curv = curvature_matrix(V, W, x);
  Point rhs = Point::Zero(d);
  for (int i = 0; i < d; ++i) {
    double lap = 0.0, drift = 0.0, di = 0.0;
    for (int k = 0; k < d; ++k) {
      xp[k] = x[k] + step;
      double Fp = weighted_grad(xp)[i];
      xp[k] = x[k] - step;
      double Fm = weighted_grad(xp)[i];
      xp[k] = x[k];
      lap += (Fp - 2.0 * F0[i] + Fm) / (step * step);
      double dk = (Fp - Fm) / (2.0 * step);
      drift += gradV[k] * dk;
      if (k == i) di = dk;
    }
    rhs[i] = lap - drift + 2.0 * (W.dg[i](x[i]) / W.g[i](x[i])) * di;
  }
  // M_A = A C A^{-1} for the diagonal weight, C the curvature matrix
  for (int i = 0; i < d; ++i) {
    double gi = W.g[i](x[i]);
    for (int j = 0; j < d; ++j)
      rhs[i] -= curv(i, j) * (W.g[j](x[j]) / gi) * F0[j];
  }
  return lhs - rhs;
}

}  // namespace specbound::intertwine
