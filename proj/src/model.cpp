#include "specbound/model.hpp"

#include <cmath>

namespace specbound::model {

namespace {

double power_value(double a, double y) { return std::pow(std::abs(y), a) / a; }

double power_d1(double a, double y) {
  if (std::abs(y) < kPuncture) return 0.0;
  double s = y > 0 ? 1.0 : -1.0;
  return s * std::pow(std::abs(y), a - 1.0);
}

double power_d2(double a, double y) {
  if (std::abs(y) < kPuncture) return kCurvatureCap;
  return std::min((a - 1.0) * std::pow(std::abs(y), a - 2.0), kCurvatureCap);
}

}  // namespace

OneDimComponent make_power_component(double a) {
  if (!(a > 1.0 && a < 2.0))
    throw std::invalid_argument("power component requires a in (1,2)");
  OneDimComponent u;
  u.family = ComponentFamily::Power;
  u.exponent = a;
  u.value = [a](double y) { return power_value(a, y); };
  u.d1 = [a](double y) { return power_d1(a, y); };
  u.d2 = [a](double y) { return power_d2(a, y); };
  u.convex = true;
  return u;
}

OneDimComponent make_quadratic_component() {
  OneDimComponent u;
  u.family = ComponentFamily::Quadratic;
  u.value = [](double y) { return 0.5 * y * y; };
  u.d1 = [](double y) { return y; };
  u.d2 = [](double) { return 1.0; };
  u.convex = true;
  return u;
}

double InteractionTerm::value(const Point& x) const {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    double u = x[(i + 1) % dim] - x[i];
    s += std::sqrt(smoothing * smoothing + u * u);
  }
  return coupling * s;
}

Point InteractionTerm::gradient(const Point& x) const {
  Point g = Point::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    int j = (i + 1) % dim;
    double u = x[j] - x[i];
    double r = std::sqrt(smoothing * smoothing + u * u);
    double du = coupling * u / r;
    g[j] += du;
    g[i] -= du;
  }
  return g;
}

Matrix InteractionTerm::hessian(const Point& x) const {
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    int j = (i + 1) % dim;
    double u = x[j] - x[i];
    double t2 = smoothing * smoothing;
    double r = std::sqrt(t2 + u * u);
    double w = coupling * t2 / (r * r * r);  // psi''(u) >= 0
    h(i, i) += w;
    h(j, j) += w;
    h(i, j) -= w;
    h(j, i) -= w;
  }
  return h;
}

Potential make_power_product(int d, double a, double c, double tau) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(a > 1.0 && a < 2.0))
    throw std::invalid_argument("make_power_product requires a in (1,2)");
  if (c < 0.0) throw std::invalid_argument("coupling must be >= 0");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");

  ProductStructure structure;
  for (int i = 0; i < d; ++i)
    structure.components.push_back(make_power_component(a));
  if (c > 0.0) structure.interaction = InteractionTerm{d, tau, c};

  InteractionTerm phi{d, tau, c};
  bool has_phi = c > 0.0;

  Potential V;
  V.dim = d;
  V.family = PotentialFamily::ProductPerturbed;
  V.structure = std::move(structure);
  V.value = [d, a, phi, has_phi](const Point& x) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += power_value(a, x[i]);
    if (has_phi) s += phi.value(x);
    return s;
  };
  V.gradient = [d, a, phi, has_phi](const Point& x) {
    Point g(d);
    for (int i = 0; i < d; ++i) g[i] = power_d1(a, x[i]);
    if (has_phi) g += phi.gradient(x);
    return g;
  };
  V.hessian = [d, a, phi, has_phi](const Point& x) {
    Matrix h = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) h(i, i) = power_d2(a, x[i]);
    if (has_phi) h += phi.hessian(x);
    return h;
  };
  return V;
}

Potential make_gaussian(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  ProductStructure structure;
  for (int i = 0; i < d; ++i)
    structure.components.push_back(make_quadratic_component());

  Potential V;
  V.dim = d;
  V.family = PotentialFamily::Gaussian;
  V.structure = std::move(structure);
  V.value = [](const Point& x) { return 0.5 * x.squaredNorm(); };
  V.gradient = [](const Point& x) { return x; };
  V.hessian = [d](const Point&) { return Matrix::Identity(d, d); };
  return V;
}

Potential make_custom(int d, std::function<double(const Point&)> value,
                      std::function<Point(const Point&)> gradient,
                      std::function<Matrix(const Point&)> hessian) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!value) throw std::invalid_argument("custom potential needs a value");
  Potential V;
  V.dim = d;
  V.family = PotentialFamily::Custom;
  V.value = value;
  V.gradient = gradient ? std::move(gradient)
                        : [value](const Point& x) { return fd_gradient(value, x); };
  V.hessian = hessian ? std::move(hessian)
                      : [value](const Point& x) { return fd_hessian(value, x); };
  return V;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double lo,
                        double hi, double fl, double fm, double fh, double whole,
                        double tol, int depth) {
  double mid = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  double flm = f(lm), frm = f(rm);
  double left = (mid - lo) / 6.0 * (fl + 4.0 * flm + fm);
  double right = (hi - mid) / 6.0 * (fm + 4.0 * frm + fh);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, lo, mid, fl, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, mid, hi, fm, frm, fh, right, tol / 2, depth - 1);
}

double integrate_1d(const std::function<double(double)>& f, double lo,
                    double hi, double tol = 1e-12) {
  if (lo == hi) return 0.0;
  double fl = f(lo), fh = f(hi), fm = f(0.5 * (lo + hi));
  double whole = (hi - lo) / 6.0 * (fl + 4.0 * fm + fh);
  return adaptive_simpson(f, lo, hi, fl, fm, fh, whole, tol, 40);
}

}  // namespace

double DiagonalWeight::antiderivative(int i, double y) const {
  if (i < 0 || i >= dim) throw std::out_of_range("coordinate index");
  if (y >= 0.0) return integrate_1d(g[i], 0.0, y);
  return -integrate_1d(g[i], y, 0.0);
}

DiagonalWeight make_identity_weight(int d) {
  DiagonalWeight w;
  w.dim = d;
  w.family = WeightFamily::Identity;
  for (int i = 0; i < d; ++i) {
    w.g.emplace_back([](double) { return 1.0; });
    w.dg.emplace_back([](double) { return 0.0; });
    w.ddg.emplace_back([](double) { return 0.0; });
  }
  return w;
}

DiagonalWeight make_weight(const Potential& potential, WeightFamily family,
                           const std::vector<double>& eps) {
  int d = potential.dim;
  if (family == WeightFamily::Identity) return make_identity_weight(d);
  if (family != WeightFamily::ExpEpsU)
    throw std::invalid_argument("make_weight: unsupported family");
  if (!potential.has_product_structure())
    throw std::invalid_argument(
        "exp_eps_u weight requires a potential with product structure");
  if (static_cast<int>(eps.size()) != d)
    throw std::invalid_argument("exp_eps_u weight needs one eps per coordinate");
  for (double e : eps)
    if (!(e > 0.0 && e < 0.5))
      throw std::invalid_argument("exp_eps_u parameters must lie in (0,1/2)");

  DiagonalWeight w;
  w.dim = d;
  w.family = WeightFamily::ExpEpsU;
  w.eps = eps;
  for (int i = 0; i < d; ++i) {
    const OneDimComponent& u = potential.structure->components[i];
    double e = eps[i];
    w.g.emplace_back([u, e](double y) { return std::exp(e * u.value(y)); });
    w.dg.emplace_back([u, e](double y) {
      return e * u.d1(y) * std::exp(e * u.value(y));
    });
    w.ddg.emplace_back([u, e](double y) {
      double d1 = u.d1(y);
      return (e * u.d2(y) + e * e * d1 * d1) * std::exp(e * u.value(y));
    });
  }
  return w;
}

Point fd_gradient(const std::function<double(const Point&)>& f, const Point& x,
                  double step) {
  Point g(x.size());
  Point xp = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + step;
    double fp = f(xp);
    xp[i] = x[i] - step;
    double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

Matrix fd_hessian(const std::function<double(const Point&)>& f, const Point& x,
                  double step) {
  int d = static_cast<int>(x.size());
  Matrix h(d, d);
  double f0 = f(x);
  Point xp = x;
  for (int i = 0; i < d; ++i) {
    xp[i] = x[i] + step;
    double fp = f(xp);
    xp[i] = x[i] - step;
    double fm = f(xp);
    xp[i] = x[i];
    h(i, i) = (fp - 2.0 * f0 + fm) / (step * step);
    for (int j = i + 1; j < d; ++j) {
      xp[i] = x[i] + step;
      xp[j] = x[j] + step;
      double fpp = f(xp);
      xp[j] = x[j] - step;
      double fpm = f(xp);
      xp[i] = x[i] - step;
      double fmm = f(xp);
      xp[j] = x[j] + step;
      double fmp = f(xp);
      xp[i] = x[i];
      xp[j] = x[j];
      h(i, j) = h(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
    }
  }
  return h;
}

}  // namespace specbound::model
