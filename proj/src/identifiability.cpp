#include "cwmix/identifiability.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace cwmix {

namespace {

void require_family(const Component1D& c, Family f, const char* op) {
  if (c.family != f) {
    std::ostringstream os;
    os << op << " is defined for " << family_name(f) << " components only";
    throw FamilyMismatchError(os.str());
  }
  if (!(c.scale > 0.0)) {
    throw InvalidArgumentError("component scale must be positive");
  }
  if (f == Family::student_t && c.dof < 1) {
    throw InvalidArgumentError(
        "t components need a positive integer degrees of freedom");
  }
}

// Integral of the density product over [center - wl, center + wr], where the
// window is grown until the integrand has dropped below cut_tol * peak on
// both sides. The quadrature engine itself runs far below cut_tol, so the
// window choice dominates the error.
double t_product_integral(const Component1D& a, const Component1D& b,
                          double cut_tol) {
  const auto f = [&](double x) {
    return density_eval(a, x) * density_eval(b, x);
  };
  const double center = 0.5 * (a.mean + b.mean);
  const double w0 =
      std::max({a.scale, b.scale, 0.5 * std::abs(a.mean - b.mean), 1.0});
  double peak = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double x = center + w0 * 4.0 * (i / 32.0 - 1.0);
    peak = std::max(peak, f(x));
  }
  const double cut = cut_tol * peak;
  double wl = w0, wr = w0;
  while (f(center - wl) > cut && wl < 1e12 * w0) wl *= 2.0;
  while (f(center + wr) > cut && wr < 1e12 * w0) wr *= 2.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, center - wl, center + wr, 15, 1e-13);
}

}  // namespace

double gauss_l2_inner(const Component1D& a, const Component1D& b) {
  require_family(a, Family::gaussian, "gauss_l2_inner");
  require_family(b, Family::gaussian, "gauss_l2_inner");
  const double s2 = a.scale * a.scale + b.scale * b.scale;
  const double dm = a.mean - b.mean;
  return std::exp(-dm * dm / (2.0 * s2)) /
         std::sqrt(2.0 * std::numbers::pi * s2);
}

double t_l2_inner(const Component1D& a, const Component1D& b,
                  double quad_tol) {
  require_family(a, Family::student_t, "t_l2_inner");
  require_family(b, Family::student_t, "t_l2_inner");
  if (!(quad_tol > 0.0)) {
    throw InvalidArgumentError("quadrature tolerance must be positive");
  }
  const double coarse = t_product_integral(a, b, quad_tol);
  const double fine = t_product_integral(a, b, 0.5 * quad_tol);
  if (!(std::abs(coarse - fine) < 10.0 * quad_tol)) {
    std::ostringstream os;
    os << "tail-cutoff validation failed: halving the cutoff moved the "
       << "integral by " << std::abs(coarse - fine);
    throw QuadratureError(os.str());
  }
  return coarse;
}

GramReport independence_test(const std::vector<Component1D>& components,
                             double eig_threshold, double quad_tol) {
  if (components.empty()) {
    throw InvalidArgumentError("independence test needs at least one component");
  }
  if (!(eig_threshold > 0.0)) {
    throw InvalidArgumentError("eigenvalue threshold must be positive");
  }
  const Family family = components.front().family;
  for (const Component1D& c : components) {
    if (c.family != family) {
      throw FamilyMismatchError("components belong to different families");
    }
  }
  const int n = static_cast<int>(components.size());
  GramReport rep;
  rep.size = n;
  rep.threshold = eig_threshold;
  rep.gram.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v =
          family == Family::gaussian
              ? gauss_l2_inner(components[i], components[j])
              : t_l2_inner(components[i], components[j], quad_tol);
      rep.gram(i, j) = v;
      rep.gram(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.gram,
                                                    Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues()[0];
  rep.max_eigenvalue = es.eigenvalues()[n - 1];
  rep.independent = rep.min_eigenvalue > eig_threshold * rep.max_eigenvalue;
  return rep;
}

}  // namespace cwmix
