// Linear-independence checks for univariate mixture component densities.
// Finite Gaussian (resp. t) families with pairwise distinct parameters are
// linearly independent in L2; the Gram matrix of pairwise L2 inner products
// is therefore positive-definite exactly when the component parameters are
// pairwise distinct, which is what independence_test certifies numerically.
#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cwmix/model.hpp"

namespace cwmix {

inline constexpr double kDefaultEigThreshold = 1e-12;
inline constexpr double kDefaultQuadTol = 1e-10;

/// L2 inner product of two Gaussian component densities, in closed form:
/// exp(-(m1-m2)^2 / (2(s1^2+s2^2))) / sqrt(2 pi (s1^2+s2^2)).
double gauss_l2_inner(const Component1D& a, const Component1D& b);

/// L2 inner product of two t component densities by adaptive quadrature.
/// The integration window is cut where the density product falls below
/// quad_tol times its peak; the result is validated by halving that cutoff
/// tolerance and requiring the value to move by less than 10 * quad_tol
/// (QuadratureError otherwise).
double t_l2_inner(const Component1D& a, const Component1D& b,
                  double quad_tol = kDefaultQuadTol);

struct GramReport {
  int size = 0;
  Eigen::MatrixXd gram;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double threshold = kDefaultEigThreshold;
  bool independent = false;
};

/// Assembles the Gram matrix of the component densities (family-specific
/// inner products) and declares the family linearly independent iff the
/// smallest eigenvalue exceeds eig_threshold times the largest. All
/// components must carry the same family tag (FamilyMismatchError).
GramReport independence_test(const std::vector<Component1D>& components,
                             double eig_threshold = kDefaultEigThreshold,
                             double quad_tol = kDefaultQuadTol);

}  // namespace cwmix
