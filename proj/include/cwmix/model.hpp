// Core mixture types: validated covariance matrices, multivariate Gaussian
// and Student-t mixtures, their univariate counterparts, and the canonical
// forms used as the equality yardstick everywhere else in the library.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "cwmix/errors.hpp"

namespace cwmix {

enum class Family { gaussian, student_t };

const char* family_name(Family f);

/// Symmetric positive-definite matrix, validated at construction.
/// The Cholesky factor and log-determinant are cached so density
/// evaluation never refactorizes.
class CovMatrix {
 public:
  /// Requires a square matrix with finite entries, symmetric as stored
  /// (m(i,j) == m(j,i)), whose Cholesky factorization succeeds with
  /// positive pivots. Throws NonPositiveDefiniteError (component_index -1)
  /// or InvalidArgumentError otherwise.
  explicit CovMatrix(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double log_det() const { return log_det_; }

  /// x' S x
  double quadratic_form(const Eigen::VectorXd& x) const;

  /// v' S^{-1} v through the cached factorization.
  double mahalanobis_sq(const Eigen::VectorXd& v) const;

 private:
  Eigen::MatrixXd entries_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
};

/// One component of a multivariate mixture. dof is meaningful only under
/// Family::student_t; Gaussian components keep it at 0.
struct MixtureComponent {
  double weight;
  Eigen::VectorXd mean;
  CovMatrix cov;
  int dof = 0;
};

/// Unvalidated component description as read from user input. Passed to
/// validate_mixture, which turns a list of these into a MixtureModel.
struct RawComponent {
  double weight = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int dof = 0;
};

/// One component of a univariate mixture. scale is the standard deviation
/// for Gaussian components and the scale parameter for t components.
struct Component1D {
  Family family = Family::gaussian;
  double weight = 0.0;
  double mean = 0.0;
  double scale = 1.0;
  int dof = 0;

  friend bool operator==(const Component1D&, const Component1D&) = default;
};

/// Univariate mixture; all components are expected to share one family.
struct Mixture1D {
  std::vector<Component1D> components;

  friend bool operator==(const Mixture1D&, const Mixture1D&) = default;
};

/// A validated finite mixture on R^d. Instances are immutable; every
/// constructed model satisfies: nonempty component list, all components of
/// the declared dimension and family, weights positive and summing to 1.
class MixtureModel {
 public:
  /// Validates an already-assembled component list: drops components with
  /// weight below 1e-15, requires the remaining weights to sum to 1 within
  /// 1e-9 (then renormalizes exactly by the computed sum), and checks
  /// dimensions, finiteness and t degrees of freedom.
  static MixtureModel validated(Family family, int dim,
                                std::vector<MixtureComponent> components);

  Family family() const { return family_; }
  int dim() const { return dim_; }
  const std::vector<MixtureComponent>& components() const {
    return components_;
  }
  int size() const { return static_cast<int>(components_.size()); }

  /// Canonical form: near-duplicate components (parameter tuples within
  /// tol_merge in max-norm, equal dof) are merged with weights summed and
  /// parameters weight-averaged; the result is sorted by
  /// (dof, mean, covariance, weight). Idempotent at the same tolerance and
  /// invariant under permutation of the input components, bit for bit.
  MixtureModel canonicalized(double tol_merge) const;

 private:
  MixtureModel(Family family, int dim,
               std::vector<MixtureComponent> components);

  Family family_;
  int dim_;
  std::vector<MixtureComponent> components_;
};

/// Full validation pipeline from a raw description. Covariance failures
/// carry the offending component index.
MixtureModel validate_mixture(Family family, int dim,
                              const std::vector<RawComponent>& components);

/// Mixture density at x. Gaussian components use the standard normal
/// density; t components use the multivariate t density with the stored
/// degrees of freedom. Evaluation goes through the cached Cholesky factors.
double density_eval(const MixtureModel& model, const Eigen::VectorXd& x);

/// Univariate component / mixture densities (same families).
double density_eval(const Component1D& c, double x);
double density_eval(const Mixture1D& mix, double x);

/// Characteristic function of a Gaussian mixture at frequency xi:
/// sum_j w_j exp(i mu_j.xi - xi' S_j xi / 2). Throws UnsupportedFamilyError
/// for t mixtures, whose characteristic functions are out of scope here.
std::complex<double> char_fn_eval(const MixtureModel& model,
                                  const Eigen::VectorXd& xi);

/// Univariate canonical form, same merge-and-sort rule as
/// MixtureModel::canonicalized with parameter tuple (dof, mean, scale).
Mixture1D canonicalize_1d(const Mixture1D& mix, double tol_merge);

}  // namespace cwmix
