#include "cwmix/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cwmix {

namespace {

constexpr double kWeightDropThreshold = 1e-15;
constexpr double kWeightSumSlack = 1e-9;

bool all_finite(const Eigen::MatrixXd& m) {
  return m.allFinite();
}

// Left-to-right sum, shared by the slack check and the renormalization below
// so both observe the identical rounded value.
double weight_sum(const std::vector<MixtureComponent>& components) {
  double sum = 0.0;
  for (const MixtureComponent& c : components) sum += c.weight;
  return sum;
}

}  // namespace

const char* family_name(Family f) {
  return f == Family::gaussian ? "gaussian" : "student_t";
}

CovMatrix::CovMatrix(const Eigen::MatrixXd& m) : entries_(m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw InvalidArgumentError("covariance matrix must be square and nonempty");
  }
  if (!all_finite(m)) {
    throw InvalidArgumentError("covariance matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) != m(j, i)) {
        throw NonPositiveDefiniteError(
            -1, "covariance matrix is not symmetric as stored");
      }
    }
  }
  llt_.compute(entries_);
  if (llt_.info() != Eigen::Success) {
    throw NonPositiveDefiniteError(
        -1, "covariance matrix is not positive-definite");
  }
  // A successful LLT still requires strictly positive pivots to count as
  // positive-definite here.
  const auto diag = llt_.matrixLLT().diagonal();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > 0.0) || !std::isfinite(diag[i])) {
      throw NonPositiveDefiniteError(
          -1, "covariance matrix is not positive-definite");
    }
    log_det += 2.0 * std::log(diag[i]);
  }
  log_det_ = log_det;
}

double CovMatrix::quadratic_form(const Eigen::VectorXd& x) const {
  if (x.size() != entries_.rows()) {
    throw DimensionMismatchError("vector length does not match matrix size");
  }
  return x.dot(entries_ * x);
}

double CovMatrix::mahalanobis_sq(const Eigen::VectorXd& v) const {
  if (v.size() != entries_.rows()) {
    throw DimensionMismatchError("vector length does not match matrix size");
  }
  Eigen::VectorXd z = llt_.matrixL().solve(v);
  return z.squaredNorm();
}

MixtureModel::MixtureModel(Family family, int dim,
                           std::vector<MixtureComponent> components)
    : family_(family), dim_(dim), components_(std::move(components)) {}

MixtureModel MixtureModel::validated(Family family, int dim,
                                     std::vector<MixtureComponent> components) {
  if (dim < 1) {
    throw InvalidArgumentError("mixture dimension must be at least 1");
  }
  std::erase_if(components, [](const MixtureComponent& c) {
    return c.weight < kWeightDropThreshold;
  });
  if (components.empty()) {
    throw EmptyMixtureError("mixture has no components of nonzero weight");
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    const MixtureComponent& c = components[i];
    if (!std::isfinite(c.weight)) {
      throw InvalidArgumentError("component weight is not finite");
    }
    if (c.mean.size() != dim || c.cov.dim() != dim) {
      std::ostringstream os;
      os << "component " << i << " does not have dimension " << dim;
      throw DimensionMismatchError(os.str());
    }
    if (!c.mean.allFinite()) {
      throw InvalidArgumentError("component mean has non-finite entries");
    }
    if (family == Family::student_t && c.dof < 1) {
      throw InvalidArgumentError(
          "t components need a positive integer degrees of freedom");
    }
  }
  const double sum = weight_sum(components);
  if (std::abs(sum - 1.0) > kWeightSumSlack) {
    std::ostringstream os;
    os << "mixture weights sum to " << sum << ", expected 1";
    throw WeightSumError(sum, os.str());
  }
  // Renormalize so the recomputed left-to-right sum is exactly 1.0. One
  // proportional division lands within an ulp or two; iterating it can cycle
  // without ever hitting 1, so instead the last weight absorbs the leftover
  // mass. Every weight survives the drop threshold above, so head < 1 and
  // head + (1 - head) rounds to 1.0 exactly. Re-validating a validated model
  // then takes the sum == 1.0 exit and leaves every bit alone, which is what
  // makes emitted files reparse byte-for-byte.
  if (sum != 1.0) {
    for (MixtureComponent& c : components) c.weight /= sum;
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < components.size(); ++i) {
      head += components[i].weight;
    }
    const double rest = 1.0 - head;
    if (rest > 0.0) components.back().weight = rest;
  }
  return MixtureModel(family, dim, std::move(components));
}

MixtureModel validate_mixture(Family family, int dim,
                              const std::vector<RawComponent>& components) {
  std::vector<MixtureComponent> built;
  built.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    const RawComponent& rc = components[i];
    try {
      built.push_back(MixtureComponent{rc.weight, rc.mean, CovMatrix(rc.cov),
                                       rc.dof});
    } catch (const NonPositiveDefiniteError& e) {
      std::ostringstream os;
      os << "component " << i << ": " << e.what();
      throw NonPositiveDefiniteError(static_cast<int>(i), os.str());
    }
  }
  return MixtureModel::validated(family, dim, std::move(built));
}

double density_eval(const MixtureModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) {
    throw DimensionMismatchError("evaluation point has the wrong dimension");
  }
  const double d = static_cast<double>(model.dim());
  double acc = 0.0;
  for (const MixtureComponent& c : model.components()) {
    const double q = c.cov.mahalanobis_sq(x - c.mean);
    double log_f;
    if (model.family() == Family::gaussian) {
      log_f = -0.5 * q -
              0.5 * (d * std::log(2.0 * std::numbers::pi) + c.cov.log_det());
    } else {
      const double nu = static_cast<double>(c.dof);
      const double log_c = std::lgamma(0.5 * (nu + d)) -
                           std::lgamma(0.5 * nu) -
                           0.5 * d * std::log(nu * std::numbers::pi) -
                           0.5 * c.cov.log_det();
      log_f = log_c - 0.5 * (nu + d) * std::log1p(q / nu);
    }
    acc += c.weight * std::exp(log_f);
  }
  return acc;
}

double density_eval(const Component1D& c, double x) {
  if (!(c.scale > 0.0)) {
    throw InvalidArgumentError("component scale must be positive");
  }
  const double z = (x - c.mean) / c.scale;
  if (c.family == Family::gaussian) {
    return std::exp(-0.5 * z * z) /
           (c.scale * std::sqrt(2.0 * std::numbers::pi));
  }
  const double nu = static_cast<double>(c.dof);
  const double log_c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                       0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_c - 0.5 * (nu + 1.0) * std::log1p(z * z / nu)) / c.scale;
}

double density_eval(const Mixture1D& mix, double x) {
  double acc = 0.0;
  for (const Component1D& c : mix.components) {
    acc += c.weight * density_eval(c, x);
  }
  return acc;
}

std::complex<double> char_fn_eval(const MixtureModel& model,
                                  const Eigen::VectorXd& xi) {
  if (model.family() != Family::gaussian) {
    throw UnsupportedFamilyError(
        "characteristic functions are only evaluated for Gaussian mixtures");
  }
  if (xi.size() != model.dim()) {
    throw DimensionMismatchError("frequency vector has the wrong dimension");
  }
  std::complex<double> acc = 0.0;
  for (const MixtureComponent& c : model.components()) {
    const double q = c.cov.quadratic_form(xi);
    acc += c.weight * std::exp(std::complex<double>(-0.5 * q, c.mean.dot(xi)));
  }
  return acc;
}

namespace {

// Canonicalization works the same way for both arities: sort by a total
// parameter key, then sweep adjacent entries into clusters whose running
// weighted average stays within tol_merge of each candidate, repeating until
// a sweep merges nothing. Single-member clusters are emitted untouched, which
// makes the map idempotent bit for bit.

struct Cluster1D {
  Component1D first;
  double weight_sum = 0.0;
  double wmean = 0.0;
  double wscale = 0.0;
  int count = 0;

  void add(const Component1D& c) {
    if (count == 0) first = c;
    weight_sum += c.weight;
    wmean += c.weight * c.mean;
    wscale += c.weight * c.scale;
    ++count;
  }

  double rep_mean() const { return count == 1 ? first.mean : wmean / weight_sum; }
  double rep_scale() const {
    return count == 1 ? first.scale : wscale / weight_sum;
  }

  Component1D finalize() const {
    if (count == 1) return first;
    return Component1D{first.family, weight_sum, wmean / weight_sum,
                       wscale / weight_sum, first.dof};
  }
};

bool less_1d(const Component1D& a, const Component1D& b) {
  if (a.family != b.family) return a.family < b.family;
  if (a.dof != b.dof) return a.dof < b.dof;
  if (a.mean != b.mean) return a.mean < b.mean;
  if (a.scale != b.scale) return a.scale < b.scale;
  return a.weight < b.weight;
}

bool mergeable_1d(const Cluster1D& cl, const Component1D& c, double tol) {
  if (cl.first.family != c.family || cl.first.dof != c.dof) return false;
  const double dm = std::abs(cl.rep_mean() - c.mean);
  const double ds = std::abs(cl.rep_scale() - c.scale);
  return std::max(dm, ds) <= tol;
}

struct ClusterMv {
  const MixtureComponent* first = nullptr;
  double weight_sum = 0.0;
  Eigen::VectorXd wmean;
  Eigen::MatrixXd wcov;
  int count = 0;

  void add(const MixtureComponent& c) {
    if (count == 0) {
      first = &c;
      wmean = c.weight * c.mean;
      wcov = c.weight * c.cov.entries();
    } else {
      wmean += c.weight * c.mean;
      wcov += c.weight * c.cov.entries();
    }
    weight_sum += c.weight;
    ++count;
  }

  MixtureComponent finalize() const {
    if (count == 1) return *first;
    return MixtureComponent{weight_sum, wmean / weight_sum,
                            CovMatrix(wcov / weight_sum), first->dof};
  }
};

bool less_mv(const MixtureComponent& a, const MixtureComponent& b) {
  if (a.dof != b.dof) return a.dof < b.dof;
  for (Eigen::Index i = 0; i < a.mean.size(); ++i) {
    if (a.mean[i] != b.mean[i]) return a.mean[i] < b.mean[i];
  }
  const Eigen::MatrixXd& ma = a.cov.entries();
  const Eigen::MatrixXd& mb = b.cov.entries();
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index j = i; j < ma.cols(); ++j) {
      if (ma(i, j) != mb(i, j)) return ma(i, j) < mb(i, j);
    }
  }
  return a.weight < b.weight;
}

bool mergeable_mv(const ClusterMv& cl, const MixtureComponent& c, double tol) {
  if (cl.first->dof != c.dof) return false;
  double dist = 0.0;
  if (cl.count == 1) {
    dist = std::max((cl.first->mean - c.mean).lpNorm<Eigen::Infinity>(),
                    (cl.first->cov.entries() - c.cov.entries())
                        .lpNorm<Eigen::Infinity>());
  } else {
    dist = std::max(
        (cl.wmean / cl.weight_sum - c.mean).lpNorm<Eigen::Infinity>(),
        (cl.wcov / cl.weight_sum - c.cov.entries())
            .lpNorm<Eigen::Infinity>());
  }
  return dist <= tol;
}

}  // namespace

Mixture1D canonicalize_1d(const Mixture1D& mix, double tol_merge) {
  if (tol_merge < 0.0) {
    throw InvalidArgumentError("merge tolerance must be nonnegative");
  }
  if (mix.components.empty()) {
    throw EmptyMixtureError("cannot canonicalize an empty mixture");
  }
  std::vector<Component1D> items = mix.components;
  std::sort(items.begin(), items.end(), less_1d);
  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<Component1D> next;
    next.reserve(items.size());
    Cluster1D cl;
    for (const Component1D& c : items) {
      if (cl.count == 0) {
        cl.add(c);
      } else if (mergeable_1d(cl, c, tol_merge)) {
        cl.add(c);
        merged = true;
      } else {
        next.push_back(cl.finalize());
        cl = Cluster1D{};
        cl.add(c);
      }
    }
    next.push_back(cl.finalize());
    items = std::move(next);
    if (merged) std::sort(items.begin(), items.end(), less_1d);
  }
  return Mixture1D{std::move(items)};
}

MixtureModel MixtureModel::canonicalized(double tol_merge) const {
  if (tol_merge < 0.0) {
    throw InvalidArgumentError("merge tolerance must be nonnegative");
  }
  std::vector<MixtureComponent> items = components_;
  std::sort(items.begin(), items.end(), less_mv);
  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<MixtureComponent> next;
    next.reserve(items.size());
    ClusterMv cl;
    for (const MixtureComponent& c : items) {
      if (cl.count == 0) {
        cl.add(c);
      } else if (mergeable_mv(cl, c, tol_merge)) {
        cl.add(c);
        merged = true;
      } else {
        next.push_back(cl.finalize());
        cl = ClusterMv{};
        cl.add(c);
      }
    }
    next.push_back(cl.finalize());
    items = std::move(next);
    if (merged) std::sort(items.begin(), items.end(), less_mv);
  }
  return MixtureModel(family_, dim_, std::move(items));
}

}  // namespace cwmix
