// Equality engines. Two mixtures of the same family agree as distributions
// iff their canonical forms agree componentwise, and - the point of the
// library - iff their 1D projections agree on any certified strong
// sm-uniqueness set of at least required_lines(d, m) directions.
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "cwmix/model.hpp"
#include "cwmix/smu.hpp"

namespace cwmix {

struct CompareTolerances {
  double tol_param = 1e-9;  // componentwise parameter tolerance
  double tol_merge = 1e-9;  // canonicalization merge tolerance
};

/// Result of a univariate comparison. distance is the largest scaled
/// residual over matched canonical components (weights absolute, means and
/// scales relative to 1 + magnitude), +infinity when the canonical
/// component counts or degrees of freedom differ.
struct Comparison1D {
  bool equal = false;
  double distance = 0.0;
};

/// Canonicalizes both sides at tol_merge, then matches sorted components.
/// Symmetric in its arguments. Throws FamilyMismatchError when the inputs
/// carry different family tags.
Comparison1D compare_1d(const Mixture1D& a, const Mixture1D& b,
                        double tol_param = CompareTolerances{}.tol_param,
                        double tol_merge = CompareTolerances{}.tol_merge);

struct DirectionDiagnostic {
  Eigen::VectorXd direction;
  double distance = 0.0;
};

struct ComparisonVerdict {
  bool equal = false;
  /// First direction (in input order) whose projections differ.
  std::optional<Eigen::VectorXd> witness_direction;
  /// Per-direction distances for every direction examined; comparison
  /// stops at the first mismatch, so this ends at the witness when distinct.
  std::vector<DirectionDiagnostic> diagnostics;
  /// Set when the direction set is smaller than required_lines(d, m); the
  /// comparison still runs but an `equal` answer is then not a certificate.
  bool cardinality_warning = false;
  long long required_line_count = 0;
  int mixture_size = 0;  // max canonical component count of the two sides
  CompareTolerances tolerances;
};

/// Projects both mixtures onto every direction of s in input order and
/// compares the univariate mixtures. `distinct` is always a sound answer
/// (witness included); `equal` certifies distributional equality when s is
/// a strong sm-uniqueness set of at least required_lines(d, m) directions.
ComparisonVerdict compare_via_projections(
    const MixtureModel& p, const MixtureModel& q, const DirectionSet& s,
    const CompareTolerances& tol = CompareTolerances{});

/// Direct canonical-form comparison: true iff the canonical component lists
/// have equal length and matched components agree in weight, mean,
/// covariance (entrywise, scaled tolerances) and degrees of freedom.
bool compare_canonical(const MixtureModel& p, const MixtureModel& q,
                       const CompareTolerances& tol = CompareTolerances{});

}  // namespace cwmix
