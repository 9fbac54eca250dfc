// Constructions witnessing that too few lines cannot separate mixtures:
// pairs (P, Q) of distinct Gaussian mixtures whose 1D projections agree on
// a given direction set S, together with a verifier that replays the whole
// argument numerically.
#pragma once

#include <vector>

#include "cwmix/compare.hpp"
#include "cwmix/model.hpp"
#include "cwmix/smu.hpp"

namespace cwmix {

struct Counterexample {
  MixtureModel p;
  MixtureModel q;
  DirectionSet directions;
};

/// Two-component planar counterexample: equal-weight centered Gaussians
/// whose covariance pairs swap their quadratic forms on the diagonals while
/// agreeing on the axes, so P and Q project identically onto the four lines
/// spanned by (1,0), (0,1), (1,1), (1,-1) yet differ as mixtures.
Counterexample build_m2_example();

/// Regular-polygon counterexample for m >= 2 components: unit-norm means at
/// angles (2j - 1/2) pi / m for P and (2j + 1/2) pi / m for Q, identity
/// covariances, equal weights, and the m lines at angles j pi / m. Each line
/// of S reflects P's mean set onto Q's, so all m projections coincide.
/// Throws InvalidArgumentError for m < 2.
Counterexample build_polygon_example(int m);

/// Full verification record for one counterexample.
struct CounterexampleRecord {
  SmuReport certification;
  /// True when |S| < D, in which case the strong property holds vacuously
  /// (there is no D-element subset to fail) even though the certification
  /// report cannot say `yes`.
  bool vacuously_strong = false;
  bool strong_ok = false;
  std::vector<double> projection_distances;
  bool projections_all_equal = false;
  bool canonically_distinct = false;
  bool pass = false;
};

/// Replays the counterexample: (a) S is a strong sm-uniqueness set (exact
/// certification, or vacuously for |S| < D), (b) every projection pair
/// compares equal at tol.tol_param, (c) the mixtures are canonically
/// distinct. pass requires all three.
CounterexampleRecord verify_counterexample(
    const MixtureModel& p, const MixtureModel& q, const DirectionSet& s,
    const CompareTolerances& tol = CompareTolerances{});

inline CounterexampleRecord verify_counterexample(
    const Counterexample& ce,
    const CompareTolerances& tol = CompareTolerances{}) {
  return verify_counterexample(ce.p, ce.q, ce.directions, tol);
}

}  // namespace cwmix
