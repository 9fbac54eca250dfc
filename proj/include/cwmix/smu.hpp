// Quadratic lifting of directions and certification of (strong)
// sm-uniqueness sets. A set S in R^d is an sm-uniqueness set when the only
// symmetric matrix A with x'Ax = 0 for every x in S is A = 0; equivalently,
// the lifted vectors (x_i x_j)_{i<=j} span R^D with D = d(d+1)/2. S is
// strong when every D-element subset already spans.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwmix/errors.hpp"

namespace cwmix {

inline constexpr double kDefaultTolRank = 1e-10;
inline constexpr long long kExactSubsetCap = 10'000'000;
inline constexpr long long kDefaultRandomizedSamples = 100'000;

/// Finite list of nonzero direction vectors in R^dim.
struct DirectionSet {
  int dim = 0;
  std::vector<Eigen::VectorXd> vectors;

  /// Checks dim >= 1 and every vector finite, of length dim, with norm > 0.
  static DirectionSet validated(int dim, std::vector<Eigen::VectorXd> vectors);

  int size() const { return static_cast<int>(vectors.size()); }
};

/// D = d(d+1)/2, the dimension of the space of symmetric d x d matrices.
int lifted_dim(int d);

/// Lift x to the vector of pairwise products (x_i x_j) for 1 <= i <= j <= d,
/// ordered (1,1),(1,2),...,(1,d),(2,2),...,(d,d). The off-diagonal entries
/// deliberately carry no factor 2: a fixed positive rescaling of coordinates
/// cannot change the rank facts this lift is used for.
Eigen::VectorXd lift(const Eigen::VectorXd& x);

/// Smallest direction count for which matching 1D projections certify
/// equality of two m-component mixtures on R^d:
/// (2m-1)(d^2+d-2)/2 + 1, evaluated in checked integer arithmetic.
long long required_lines(long long d, long long m);

enum class Certainty { yes, no, unknown };

/// Outcome of an sm-uniqueness check. min_singular_value is always the
/// smallest singular value of the full row-normalized lifted matrix (0 when
/// fewer than D directions are given); it quantifies the rank margin of the
/// set as a whole. witness_bad_subset, when present, indexes a subset whose
/// lifted rows are rank-deficient under the same criterion.
struct SmuReport {
  enum class Mode { exact, randomized };

  bool is_smu = false;
  Certainty is_strong = Certainty::unknown;
  Mode mode = Mode::exact;
  std::optional<std::vector<int>> witness_bad_subset;
  double min_singular_value = 0.0;
  long long subsets_checked = 0;
  std::string confidence_note;
};

/// Span test for the whole set: lifts every direction, normalizes each row
/// to unit norm, and counts singular values above tol_rank times the largest
/// one. is_smu is true iff that numerical rank equals D.
SmuReport is_smu(const DirectionSet& s, double tol_rank = kDefaultTolRank);

/// How is_strong_smu walks the D-element subsets.
struct StrongCheckMode {
  static StrongCheckMode exact() { return {true, 0, 0}; }
  static StrongCheckMode randomized(long long samples, std::uint64_t seed) {
    return {false, samples, seed};
  }

  bool is_exact = true;
  long long samples = 0;
  std::uint64_t seed = 0;
};

/// Strong certification. Exact mode enumerates all C(k, D) subsets in
/// lexicographic index order and reports the first rank-deficient one as
/// witness; it refuses to start when C(k, D) exceeds kExactSubsetCap
/// (ExactModeTooLargeError). Randomized mode tests `samples` seeded uniform
/// subsets and can only answer `no` (witness found) or `unknown`.
/// Sets with fewer than D directions fail immediately, with the whole index
/// range as witness. Deterministic for fixed inputs and seed.
SmuReport is_strong_smu(const DirectionSet& s,
                        double tol_rank = kDefaultTolRank,
                        const StrongCheckMode& mode = StrongCheckMode::exact());

/// `count` independent draws from the uniform distribution on the unit
/// sphere of R^d. The generator is fully pinned by the seed: a fixed-seed
/// Mersenne Twister drives an explicit Box-Muller transform, so outputs are
/// reproducible across standard library implementations.
DirectionSet sample_sphere_directions(int d, int count, std::uint64_t seed);

/// Draws `count >= D` spherical directions and certifies strong
/// sm-uniqueness (exact mode when C(count, D) fits under the enumeration
/// cap, randomized mode with kDefaultRandomizedSamples subsets otherwise).
/// On a failed certification the whole set is redrawn from the same stream,
/// up to max_retries times, then GenerationFailedError. When `certification`
/// is non-null the accepted set's report is stored there.
DirectionSet gen_strong_smu(int d, int count, std::uint64_t seed,
                            int max_retries = 8,
                            SmuReport* certification = nullptr,
                            double tol_rank = kDefaultTolRank);

}  // namespace cwmix
