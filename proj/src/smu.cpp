#include "cwmix/smu.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace cwmix {

namespace {

// Uniform double in (0, 1] from the full 53-bit mantissa range. Built on raw
// mt19937_64 output so the stream is identical on every platform.
double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection keeps the draw exactly uniform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

// Explicit Box-Muller; std::normal_distribution is implementation-defined,
// which would break seed portability.
void standard_normal_pair(std::mt19937_64& rng, double& z0, double& z1) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  z0 = r * std::cos(a);
  z1 = r * std::sin(a);
}

Eigen::VectorXd sphere_point(int d, std::mt19937_64& rng) {
  Eigen::VectorXd v(d);
  while (true) {
    for (int i = 0; i < d; i += 2) {
      double z0, z1;
      standard_normal_pair(rng, z0, z1);
      v[i] = z0;
      if (i + 1 < d) v[i + 1] = z1;
    }
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

// C(k, r), clamped to cap + 1 as soon as it exceeds cap.
long long binomial_clamped(long long k, long long r, long long cap) {
  if (r < 0 || r > k) return 0;
  r = std::min(r, k - r);
  unsigned __int128 acc = 1;
  for (long long i = 1; i <= r; ++i) {
    acc = acc * static_cast<unsigned __int128>(k - r + i) /
          static_cast<unsigned __int128>(i);
    if (acc > static_cast<unsigned __int128>(cap)) return cap + 1;
  }
  return static_cast<long long>(acc);
}

Eigen::MatrixXd lifted_rows_normalized(const DirectionSet& s) {
  const int D = lifted_dim(s.dim);
  Eigen::MatrixXd m(s.size(), D);
  for (int i = 0; i < s.size(); ++i) {
    Eigen::VectorXd row = lift(s.vectors[i]);
    m.row(i) = (row / row.norm()).transpose();
  }
  return m;
}

int svd_rank(const Eigen::MatrixXd& m, double tol_rank) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double cut = tol_rank * sv[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cut) ++rank;
  }
  return rank;
}

// Full-rank test for one D-element subset of the normalized lifted rows.
// A full-pivot LU at a widened threshold is a sound fast path: when every
// pivot ratio clears 1e6 * tol_rank the singular value ratio provably clears
// tol_rank, so only near-threshold subsets pay for an SVD, which remains the
// authoritative criterion.
class SubsetRankTester {
 public:
  SubsetRankTester(const Eigen::MatrixXd& rows, double tol_rank)
      : rows_(rows),
        tol_rank_(tol_rank),
        d_(static_cast<int>(rows.cols())),
        sub_(rows.cols(), rows.cols()) {}

  bool full_rank(const std::vector<int>& idx) {
    for (int r = 0; r < d_; ++r) {
      sub_.row(r) = rows_.row(idx[r]);
    }
    lu_.compute(sub_);
    lu_.setThreshold(1e6 * tol_rank_);
    if (lu_.rank() == d_) return true;
    return svd_rank(sub_, tol_rank_) == d_;
  }

 private:
  const Eigen::MatrixXd& rows_;
  double tol_rank_;
  int d_;
  Eigen::MatrixXd sub_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

bool next_combination(std::vector<int>& idx, int k) {
  const int r = static_cast<int>(idx.size());
  for (int i = r - 1; i >= 0; --i) {
    if (idx[i] < k - r + i) {
      ++idx[i];
      for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> sample_subset(std::mt19937_64& rng, int k, int r) {
  // Partial Fisher-Yates over an index pool; sorted for reporting.
  std::vector<int> pool(k);
  for (int i = 0; i < k; ++i) pool[i] = i;
  for (int i = 0; i < r; ++i) {
    const int j =
        i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(k - i)));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> idx(pool.begin(), pool.begin() + r);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

DirectionSet DirectionSet::validated(int dim,
                                     std::vector<Eigen::VectorXd> vectors) {
  if (dim < 1) {
    throw InvalidArgumentError("direction dimension must be at least 1");
  }
  for (const Eigen::VectorXd& v : vectors) {
    if (v.size() != dim) {
      throw DimensionMismatchError("direction vector has the wrong dimension");
    }
    if (!v.allFinite()) {
      throw InvalidArgumentError("direction vector has non-finite entries");
    }
    if (v.norm() == 0.0) {
      throw ZeroDirectionError("direction vectors must be nonzero");
    }
  }
  DirectionSet s;
  s.dim = dim;
  s.vectors = std::move(vectors);
  return s;
}

int lifted_dim(int d) {
  if (d < 1) {
    throw InvalidArgumentError("dimension must be at least 1");
  }
  return d * (d + 1) / 2;
}

Eigen::VectorXd lift(const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd out(lifted_dim(d));
  int k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      out[k++] = x[i] * x[j];
    }
  }
  return out;
}

long long required_lines(long long d, long long m) {
  if (d < 1 || m < 1) {
    throw InvalidArgumentError("dimension and mixture size must be positive");
  }
  long long dd, s, tm, prod, res;
  if (__builtin_mul_overflow(d, d, &dd) ||
      __builtin_add_overflow(dd, d - 2, &s)) {
    throw OverflowError("required line count overflows 64-bit arithmetic");
  }
  const long long half = s / 2;  // d^2 + d - 2 = (d+2)(d-1) is always even
  if (__builtin_mul_overflow(2, m, &tm) ||
      __builtin_add_overflow(tm, -1, &tm) ||
      __builtin_mul_overflow(tm, half, &prod) ||
      __builtin_add_overflow(prod, 1, &res)) {
    throw OverflowError("required line count overflows 64-bit arithmetic");
  }
  return res;
}

SmuReport is_smu(const DirectionSet& s, double tol_rank) {
  if (!(tol_rank > 0.0)) {
    throw InvalidArgumentError("rank tolerance must be positive");
  }
  const int D = lifted_dim(s.dim);
  SmuReport r;
  r.mode = SmuReport::Mode::exact;
  if (s.size() < D) {
    return r;  // rank < D with certainty; min singular value reported as 0
  }
  const Eigen::MatrixXd m = lifted_rows_normalized(s);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double cut = tol_rank * sv[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cut) ++rank;
  }
  r.is_smu = (rank == D);
  r.min_singular_value = sv[sv.size() - 1];
  return r;
}

SmuReport is_strong_smu(const DirectionSet& s, double tol_rank,
                        const StrongCheckMode& mode) {
  const int k = s.size();
  const int D = lifted_dim(s.dim);
  SmuReport r = is_smu(s, tol_rank);
  r.mode = mode.is_exact ? SmuReport::Mode::exact : SmuReport::Mode::randomized;
  if (k < D) {
    // No D-element subset exists; the set as a whole cannot span.
    r.is_strong = Certainty::no;
    std::vector<int> all(k);
    for (int i = 0; i < k; ++i) all[i] = i;
    r.witness_bad_subset = std::move(all);
    return r;
  }
  const Eigen::MatrixXd rows = lifted_rows_normalized(s);
  SubsetRankTester tester(rows, tol_rank);
  if (mode.is_exact) {
    const long long total = binomial_clamped(k, D, kExactSubsetCap);
    if (total > kExactSubsetCap) {
      std::ostringstream os;
      os << "exact mode would enumerate more than " << kExactSubsetCap
         << " subsets; use randomized mode";
      throw ExactModeTooLargeError(os.str());
    }
    std::vector<int> idx(D);
    for (int i = 0; i < D; ++i) idx[i] = i;
    long long checked = 0;
    do {
      ++checked;
      if (!tester.full_rank(idx)) {
        r.is_strong = Certainty::no;
        r.witness_bad_subset = idx;
        r.subsets_checked = checked;
        return r;
      }
    } while (next_combination(idx, k));
    r.is_strong = Certainty::yes;
    r.subsets_checked = total;
    return r;
  }
  if (mode.samples < 1) {
    throw InvalidArgumentError("randomized mode needs at least one sample");
  }
  std::mt19937_64 rng(mode.seed);
  for (long long t = 0; t < mode.samples; ++t) {
    const std::vector<int> idx = sample_subset(rng, k, D);
    if (!tester.full_rank(idx)) {
      r.is_strong = Certainty::no;
      r.witness_bad_subset = idx;
      r.subsets_checked = t + 1;
      return r;
    }
  }
  r.is_strong = Certainty::unknown;
  r.subsets_checked = mode.samples;
  std::ostringstream os;
  os << "randomized mode: " << mode.samples << " subsets sampled (seed "
     << mode.seed << "), none rank-deficient; strong property not certified";
  r.confidence_note = os.str();
  return r;
}

DirectionSet sample_sphere_directions(int d, int count, std::uint64_t seed) {
  if (d < 1 || count < 1) {
    throw InvalidArgumentError("dimension and count must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> vecs;
  vecs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    vecs.push_back(sphere_point(d, rng));
  }
  return DirectionSet::validated(d, std::move(vecs));
}

DirectionSet gen_strong_smu(int d, int count, std::uint64_t seed,
                            int max_retries, SmuReport* certification,
                            double tol_rank) {
  const int D = lifted_dim(d);
  if (count < D) {
    std::ostringstream os;
    os << "count " << count << " is below the minimum " << D
       << " for dimension " << d;
    throw InvalidArgumentError(os.str());
  }
  if (max_retries < 1) {
    throw InvalidArgumentError("max_retries must be at least 1");
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<Eigen::VectorXd> vecs;
    vecs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      vecs.push_back(sphere_point(d, rng));
    }
    DirectionSet s = DirectionSet::validated(d, std::move(vecs));
    const long long total = binomial_clamped(count, D, kExactSubsetCap);
    const StrongCheckMode mode =
        total <= kExactSubsetCap
            ? StrongCheckMode::exact()
            : StrongCheckMode::randomized(
                  kDefaultRandomizedSamples,
                  seed ^ (0x9e3779b97f4a7c15ULL *
                          static_cast<std::uint64_t>(attempt + 1)));
    const SmuReport rep = is_strong_smu(s, tol_rank, mode);
    if (rep.is_strong != Certainty::no) {
      if (certification != nullptr) *certification = rep;
      return s;
    }
  }
  std::ostringstream os;
  os << "no certified direction set after " << max_retries << " draws";
  throw GenerationFailedError(os.str());
}

}  // namespace cwmix
