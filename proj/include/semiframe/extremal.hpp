#pragma once

// Exact minimum of the support-measure product over nonzero vectors, found by
// testing support patterns for feasibility through null spaces of stacked
// analysis rows.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "semiframe/errors.hpp"
#include "semiframe/frames.hpp"
#include "semiframe/spaces.hpp"
#include "semiframe/uncertainty.hpp"

namespace semiframe {

/// Largest ambient dimension accepted by pattern_feasible().
inline constexpr std::size_t kFeasibilityCap = 16;
/// Largest ambient dimension accepted by full enumeration.
inline constexpr std::size_t kEnumerationCap = 8;
/// Singular values below this fraction of the largest count as zero.
inline constexpr double kRankCutoff = 1e-10;

struct FeasibilityCertificate {
  IndexSet pattern_s;  // allowed support of theta_f x
  IndexSet pattern_t;  // allowed support of theta_g x
  std::optional<Vector> witness;
  std::size_t nullspace_dim = 0;
  IndexSet support_s;  // actual supports of the witness
  IndexSet support_t;
  double product = std::numeric_limits<double>::quiet_NaN();  // mu(support_s) nu(support_t)

  bool feasible() const { return witness.has_value(); }
};

namespace detail {

inline void require_pattern_systems(const FrameSystem& f, const FrameSystem& g, std::size_t cap) {
  if (!f.is_dense() || !g.is_dense()) throw UnsupportedRepresentation("pattern search needs dense systems");
  if (f.ambient_dim() != g.ambient_dim()) throw DomainError("systems act on different ambient spaces");
  if (f.ambient_dim() > cap) {
    throw CapacityError("ambient dimension " + std::to_string(f.ambient_dim()) + " exceeds the cap of " +
                        std::to_string(cap));
  }
}

inline void append_complement_rows(const FrameSystem& sys, const IndexSet& allowed, Matrix& stack,
                                   Eigen::Index& next) {
  const auto& analysis = sys.as_dense().analysis;
  const std::size_t first = sys.space().first_index();
  std::vector<bool> keep(sys.space().size(), false);
  for (std::size_t index : allowed) {
    sys.space().require(index);
    keep[index - first] = true;
  }
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (!keep[k]) stack.row(next++) = analysis.row(static_cast<Eigen::Index>(k));
  }
}

/// Largest-modulus entry made real and positive, so witnesses are reproducible.
inline Eigen::VectorXcd normalize_phase(Eigen::VectorXcd v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  const Scalar pivot = v(arg);
  if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
  v /= v.norm();
  return v;
}

}  // namespace detail

/// Is there x != 0 with supp(theta_f x) within S and supp(theta_g x) within T?
inline FeasibilityCertificate pattern_feasible(const FrameSystem& f_sys, const FrameSystem& g_sys,
                                               const IndexSet& s, const IndexSet& t) {
  detail::require_pattern_systems(f_sys, g_sys, kFeasibilityCap);
  const auto n = static_cast<Eigen::Index>(f_sys.ambient_dim());
  const auto rows = static_cast<Eigen::Index>(f_sys.space().size() + g_sys.space().size());
  Matrix stack(rows, n);
  Eigen::Index used = 0;
  detail::append_complement_rows(f_sys, s, stack, used);
  detail::append_complement_rows(g_sys, t, stack, used);

  FeasibilityCertificate cert;
  cert.pattern_s = s;
  cert.pattern_t = t;

  Eigen::VectorXcd witness;
  if (used == 0) {
    cert.nullspace_dim = static_cast<std::size_t>(n);
    witness = Eigen::VectorXcd::Unit(n, 0);
  } else {
    const Matrix constraints = stack.topRows(used);
    Eigen::JacobiSVD<Matrix> svd(constraints, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
      if (largest > 0.0 && sv(k) > kRankCutoff * largest) ++rank;
    }
    cert.nullspace_dim = static_cast<std::size_t>(n - rank);
    if (cert.nullspace_dim == 0) return cert;
    witness = svd.matrixV().col(n - 1);
  }
  witness = detail::normalize_phase(witness);

  std::vector<Scalar> values(witness.data(), witness.data() + witness.size());
  Vector x = Vector::dense(std::span<const Scalar>(values), f_sys.ambient_base());
  const auto sf = support_of(analyze(f_sys, x));
  const auto sg = support_of(analyze(g_sys, x));
  cert.support_s = sf.support;
  cert.support_t = sg.support;
  cert.product = sf.measure * sg.measure;
  cert.witness = std::move(x);
  return cert;
}

struct ExtremalResult {
  double min_product = std::numeric_limits<double>::infinity();
  double bound = 0.0;  // 1 / (c_fw c_gt)
  double ratio = std::numeric_limits<double>::quiet_NaN();  // min_product / bound
  bool dominates = false;  // min_product >= bound - kCheckTolerance
  FeasibilityCertificate certificate;
  std::size_t patterns_tested = 0;
};

namespace detail {

struct Pattern {
  std::uint32_t mask;
  double measure;
};

inline IndexSet indices_of(std::uint32_t mask, std::size_t first) {
  IndexSet out;
  for (std::size_t k = 0; mask != 0; ++k, mask >>= 1) {
    if (mask & 1U) out.push_back(first + k);
  }
  return out;
}

inline std::vector<Pattern> measured(const MeasureSpace& space, const std::vector<std::uint32_t>& masks) {
  std::vector<Pattern> out;
  out.reserve(masks.size());
  for (auto mask : masks) out.push_back({mask, measure_of(space, indices_of(mask, space.first_index()))});
  return out;
}

inline std::vector<std::uint32_t> all_masks(std::size_t size) {
  std::vector<std::uint32_t> out(std::size_t{1} << size);
  for (std::uint32_t k = 0; k < out.size(); ++k) out[k] = k;
  return out;
}

/// Best-first search over pattern pairs ordered by mu(S) nu(T). Stops once no
/// remaining pair can beat the best witness product found.
inline ExtremalResult search(const FrameSystem& f, const FrameSystem& g, const std::vector<Pattern>& ps,
                             const std::vector<Pattern>& pt) {
  struct Candidate {
    double product;
    std::uint32_t s;
    std::uint32_t t;
  };
  std::vector<Candidate> order;
  order.reserve(ps.size() * pt.size());
  for (const auto& a : ps) {
    for (const auto& b : pt) order.push_back({a.measure * b.measure, a.mask, b.mask});
  }
  std::sort(order.begin(), order.end(), [](const Candidate& x, const Candidate& y) {
    if (x.product != y.product) return x.product < y.product;
    if (x.s != y.s) return x.s < y.s;
    return x.t < y.t;
  });

  ExtremalResult result;
  const auto pair = FramePair::make(f, g);
  result.bound = reciprocal(pair.c_f_omega * pair.c_g_tau);
  for (const auto& c : order) {
    if (c.product >= result.min_product) break;
    ++result.patterns_tested;
    auto cert = pattern_feasible(f, g, indices_of(c.s, f.space().first_index()),
                                 indices_of(c.t, g.space().first_index()));
    if (cert.feasible() && cert.product < result.min_product) {
      result.min_product = cert.product;
      result.certificate = std::move(cert);
    }
  }
  result.ratio = result.min_product / result.bound;
  result.dominates = result.min_product >= result.bound - kCheckTolerance;
  return result;
}

}  // namespace detail

/// Exact min of mu(supp theta_f x) nu(supp theta_g x) over x != 0, with a
/// witness attaining it. Full enumeration, ambient dimension <= 8.
inline ExtremalResult min_support_product(const FrameSystem& f_sys, const FrameSystem& g_sys) {
  detail::require_pattern_systems(f_sys, g_sys, kEnumerationCap);
  if (f_sys.space().size() > kEnumerationCap || g_sys.space().size() > kEnumerationCap) {
    throw CapacityError("index sets above " + std::to_string(kEnumerationCap) + " are not enumerated");
  }
  return detail::search(f_sys, g_sys, detail::measured(f_sys.space(), detail::all_masks(f_sys.space().size())),
                        detail::measured(g_sys.space(), detail::all_masks(g_sys.space().size())));
}

/// Subsets of Z_n invariant under the shift by n/p, p the smallest prime
/// factor of n (every set periodic under a proper divisor is among them).
inline std::vector<IndexSet> periodic_patterns(std::size_t n) {
  if (n < 2 || n > kFeasibilityCap) throw CapacityError("periodic patterns need 2 <= n <= 16");
  std::size_t prime = 2;
  while (n % prime != 0) ++prime;
  const std::size_t period = n / prime;
  std::vector<IndexSet> out;
  for (std::uint32_t mask = 0; mask < (1U << period); ++mask) {
    IndexSet s;
    for (std::size_t shift = 0; shift < n; shift += period) {
      for (std::size_t k = 0; k < period; ++k) {
        if (mask & (1U << k)) s.push_back(shift + k);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Minimum over a restricted family of patterns (ambient dimension <= 16).
/// The result is an upper bound on the true minimum and is exact for the family.
inline ExtremalResult min_support_product_over(const FrameSystem& f_sys, const FrameSystem& g_sys,
                                               const std::vector<IndexSet>& family_s,
                                               const std::vector<IndexSet>& family_t) {
  detail::require_pattern_systems(f_sys, g_sys, kFeasibilityCap);
  if (f_sys.space().size() > 31 || g_sys.space().size() > 31) throw CapacityError("index set too large");
  auto to_masks = [](const MeasureSpace& space, const std::vector<IndexSet>& family) {
    std::vector<std::uint32_t> masks;
    for (const auto& s : family) {
      std::uint32_t mask = 0;
      for (std::size_t index : s) {
        space.require(index);
        mask |= 1U << (index - space.first_index());
      }
      masks.push_back(mask);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    return masks;
  };
  return detail::search(f_sys, g_sys, detail::measured(f_sys.space(), to_masks(f_sys.space(), family_s)),
                        detail::measured(g_sys.space(), to_masks(g_sys.space(), family_t)));
}

/// Ones at 0, k, 2k, ... with k = sqrt(n).
inline Vector dirac_comb(std::size_t n) {
  const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || root * root != n) {
    throw PreconditionError("Dirac comb needs a perfect-square dimension, got " + std::to_string(n));
  }
  Vector::Entries entries;
  for (std::size_t k = 0; k < n; k += root) entries.emplace(k, Scalar(1.0));
  return Vector(n, entries);
}

}  // namespace semiframe
