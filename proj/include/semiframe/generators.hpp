#pragma once

// Constructors for the frame families used by the checks, tests and CLI.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semiframe/errors.hpp"
#include "semiframe/frames.hpp"
#include "semiframe/spaces.hpp"
#include "semiframe/uncertainty.hpp"

namespace semiframe {

/// Largest accepted condition number of a random synthesis matrix.
inline constexpr double kMaxConditionNumber = 1e6;

struct SystemPair {
  FrameSystem first;
  FrameSystem second;
};

/// f_j = zeta_j, tau_j = e_j.
inline FrameSystem identity_system(std::size_t n, Field field = Field::real,
                                   Exponent p = Exponent::finite(1.0)) {
  const auto d = static_cast<Eigen::Index>(n);
  return FrameSystem::dense(MeasureSpace::finite(n), Matrix::Identity(d, d), Matrix::Identity(d, d), p,
                            field);
}

/// Unitary DFT matrix F_{jk} = exp(-2 pi i jk / n) / sqrt(n). The phase index
/// jk is reduced mod n before the angle is formed.
inline Matrix unitary_dft_matrix(std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n);
  Matrix f(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t phase = (j * k) % n;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(n);
      f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          Scalar(scale * std::cos(angle), scale * std::sin(angle));
    }
  }
  return f;
}

/// Analysis rows = DFT rows, synthesis vectors = columns of the inverse DFT.
inline FrameSystem dft_system(std::size_t n, Exponent p = Exponent::finite(1.0)) {
  Matrix f = unitary_dft_matrix(n);
  Matrix inverse = f.adjoint();
  return FrameSystem::dense(MeasureSpace::finite(n), std::move(f), std::move(inverse), p, Field::complex);
}

/// (identity, unitary DFT).
inline SystemPair dft_pair(std::size_t n, Exponent p = Exponent::finite(1.0)) {
  return {identity_system(n, Field::complex, p), dft_system(n, p)};
}

namespace detail {

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Field field, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = field == Field::complex ? normal(rng) : 0.0;
      m(i, j) = Scalar(re, im);
    }
  }
  return m;
}

inline double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  return smallest == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / smallest;
}

}  // namespace detail

/// Random invertible synthesis matrix S (resampled while cond(S) > 1e6);
/// analysis functionals are the rows of S^{-1}.
inline FrameSystem random_reconstructing(std::size_t n, std::uint64_t seed, Field field = Field::real,
                                         Exponent p = Exponent::finite(1.0)) {
  std::mt19937_64 rng(seed);
  const auto d = static_cast<Eigen::Index>(n);
  Matrix synthesis;
  do {
    synthesis = detail::gaussian_matrix(d, d, field, rng);
  } while (detail::condition_number(synthesis) > kMaxConditionNumber);
  Matrix analysis = synthesis.inverse();
  if (field == Field::real) analysis = analysis.real().cast<Scalar>();
  return FrameSystem::dense(MeasureSpace::finite(n), std::move(analysis), std::move(synthesis), p, field);
}

/// m >= n frame vectors in K^n forming a Parseval frame: the rows of a random
/// n x m array are orthonormalized and the columns of the result are the
/// frame vectors. Analysis is h -> <h, tau_j>.
inline FrameSystem random_parseval(std::size_t n, std::size_t m, std::uint64_t seed,
                                   Field field = Field::complex, Exponent p = Exponent::finite(2.0)) {
  if (m < n) throw ConstructionError("Parseval frame needs m >= n vectors");
  std::mt19937_64 rng(seed);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(m);
  Matrix q_thin;
  do {
    const Matrix g = detail::gaussian_matrix(rows, cols, field, rng);
    if (detail::condition_number(g) > kMaxConditionNumber) continue;
    Eigen::HouseholderQR<Matrix> qr(g.adjoint());
    q_thin = qr.householderQ() * Matrix::Identity(cols, rows);  // m x n, orthonormal columns
    break;
  } while (true);
  Matrix synthesis = q_thin.adjoint();  // n x m, orthonormal rows
  if (field == Field::real) synthesis = synthesis.real().cast<Scalar>();
  Matrix analysis = synthesis.adjoint();
  return FrameSystem::dense(MeasureSpace::finite(m), std::move(analysis), std::move(synthesis), p, field);
}

/// f_n = n^r zeta_n, tau_n = e_n / n^r on the truncation 1..N.
inline FrameSystem unbounded_diagonal(const std::string& r, std::size_t truncation,
                                      Exponent p = Exponent::finite(1.0)) {
  return FrameSystem::diagonal(truncation, r, p);
}

/// Replaces the measure by `weights` and divides each tau_alpha by its weight,
/// so the weighted synthesis sum still reconstructs.
inline FrameSystem reweighted(const FrameSystem& base, std::vector<double> weights) {
  if (!base.is_dense()) throw ConstructionError("reweighting needs a dense base system");
  const MeasureSpace space = base.space().with_weights(std::move(weights));
  const auto& dense = base.as_dense();
  Matrix synthesis = dense.synthesis;
  const auto old_weights = base.space().weights();
  for (Eigen::Index j = 0; j < synthesis.cols(); ++j) {
    const auto alpha = static_cast<std::size_t>(j) + space.first_index();
    synthesis.col(j) *= old_weights[static_cast<std::size_t>(j)] / space.weight(alpha);
  }
  return FrameSystem::dense(space, dense.analysis, std::move(synthesis), base.p(), base.field());
}

/// Declarative description of a generated family.
struct GeneratorSpec {
  enum class Family { identity, dft_pair, random_reconstructing, random_parseval, unbounded_diagonal, reweighted };

  Family family = Family::identity;
  std::size_t n = 1;  // dimension, or truncation N for unbounded_diagonal
  std::size_t m = 0;  // frame vector count for random_parseval
  Field field = Field::real;
  Exponent p = Exponent::finite(1.0);
  std::uint64_t seed = 0;
  std::string r = "1";
  std::vector<double> weights;
  std::shared_ptr<const GeneratorSpec> base;
};

using Generated = std::variant<FrameSystem, SystemPair>;

inline Generated make(const GeneratorSpec& spec) {
  if (spec.n == 0) throw ConstructionError("generator dimension must be positive");
  using F = GeneratorSpec::Family;
  switch (spec.family) {
    case F::identity:
      return identity_system(spec.n, spec.field, spec.p);
    case F::dft_pair:
      if (spec.field != Field::complex) throw ConstructionError("dft_pair requires the complex field");
      return dft_pair(spec.n, spec.p);
    case F::random_reconstructing:
      return random_reconstructing(spec.n, spec.seed, spec.field, spec.p);
    case F::random_parseval:
      return random_parseval(spec.n, spec.m, spec.seed, spec.field, spec.p);
    case F::unbounded_diagonal:
      return unbounded_diagonal(spec.r, spec.n, spec.p);
    case F::reweighted: {
      if (!spec.base) throw ConstructionError("reweighted needs a base spec");
      auto reweigh = [&](const FrameSystem& s) { return reweighted(s, spec.weights); };
      const Generated inner = make(*spec.base);
      if (const auto* pair = std::get_if<SystemPair>(&inner)) {
        return SystemPair{reweigh(pair->first), reweigh(pair->second)};
      }
      return reweigh(std::get<FrameSystem>(inner));
    }
  }
  throw ConstructionError("unknown generator family");
}

}  // namespace semiframe
