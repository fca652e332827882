#pragma once

// Frame systems: paired analysis functionals and synthesis vectors over a
// measure space, with analysis/synthesis maps, reconstruction checks and the
// domain test for unbounded diagonal systems.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>

#include "semiframe/errors.hpp"
#include "semiframe/spaces.hpp"

namespace semiframe {

using Matrix = Eigen::MatrixXcd;

/// Default relative cutoff applied by analyze().
inline constexpr double kDefaultSupportTolerance = 1e-10;
/// Absolute floor under the relative cutoff.
inline constexpr double kSupportFloor = 1e-300;

/// Dense finite system. Row alpha of `analysis` holds the coordinates of the
/// functional f_alpha against the ambient standard basis; column alpha of
/// `synthesis` is the vector tau_alpha.
struct DenseRepr {
  Matrix analysis;   // |Omega| x d
  Matrix synthesis;  // d x |Omega|
};

/// f_n = n^r zeta_n, tau_n = e_n / n^r over the indices 1..N.
struct DiagonalRepr {
  double r;
  std::string r_text;

  double weight(std::size_t n) const { return std::pow(static_cast<double>(n), r); }
};

/// Parses a positive rational such as "1", "0.5" or "3/2".
inline double parse_rational(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParseError("cannot parse rational '" + text + "'");
    }
    if (used != s.size()) throw ParseError("cannot parse rational '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  double value = slash == std::string::npos
                     ? to_double(text)
                     : to_double(text.substr(0, slash)) / to_double(text.substr(slash + 1));
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConstructionError("diagonal exponent r must be positive, got '" + text + "'");
  }
  return value;
}

class FrameSystem {
 public:
  using Repr = std::variant<DenseRepr, DiagonalRepr>;

  /// Dense system over `space`; the ambient space is K^d with d = analysis.cols().
  static FrameSystem dense(MeasureSpace space, Matrix analysis, Matrix synthesis, Exponent p,
                           Field field) {
    const auto count = static_cast<Eigen::Index>(space.size());
    if (space.kind() != MeasureSpace::Kind::finite) {
      throw ConstructionError("dense systems are indexed by a finite measure space");
    }
    if (analysis.rows() != count || synthesis.cols() != count) {
      throw ConstructionError("dense system needs " + std::to_string(count) +
                              " analysis rows and synthesis vectors, got " +
                              std::to_string(analysis.rows()) + " and " +
                              std::to_string(synthesis.cols()));
    }
    if (analysis.cols() == 0 || analysis.cols() != synthesis.rows()) {
      throw ConstructionError("analysis rows and synthesis vectors disagree on the ambient dimension");
    }
    if (!analysis.allFinite() || !synthesis.allFinite()) {
      throw ConstructionError("system entries must be finite");
    }
    if (field == Field::real &&
        (analysis.imag().cwiseAbs().maxCoeff() != 0.0 || synthesis.imag().cwiseAbs().maxCoeff() != 0.0)) {
      throw ConstructionError("real system given complex entries");
    }
    const auto d = static_cast<std::size_t>(analysis.cols());
    return FrameSystem(std::move(space), d, 0, field, p,
                       DenseRepr{std::move(analysis), std::move(synthesis)});
  }

  /// Unbounded diagonal system w_n = n^r over the truncation 1..N.
  static FrameSystem diagonal(std::size_t truncation, const std::string& r_text, Exponent p) {
    const double r = parse_rational(r_text);
    return FrameSystem(MeasureSpace::sequence(truncation), truncation, 1, Field::real, p,
                       DiagonalRepr{r, r_text});
  }

  const MeasureSpace& space() const { return space_; }
  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t ambient_base() const { return ambient_base_; }
  Field field() const { return field_; }
  const Exponent& p() const { return p_; }
  const Repr& repr() const { return repr_; }

  bool is_dense() const { return std::holds_alternative<DenseRepr>(repr_); }
  bool is_diagonal() const { return std::holds_alternative<DiagonalRepr>(repr_); }
  const DenseRepr& as_dense() const {
    if (!is_dense()) throw UnsupportedRepresentation("operation needs a dense system");
    return std::get<DenseRepr>(repr_);
  }
  const DiagonalRepr& as_diagonal() const {
    if (!is_diagonal()) throw UnsupportedRepresentation("operation needs a diagonal system");
    return std::get<DiagonalRepr>(repr_);
  }

  /// Same functionals and vectors, new measure and/or exponent.
  FrameSystem with_space(MeasureSpace space) const {
    FrameSystem out = *this;
    if (space.size() != space_.size() || space.kind() != space_.kind()) {
      throw ConstructionError("replacement measure space has a different index set");
    }
    out.space_ = std::move(space);
    return out;
  }
  FrameSystem with_exponent(Exponent p) const {
    FrameSystem out = *this;
    out.p_ = p;
    return out;
  }

  void require_ambient(const Vector& x) const {
    if (x.dim() != ambient_dim_ || x.base() != ambient_base_) {
      throw DomainError("vector of dimension " + std::to_string(x.dim()) + " (base " +
                        std::to_string(x.base()) + ") does not match ambient dimension " +
                        std::to_string(ambient_dim_) + " (base " + std::to_string(ambient_base_) +
                        ")");
    }
  }

 private:
  FrameSystem(MeasureSpace space, std::size_t d, std::size_t base, Field field, Exponent p, Repr repr)
      : space_(std::move(space)), ambient_dim_(d), ambient_base_(base), field_(field), p_(p),
        repr_(std::move(repr)) {}

  MeasureSpace space_;
  std::size_t ambient_dim_;
  std::size_t ambient_base_;
  Field field_;
  Exponent p_;
  Repr repr_;
};

/// The analysis image alpha -> f_alpha(x), with sub-cutoff values dropped.
struct CoefficientFunction {
  MeasureSpace space;
  Vector values;
  double cutoff;  // absolute magnitude at or below which values were zeroed
};

namespace detail {

inline Eigen::VectorXcd to_eigen(const Vector& x) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(x.dim()));
  for (const auto& [index, value] : x.entries()) out(static_cast<Eigen::Index>(index - x.base())) = value;
  return out;
}

inline Vector from_values(const std::vector<Scalar>& values, std::size_t base, double cutoff,
                          Field field) {
  Vector::Entries kept;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k]) > cutoff) kept.emplace(base + k, values[k]);
  }
  if (field == Field::real) {
    for (auto& kv : kept) {
      if (kv.second.imag() != 0.0) {
        field = Field::complex;
        break;
      }
    }
  }
  return Vector(values.size(), kept, base, field);
}

inline double cutoff_for(const std::vector<Scalar>& values, double tol) {
  double largest = 0.0;
  for (const auto& v : values) largest = std::max(largest, std::abs(v));
  return std::max(tol * largest, kSupportFloor);
}

}  // namespace detail

/// theta_f x. `tol` is relative to the largest coefficient modulus.
inline CoefficientFunction analyze(const FrameSystem& sys, const Vector& x,
                                   double tol = kDefaultSupportTolerance) {
  sys.require_ambient(x);
  const MeasureSpace& space = sys.space();
  std::vector<Scalar> values(space.size());
  if (sys.is_diagonal()) {
    const auto& diag = sys.as_diagonal();
    for (const auto& [n, a] : x.entries()) values[n - space.first_index()] = diag.weight(n) * a;
  } else {
    const auto& dense = sys.as_dense();
    const Eigen::VectorXcd coords = dense.analysis * detail::to_eigen(x);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = coords(static_cast<Eigen::Index>(k));
  }
  const double cutoff = detail::cutoff_for(values, tol);
  Field field = (sys.field() == Field::real && x.field() == Field::real) ? Field::real : Field::complex;
  return CoefficientFunction{space, detail::from_values(values, space.first_index(), cutoff, field),
                             cutoff};
}

/// sum_alpha mu(alpha) c(alpha) tau_alpha.
inline Vector synthesize(const FrameSystem& sys, const CoefficientFunction& c) {
  if (!(c.space == sys.space())) throw DomainError("coefficient space does not match the system");
  const MeasureSpace& space = sys.space();
  const std::size_t base = sys.ambient_base();
  Vector::Entries out;
  if (sys.is_diagonal()) {
    const auto& diag = sys.as_diagonal();
    for (const auto& [n, value] : c.values.entries()) {
      const double mu = space.weight(n);
      out.emplace(n, (mu == 1.0 ? value : mu * value) / diag.weight(n));
    }
  } else {
    const auto& dense = sys.as_dense();
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sys.ambient_dim()));
    for (const auto& [alpha, value] : c.values.entries()) {
      const auto col = static_cast<Eigen::Index>(alpha - space.first_index());
      acc += (space.weight(alpha) * value) * dense.synthesis.col(col);
    }
    for (Eigen::Index k = 0; k < acc.size(); ++k) {
      if (acc(k) != Scalar{}) out.emplace(base + static_cast<std::size_t>(k), acc(k));
    }
  }
  Field field = Field::real;
  for (const auto& kv : out) {
    if (kv.second.imag() != 0.0) field = Field::complex;
  }
  return Vector(sys.ambient_dim(), out, base, field);
}

struct ReconstructionCheck {
  bool reconstructing;
  double deviation;  // max-entry deviation of the composite from the identity
};

/// synthesis * diag(mu) * analysis compared with the identity.
inline Matrix reconstruction_composite(const FrameSystem& sys) {
  const auto& dense = sys.as_dense();
  Eigen::VectorXd mu(static_cast<Eigen::Index>(sys.space().size()));
  const auto weights = sys.space().weights();
  for (std::size_t k = 0; k < weights.size(); ++k) mu(static_cast<Eigen::Index>(k)) = weights[k];
  return dense.synthesis * mu.cast<Scalar>().asDiagonal() * dense.analysis;
}

inline ReconstructionCheck is_reconstructing(const FrameSystem& sys, double tol) {
  if (sys.is_diagonal()) return {true, 0.0};
  const Matrix composite = reconstruction_composite(sys);
  const auto d = composite.rows();
  const double deviation = (composite - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  return {deviation <= tol, deviation};
}

/// Membership data for an infinite sequence: either finitely supported or a
/// power-law tail a_n = C n^-s for n >= onset.
struct TailDescriptor {
  enum class Kind { finite_support, power_law };
  Kind kind = Kind::finite_support;
  double scale = 1.0;
  double decay = 0.0;
  std::size_t onset = 1;

  static TailDescriptor finite_support() { return {}; }
  static TailDescriptor power_law(double scale, double decay, std::size_t onset = 1) {
    if (!(scale > 0.0)) throw PreconditionError("power-law scale must be positive");
    if (onset == 0) throw PreconditionError("power-law onset index starts at 1");
    return {Kind::power_law, scale, decay, onset};
  }

  /// "finite" or "power:C:s[:onset]".
  static TailDescriptor parse(const std::string& text) {
    if (text == "finite") return finite_support();
    if (text.rfind("power:", 0) != 0) throw ParseError("unknown tail descriptor '" + text + "'");
    std::vector<std::string> parts;
    std::size_t start = 6;
    while (true) {
      const auto colon = text.find(':', start);
      parts.push_back(text.substr(start, colon - start));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) throw ParseError("expected power:C:s[:onset], got '" + text + "'");
    try {
      const double c = std::stod(parts[0]);
      const double s = std::stod(parts[1]);
      const std::size_t onset = parts.size() == 3 ? std::stoul(parts[2]) : 1;
      return power_law(c, s, onset);
    } catch (const std::logic_error&) {
      throw ParseError("expected power:C:s[:onset], got '" + text + "'");
    }
  }
};

/// Whether a sequence with the given tail lies in the domain of theta_f for
/// a diagonal system w_n = n^r, by the p-series test.
inline bool in_domain(const FrameSystem& sys, const TailDescriptor& tail) {
  if (!sys.is_diagonal()) {
    throw UnsupportedRepresentation("domain test is defined for diagonal systems only");
  }
  if (tail.kind == TailDescriptor::Kind::finite_support) return true;
  const double r = sys.as_diagonal().r;
  // |w_n a_n|^p ~ C^p n^{p (r - s)}
  if (sys.p().is_infinite()) return r - tail.decay <= 0.0;
  return sys.p().value() * (r - tail.decay) < -1.0;
}

}  // namespace semiframe
