#pragma once

// Cross-Gram matrices, coherences, support measures and the support-size
// uncertainty inequalities for pairs of reconstructing systems.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semiframe/errors.hpp"
#include "semiframe/frames.hpp"
#include "semiframe/spaces.hpp"

namespace semiframe {

/// Tolerance on slack below which an inequality counts as violated.
inline constexpr double kCheckTolerance = 1e-12;
/// Relative tolerance for flagging equality: |slack| <= kEqualityTolerance * max(1, rhs).
inline constexpr double kEqualityTolerance = 1e-9;

enum class GramDirection {
  f_of_omega,  // (alpha, beta) -> f_alpha(omega_beta)
  g_of_tau,    // (beta, alpha) -> g_beta(tau_alpha)
};

enum class BoundId {
  product_1,
  product_inf,
  mixed_p,
  one_sided_1,
  one_sided_inf,
  hilbert_chain,
  transfer_FI,
  transfer_SI,
  transfer_I1,
  transfer_I2,
};

inline std::string to_string(BoundId id) {
  switch (id) {
    case BoundId::product_1: return "product_1";
    case BoundId::product_inf: return "product_inf";
    case BoundId::mixed_p: return "mixed_p";
    case BoundId::one_sided_1: return "one_sided_1";
    case BoundId::one_sided_inf: return "one_sided_inf";
    case BoundId::hilbert_chain: return "hilbert_chain";
    case BoundId::transfer_FI: return "transfer_FI";
    case BoundId::transfer_SI: return "transfer_SI";
    case BoundId::transfer_I1: return "transfer_I1";
    case BoundId::transfer_I2: return "transfer_I2";
  }
  return "unknown";
}

/// One inequality evaluated as lhs >= rhs.
struct BoundReport {
  BoundId id;
  double lhs;
  double rhs;
  double slack;
  bool holds;
  bool equality;
  bool bound_finite;
  std::optional<double> q;
};

inline BoundReport make_report(BoundId id, double lhs, double rhs,
                               std::optional<double> q = std::nullopt) {
  BoundReport r{id, lhs, rhs, lhs - rhs, false, false, std::isfinite(rhs), q};
  if (!r.bound_finite) {
    r.slack = -std::numeric_limits<double>::infinity();
    return r;
  }
  r.holds = r.slack >= -kCheckTolerance;
  r.equality = std::abs(r.slack) <= kEqualityTolerance * std::max(1.0, rhs);
  return r;
}

/// Cross evaluations between two systems. Dense pairs give a full matrix;
/// diagonal pairs give only the diagonal.
struct CrossGram {
  GramDirection direction;
  std::variant<Matrix, std::vector<Scalar>> entries;

  bool is_diagonal() const { return std::holds_alternative<std::vector<Scalar>>(entries); }

  double max_modulus() const {
    if (const auto* m = std::get_if<Matrix>(&entries)) {
      return m->size() == 0 ? 0.0 : m->cwiseAbs().maxCoeff();
    }
    double best = 0.0;
    for (const auto& v : std::get<std::vector<Scalar>>(entries)) best = std::max(best, std::abs(v));
    return best;
  }
};

inline CrossGram cross_gram(const FrameSystem& f_sys, const FrameSystem& g_sys, GramDirection dir) {
  if (f_sys.ambient_dim() != g_sys.ambient_dim() || f_sys.ambient_base() != g_sys.ambient_base()) {
    throw DomainError("systems act on different ambient spaces (" +
                      std::to_string(f_sys.ambient_dim()) + " vs " +
                      std::to_string(g_sys.ambient_dim()) + ")");
  }
  if (f_sys.is_dense() && g_sys.is_dense()) {
    const auto& f = f_sys.as_dense();
    const auto& g = g_sys.as_dense();
    Matrix m = dir == GramDirection::f_of_omega ? Matrix(f.analysis * g.synthesis)
                                                : Matrix(g.analysis * f.synthesis);
    return {dir, std::move(m)};
  }
  if (f_sys.is_diagonal() && g_sys.is_diagonal()) {
    const auto& f = f_sys.as_diagonal();
    const auto& g = g_sys.as_diagonal();
    std::vector<Scalar> diag(f_sys.ambient_dim());
    for (std::size_t k = 0; k < diag.size(); ++k) {
      const std::size_t n = k + 1;
      // f_n(e_m / g_m) = (f_n / g_m) delta_nm
      diag[k] = dir == GramDirection::f_of_omega ? f.weight(n) / g.weight(n) : g.weight(n) / f.weight(n);
    }
    return {dir, std::move(diag)};
  }
  throw UnsupportedRepresentation("cross-Gram pairs dense with dense or diagonal with diagonal");
}

inline double coherence(const FrameSystem& f_sys, const FrameSystem& g_sys, GramDirection dir) {
  return cross_gram(f_sys, g_sys, dir).max_modulus();
}

struct SupportReport {
  IndexSet support;
  std::size_t cardinality;
  double measure;
  double cutoff;
};

inline SupportReport support_of(const CoefficientFunction& c) {
  IndexSet s = c.values.support();
  const double m = measure_of(c.space, s);
  const std::size_t card = s.size();
  return {std::move(s), card, m, c.cutoff};
}

/// Two systems with their coherences computed once.
struct FramePair {
  FrameSystem f;
  FrameSystem g;
  double c_f_omega;  // sup |f_alpha(omega_beta)|
  double c_g_tau;    // sup |g_beta(tau_alpha)|

  static FramePair make(FrameSystem f, FrameSystem g) {
    const double a = coherence(f, g, GramDirection::f_of_omega);
    const double b = coherence(f, g, GramDirection::g_of_tau);
    return {std::move(f), std::move(g), a, b};
  }
};

/// theta_f x and theta_g x with their supports.
struct PairAnalysis {
  CoefficientFunction theta_f;
  CoefficientFunction theta_g;
  SupportReport supp_f;
  SupportReport supp_g;
};

inline PairAnalysis evaluate(const FramePair& pair, const Vector& x,
                             double tol = kDefaultSupportTolerance) {
  if (x.is_zero()) throw PreconditionError("bound stated for x != 0");
  auto tf = analyze(pair.f, x, tol);
  auto tg = analyze(pair.g, x, tol);
  auto sf = support_of(tf);
  auto sg = support_of(tg);
  return {std::move(tf), std::move(tg), std::move(sf), std::move(sg)};
}

namespace detail {

inline double reciprocal(double c) {
  return c == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / c;
}

inline void require_one_or_inf(const Exponent& p, const char* what) {
  if (!p.is_one() && !p.is_infinite()) {
    throw PreconditionError(std::string(what) + " is stated for p = 1 or p = inf, got p = " + p.to_string());
  }
}

}  // namespace detail

/// mu(supp theta_f x) nu(supp theta_g x) >= 1 / (c_fw c_gt). The bound has the
/// same form for p = 1 and p = inf; only the report id differs.
inline BoundReport check_product_bound(const FramePair& pair, const PairAnalysis& a, const Exponent& p) {
  detail::require_one_or_inf(p, "product bound");
  const BoundId id = p.is_infinite() ? BoundId::product_inf : BoundId::product_1;
  const double denom = pair.c_f_omega * pair.c_g_tau;
  return make_report(id, a.supp_f.measure * a.supp_g.measure, detail::reciprocal(denom));
}

inline BoundReport check_product_bound(const FrameSystem& f, const FrameSystem& g, const Vector& x,
                                       const Exponent& p) {
  const auto pair = FramePair::make(f, g);
  return check_product_bound(pair, evaluate(pair, x), p);
}

/// The two intermediate inequalities whose product gives the product bound.
///   p = 1:   mu(S_f) |theta_g x|_1 >= |theta_f x|_1 / c_fw    (FI)
///            nu(S_g) |theta_f x|_1 >= |theta_g x|_1 / c_gt    (SI)
///   p = inf: nu(S_g) |theta_g x|_inf >= |theta_f x|_inf / c_fw  (I1)
///            mu(S_f) |theta_f x|_inf >= |theta_g x|_inf / c_gt  (I2)
inline std::pair<BoundReport, BoundReport> check_transfer_inequalities(const FramePair& pair,
                                                                      const PairAnalysis& a,
                                                                      const Exponent& p) {
  detail::require_one_or_inf(p, "transfer inequalities");
  const double nf = lp_norm(a.theta_f.values, p, a.theta_f.space);
  const double ng = lp_norm(a.theta_g.values, p, a.theta_g.space);
  auto ratio = [](double norm, double c) {
    return c == 0.0 ? std::numeric_limits<double>::infinity() : norm / c;
  };
  if (p.is_infinite()) {
    return {make_report(BoundId::transfer_I1, a.supp_g.measure * ng, ratio(nf, pair.c_f_omega)),
            make_report(BoundId::transfer_I2, a.supp_f.measure * nf, ratio(ng, pair.c_g_tau))};
  }
  return {make_report(BoundId::transfer_FI, a.supp_f.measure * ng, ratio(nf, pair.c_f_omega)),
          make_report(BoundId::transfer_SI, a.supp_g.measure * nf, ratio(ng, pair.c_g_tau))};
}

inline std::pair<BoundReport, BoundReport> check_transfer_inequalities(const FrameSystem& f,
                                                                      const FrameSystem& g,
                                                                      const Vector& x,
                                                                      const Exponent& p) {
  const auto pair = FramePair::make(f, g);
  return check_transfer_inequalities(pair, evaluate(pair, x), p);
}

/// For 1 < p < inf with q = p/(p-1):
///   mu(S_f)^{1/p} nu(S_g)^{1/q} >= 1/c_fw  and  nu(S_g)^{1/p} mu(S_f)^{1/q} >= 1/c_gt.
/// Valid when both analysis maps are isometries into L^p.
inline std::pair<BoundReport, BoundReport> check_mixed_norm_bound(const FramePair& pair,
                                                                 const PairAnalysis& a,
                                                                 const Exponent& p) {
  if (p.is_infinite() || p.value() <= 1.0) {
    throw PreconditionError("mixed-norm bound needs finite p > 1, got p = " + p.to_string());
  }
  const double pv = p.value();
  const double q = p.conjugate();
  const double mf = a.supp_f.measure;
  const double mg = a.supp_g.measure;
  return {make_report(BoundId::mixed_p, std::pow(mf, 1.0 / pv) * std::pow(mg, 1.0 / q),
                      detail::reciprocal(pair.c_f_omega), q),
          make_report(BoundId::mixed_p, std::pow(mg, 1.0 / pv) * std::pow(mf, 1.0 / q),
                      detail::reciprocal(pair.c_g_tau), q)};
}

inline std::pair<BoundReport, BoundReport> check_mixed_norm_bound(const FrameSystem& f,
                                                                 const FrameSystem& g,
                                                                 const Vector& x,
                                                                 const Exponent& p) {
  const auto pair = FramePair::make(f, g);
  return check_mixed_norm_bound(pair, evaluate(pair, x), p);
}

/// p = 1:   mu(S_f) >= 1/c_fw, nu(S_g) >= 1/c_gt.
/// p = inf: mu(S_f) >= 1/c_gt, nu(S_g) >= 1/c_fw.
/// Valid when both analysis maps are isometries into L^p.
inline std::pair<BoundReport, BoundReport> check_one_sided_bounds(const FramePair& pair,
                                                                 const PairAnalysis& a,
                                                                 const Exponent& p) {
  detail::require_one_or_inf(p, "one-sided bounds");
  if (p.is_infinite()) {
    return {make_report(BoundId::one_sided_inf, a.supp_f.measure, detail::reciprocal(pair.c_g_tau)),
            make_report(BoundId::one_sided_inf, a.supp_g.measure, detail::reciprocal(pair.c_f_omega))};
  }
  return {make_report(BoundId::one_sided_1, a.supp_f.measure, detail::reciprocal(pair.c_f_omega)),
          make_report(BoundId::one_sided_1, a.supp_g.measure, detail::reciprocal(pair.c_g_tau))};
}

inline std::pair<BoundReport, BoundReport> check_one_sided_bounds(const FrameSystem& f,
                                                                 const FrameSystem& g,
                                                                 const Vector& x,
                                                                 const Exponent& p) {
  const auto pair = FramePair::make(f, g);
  return check_one_sided_bounds(pair, evaluate(pair, x), p);
}

struct ParsevalCheck {
  bool parseval;
  double deviation;
};

/// Frame operator sum_j mu_j tau_j tau_j^* against the identity. Frame
/// vectors are the synthesis vectors; stored analysis rows are not consulted.
inline ParsevalCheck validate_parseval(const FrameSystem& sys, double tol) {
  const auto& dense = sys.as_dense();
  const auto weights = sys.space().weights();
  const auto d = dense.synthesis.rows();
  Matrix frame_op = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < dense.synthesis.cols(); ++j) {
    const auto tau = dense.synthesis.col(j);
    frame_op += weights[static_cast<std::size_t>(j)] * (tau * tau.adjoint());
  }
  const double deviation = (frame_op - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  return {deviation <= tol, deviation};
}

/// Parseval tolerance used as the chain's precondition.
inline constexpr double kParsevalTolerance = 1e-9;

struct HilbertChainReport {
  BoundReport bound;     // |theta_tau h|_0 |theta_omega h|_0 >= 1 / max|<tau_j, omega_k>|^2
  double am_gm;          // ((|theta_tau h|_0 + |theta_omega h|_0) / 2)^2
  bool am_gm_holds;
  bool am_gm_equality;
  double gram_max;       // max |<tau_j, omega_k>|
  std::size_t support_tau;
  std::size_t support_omega;

  bool all_hold() const { return bound.holds && am_gm_holds; }
  bool all_equal() const { return bound.equality && am_gm_equality; }
};

/// Both links of the ell_0 chain for two Parseval frames, with analysis
/// h -> (<h, tau_j>)_j computed from the frame vectors.
inline HilbertChainReport check_hilbert_chain(const FrameSystem& tau_frame,
                                              const FrameSystem& omega_frame, const Vector& h,
                                              double tol = kDefaultSupportTolerance) {
  if (h.is_zero()) throw PreconditionError("bound stated for h != 0");
  if (const auto c = validate_parseval(tau_frame, kParsevalTolerance); !c.parseval) {
    throw PreconditionError("tau_frame is not a Parseval frame (deviation=" + std::to_string(c.deviation) + ")");
  }
  if (const auto c = validate_parseval(omega_frame, kParsevalTolerance); !c.parseval) {
    throw PreconditionError("omega_frame is not a Parseval frame (deviation=" + std::to_string(c.deviation) + ")");
  }
  tau_frame.require_ambient(h);
  omega_frame.require_ambient(h);
  const auto& tau = tau_frame.as_dense().synthesis;
  const auto& omega = omega_frame.as_dense().synthesis;
  const Eigen::VectorXcd hv = detail::to_eigen(h);

  auto l0 = [&](const Matrix& vectors) {
    // <h, tau_j> = tau_j^* h
    const Eigen::VectorXcd coeffs = vectors.adjoint() * hv;
    std::vector<Scalar> values(coeffs.data(), coeffs.data() + coeffs.size());
    const double cutoff = detail::cutoff_for(values, tol);
    std::size_t count = 0;
    for (const auto& v : values) count += std::abs(v) > cutoff ? 1 : 0;
    return count;
  };
  const std::size_t a = l0(tau);
  const std::size_t b = l0(omega);
  // <tau_j, omega_k> = omega_k^* tau_j
  const double gram_max = (omega.adjoint() * tau).cwiseAbs().maxCoeff();

  const double product = static_cast<double>(a) * static_cast<double>(b);
  const double mean = (static_cast<double>(a) + static_cast<double>(b)) / 2.0;
  const double am_gm = mean * mean;
  const auto amgm_link = make_report(BoundId::hilbert_chain, am_gm, product);
  const double bound = gram_max == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (gram_max * gram_max);
  return {make_report(BoundId::hilbert_chain, product, bound),
          am_gm,
          amgm_link.holds,
          amgm_link.equality,
          gram_max,
          a,
          b};
}

}  // namespace semiframe
