#pragma once

// Index sets with purely atomic positive measures, exponents, and sparse
// vectors with exact support bookkeeping.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semiframe/errors.hpp"

namespace semiframe {

using Scalar = std::complex<double>;
using IndexSet = std::vector<std::size_t>;

enum class Field { real, complex };

inline std::string to_string(Field f) { return f == Field::real ? "real" : "complex"; }

/// Exponent p in [1, inf], tagged instead of using a sentinel double.
class Exponent {
 public:
  static Exponent finite(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw PreconditionError("exponent must be a finite number >= 1, got " + std::to_string(p));
    }
    return Exponent(p, false);
  }
  static Exponent infinity() { return Exponent(0.0, true); }

  /// Accepts "1", "2.5", "inf" (any case).
  static Exponent parse(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "inf" || lower == "infinity") return infinity();
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(lower, &used);
    } catch (const std::exception&) {
      throw ParseError("cannot parse exponent '" + std::string(text) + "'");
    }
    if (used != lower.size()) throw ParseError("cannot parse exponent '" + std::string(text) + "'");
    return finite(value);
  }

  bool is_infinite() const { return infinite_; }
  bool is_one() const { return !infinite_ && value_ == 1.0; }

  /// Finite value; throws for p = inf.
  double value() const {
    if (infinite_) throw PreconditionError("exponent is infinite");
    return value_;
  }

  /// Conjugate index q = p/(p-1), defined for finite p > 1.
  double conjugate() const {
    if (infinite_ || value_ <= 1.0) throw PreconditionError("conjugate index needs finite p > 1");
    return value_ / (value_ - 1.0);
  }

  std::string to_string() const {
    if (infinite_) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
  }

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// Finite index set {0..n-1} or an initial segment {1..N} of the naturals,
/// carrying strictly positive atom weights (counting measure by default).
class MeasureSpace {
 public:
  enum class Kind { finite, sequence };

  static MeasureSpace finite(std::size_t n) { return MeasureSpace(Kind::finite, n); }
  static MeasureSpace sequence(std::size_t truncation) {
    return MeasureSpace(Kind::sequence, truncation);
  }

  /// Same index set, new weights (one per index, in index order).
  MeasureSpace with_weights(std::vector<double> weights) const {
    if (weights.size() != size_) {
      throw DomainError("weight count " + std::to_string(weights.size()) +
                        " does not match index set size " + std::to_string(size_));
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
        throw DomainError("weight at index " + std::to_string(k + first_index()) +
                          " must be strictly positive and finite");
      }
    }
    MeasureSpace out(kind_, size_);
    if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 1.0; })) return out;
    out.weights_ = std::make_shared<const std::vector<double>>(std::move(weights));
    return out;
  }

  Kind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  std::size_t first_index() const { return kind_ == Kind::finite ? 0 : 1; }
  std::size_t end_index() const { return first_index() + size_; }
  bool contains(std::size_t index) const { return index >= first_index() && index < end_index(); }
  bool is_counting() const { return weights_ == nullptr; }

  double weight(std::size_t index) const {
    require(index);
    return weights_ ? (*weights_)[index - first_index()] : 1.0;
  }

  std::vector<double> weights() const {
    return weights_ ? *weights_ : std::vector<double>(size_, 1.0);
  }

  void require(std::size_t index) const {
    if (!contains(index)) {
      throw DomainError("index " + std::to_string(index) + " is outside [" +
                        std::to_string(first_index()) + ", " + std::to_string(end_index()) + ")");
    }
  }

  friend bool operator==(const MeasureSpace& a, const MeasureSpace& b) {
    if (a.kind_ != b.kind_ || a.size_ != b.size_) return false;
    if (a.weights_ == b.weights_) return true;
    return a.weights() == b.weights();
  }

 private:
  MeasureSpace(Kind kind, std::size_t size) : kind_(kind), size_(size) {
    if (size == 0) throw DomainError("index set must be nonempty");
  }

  Kind kind_;
  std::size_t size_;
  std::shared_ptr<const std::vector<double>> weights_;
};

/// Sum of weights over `subset`; 0 for the empty set.
inline double measure_of(const MeasureSpace& space, std::span<const std::size_t> subset) {
  double total = 0.0;
  for (std::size_t index : subset) total += space.weight(index);
  return total;
}

/// Sparse scalar vector over indices [base, base + dim). Exact zeros are
/// never stored, so the stored keys are the exact support.
class Vector {
 public:
  using Entries = std::map<std::size_t, Scalar>;

  explicit Vector(std::size_t dim, std::size_t base = 0, Field field = Field::real)
      : dim_(dim), base_(base), field_(field) {
    if (dim == 0) throw DomainError("vector dimension must be positive");
  }

  Vector(std::size_t dim, const Entries& entries, std::size_t base = 0)
      : Vector(dim, base, infer_field(entries)) {
    for (const auto& [index, value] : entries) set(index, value);
  }

  Vector(std::size_t dim, const Entries& entries, std::size_t base, Field field)
      : Vector(dim, base, field) {
    for (const auto& [index, value] : entries) set(index, value);
  }

  static Vector dense(std::span<const Scalar> values, std::size_t base = 0) {
    Entries entries;
    for (std::size_t k = 0; k < values.size(); ++k) entries.emplace(base + k, values[k]);
    return Vector(values.size(), entries, base);
  }

  static Vector dense(std::span<const double> values, std::size_t base = 0) {
    std::vector<Scalar> promoted(values.begin(), values.end());
    return dense(std::span<const Scalar>(promoted), base);
  }

  static Vector basis(std::size_t dim, std::size_t index, std::size_t base = 0) {
    return Vector(dim, Entries{{index, Scalar(1.0)}}, base);
  }

  std::size_t dim() const { return dim_; }
  std::size_t base() const { return base_; }
  std::size_t end_index() const { return base_ + dim_; }
  Field field() const { return field_; }
  const Entries& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  Scalar at(std::size_t index) const {
    require(index);
    auto it = entries_.find(index);
    return it == entries_.end() ? Scalar{} : it->second;
  }

  IndexSet support() const {
    IndexSet out;
    out.reserve(entries_.size());
    for (const auto& kv : entries_) out.push_back(kv.first);
    return out;
  }

  double max_modulus() const {
    double m = 0.0;
    for (const auto& kv : entries_) m = std::max(m, std::abs(kv.second));
    return m;
  }

  /// Dense copy in index order.
  std::vector<Scalar> to_dense() const {
    std::vector<Scalar> out(dim_);
    for (const auto& [index, value] : entries_) out[index - base_] = value;
    return out;
  }

  Vector scaled(Scalar c) const {
    Entries out;
    for (const auto& [index, value] : entries_) out.emplace(index, c * value);
    return Vector(dim_, out, base_, result_field(field_, c));
  }

  friend Vector operator+(const Vector& a, const Vector& b) { return combine(a, b, 1.0); }
  friend Vector operator-(const Vector& a, const Vector& b) { return combine(a, b, -1.0); }

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.dim_ == b.dim_ && a.base_ == b.base_ && a.entries_ == b.entries_;
  }

 private:
  void require(std::size_t index) const {
    if (index < base_ || index >= end_index()) {
      throw DomainError("index " + std::to_string(index) + " is outside [" +
                        std::to_string(base_) + ", " + std::to_string(end_index()) + ")");
    }
  }

  void set(std::size_t index, Scalar value) {
    require(index);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw DomainError("entry at index " + std::to_string(index) + " is not finite");
    }
    if (field_ == Field::real && value.imag() != 0.0) {
      throw DomainError("real vector given a complex entry at index " + std::to_string(index));
    }
    if (value == Scalar{}) {
      entries_.erase(index);
      return;
    }
    entries_[index] = value;
  }

  static Field infer_field(const Entries& entries) {
    for (const auto& kv : entries) {
      if (kv.second.imag() != 0.0) return Field::complex;
    }
    return Field::real;
  }

  static Field result_field(Field f, Scalar c) {
    return (f == Field::real && c.imag() == 0.0) ? Field::real : Field::complex;
  }

  static Vector combine(const Vector& a, const Vector& b, double sign) {
    if (a.dim_ != b.dim_ || a.base_ != b.base_) {
      throw DomainError("vector index ranges differ");
    }
    Entries out = a.entries_;
    for (const auto& [index, value] : b.entries_) out[index] += sign * value;
    Field f = (a.field_ == Field::real && b.field_ == Field::real) ? Field::real : Field::complex;
    return Vector(a.dim_, out, a.base_, f);
  }

  std::size_t dim_;
  std::size_t base_;
  Field field_;
  Entries entries_;
};

namespace detail {

// (sum_k w_k |v_k|^p)^(1/p), rescaled by the largest modulus to keep the
// powers in range.
template <class WeightOf>
double weighted_lp(const Vector::Entries& entries, const Exponent& p, WeightOf weight_of) {
  double largest = 0.0;
  for (const auto& kv : entries) largest = std::max(largest, std::abs(kv.second));
  if (largest == 0.0) return 0.0;
  if (p.is_infinite()) return largest;
  const double e = p.value();
  double total = 0.0;
  for (const auto& [index, value] : entries) {
    const double ratio = std::abs(value) / largest;
    total += weight_of(index) * (e == 1.0 ? ratio : std::pow(ratio, e));
  }
  return largest * (e == 1.0 ? total : std::pow(total, 1.0 / e));
}

}  // namespace detail

/// L^p norm of `v` over `space`. For p = inf the weights are ignored
/// (essential supremum under strictly positive atoms).
inline double lp_norm(const Vector& v, const Exponent& p, const MeasureSpace& space) {
  if (v.dim() != space.size() || v.base() != space.first_index()) {
    throw DomainError("vector index range [" + std::to_string(v.base()) + ", " +
                      std::to_string(v.end_index()) + ") does not match measure space [" +
                      std::to_string(space.first_index()) + ", " +
                      std::to_string(space.end_index()) + ")");
  }
  return detail::weighted_lp(v.entries(), p, [&](std::size_t i) { return space.weight(i); });
}

/// Counting-measure ell^p norm.
inline double lp_norm(const Vector& v, const Exponent& p) {
  return detail::weighted_lp(v.entries(), p, [](std::size_t) { return 1.0; });
}

}  // namespace semiframe
