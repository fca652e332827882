#pragma once

// JSON forms of vectors, systems, reports and certificates. Parsing goes
// through nlohmann::json; emission is hand-formatted so every double is
// written with 17 significant digits.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "semiframe/errors.hpp"
#include "semiframe/extremal.hpp"
#include "semiframe/frames.hpp"
#include "semiframe/spaces.hpp"
#include "semiframe/uncertainty.hpp"

namespace semiframe::io {

using nlohmann::json;

/// %.17g; non-finite values become the strings "inf", "-inf", "nan".
inline std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Same as format_double but without JSON quoting (CSV cells).
inline std::string format_cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + " must be a number");
  return j.get<double>();
}

inline std::size_t index(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(what + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

inline Scalar scalar(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && (j.size() == 1 || j.size() == 2)) {
    return {number(j[0], what), j.size() == 2 ? number(j[1], what) : 0.0};
  }
  if (j.is_object() && j.contains("re")) {
    return {number(j["re"], what), j.contains("im") ? number(j["im"], what) : 0.0};
  }
  throw ParseError(what + " must be a number, [re, im] or {\"re\", \"im\"}");
}

inline Field field(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw ParseError("field must be \"real\" or \"complex\", got \"" + s + "\"");
}

inline Exponent exponent(const json& j) {
  if (j.is_number()) return Exponent::finite(j.get<double>());
  if (j.is_string()) return Exponent::parse(j.get<std::string>());
  throw ParseError("p must be a string such as \"1\" or \"inf\"");
}

inline Matrix rows_matrix(const json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty()) throw ParseError(what + " must be a nonempty array of rows");
  const std::size_t width = rows[0].is_array() ? rows[0].size() : 0;
  if (width == 0) throw ParseError(what + " rows must be nonempty arrays");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != width) throw ParseError(what + " rows must have equal length");
    for (std::size_t k = 0; k < width; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          scalar(rows[i][k], what + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

/// {"dim": n, "entries": [[index, re, im], ...], "base": 0|1 (optional),
///  "field": "real"|"complex" (optional)}
inline Vector vector_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw ParseError("vector needs \"dim\" and \"entries\"");
  }
  const std::size_t dim = detail::index(j["dim"], "dim");
  const std::size_t base = j.contains("base") ? detail::index(j["base"], "base") : 0;
  const auto& list = j["entries"];
  if (!list.is_array()) throw ParseError("\"entries\" must be an array");
  Vector::Entries entries;
  for (const auto& e : list) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) throw ParseError("entry must be [index, re] or [index, re, im]");
    const std::size_t at = detail::index(e[0], "entry index");
    const Scalar v{detail::number(e[1], "entry re"), e.size() == 3 ? detail::number(e[2], "entry im") : 0.0};
    if (!entries.emplace(at, v).second) throw ParseError("duplicate entry index " + std::to_string(at));
  }
  try {
    if (j.contains("field")) return Vector(dim, entries, base, detail::field(j["field"]));
    return Vector(dim, entries, base);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline std::string to_json(const Vector& v) {
  std::ostringstream os;
  os << "{\"dim\": " << v.dim();
  if (v.base() != 0) os << ", \"base\": " << v.base();
  os << ", \"field\": \"" << to_string(v.field()) << "\", \"entries\": [";
  bool first = true;
  for (const auto& [index, value] : v.entries()) {
    os << (first ? "" : ", ") << "[" << index << ", " << format_double(value.real());
    if (v.field() == Field::complex) os << ", " << format_double(value.imag());
    os << "]";
    first = false;
  }
  os << "]}";
  return os.str();
}

/// One vector, an array of vectors, or {"vectors": [...]}.
inline std::vector<Vector> vectors_from_json(const json& j) {
  std::vector<Vector> out;
  const json* list = &j;
  if (j.is_object() && j.contains("vectors")) list = &j["vectors"];
  if (list->is_array()) {
    for (const auto& v : *list) out.push_back(vector_from_json(v));
  } else {
    out.push_back(vector_from_json(*list));
  }
  return out;
}

/// {"p": "1"|"inf"|..., "field": "real"|"complex",
///  "measure": {"kind": "finite"|"sequence", "n": N, "weights": [...]},
///  "repr": {"kind": "dense", "analysis": [[...]], "synthesis": [[...]]}
///        | {"kind": "diagonal", "r": "1"}}
/// "synthesis" lists one column per index alpha, i.e. synthesis[alpha] is tau_alpha.
inline FrameSystem system_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("system must be a JSON object");
    for (const char* key : {"p", "measure", "repr"}) {
      if (!j.contains(key)) throw ParseError(std::string("system is missing \"") + key + "\"");
    }
    const Exponent p = detail::exponent(j["p"]);
    const Field field = j.contains("field") ? detail::field(j["field"]) : Field::real;
    const auto& m = j["measure"];
    if (!m.is_object() || !m.contains("kind") || !m.contains("n")) throw ParseError("measure needs \"kind\" and \"n\"");
    const auto kind = m["kind"].get<std::string>();
    const std::size_t n = detail::index(m["n"], "measure.n");
    if (kind != "finite" && kind != "sequence") throw ParseError("measure kind must be finite or sequence");
    MeasureSpace space = kind == "finite" ? MeasureSpace::finite(n) : MeasureSpace::sequence(n);
    if (m.contains("weights")) {
      std::vector<double> w;
      for (const auto& x : m["weights"]) w.push_back(detail::number(x, "weight"));
      space = space.with_weights(std::move(w));
    }
    const auto& r = j["repr"];
    if (!r.is_object() || !r.contains("kind")) throw ParseError("repr needs \"kind\"");
    const auto rkind = r["kind"].get<std::string>();
    if (rkind == "diagonal") {
      if (kind != "sequence") throw ParseError("diagonal systems use a sequence measure");
      if (!space.is_counting()) throw ParseError("diagonal systems use the counting measure");
      const std::string rt = r.contains("r") ? (r["r"].is_string() ? r["r"].get<std::string>() : r["r"].dump()) : "1";
      return FrameSystem::diagonal(n, rt, p);
    }
    if (rkind != "dense") throw ParseError("repr kind must be dense or diagonal");
    if (!r.contains("analysis") || !r.contains("synthesis")) throw ParseError("dense repr needs analysis and synthesis");
    Matrix analysis = detail::rows_matrix(r["analysis"], "analysis");
    Matrix synthesis = detail::rows_matrix(r["synthesis"], "synthesis").transpose();
    return FrameSystem::dense(std::move(space), std::move(analysis), std::move(synthesis), p, field);
  } catch (const ParseError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed system JSON: ") + e.what());
  } catch (const Error& e) {
    throw ParseError(std::string("invalid system: ") + e.what());
  }
}

inline std::string to_json(const FrameSystem& sys) {
  std::ostringstream os;
  const auto& space = sys.space();
  os << "{\"p\": \"" << sys.p().to_string() << "\", \"field\": \"" << to_string(sys.field()) << "\", ";
  os << "\"measure\": {\"kind\": \"" << (space.kind() == MeasureSpace::Kind::finite ? "finite" : "sequence")
     << "\", \"n\": " << space.size();
  if (!space.is_counting()) {
    os << ", \"weights\": [";
    const auto w = space.weights();
    for (std::size_t k = 0; k < w.size(); ++k) os << (k ? ", " : "") << format_double(w[k]);
    os << "]";
  }
  os << "}, \"repr\": ";
  if (sys.is_diagonal()) {
    os << "{\"kind\": \"diagonal\", \"r\": \"" << sys.as_diagonal().r_text << "\"}}";
    return os.str();
  }
  auto rows = [&](const Matrix& m) {
    std::ostringstream rs;
    rs << "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      rs << (i ? ", " : "") << "[";
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const Scalar v = m(i, k);
        rs << (k ? ", " : "");
        if (sys.field() == Field::real) {
          rs << format_double(v.real());
        } else {
          rs << "[" << format_double(v.real()) << ", " << format_double(v.imag()) << "]";
        }
      }
      rs << "]";
    }
    rs << "]";
    return rs.str();
  };
  const auto& dense = sys.as_dense();
  os << "{\"kind\": \"dense\", \"analysis\": " << rows(dense.analysis)
     << ", \"synthesis\": " << rows(dense.synthesis.transpose()) << "}}";
  return os.str();
}

inline FrameSystem system_from_text(const std::string& text) { return system_from_json(detail::parse_text(text)); }
inline std::vector<Vector> vectors_from_text(const std::string& text) {
  return vectors_from_json(detail::parse_text(text));
}

inline std::string to_json(const BoundReport& r) {
  std::ostringstream os;
  os << "{\"id\": \"" << to_string(r.id) << "\", \"lhs\": " << format_double(r.lhs)
     << ", \"rhs\": " << format_double(r.rhs) << ", \"slack\": " << format_double(r.slack)
     << ", \"holds\": " << (r.holds ? "true" : "false") << ", \"equality\": " << (r.equality ? "true" : "false");
  if (r.q) os << ", \"q\": " << format_double(*r.q);
  os << "}";
  return os.str();
}

inline const char* kCsvHeader = "id,lhs,rhs,slack,holds,equality,q";

inline std::string to_csv_row(const BoundReport& r) {
  std::ostringstream os;
  os << to_string(r.id) << ',' << format_cell(r.lhs) << ',' << format_cell(r.rhs) << ',' << format_cell(r.slack)
     << ',' << (r.holds ? "true" : "false") << ',' << (r.equality ? "true" : "false") << ','
     << (r.q ? format_cell(*r.q) : "");
  return os.str();
}

inline std::string to_json(const FeasibilityCertificate& c) {
  std::ostringstream os;
  auto list = [](const IndexSet& s) {
    std::ostringstream ls;
    ls << "[";
    for (std::size_t k = 0; k < s.size(); ++k) ls << (k ? ", " : "") << s[k];
    ls << "]";
    return ls.str();
  };
  const bool has = c.witness.has_value();
  os << "{\"S\": " << list(has ? c.support_s : c.pattern_s) << ", \"T\": " << list(has ? c.support_t : c.pattern_t)
     << ", \"product\": " << format_double(c.product) << ", \"witness\": " << (has ? to_json(*c.witness) : "null")
     << "}";
  return os.str();
}

}  // namespace semiframe::io
