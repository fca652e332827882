#pragma once

// Subcommands of the semiframe tool. Kept in a header so the test suites can
// drive them in-process.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "semiframe/semiframe.hpp"

namespace semiframe::cli {

enum ExitCode : int { kSuccess = 0, kViolation = 1, kInputError = 2, kCapacityError = 3 };

/// Reconstruction tolerance applied to loaded systems before any check runs.
inline constexpr double kReconstructionTolerance = 1e-9;

struct RunSummary {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::size_t equalities = 0;

  void add(const BoundReport& r) {
    ++checked;
    violations += r.holds ? 0 : 1;
    equalities += r.equality ? 1 : 0;
    min_slack = std::min(min_slack, r.slack);
  }
};

struct VectorReports {
  std::size_t vector;
  std::vector<BoundReport> reports;
};

struct RunReport {
  std::string command;
  std::vector<VectorReports> per_vector;
  RunSummary summary;
  int exit_status = kSuccess;
};

inline std::string report_json(const RunReport& run) {
  std::ostringstream os;
  std::string escaped;
  for (char ch : run.command) {
    if (ch == '"' || ch == '\\') escaped += '\\';
    escaped += ch;
  }
  os << "{\"command\": \"" << escaped << "\",\n \"vectors\": [";
  for (std::size_t i = 0; i < run.per_vector.size(); ++i) {
    const auto& v = run.per_vector[i];
    os << (i ? ",\n  " : "\n  ") << "{\"vector\": " << v.vector << ", \"reports\": [";
    for (std::size_t k = 0; k < v.reports.size(); ++k) os << (k ? ", " : "") << io::to_json(v.reports[k]);
    os << "]}";
  }
  os << "],\n \"summary\": {\"checked\": " << run.summary.checked << ", \"violations\": " << run.summary.violations
     << ", \"min_slack\": " << io::format_double(run.summary.min_slack)
     << ", \"equalities\": " << run.summary.equalities << "},\n \"exit_status\": " << run.exit_status << "}\n";
  return os.str();
}

inline std::string report_csv(const RunReport& run) {
  std::ostringstream os;
  os << io::kCsvHeader << '\n';
  for (const auto& v : run.per_vector) {
    for (const auto& r : v.reports) os << io::to_csv_row(r) << '\n';
  }
  return os.str();
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

inline double default_tolerance() {
  if (const char* env = std::getenv("FRAME_TOL")) {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used == std::string(env).size() && v >= 0.0) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(std::string("FRAME_TOL is not a nonnegative number: ") + env);
  }
  return kDefaultSupportTolerance;
}

/// Flags selecting a pair of systems: explicit files or a demo family.
struct PairFlags {
  std::string system;
  std::string cosystem;
  std::string demo;
  std::size_t n = 4;
  std::size_t m = 0;
  std::string r = "1";
  std::uint64_t seed = 0;

  void attach(CLI::App& app) {
    app.add_option("--system", system, "JSON file of the first system");
    app.add_option("--cosystem", cosystem, "JSON file of the second system");
    app.add_option("--demo", demo, "demo family (see demo-list)");
    app.add_option("--n", n, "dimension or truncation for demo families");
    app.add_option("--m", m, "frame vector count for the parseval demo (default n + 2)");
    app.add_option("--r", r, "exponent r of the unbounded diagonal demo");
    app.add_option("--seed", seed, "seed for random families and vectors");
  }
};

inline const std::vector<std::pair<std::string, std::string>>& demo_families() {
  static const std::vector<std::pair<std::string, std::string>> families = {
      {"identity", "identity system paired with itself"},
      {"dft-pair", "identity paired with the unitary DFT (complex)"},
      {"random", "two random reconstructing systems (seeds s and s+1)"},
      {"parseval", "two random Parseval frames with m vectors (seeds s and s+1)"},
      {"unbounded-diagonal", "diagonal system w_n = n^r over 1..N paired with itself"},
      {"reweighted-dft-pair", "dft-pair with weights drawn from [0.1, 10] (seed s)"},
  };
  return families;
}

inline FramePair load_pair(const PairFlags& flags, const Exponent& p) {
  if (!flags.demo.empty()) {
    if (!flags.system.empty() || !flags.cosystem.empty()) throw ParseError("use either --demo or --system/--cosystem");
    const std::string& d = flags.demo;
    if (d == "identity") return FramePair::make(identity_system(flags.n, Field::real, p), identity_system(flags.n, Field::real, p));
    if (d == "dft-pair") {
      auto pair = dft_pair(flags.n, p);
      return FramePair::make(pair.first, pair.second);
    }
    if (d == "random") {
      return FramePair::make(random_reconstructing(flags.n, flags.seed, Field::real, p),
                             random_reconstructing(flags.n, flags.seed + 1, Field::real, p));
    }
    if (d == "parseval") {
      const std::size_t m = flags.m == 0 ? flags.n + 2 : flags.m;
      return FramePair::make(random_parseval(flags.n, m, flags.seed, Field::complex, p),
                             random_parseval(flags.n, m, flags.seed + 1, Field::complex, p));
    }
    if (d == "unbounded-diagonal") {
      return FramePair::make(unbounded_diagonal(flags.r, flags.n, p), unbounded_diagonal(flags.r, flags.n, p));
    }
    if (d == "reweighted-dft-pair") {
      std::mt19937_64 rng(flags.seed);
      std::uniform_real_distribution<double> dist(0.1, 10.0);
      std::vector<double> wf(flags.n), wg(flags.n);
      for (auto& w : wf) w = dist(rng);
      for (auto& w : wg) w = dist(rng);
      auto pair = dft_pair(flags.n, p);
      return FramePair::make(reweighted(pair.first, wf), reweighted(pair.second, wg));
    }
    throw ParseError("unknown demo family '" + d + "' (see demo-list)");
  }
  if (flags.system.empty() || flags.cosystem.empty()) throw ParseError("need --system and --cosystem, or --demo");
  return FramePair::make(io::system_from_text(read_file(flags.system)),
                         io::system_from_text(read_file(flags.cosystem)));
}

inline std::vector<Vector> random_vectors(const FramePair& pair, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool complex = pair.f.field() == Field::complex || pair.g.field() == Field::complex;
  const std::size_t dim = pair.f.ambient_dim();
  const std::size_t base = pair.f.ambient_base();
  constexpr std::size_t kDenseLimit = 64;
  constexpr std::size_t kMaxSparse = 8;
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vector::Entries entries;
    auto draw = [&] { return Scalar(normal(rng), complex ? normal(rng) : 0.0); };
    if (dim <= kDenseLimit) {
      for (std::size_t k = 0; k < dim; ++k) entries.emplace(base + k, draw());
    } else {
      std::uniform_int_distribution<std::size_t> pick(base, base + dim - 1);
      const std::size_t nnz = 1 + rng() % kMaxSparse;
      while (entries.size() < nnz) entries.emplace(pick(rng), draw());
    }
    out.emplace_back(dim, entries, base, complex ? Field::complex : Field::real);
  }
  return out;
}

inline std::string joined(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) out += (out.empty() ? "" : " ") + a;
  return out;
}

}  // namespace detail

struct VerifyFlags {
  detail::PairFlags pair;
  std::string p_text;
  std::string vectors;
  std::size_t random = 0;
  bool comb = false;
  std::optional<double> tol;
  std::string out;
  bool parseval = false;
  bool transfers = false;
};

/// Runs the checks selected by the flags and returns the full report.
inline RunReport cmd_verify(const VerifyFlags& flags, const std::string& echo, std::ostream& out) {
  RunReport run;
  run.command = echo;
  const Exponent p = Exponent::parse(flags.p_text);
  const double tol = flags.tol.value_or(detail::default_tolerance());
  const FramePair pair = detail::load_pair(flags.pair, p);

  if (flags.parseval) {
    if (p.is_infinite() || p.value() != 2.0) throw PreconditionError("--parseval runs in the Hilbert setting, p = 2");
  } else {
    for (const FrameSystem* sys : {&pair.f, &pair.g}) {
      const auto rc = is_reconstructing(*sys, kReconstructionTolerance);
      if (!rc.reconstructing) {
        throw PreconditionError("system is not reconstructing (deviation=" + io::format_cell(rc.deviation) + ")");
      }
    }
    if (pair.c_f_omega == 0.0 || pair.c_g_tau == 0.0) {
      throw PreconditionError("coherence is zero, the bound is infinite");
    }
  }

  const int sources = (flags.vectors.empty() ? 0 : 1) + (flags.random > 0 ? 1 : 0) + (flags.comb ? 1 : 0);
  if (sources != 1) throw ParseError("choose exactly one of --vectors, --random K, --comb");
  std::vector<Vector> xs;
  if (!flags.vectors.empty()) xs = io::vectors_from_text(detail::read_file(flags.vectors));
  if (flags.random > 0) xs = detail::random_vectors(pair, flags.random, flags.pair.seed);
  if (flags.comb) xs.push_back(dirac_comb(pair.f.ambient_dim()));

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vector& x = xs[i];
    if (x.is_zero()) throw PreconditionError("input vector " + std::to_string(i) + " is zero; bounds need x != 0");
    VectorReports vr{i, {}};
    if (flags.parseval) {
      const auto chain = check_hilbert_chain(pair.f, pair.g, x, tol);
      auto link = make_report(BoundId::hilbert_chain, chain.am_gm, chain.bound.lhs);
      vr.reports.push_back(link);
      vr.reports.push_back(chain.bound);
    } else {
      const auto a = evaluate(pair, x, tol);
      if (p.is_one() || p.is_infinite()) {
        vr.reports.push_back(check_product_bound(pair, a, p));
        const auto [o1, o2] = check_one_sided_bounds(pair, a, p);
        vr.reports.push_back(o1);
        vr.reports.push_back(o2);
      } else {
        const auto [m1, m2] = check_mixed_norm_bound(pair, a, p);
        vr.reports.push_back(m1);
        vr.reports.push_back(m2);
      }
      if (flags.transfers) {
        if (!p.is_one() && !p.is_infinite()) throw PreconditionError("--transfers needs p = 1 or p = inf");
        const auto [t1, t2] = check_transfer_inequalities(pair, a, p);
        vr.reports.push_back(t1);
        vr.reports.push_back(t2);
      }
    }
    for (const auto& r : vr.reports) run.summary.add(r);
    run.per_vector.push_back(std::move(vr));
  }
  run.exit_status = run.summary.violations == 0 ? kSuccess : kViolation;

  if (!flags.out.empty()) {
    const bool csv = flags.out.size() >= 4 && flags.out.compare(flags.out.size() - 4, 4, ".csv") == 0;
    detail::write_file(flags.out, csv ? report_csv(run) : report_json(run));
  }
  out << "checked=" << run.summary.checked << " violations=" << run.summary.violations
      << " min_slack=" << io::format_cell(run.summary.min_slack) << " equalities=" << run.summary.equalities << '\n';
  if (run.summary.violations > 0) out << "VIOLATION: at least one inequality failed\n";
  return run;
}

inline int cmd_coherence(const detail::PairFlags& flags, const std::string& gram_path, std::ostream& out) {
  const FramePair pair = detail::load_pair(flags, Exponent::finite(1.0));
  out << "coherence f_of_omega=" << io::format_cell(pair.c_f_omega) << '\n';
  out << "coherence g_of_tau=" << io::format_cell(pair.c_g_tau) << '\n';
  if (!gram_path.empty()) {
    const auto gram = cross_gram(pair.f, pair.g, GramDirection::f_of_omega);
    std::ostringstream csv;
    if (const auto* m = std::get_if<Matrix>(&gram.entries)) {
      for (Eigen::Index i = 0; i < m->rows(); ++i) {
        for (Eigen::Index k = 0; k < m->cols(); ++k) csv << (k ? "," : "") << io::format_cell(std::abs((*m)(i, k)));
        csv << '\n';
      }
    } else {
      const auto& diag = std::get<std::vector<Scalar>>(gram.entries);
      for (std::size_t i = 0; i < diag.size(); ++i) {
        for (std::size_t k = 0; k < diag.size(); ++k) csv << (k ? "," : "") << io::format_cell(i == k ? std::abs(diag[i]) : 0.0);
        csv << '\n';
      }
    }
    detail::write_file(gram_path, csv.str());
  }
  return kSuccess;
}

inline int cmd_extremal(const detail::PairFlags& flags, std::size_t max_dim, std::ostream& out) {
  if (max_dim > kEnumerationCap) {
    throw CapacityError("--max-dim " + std::to_string(max_dim) + " exceeds the enumeration cap of " +
                        std::to_string(kEnumerationCap));
  }
  const FramePair pair = detail::load_pair(flags, Exponent::finite(1.0));
  if (pair.f.ambient_dim() > max_dim) {
    throw CapacityError("dimension " + std::to_string(pair.f.ambient_dim()) + " exceeds --max-dim " +
                        std::to_string(max_dim));
  }
  const auto result = min_support_product(pair.f, pair.g);
  out << "min_product=" << io::format_cell(result.min_product) << '\n';
  out << "bound=" << io::format_cell(result.bound) << '\n';
  out << "ratio=" << io::format_cell(result.ratio) << '\n';
  out << "certificate=" << io::to_json(result.certificate) << '\n';
  if (!result.dominates) {
    out << "VIOLATION: minimum support product is below the bound\n";
    return kViolation;
  }
  return kSuccess;
}

inline int cmd_domain(const std::string& r, const std::string& p_text, const std::string& tail_text,
                      std::size_t truncation, std::ostream& out) {
  const auto sys = unbounded_diagonal(r, truncation, Exponent::parse(p_text));
  const bool inside = in_domain(sys, TailDescriptor::parse(tail_text));
  out << (inside ? "in-domain" : "not-in-domain") << '\n';
  return kSuccess;
}

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Support uncertainty checks for Schauder-type frame pairs", "semiframe"};
  app.require_subcommand(1);

  VerifyFlags verify;
  auto* verify_cmd = app.add_subcommand("verify", "check the uncertainty inequalities on a set of vectors");
  verify.pair.attach(*verify_cmd);
  verify_cmd->add_option("--p", verify.p_text, "exponent: 1, 2, ..., or inf")->required();
  verify_cmd->add_option("--vectors", verify.vectors, "JSON file of input vectors");
  verify_cmd->add_option("--random", verify.random, "number of random vectors");
  verify_cmd->add_flag("--comb", verify.comb, "use the Dirac comb of spacing sqrt(n)");
  verify_cmd->add_option("--tol", verify.tol, "relative support tolerance (default FRAME_TOL or 1e-10)");
  verify_cmd->add_option("--out", verify.out, "report file (.json or .csv)");
  verify_cmd->add_flag("--parseval", verify.parseval, "run the Hilbert-space ell_0 chain");
  verify_cmd->add_flag("--transfers", verify.transfers, "also check the transfer inequalities");

  detail::PairFlags coh;
  std::string gram_path;
  auto* coh_cmd = app.add_subcommand("coherence", "print both coherences");
  coh.attach(*coh_cmd);
  coh_cmd->add_option("--gram", gram_path, "write |f_alpha(omega_beta)| as CSV");

  detail::PairFlags ext;
  std::size_t max_dim = kEnumerationCap;
  auto* ext_cmd = app.add_subcommand("extremal", "exact minimum support product by enumeration");
  ext.attach(*ext_cmd);
  ext_cmd->add_option("--max-dim", max_dim, "largest dimension to enumerate (<= 8)");

  std::string dom_r = "1", dom_p = "1", dom_tail = "finite";
  std::size_t dom_n = 1000;
  auto* dom_cmd = app.add_subcommand("domain", "domain membership for the diagonal system w_n = n^r");
  dom_cmd->add_option("--r", dom_r, "exponent r");
  dom_cmd->add_option("--p", dom_p, "exponent p");
  dom_cmd->add_option("--tail", dom_tail, "finite | power:C:s[:onset]")->required();
  dom_cmd->add_option("--n", dom_n, "truncation N");

  auto* list_cmd = app.add_subcommand("demo-list", "list demo families");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (verify_cmd->parsed()) return cmd_verify(verify, detail::joined(args), out).exit_status;
    if (coh_cmd->parsed()) return cmd_coherence(coh, gram_path, out);
    if (ext_cmd->parsed()) return cmd_extremal(ext, max_dim, out);
    if (dom_cmd->parsed()) return cmd_domain(dom_r, dom_p, dom_tail, dom_n, out);
    if (list_cmd->parsed()) {
      for (const auto& [name, what] : detail::demo_families()) out << name << "  " << what << '\n';
      return kSuccess;
    }
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kCapacityError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace semiframe::cli
