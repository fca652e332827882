// Acceptance sweep: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "semiframe/semiframe.hpp"

using namespace semiframe;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> lines;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Vector gaussian_vector(std::size_t n, Field field, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    Vector::Entries e;
    for (std::size_t k = 0; k < n; ++k) {
      e.emplace(k, Scalar(normal(rng), field == Field::complex ? normal(rng) : 0.0));
    }
    Vector v(n, e, 0, field);
    if (!v.is_zero()) return v;
  }
}

// 1. comb equality for identity / unitary DFT
Outcome comb_equality() {
  Outcome o;
  const auto t0 = Clock::now();
  for (std::size_t n : {4u, 9u, 16u}) {
    const auto pair = dft_pair(n);
    const auto comb = dirac_comb(n);
    const auto r = check_product_bound(pair.first, pair.second, comb, Exponent::finite(1.0));
    const bool product_ok = std::abs(r.lhs - double(n)) <= 1e-9 && std::abs(r.rhs - double(n)) <= 1e-9 &&
                            std::abs(r.slack) <= 1e-9 && r.equality;
    const auto hilbert = dft_pair(n, Exponent::finite(2.0));
    const auto chain = check_hilbert_chain(hilbert.first, hilbert.second, comb);
    const bool chain_ok = chain.all_hold() && chain.all_equal() && chain.am_gm == double(n);
    o.pass = o.pass && product_ok && chain_ok;
    o.lines.push_back("n=" + std::to_string(n) + " lhs=" + fmt("%.17g", r.lhs) + " rhs=" + fmt("%.17g", r.rhs) +
                      " slack=" + fmt("%.3g", r.slack) + " chain=" + std::to_string(chain.support_tau) + "*" +
                      std::to_string(chain.support_omega) + (chain_ok ? " equal" : " NOT-EQUAL"));
  }
  const double t = seconds_since(t0);
  o.pass = o.pass && t < 1.0;
  o.detail = fmt("%.3fs", t);
  return o;
}

// 2. no violations over random reconstructing pairs
Outcome validity_sweep() {
  Outcome o;
  const auto t0 = Clock::now();
  constexpr int kPairs = 500;
  constexpr int kVectors = 500;
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // family -> (violations, checked)
  std::map<std::string, double> worst;
  const std::vector<std::string> order = {"product_1", "product_inf", "one_sided_1",  "one_sided_inf",
                                          "mixed_1.5", "mixed_2",     "mixed_3",      "transfer_FI",
                                          "transfer_SI", "transfer_I1", "transfer_I2"};
  std::size_t pairs_violating = 0;
  auto count = [&](const std::string& family, const BoundReport& r, bool& any) {
    auto& t = tally[family];
    ++t.second;
    if (!r.holds) {
      ++t.first;
      any = true;
      worst[family] = std::min(worst[family], r.slack);
    }
  };
  const Exponent one = Exponent::finite(1.0), inf = Exponent::infinity();
  const std::vector<std::pair<std::string, Exponent>> mixed = {
      {"mixed_1.5", Exponent::finite(1.5)}, {"mixed_2", Exponent::finite(2.0)}, {"mixed_3", Exponent::finite(3.0)}};
  for (int k = 0; k < kPairs; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k) % 7;
    const Field field = k % 2 ? Field::complex : Field::real;
    const auto seed = static_cast<std::uint64_t>(k);
    const auto pair =
        FramePair::make(random_reconstructing(n, 2 * seed, field), random_reconstructing(n, 2 * seed + 1, field));
    std::mt19937_64 rng(1000003 * seed + 17);
    bool any = false;
    for (int v = 0; v < kVectors; ++v) {
      const auto a = evaluate(pair, gaussian_vector(n, field, rng));
      count("product_1", check_product_bound(pair, a, one), any);
      count("product_inf", check_product_bound(pair, a, inf), any);
      for (const auto& [p, name] : {std::pair{one, "one_sided_1"}, std::pair{inf, "one_sided_inf"}}) {
        const auto [r1, r2] = check_one_sided_bounds(pair, a, p);
        count(name, r1, any);
        count(name, r2, any);
      }
      for (const auto& [name, p] : mixed) {
        const auto [r1, r2] = check_mixed_norm_bound(pair, a, p);
        count(name, r1, any);
        count(name, r2, any);
      }
      const auto [fi, si] = check_transfer_inequalities(pair, a, one);
      count("transfer_FI", fi, any);
      count("transfer_SI", si, any);
      const auto [i1, i2] = check_transfer_inequalities(pair, a, inf);
      count("transfer_I1", i1, any);
      count("transfer_I2", i2, any);
    }
    pairs_violating += any ? 1 : 0;
  }
  for (const auto& family : order) {
    const auto [bad, total] = tally[family];
    o.pass = o.pass && bad == 0;
    std::string line = (bad == 0 ? "ok   " : "FAIL ") + family + " violations=" + std::to_string(bad) + "/" +
                       std::to_string(total);
    if (bad) line += " worst_slack=" + fmt("%.6g", worst[family]);
    o.lines.push_back(line);
  }
  const double t = seconds_since(t0);
  o.pass = o.pass && t < 120.0;
  o.detail = std::to_string(kPairs) + " pairs x " + std::to_string(kVectors) + " vectors, " +
             std::to_string(pairs_violating) + " pairs with a violation, " + fmt("%.1fs", t);
  return o;
}

// 3. the coherence bound is below the exact minimum support product
Outcome oracle_dominance() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst_gap = std::numeric_limits<double>::infinity();
  std::size_t failures = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(k) % 4;
    const Field field = k % 2 ? Field::complex : Field::real;
    const auto seed = 5000 + static_cast<std::uint64_t>(k);
    const auto f = random_reconstructing(n, 2 * seed, field);
    const auto g = random_reconstructing(n, 2 * seed + 1, field);
    const auto r = min_support_product(f, g);
    const double gap = r.min_product - r.bound;
    worst_gap = std::min(worst_gap, gap);
    if (gap < -1e-12) ++failures;
  }
  const auto p4 = dft_pair(4);
  const auto dft = min_support_product(p4.first, p4.second);
  const bool exact = dft.ratio == 1.0;
  o.lines.push_back("random pairs below bound=" + std::to_string(failures) + "/200 min(min_product-bound)=" +
                    fmt("%.6g", worst_gap));
  o.lines.push_back("dft n=4 min_product=" + fmt("%.17g", dft.min_product) + " bound=" + fmt("%.17g", dft.bound) +
                    " ratio=" + fmt("%.17g", dft.ratio));
  const double t = seconds_since(t0);
  o.pass = failures == 0 && exact && t < 300.0;
  o.detail = fmt("%.2fs", t);
  return o;
}

// 4. diagonal system w_n = n on 1..1000
Outcome unbounded_example() {
  Outcome o;
  const auto t0 = Clock::now();
  constexpr std::size_t N = 1000;
  const auto sys = unbounded_diagonal("1", N);
  std::mt19937_64 rng(44);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::size_t> pick(1, N);
  long long worst_ulps = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Vector::Entries e;
    const std::size_t nnz = 1 + rng() % 50;
    while (e.size() < nnz) e.emplace(pick(rng), Scalar(normal(rng), 0.0));
    const Vector x(N, e, 1, Field::real);
    const Vector back = synthesize(sys, analyze(sys, x));
    for (std::size_t i = 1; i <= N; ++i) {
      const double a = x.at(i).real(), b = back.at(i).real();
      long long ulps = 0;
      if (a != b) {
        long long ia, ib;
        std::memcpy(&ia, &a, sizeof a);
        std::memcpy(&ib, &b, sizeof b);
        ulps = (std::signbit(a) != std::signbit(b)) ? std::numeric_limits<long long>::max() : std::llabs(ia - ib);
      }
      if (back.at(i).imag() != 0.0) ulps = std::numeric_limits<long long>::max();
      worst_ulps = std::max(worst_ulps, ulps);
    }
  }
  const bool s3 = in_domain(sys, TailDescriptor::power_law(1.0, 3.0));
  const bool s15 = in_domain(sys, TailDescriptor::power_law(1.0, 1.5));
  bool finite = true;
  for (const Exponent& p : {Exponent::finite(1.0), Exponent::finite(2.0), Exponent::infinity()}) {
    for (const char* r : {"1", "1/2", "3"}) {
      finite = finite && in_domain(unbounded_diagonal(r, N, p), TailDescriptor::finite_support());
    }
  }
  o.lines.push_back("round trips=1000 worst_ulps=" + std::to_string(worst_ulps));
  o.lines.push_back(std::string("power s=3: ") + (s3 ? "in" : "out") + ", power s=1.5: " + (s15 ? "in" : "out") +
                    ", finite: " + (finite ? "in" : "out"));
  o.pass = worst_ulps <= 2 && s3 && !s15 && finite;
  o.detail = fmt("%.2fs", seconds_since(t0));
  return o;
}

// 5. weighted measures
Outcome measure_generality() {
  Outcome o;
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> weight(0.1, 10.0);
  double worst_dev = 0.0;
  std::size_t violations = 0, checked = 0;
  const std::vector<std::size_t> sizes = {2, 3, 4, 5, 8, 9, 12, 16};
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const std::size_t n = sizes[s];
    std::vector<double> wf(n), wg(n);
    for (auto& w : wf) w = weight(rng);
    for (auto& w : wg) w = weight(rng);
    const auto base = dft_pair(n);
    const auto pair = FramePair::make(reweighted(base.first, wf), reweighted(base.second, wg));
    worst_dev = std::max({worst_dev, is_reconstructing(pair.f, 1e-9).deviation,
                          is_reconstructing(pair.g, 1e-9).deviation});
    for (int v = 0; v < 1250; ++v) {
      ++checked;
      const auto r = check_product_bound(pair, evaluate(pair, gaussian_vector(n, Field::complex, rng)),
                                         Exponent::finite(1.0));
      violations += r.holds ? 0 : 1;
    }
    // sparse inputs reach small supports too
    if (n == 4 || n == 9 || n == 16) {
      ++checked;
      violations += check_product_bound(pair, evaluate(pair, dirac_comb(n)), Exponent::finite(1.0)).holds ? 0 : 1;
    }
  }
  o.lines.push_back("max reconstruction deviation=" + fmt("%.3g", worst_dev));
  o.lines.push_back("product_1 violations=" + std::to_string(violations) + "/" + std::to_string(checked));
  o.pass = worst_dev <= 1e-9 && violations == 0 && checked >= 10000;
  return o;
}

// 6. reports are invariant under x -> c x
Outcome scaling_invariance() {
  Outcome o;
  const std::vector<Scalar> scales = {1e-6, 1.0, 1e6, Scalar(0.0, 1.0)};
  std::size_t mismatches = 0, compared = 0;
  auto same = [&](const BoundReport& a, const BoundReport& b) {
    ++compared;
    if (a.lhs != b.lhs || a.rhs != b.rhs || a.holds != b.holds || a.equality != b.equality) ++mismatches;
  };
  auto same_scaled = [&](const BoundReport& a, const BoundReport& b, double c) {
    ++compared;
    auto close = [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(std::abs(u), std::abs(v)); };
    if (!close(a.lhs, b.lhs / c) || !close(a.rhs, b.rhs / c) || a.holds != b.holds || a.equality != b.equality) {
      ++mismatches;
    }
  };
  std::mt19937_64 rng(66);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k) % 7;
    const auto seed = 9000 + static_cast<std::uint64_t>(k / 4);
    const auto pair = k % 8 == 0 ? [&] {
      const auto d = dft_pair(n);
      return FramePair::make(d.first, d.second);
    }()
                                 : FramePair::make(random_reconstructing(n, 2 * seed, Field::complex),
                                                   random_reconstructing(n, 2 * seed + 1, Field::complex));
    const Scalar c = scales[static_cast<std::size_t>(k) % scales.size()];
    Vector x = gaussian_vector(n, Field::complex, rng);
    if (k % 3 == 0 && n == 4) x = Vector(4, Vector::Entries{{0, 1.0}, {2, 1.0}}, 0, Field::complex);
    const auto a = evaluate(pair, x);
    const auto b = evaluate(pair, x.scaled(c));
    for (const Exponent& p : {Exponent::finite(1.0), Exponent::infinity()}) {
      same(check_product_bound(pair, a, p), check_product_bound(pair, b, p));
      const auto [a1, a2] = check_one_sided_bounds(pair, a, p);
      const auto [b1, b2] = check_one_sided_bounds(pair, b, p);
      same(a1, b1);
      same(a2, b2);
      const auto [t1, t2] = check_transfer_inequalities(pair, a, p);
      const auto [u1, u2] = check_transfer_inequalities(pair, b, p);
      same_scaled(t1, u1, std::abs(c));
      same_scaled(t2, u2, std::abs(c));
    }
    for (double p : {1.5, 2.0, 3.0}) {
      const auto [a1, a2] = check_mixed_norm_bound(pair, a, Exponent::finite(p));
      const auto [b1, b2] = check_mixed_norm_bound(pair, b, Exponent::finite(p));
      same(a1, b1);
      same(a2, b2);
    }
  }
  o.lines.push_back("triples=1000 reports compared=" + std::to_string(compared) +
                    " mismatches=" + std::to_string(mismatches));
  o.pass = mismatches == 0;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 comb equality", comb_equality},           {"2 validity sweep", validity_sweep},
      {"3 oracle dominance", oracle_dominance},     {"4 unbounded example", unbounded_example},
      {"5 measure generality", measure_generality}, {"6 scaling invariance", scaling_invariance},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %s%s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.empty() ? "" : " : ",
                o.detail.c_str());
    for (const auto& line : o.lines) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
