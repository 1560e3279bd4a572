#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chromatch/graph.hpp"
#include "chromatch/instances.hpp"
#include "chromatch/matching.hpp"
#include "chromatch/oracle.hpp"
#include "chromatch/parallel.hpp"
#include "chromatch/rounding.hpp"
#include "chromatch/rpm.hpp"
#include "chromatch/swap_search.hpp"

namespace chromatch {

// Shortest round-trip decimal form, independent of locale.
inline std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

// Upper critical values of the chi-square distribution at alpha = 0.001.
// The degrees of freedom used by the acceptance gates are pinned; other df
// fall back to the Wilson-Hilferty approximation.
inline double chi_square_critical_001(int df) {
  if (df == 2) return 13.8155;
  if (df == 14) return 36.12;
  const double z = 3.0902;  // 0.999 normal quantile
  const double c = 2.0 / (9.0 * df);
  const double t = 1.0 - c + z * std::sqrt(c);
  return df * t * t * t;
}

struct CsvRow {
  std::string suite;
  int k = 0;
  int n = 0;
  std::uint64_t seed = 0;
  long long trial = 0;
  std::string method;
  double f = 0.0;
  double bound = 0.0;
  long long attempts = 0;
  bool pass = false;
};

inline std::string csv_header() { return "suite,k,n,seed,trial,method,f,bound,attempts,pass"; }

inline std::string to_csv(const CsvRow& r) {
  std::string out;
  out += r.suite;
  out += ',';
  out += std::to_string(r.k);
  out += ',';
  out += std::to_string(r.n);
  out += ',';
  out += std::to_string(r.seed);
  out += ',';
  out += std::to_string(r.trial);
  out += ',';
  out += r.method;
  out += ',';
  out += format_double(r.f);
  out += ',';
  out += format_double(r.bound);
  out += ',';
  out += std::to_string(r.attempts);
  out += ',';
  out += r.pass ? '1' : '0';
  return out;
}

struct SuiteReport {
  std::string suite;
  std::vector<CsvRow> rows;
  std::vector<std::string> summary;
  bool pass = true;
};

// command, when nonempty, is embedded as a comment so the file names the
// exact invocation that reproduces it.
inline void write_csv(std::ostream& out, const SuiteReport& report, const std::string& command) {
  if (!command.empty()) out << "# " << command << '\n';
  out << csv_header() << '\n';
  for (const CsvRow& r : report.rows) out << to_csv(r) << '\n';
}

// ---------------------------------------------------------------------------
// uniformity: frequencies of the sampler over all matchings of K_order.

struct UniformityParams {
  int order = 6;
  long long samples = 150000;
  std::uint64_t seed = 0;
};

inline SuiteReport run_uniformity(const UniformityParams& params) {
  SuiteReport report;
  report.suite = "uniformity";
  const std::vector<PerfectMatching> all = all_perfect_matchings(params.order);
  std::map<std::vector<Vertex>, int> category;
  for (std::size_t i = 0; i < all.size(); ++i) category[all[i].partners()] = static_cast<int>(i);

  std::vector<long long> counts(all.size(), 0);
  Rng rng(params.seed);
  for (long long s = 0; s < params.samples; ++s)
    ++counts[category.at(rpm_sample(params.order, rng).partners())];

  const double expected = static_cast<double>(params.samples) / all.size();
  double chi = 0.0;
  for (long long c : counts) {
    const double d = c - expected;
    chi += d * d / expected;
  }
  const int df = static_cast<int>(all.size()) - 1;
  const double critical = chi_square_critical_001(df);

  // Per-category window of +-5% around the expectation; on K4 with 30000
  // samples this is the pinned [9500, 10500] gate.
  const double lo = 0.95 * expected;
  const double hi = 1.05 * expected;
  bool windows_ok = true;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const bool in_window = counts[i] >= lo && counts[i] <= hi;
    windows_ok = windows_ok && in_window;
    CsvRow row;
    row.suite = report.suite;
    row.k = 0;
    row.n = params.order;
    row.seed = params.seed;
    row.trial = static_cast<long long>(i);
    row.method = "rpm";
    row.f = static_cast<double>(counts[i]);
    row.bound = expected;
    row.attempts = params.samples;
    row.pass = in_window;
    report.rows.push_back(row);
  }
  const bool chi_ok = chi < critical;
  report.pass = params.order == 4 ? windows_ok : chi_ok;

  std::ostringstream line;
  line << "uniformity: order " << params.order << ", " << params.samples << " samples, "
       << all.size() << " matchings, chi-square " << format_double(chi) << " (critical "
       << format_double(critical) << " at df " << df << "), windows "
       << (windows_ok ? "ok" : "violated");
  report.summary.push_back(line.str());
  report.summary.push_back(std::string("uniformity: ") + (report.pass ? "PASS" : "FAIL"));
  return report;
}

// ---------------------------------------------------------------------------
// lemma1: the deviation vectors of all matchings sum to zero exactly.

struct Lemma1Params {
  std::vector<std::pair<int, int>> configs = {{3, 1}, {2, 2}, {5, 1}};
  int instances_per = 10;
  bool include_figure1 = true;
  std::uint64_t seed = 0;
};

inline SuiteReport run_lemma1(const Lemma1Params& params) {
  SuiteReport report;
  report.suite = "lemma1";
  struct Task {
    int k;
    int n;
    std::uint64_t seed;
    bool figure1;
  };
  std::vector<Task> tasks;
  for (const auto& [k, n] : params.configs)
    for (int i = 0; i < params.instances_per; ++i)
      tasks.push_back(Task{k, n, derive_seed(params.seed, tasks.size()), false});
  if (params.include_figure1) tasks.push_back(Task{3, 1, 0, true});

  report.rows.resize(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const ColoredCompleteGraph g =
        task.figure1 ? figure1_instance() : random_balanced(task.k, task.n, task.seed);
    const std::vector<long long> sum = total_deviation_sum(g, task.n);
    long long norm = 0;
    for (long long s : sum) norm += std::llabs(s);
    CsvRow row;
    row.suite = "lemma1";
    row.k = task.k;
    row.n = task.n;
    row.seed = task.seed;
    row.trial = static_cast<long long>(t);
    row.method = task.figure1 ? "oracle-figure1" : "oracle";
    row.f = static_cast<double>(norm);
    row.bound = 0.0;
    row.attempts = count_perfect_matchings(g.order());
    row.pass = norm == 0;
    report.rows[t] = row;
  });
  for (const CsvRow& r : report.rows) report.pass = report.pass && r.pass;
  std::ostringstream line;
  line << "lemma1: " << tasks.size() << " instances, all deviation sums "
       << (report.pass ? "exactly zero" : "NOT all zero");
  report.summary.push_back(line.str());
  report.summary.push_back(std::string("lemma1: ") + (report.pass ? "PASS" : "FAIL"));
  return report;
}

// ---------------------------------------------------------------------------
// theorem1: for k = 3 the oracle minimum and the swap search both reach
// imbalance at most 2.

struct Theorem1Params {
  int n1_instances = 100;
  int n2_instances = 20;
  int restarts = 5;
  int plateau = kDefaultPlateauBudget;
  std::uint64_t seed = 0;
};

inline SuiteReport run_theorem1(const Theorem1Params& params) {
  SuiteReport report;
  report.suite = "theorem1";
  const int total = params.n1_instances + params.n2_instances;
  report.rows.resize(2 * total);
  parallel_for(static_cast<std::size_t>(total), [&](std::size_t t) {
    const int n = t < static_cast<std::size_t>(params.n1_instances) ? 1 : 2;
    const std::uint64_t instance_seed = derive_seed(params.seed, 2 * t);
    const std::uint64_t search_seed = derive_seed(params.seed, 2 * t + 1);
    const ColoredCompleteGraph g = random_balanced(3, n, instance_seed);

    const MinImbalanceResult oracle = exhaustive_min_f(g, n);
    CsvRow orow;
    orow.suite = "theorem1";
    orow.k = 3;
    orow.n = n;
    orow.seed = instance_seed;
    orow.trial = static_cast<long long>(t);
    orow.method = "oracle";
    orow.f = oracle.min_f;
    orow.bound = 2.0;
    orow.attempts = oracle.total;
    orow.pass = oracle.min_f <= 2;
    report.rows[2 * t] = orow;

    const MultiStartResult search =
        search_from_rpm(g, n, params.restarts, params.plateau, search_seed);
    CsvRow srow;
    srow.suite = "theorem1";
    srow.k = 3;
    srow.n = n;
    srow.seed = search_seed;
    srow.trial = static_cast<long long>(t);
    srow.method = "swap";
    srow.f = search.best_f;
    srow.bound = 2.0;
    srow.attempts = params.restarts;
    srow.pass = search.best_f <= 2;
    report.rows[2 * t + 1] = srow;
  });
  int worst_oracle = 0, worst_swap = 0;
  for (const CsvRow& r : report.rows) {
    report.pass = report.pass && r.pass;
    if (r.method == "oracle") worst_oracle = std::max(worst_oracle, static_cast<int>(r.f));
    if (r.method == "swap") worst_swap = std::max(worst_swap, static_cast<int>(r.f));
  }
  std::ostringstream line;
  line << "theorem1: " << total << " instances, worst oracle f " << worst_oracle
       << ", worst swap-search f " << worst_swap << " (gate: both <= 2)";
  report.summary.push_back(line.str());
  report.summary.push_back(std::string("theorem1: ") + (report.pass ? "PASS" : "FAIL"));
  return report;
}

// ---------------------------------------------------------------------------
// theorem2-bound: uniform samples respect the imbalance bound.

struct Theorem2Params {
  std::vector<std::pair<int, int>> configs = {{3, 10}, {4, 25}, {5, 20}};
  int samples_per = 1000;
  int budget = 100;
  std::uint64_t seed = 0;
};

inline SuiteReport run_theorem2(const Theorem2Params& params) {
  SuiteReport report;
  report.suite = "theorem2-bound";
  const std::size_t total = params.configs.size() * params.samples_per;
  report.rows.resize(total);
  parallel_for(total, [&](std::size_t t) {
    const auto& [k, n] = params.configs[t / params.samples_per];
    const std::uint64_t instance_seed = derive_seed(params.seed, 2 * t);
    const ColoredCompleteGraph g = random_balanced(k, n, instance_seed);
    Rng rng(derive_seed(params.seed, 2 * t + 1));
    const BoundedSampleResult r = sample_until_bound(g, n, params.budget, rng);
    CsvRow row;
    row.suite = "theorem2-bound";
    row.k = k;
    row.n = n;
    row.seed = instance_seed;
    row.trial = static_cast<long long>(t);
    row.method = "rpm";
    row.f = r.cv.norm1();
    row.bound = r.bound;
    row.attempts = r.attempts;
    row.pass = r.met_bound;
    report.rows[t] = row;
  });
  long long first_attempt = 0, met = 0;
  for (const CsvRow& r : report.rows) {
    if (r.pass) ++met;
    if (r.attempts == 1 && r.pass) ++first_attempt;
  }
  const double rate = static_cast<double>(first_attempt) / total;
  report.pass = met == static_cast<long long>(total) && rate >= 0.99;
  std::ostringstream line;
  line << "theorem2-bound: " << total << " draws, " << met << " within bound, first-attempt rate "
       << format_double(rate) << " (gate: all within bound, rate >= 0.99)";
  report.summary.push_back(line.str());
  report.summary.push_back(std::string("theorem2-bound: ") + (report.pass ? "PASS" : "FAIL"));
  return report;
}

// ---------------------------------------------------------------------------
// lemma2-props: split_and_group postconditions on random matching pairs.

struct Lemma2Params {
  int pairs = 500;
  std::vector<int> ks = {3, 4, 5};
  std::vector<int> ns = {4, 9, 16};
  std::uint64_t seed = 0;
};

inline SuiteReport run_lemma2(const Lemma2Params& params) {
  SuiteReport report;
  report.suite = "lemma2-props";
  const std::size_t combos = params.ks.size() * params.ns.size();
  report.rows.resize(params.pairs);
  parallel_for(static_cast<std::size_t>(params.pairs), [&](std::size_t t) {
    const std::size_t combo = t % combos;
    const int k = params.ks[combo / params.ns.size()];
    const int n = params.ns[combo % params.ns.size()];
    const std::uint64_t instance_seed = derive_seed(params.seed, 2 * t);
    const ColoredCompleteGraph g = random_balanced(k, n, instance_seed);
    Rng rng(derive_seed(params.seed, 2 * t + 1));
    const PerfectMatching m1 = rpm_sample(g.order(), rng);
    const PerfectMatching m2 = rpm_sample(g.order(), rng);
    const SplitResult split = split_and_group(g, m1, m2, n);
    const SplitCheck check = check_split(g, m1, m2, n, split);
    const ColorVector v2 = color_vector(g, m2, n);
    const ColorVector v2p = color_vector(g, split.m2_prime, n);
    long long dist = 0;
    for (int c = 0; c < k; ++c) dist += std::llabs(v2.deviations[c] - v2p.deviations[c]);
    CsvRow row;
    row.suite = "lemma2-props";
    row.k = k;
    row.n = n;
    row.seed = instance_seed;
    row.trial = static_cast<long long>(t);
    row.method = "split";
    row.f = static_cast<double>(dist);
    row.bound = 2.0 * std::sqrt(static_cast<double>(k) * n);
    row.attempts = static_cast<long long>(split.bundles.size());
    row.pass = check.all();
    report.rows[t] = row;
  });
  for (const CsvRow& r : report.rows) report.pass = report.pass && r.pass;
  std::ostringstream line;
  line << "lemma2-props: " << params.pairs << " pairs, postconditions "
       << (report.pass ? "all hold" : "VIOLATED");
  report.summary.push_back(line.str());
  report.summary.push_back(std::string("lemma2-props: ") + (report.pass ? "PASS" : "FAIL"));
  return report;
}

// ---------------------------------------------------------------------------
// lemma3-mean: rounded matchings hit the convex target in expectation.

struct Lemma3Params {
  int k = 4;
  int n = 10;
  std::vector<Rational> ps = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  int rounds = 200;
  int retry_cap = kDefaultRetryCap;
  std::uint64_t seed = 0;
};

inline SuiteReport run_lemma3(const Lemma3Params& params) {
  SuiteReport report;
  report.suite = "lemma3-mean";
  const ColoredCompleteGraph g = random_balanced(params.k, params.n, derive_seed(params.seed, 0));
  Rng pair_rng(derive_seed(params.seed, 1));
  const PerfectMatching m1 = rpm_sample(g.order(), pair_rng);
  const PerfectMatching m2 = rpm_sample(g.order(), pair_rng);
  const SplitResult split = split_and_group(g, m1, m2, params.n);
  const ColorVector v1 = color_vector(g, m1, params.n);
  const ColorVector v2p = color_vector(g, split.m2_prime, params.n);

  report.rows.resize(params.ps.size() * params.rounds);
  std::vector<std::vector<ColorVector>> draws(params.ps.size(),
                                              std::vector<ColorVector>(params.rounds));
  parallel_for(report.rows.size(), [&](std::size_t t) {
    const std::size_t pi = t / params.rounds;
    const int round = static_cast<int>(t % params.rounds);
    Rng rng(derive_seed(params.seed, 100 + t));
    const RoundResult r =
        round_bundles(g, m1, split.bundles, params.ps[pi], params.n, rng, params.retry_cap);
    draws[pi][round] = r.cv;
    CsvRow row;
    row.suite = "lemma3-mean";
    row.k = params.k;
    row.n = params.n;
    row.seed = params.seed;
    row.trial = static_cast<long long>(t);
    row.method = "round";
    row.f = r.deviation;
    row.bound = r.threshold;
    row.attempts = r.attempts;
    row.pass = r.accepted;
    report.rows[t] = row;
  });
  for (const CsvRow& r : report.rows) report.pass = report.pass && r.pass;

  for (std::size_t pi = 0; pi < params.ps.size(); ++pi) {
    const Rational& p = params.ps[pi];
    for (int c = 0; c < params.k; ++c) {
      const double target =
          to_double(p * v1.deviations[c] + (1 - p) * v2p.deviations[c]);
      double mean = 0.0;
      for (const ColorVector& cv : draws[pi]) mean += cv.deviations[c];
      mean /= params.rounds;
      double var = 0.0;
      for (const ColorVector& cv : draws[pi]) {
        const double d = cv.deviations[c] - mean;
        var += d * d;
      }
      var /= std::max(1, params.rounds - 1);
      const double se = std::sqrt(var / params.rounds);
      const bool ok = se > 0 ? std::fabs(mean - target) <= 4.0 * se : mean == target;
      report.pass = report.pass && ok;
      std::ostringstream line;
      line << "lemma3-mean: p=" << to_string(p) << " color " << c + 1 << ": mean "
           << format_double(mean) << " target " << format_double(target) << " se "
           << format_double(se) << (ok ? "" : "  <-- outside 4 se");
      report.summary.push_back(line.str());
    }
  }
  report.summary.push_back(std::string("lemma3-mean: ") + (report.pass ? "PASS" : "FAIL"));
  return report;
}

// ---------------------------------------------------------------------------
// theorem3: certified combinations collapse to one nearly balanced matching.

struct Theorem3Params {
  std::vector<std::pair<int, int>> configs = {{4, 5}, {5, 4}};
  int runs = 50;
  int certify_budget = kDefaultCertifyBudget;
  int retry_cap = kDefaultRetryCap;
  std::uint64_t seed = 0;
};

inline SuiteReport run_theorem3(const Theorem3Params& params) {
  SuiteReport report;
  report.suite = "theorem3";
  const std::size_t total = params.configs.size() * params.runs;
  report.rows.resize(total);
  parallel_for(total, [&](std::size_t t) {
    const auto& [k, n] = params.configs[t / params.runs];
    const ColoredCompleteGraph g = random_balanced(k, n, derive_seed(params.seed, 3 * t));
    Rng cert_rng(derive_seed(params.seed, 3 * t + 1));
    const OriginCertificate cert = certify_origin(g, n, {}, params.certify_budget, cert_rng);
    bool ok = cert.found;
    double final_f = 0.0;
    long long attempts = 0;
    if (cert.found) {
      const ConvexCombination cc = caratheodory_reduce(g, n, cert.combination);
      ok = ok && cc.support() <= static_cast<std::size_t>(k) + 1;
      Rng pipe_rng(derive_seed(params.seed, 3 * t + 2));
      const PipelineResult pr = merge_rounding_pipeline(g, n, cc, pipe_rng, params.retry_cap);
      ok = ok && pr.trace.all_stages_accepted;
      for (const StageRecord& stage : pr.trace.stages) {
        ok = ok && stage.deviation <= pr.trace.stage_bound;
        ok = ok && stage.stage_change <= pr.trace.stage_bound;
        attempts += stage.attempts;
      }
      final_f = pr.trace.final_f;
      ok = ok && final_f <= pr.trace.final_bound;
    }
    CsvRow row;
    row.suite = "theorem3";
    row.k = k;
    row.n = n;
    row.seed = derive_seed(params.seed, 3 * t);
    row.trial = static_cast<long long>(t);
    row.method = "round";
    row.f = final_f;
    row.bound = pipeline_deviation_bound(k, n);
    row.attempts = attempts;
    row.pass = ok;
    report.rows[t] = row;
  });
  double worst = 0.0;
  for (const CsvRow& r : report.rows) {
    report.pass = report.pass && r.pass;
    worst = std::max(worst, r.f);
  }
  std::ostringstream line;
  line << "theorem3: " << total << " runs, worst final f " << format_double(worst)
       << ", all certificates exact and stages within bounds: " << (report.pass ? "yes" : "NO");
  report.summary.push_back(line.str());
  report.summary.push_back(std::string("theorem3: ") + (report.pass ? "PASS" : "FAIL"));
  return report;
}

}  // namespace chromatch
