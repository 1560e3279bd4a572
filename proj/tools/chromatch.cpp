// Command-line front end: instance generation, single-instance solving, and
// seed-reproducible experiment grids with CSV/JSON reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chromatch/chromatch.hpp"

namespace {

using nlohmann::json;

// Exit-code contract: 0 success, 2 budget or gate not met, 3 hull
// hypothesis unverified, 4 input error.
constexpr int kExitOk = 0;
constexpr int kExitBudget = 2;
constexpr int kExitUnverified = 3;
constexpr int kExitInput = 4;

std::string join_command(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

chromatch::Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return chromatch::Rational(std::stoll(text));
  const long long num = std::stoll(text.substr(0, slash));
  const long long den = std::stoll(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator: " + text);
  return chromatch::Rational(num, den);
}

json matching_json(const chromatch::PerfectMatching& m) {
  json edges = json::array();
  for (const chromatch::Edge& e : m.edges()) edges.push_back({e.u, e.v});
  return edges;
}

void emit_json(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out << j.dump(2) << '\n';
}

void print_color_counts(const chromatch::ColoredCompleteGraph& g) {
  std::cout << "order " << g.order() << ", colors " << g.num_colors() << '\n';
  const auto& counts = g.color_counts();
  for (std::size_t c = 0; c < counts.size(); ++c)
    std::cout << "color " << c + 1 << ": " << counts[c] << '\n';
  std::cout << "balanced: " << (g.is_balanced() ? "yes" : "no") << '\n';
}

struct GenerateArgs {
  int k = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool figure1 = false;
  bool hull = false;
};

int run_generate(const GenerateArgs& args) {
  if (args.figure1 && (args.k > 0 || args.n > 0 || args.hull)) {
    std::cerr << "generate: --figure1 takes no --k/--n/--hull-unbalanced\n";
    return kExitInput;
  }
  if (args.figure1) {
    const chromatch::ColoredCompleteGraph g = chromatch::figure1_instance();
    chromatch::write_instance(args.out, g);
    print_color_counts(g);
    std::cout << "wrote " << args.out << '\n';
    return kExitOk;
  }
  if (args.k < 1 || args.n < 1) {
    std::cerr << "generate: --k and --n are required (positive)\n";
    return kExitInput;
  }
  if (args.hull) {
    const chromatch::HullInstance inst =
        chromatch::unbalanced_hull_instance(args.k, args.n, args.seed);
    chromatch::write_instance(args.out, inst.graph);
    print_color_counts(inst.graph);
    std::cout << "hull certificate: support " << inst.certificate.combination.support()
              << ", samples used " << inst.certificate.samples_used << ", attempts "
              << inst.attempts << '\n';
    std::cout << "wrote " << args.out << '\n';
    if (inst.fell_back_to_balanced) {
      std::cerr << "generate: no certified unbalanced instance within "
                << chromatch::kHullAttemptCap << " attempts; wrote a balanced instance\n";
      return kExitUnverified;
    }
    return kExitOk;
  }
  const chromatch::ColoredCompleteGraph g = chromatch::random_balanced(args.k, args.n, args.seed);
  chromatch::write_instance(args.out, g);
  print_color_counts(g);
  std::cout << "wrote " << args.out << '\n';
  return kExitOk;
}

struct SolveArgs {
  std::string file;
  std::string method;
  std::uint64_t seed = 0;
  int restarts = 5;
  int plateau = chromatch::kDefaultPlateauBudget;
  int budget = 100;
  int samples = chromatch::kDefaultCertifyBudget;
  int retry_cap = chromatch::kDefaultRetryCap;
  std::string out;
};

int run_solve(const SolveArgs& args) {
  const chromatch::ColoredCompleteGraph g = chromatch::read_instance(args.file);
  const int n = chromatch::per_color_target(g);
  json j;
  j["command"] = "solve";
  j["file"] = args.file;
  j["method"] = args.method;
  j["seed"] = args.seed;
  j["order"] = g.order();
  j["k"] = g.num_colors();
  j["n"] = n;
  j["balanced"] = g.is_balanced();

  if (args.method == "rpm") {
    chromatch::Rng rng(args.seed);
    const chromatch::BoundedSampleResult r =
        chromatch::sample_until_bound(g, n, args.budget, rng);
    j["f"] = r.cv.norm1();
    j["bound"] = r.bound;
    j["attempts"] = r.attempts;
    j["met_bound"] = r.met_bound;
    j["deviations"] = r.cv.deviations;
    j["matching"] = matching_json(r.matching);
    emit_json(j, args.out);
    std::cerr << "f = " << r.cv.norm1() << " (bound " << chromatch::format_double(r.bound)
              << "), attempts " << r.attempts << '\n';
    return r.met_bound ? kExitOk : kExitBudget;
  }

  if (args.method == "swap") {
    const chromatch::MultiStartResult r =
        chromatch::search_from_rpm(g, n, args.restarts, args.plateau, args.seed);
    const chromatch::ColorVector cv = chromatch::color_vector(g, r.best, n);
    j["f"] = r.best_f;
    j["best_restart"] = r.best_restart;
    j["deviations"] = cv.deviations;
    j["matching"] = matching_json(r.best);
    json restarts = json::array();
    for (const chromatch::RestartStat& s : r.restarts)
      restarts.push_back({{"restart", s.restart},
                          {"initial_f", s.initial_f},
                          {"final_f", s.final_f},
                          {"improving_moves", s.improving_moves},
                          {"plateau_moves", s.plateau_moves}});
    j["restarts"] = restarts;
    emit_json(j, args.out);
    std::cerr << "final f = " << r.best_f << " (restart " << r.best_restart << ")\n";
    return kExitOk;
  }

  if (args.method == "oracle") {
    const chromatch::MinImbalanceResult r = chromatch::exhaustive_min_f(g, n);
    const chromatch::PerfectMatching witness(r.witness);
    const chromatch::ColorVector cv = chromatch::color_vector(g, witness, n);
    j["min_f"] = r.min_f;
    j["minimizer_count"] = r.minimizer_count;
    j["total_matchings"] = r.total;
    j["deviations"] = cv.deviations;
    j["matching"] = matching_json(witness);
    emit_json(j, args.out);
    std::cerr << "min f = " << r.min_f << " (" << r.minimizer_count << " of " << r.total
              << " matchings attain it)\n";
    return kExitOk;
  }

  if (args.method == "round") {
    chromatch::Rng cert_rng(chromatch::derive_seed(args.seed, 1));
    const chromatch::OriginCertificate cert =
        chromatch::certify_origin(g, n, {}, args.samples, cert_rng);
    if (!cert.found) {
      std::cerr << "round: origin certificate not found within " << args.samples
                << " samples; hull hypothesis unverified\n";
      return kExitUnverified;
    }
    const chromatch::ConvexCombination cc =
        chromatch::caratheodory_reduce(g, n, cert.combination);
    chromatch::Rng pipe_rng(chromatch::derive_seed(args.seed, 2));
    const chromatch::PipelineResult pr =
        chromatch::merge_rounding_pipeline(g, n, cc, pipe_rng, args.retry_cap);
    const chromatch::ColorVector cv = chromatch::color_vector(g, pr.matching, n);
    j["f"] = pr.trace.final_f;
    j["final_bound"] = pr.trace.final_bound;
    j["stage_bound"] = pr.trace.stage_bound;
    j["deviations"] = cv.deviations;
    j["matching"] = matching_json(pr.matching);
    j["certificate_support"] = cc.support();
    j["certificate_samples"] = cert.samples_used;
    json weights = json::array();
    for (const chromatch::Rational& w : cc.weights) weights.push_back(chromatch::to_string(w));
    j["certificate_weights"] = weights;
    j["below_guarantee_range"] = pr.trace.below_guarantee_range;
    j["all_stages_accepted"] = pr.trace.all_stages_accepted;
    json stages = json::array();
    for (const chromatch::StageRecord& s : pr.trace.stages)
      stages.push_back({{"stage", s.stage},
                        {"p", chromatch::to_string(s.p)},
                        {"bundles", s.bundle_count},
                        {"attempts", s.attempts},
                        {"accepted", s.accepted},
                        {"deviation", s.deviation},
                        {"stage_change", s.stage_change}});
    j["stages"] = stages;
    emit_json(j, args.out);
    std::cerr << "final f = " << pr.trace.final_f << " (bound "
              << chromatch::format_double(pr.trace.final_bound) << ")\n";
    return pr.trace.all_stages_accepted ? kExitOk : kExitBudget;
  }

  std::cerr << "solve: unknown method '" << args.method << "'\n";
  return kExitInput;
}

struct ExperimentArgs {
  std::string suite;
  std::vector<int> ks;
  std::vector<int> ns;
  std::uint64_t seed = 0;
  long long samples = -1;
  int runs = -1;
  int pairs = -1;
  int instances = -1;
  int restarts = -1;
  int plateau = -1;
  int budget = -1;
  int rounds = -1;
  std::vector<std::string> ps;
  std::string out;
  std::string command;
};

std::vector<std::pair<int, int>> cross_configs(const std::vector<int>& ks,
                                               const std::vector<int>& ns,
                                               std::vector<std::pair<int, int>> fallback) {
  if (ks.empty() || ns.empty()) return fallback;
  std::vector<std::pair<int, int>> out;
  for (int k : ks)
    for (int n : ns) out.emplace_back(k, n);
  return out;
}

int run_experiment(const ExperimentArgs& args) {
  chromatch::SuiteReport report;
  if (args.suite == "uniformity") {
    chromatch::UniformityParams params;
    if (!args.ns.empty()) params.order = args.ns[0];
    if (args.samples > 0) params.samples = args.samples;
    params.seed = args.seed;
    report = chromatch::run_uniformity(params);
  } else if (args.suite == "lemma1") {
    chromatch::Lemma1Params params;
    params.configs = cross_configs(args.ks, args.ns, params.configs);
    if (args.instances > 0) params.instances_per = args.instances;
    params.seed = args.seed;
    report = chromatch::run_lemma1(params);
  } else if (args.suite == "theorem1") {
    chromatch::Theorem1Params params;
    if (args.runs > 0) {
      params.n1_instances = args.runs;
      params.n2_instances = std::max(1, args.runs / 5);
    }
    if (args.restarts > 0) params.restarts = args.restarts;
    if (args.plateau >= 0) params.plateau = args.plateau;
    params.seed = args.seed;
    report = chromatch::run_theorem1(params);
  } else if (args.suite == "theorem2-bound") {
    chromatch::Theorem2Params params;
    params.configs = cross_configs(args.ks, args.ns, params.configs);
    if (args.samples > 0) params.samples_per = static_cast<int>(args.samples);
    if (args.budget > 0) params.budget = args.budget;
    params.seed = args.seed;
    report = chromatch::run_theorem2(params);
  } else if (args.suite == "lemma2-props") {
    chromatch::Lemma2Params params;
    if (!args.ks.empty()) params.ks = args.ks;
    if (!args.ns.empty()) params.ns = args.ns;
    if (args.pairs > 0) params.pairs = args.pairs;
    params.seed = args.seed;
    report = chromatch::run_lemma2(params);
  } else if (args.suite == "lemma3-mean") {
    chromatch::Lemma3Params params;
    if (!args.ks.empty()) params.k = args.ks[0];
    if (!args.ns.empty()) params.n = args.ns[0];
    if (!args.ps.empty()) {
      params.ps.clear();
      for (const std::string& p : args.ps) params.ps.push_back(parse_rational(p));
    }
    if (args.rounds > 0) params.rounds = args.rounds;
    params.seed = args.seed;
    report = chromatch::run_lemma3(params);
  } else if (args.suite == "theorem3") {
    chromatch::Theorem3Params params;
    params.configs = cross_configs(args.ks, args.ns, params.configs);
    if (args.runs > 0) params.runs = args.runs;
    if (args.samples > 0) params.certify_budget = static_cast<int>(args.samples);
    params.seed = args.seed;
    report = chromatch::run_theorem3(params);
  } else {
    std::cerr << "experiment: unknown suite '" << args.suite << "'\n";
    return kExitInput;
  }

  if (args.out.empty()) {
    chromatch::write_csv(std::cout, report, args.command);
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + args.out);
    chromatch::write_csv(out, report, args.command);
  }
  for (const std::string& line : report.summary) std::cerr << line << '\n';
  return report.pass ? kExitOk : kExitBudget;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nearly color-balanced perfect matchings in edge-colored complete graphs"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write an instance file");
  generate->add_option("--k", gen.k, "number of colors");
  generate->add_option("--n", gen.n, "per-color matching target (order = 2kn)");
  generate->add_option("--seed", gen.seed, "rng seed");
  generate->add_option("--out", gen.out, "output path")->required();
  generate->add_flag("--figure1", gen.figure1, "emit the built-in 3-colored K6 instance");
  generate->add_flag("--hull-unbalanced", gen.hull,
                     "emit an unbalanced instance with a certified origin hull");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one instance file");
  solve_cmd->add_option("file", solve.file, "instance file")->required();
  solve_cmd->add_option("--method", solve.method, "rpm | swap | round | oracle")->required();
  solve_cmd->add_option("--seed", solve.seed, "rng seed");
  solve_cmd->add_option("--restarts", solve.restarts, "swap: number of restarts");
  solve_cmd->add_option("--plateau", solve.plateau, "swap: plateau budget per restart");
  solve_cmd->add_option("--budget", solve.budget, "rpm: sample budget");
  solve_cmd->add_option("--samples", solve.samples, "round: certificate sampling budget");
  solve_cmd->add_option("--retry-cap", solve.retry_cap, "round: per-stage retry cap");
  solve_cmd->add_option("--out", solve.out, "JSON report path (default stdout)");

  ExperimentArgs exp;
  CLI::App* experiment = app.add_subcommand("experiment", "run a reproducible suite");
  experiment
      ->add_option("--suite", exp.suite,
                   "uniformity | lemma1 | theorem1 | theorem2-bound | lemma2-props | "
                   "lemma3-mean | theorem3")
      ->required();
  experiment->add_option("--k", exp.ks, "color counts (grid)");
  experiment->add_option("--n", exp.ns, "per-color targets (grid; order N for uniformity)");
  experiment->add_option("--seed", exp.seed, "suite seed");
  experiment->add_option("--samples", exp.samples, "sample count (suite-specific)");
  experiment->add_option("--runs", exp.runs, "run count (suite-specific)");
  experiment->add_option("--pairs", exp.pairs, "pair count (lemma2-props)");
  experiment->add_option("--instances", exp.instances, "instances per config (lemma1)");
  experiment->add_option("--restarts", exp.restarts, "restarts (theorem1)");
  experiment->add_option("--plateau", exp.plateau, "plateau budget (theorem1)");
  experiment->add_option("--budget", exp.budget, "sample budget (theorem2-bound)");
  experiment->add_option("--rounds", exp.rounds, "rounds per p (lemma3-mean)");
  experiment->add_option("--p", exp.ps, "rounding weights, e.g. 1/4 (lemma3-mean)");
  experiment->add_option("--out", exp.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*solve_cmd) return run_solve(solve);
    exp.command = join_command(argc, argv);
    return run_experiment(exp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
