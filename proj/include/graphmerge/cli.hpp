#pragma once

// Command-line front end. run_cli is the whole program; main() only forwards
// to it, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphmerge/bounds.hpp"
#include "graphmerge/ghz_verify.hpp"
#include "graphmerge/merge.hpp"
#include "graphmerge/resources.hpp"

namespace graphmerge::cli {

using Json = nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 1;
inline constexpr int exit_usage = 2;

namespace detail {

inline std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || item.front() == '-') {
      throw ParseError("bad vertex '" + item + "' in list '" + text + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

inline BitMat load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return gf2::read_matrix(in);
}

inline std::string bits_string(std::span<const std::uint8_t> bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_array()) {
    std::string s;
    for (const auto& v : j) s += (s.empty() ? "" : " ") + (v.is_string() ? v.get<std::string>() : v.dump());
    rows.emplace_back(prefix, s);
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

inline void print_pretty(std::ostream& out, const Json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
}

struct Globals {
  std::uint64_t seed = 0;
  bool pretty = false;
  bool deterministic = false;
};

// --- subcommands -----------------------------------------------------------

inline int cmd_pivot(const std::string& path, Json& out) {
  const auto gamma = load_matrix(path);
  const auto d = gf2::pivot_decompose(gamma);
  out["rows"] = gamma.rows();
  out["cols"] = gamma.cols();
  out["r"] = d.r;
  out["U"] = d.u.row_strings();
  out["V"] = d.v.row_strings();
  out["R"] = d.r_block.row_strings();
  const bool ok = d.reconstruct() == gamma;
  out["reconstructed"] = ok;
  return ok ? exit_ok : exit_verification_failed;
}

struct MergeArgs {
  std::string graph;
  std::string honest;
  bool enumerate = false;
  bool oracle = false;
  std::string backend = "tableau";
};

template <sim::QuantumBackend B>
int merge_with(const MergeArgs& a, const Graph& g, const Partition& p, std::uint64_t seed, Json& out) {
  std::vector<MergeResult<B>> results;
  if (a.enumerate) results = merge_branches<B>(g, p);
  else results.push_back(merge_full<B>(g, p, sim::RandomOutcomes{seed}));
  const CorrectionValidator f(g, p);
  bool all_f = true;
  bool all_verified = true;
  Json branches = Json::array();
  for (const auto& r : results) {
    Json b;
    b["bits"] = bits_string(r.bits);
    b["probability"] = r.probability;
    b["x"] = r.outcome.correction.x.to_string();
    b["z"] = r.outcome.correction.z.to_string();
    const bool accepted = f(r.outcome.correction).accepted;
    all_f = all_f && accepted;
    b["f_accepted"] = accepted;
    if (!a.oracle) {
      b["fidelity"] = nullptr;
      b["verified"] = nullptr;
    } else if constexpr (std::is_same_v<B, sim::StateVector>) {
      const double fid = graph_state_fidelity(r.state, r.layout.output, g);
      b["fidelity"] = fid;
      b["verified"] = fid >= 1.0 - 1e-9;
      all_verified = all_verified && fid >= 1.0 - 1e-9;
    } else {
      const bool eq = holds_graph_state(r.state, r.layout.output, g);
      b["fidelity"] = eq ? Json(1.0) : Json(nullptr);
      b["verified"] = eq;
      all_verified = all_verified && eq;
    }
    branches.push_back(std::move(b));
  }
  out["branches"] = std::move(branches);
  out["f_accepted"] = all_f;
  out["verified"] = a.oracle ? Json(all_verified) : Json(nullptr);
  return all_f && all_verified ? exit_ok : exit_verification_failed;
}

inline int cmd_merge(const MergeArgs& a, std::uint64_t seed, Json& out) {
  const auto g = load_graph(a.graph);
  const auto p = Partition::from_honest(g.size(), parse_list(a.honest));
  const auto pl = plan(g, p);
  out["n"] = g.size();
  out["honest"] = p.h();
  out["malicious"] = p.m();
  out["r"] = pl.r();
  out["backend"] = a.backend;
  out["enumerate"] = a.enumerate;
  if (a.backend == "statevector") return merge_with<sim::StateVector>(a, g, p, seed, out);
  return merge_with<sim::Tableau>(a, g, p, seed, out);
}

inline int cmd_twirl_check(const std::string& graph, const std::string& honest, std::size_t trials,
                           std::uint64_t seed, Json& out) {
  const auto g = load_graph(graph);
  const auto p = Partition::from_honest(g.size(), parse_list(honest));
  const auto target = sim::make_graph_state<sim::Tableau>(g);
  const CounterRng root(seed);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng = root.split(t);
    const auto run = merge_full<sim::Tableau>(g, p, sim::RandomOutcomes{rng()});
    const auto& corr = run.outcome.correction;
    const auto x_prime = complete_correction(g, p, corr.x, corr.z);
    bool ok = restrict_to(x_prime, p.h()) == corr.x && restrict_to(g.adjacency() * x_prime, p.h()) == corr.z;
    auto twirled = target;
    const auto s = stabilizer_of(g, x_prime);
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (s.x.get(v)) twirled.x(v);
      if (s.z.get(v)) twirled.z(v);
    }
    ok = ok && sim::same_state(twirled, target);
    ok = ok && twirl_real_matches_ideal(g, p, corr.x, corr.z, BitVec::random(g.size(), rng));
    failures += ok ? 0 : 1;
  }
  out["checked"] = trials;
  out["failures"] = failures;
  out["identity_holds"] = failures == 0;
  return failures == 0 ? exit_ok : exit_verification_failed;
}

struct GhzArgs {
  std::size_t n = 4;
  std::size_t S = 10;
  std::optional<double> theta;
  std::size_t trials = 100000;
  bool exact_loop = false;
};

inline int cmd_verify_ghz(const GhzArgs& a, std::uint64_t seed, Json& out) {
  ghz::VerifConfig cfg;
  cfg.n = a.n;
  cfg.S = a.S;
  cfg.seed = seed;
  cfg.trials = a.trials;
  cfg.trigger = a.exact_loop ? ghz::OutputTrigger::ExactLoop : ghz::OutputTrigger::Geometric;
  cfg.validate();
  const auto state = a.theta ? sim::theta_state(a.n, *a.theta) : sim::ghz_state(a.n);
  if (a.theta) cfg.source = ghz::PureStateSource{state};
  const auto res = ghz::run_protocol(cfg);
  const auto& st = res.stats;
  const double tau = ghz::tau_pure(state);
  const double predicted = tau * tau / 4.0;
  const double verif_rounds = static_cast<double>(st.accepts + st.rejects);
  const double sigma = verif_rounds > 0 ? std::sqrt(predicted * (1.0 - predicted) / verif_rounds) : 0.0;
  out["n"] = a.n;
  out["S"] = a.S;
  out["theta"] = nullable(a.theta);
  out["rounds"] = st.rounds;
  out["accepts"] = st.accepts;
  out["rejects"] = st.rejects;
  out["outputs"] = st.outputs;
  out["reject_rate"] = st.reject_rate();
  out["ci95"] = st.ci95();
  out["tau"] = tau;
  out["predicted"] = predicted;
  out["sigma"] = sigma;
  out["exact_reject"] = ghz::exact_reject_probability(state);
  out["rounds_per_output"] =
      st.outputs ? Json(static_cast<double>(st.rounds) / static_cast<double>(st.outputs)) : Json(nullptr);
  return exit_ok;
}

inline void put_bound(const bounds::BoundResult& b, Json& out) {
  out["epsilon"] = b.epsilon;
  out["realization_epsilon"] = nullable(b.realization_epsilon);
  out["out_of_range"] = b.out_of_range;
}

inline int cmd_bounds_ghz(std::uint64_t n, std::uint64_t S, Json& out) {
  const auto b = bounds::ghz_epsilon(n, S);
  out["n"] = n;
  out["S"] = S;
  out["exact"] = b.exact ? Json(b.exact->str()) : Json(nullptr);
  put_bound(b, out);
  return exit_ok;
}

inline std::string hp_string(const bounds::Float50& v) { return v.str(30, std::ios_base::scientific); }

inline int cmd_bounds_graph(const bounds::GraphBoundInput& in, Json& out) {
  const auto b = bounds::graph_epsilon(in);
  const auto hp = bounds::graph_epsilon_high_precision(in);
  out["J"] = in.J;
  out["lambda"] = in.lambda;
  out["c"] = in.c;
  out["m"] = in.m;
  out["n"] = in.n;
  out["sum"] = b.sum;
  out["p0"] = b.p0;
  out["one_minus_p0"] = b.one_minus_p0;
  out["eta0"] = b.eta0;
  put_bound(b, out);
  out["high_precision"] = {{"sum", hp_string(hp.sum)},
                           {"one_minus_p0", hp_string(hp.one_minus_p0)},
                           {"eta0", hp_string(hp.eta0)},
                           {"epsilon", hp_string(hp.epsilon)}};
  out["agreeing_digits"] = bounds::agreeing_digits(b.epsilon, hp.epsilon);
  return exit_ok;
}

inline int cmd_impossibility(std::size_t trials, std::uint64_t seed, Json& out) {
  const auto s = impossibility_demo(trials, seed);
  out["trials"] = s.trials;
  out["real_equal_rate"] = s.real_equal_rate;
  out["ideal_equal_rate"] = s.ideal_equal_rate;
  out["advantage"] = s.advantage;
  out["ci95"] = s.ci95;
  return exit_ok;
}

/// Every graph and partition with n ≤ max_n, every branch, both backends.
inline int cmd_selftest(std::size_t max_n, Json& out) {
  std::size_t cases = 0;
  std::size_t passed = 0;
  std::size_t branches = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * (n - 1) / 2)); ++mask) {
      const auto g = Graph::from_edge_mask(n, mask);
      for (std::uint64_t hm = 0; hm < (std::uint64_t{1} << n); ++hm) {
        const auto p = Partition::from_mask(n, hm);
        const CorrectionValidator f(g, p);
        bool ok = true;
        for (const auto& br : merge_branches<sim::Tableau>(g, p)) {
          ok = ok && holds_graph_state(br.state, br.layout.output, g) && f(br.outcome.correction).accepted;
          ++branches;
        }
        for (const auto& br : merge_branches<sim::StateVector>(g, p)) {
          ok = ok && graph_state_fidelity(br.state, br.layout.output, g) >= 1.0 - 1e-9;
        }
        ++cases;
        passed += ok ? 1 : 0;
      }
    }
  }
  out["max_n"] = max_n;
  out["cases"] = cases;
  out["branches"] = branches;
  out["passed"] = passed;
  out["failed"] = cases - passed;
  return passed == cases ? exit_ok : exit_verification_failed;
}

inline void apply_env_cap() {
  if (const char* env = std::getenv("GRAPHMERGE_SV_CAP"); env && *env) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(env, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || env[pos] != '\0' || v > 30) {
      throw ParseError(std::string("GRAPHMERGE_SV_CAP must be an integer in 0..30, got '") + env + "'");
    }
    sim::StateVector::process_cap() = v;
  }
}

} // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Graph-state merging, verification resources and bounds"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice (default 0)");
  app.add_flag("--pretty", g.pretty, "Aligned key/value text instead of JSON");
  app.add_flag("--deterministic", g.deterministic, "Omit the timestamp field");

  std::string matrix_path;
  auto* pivot = app.add_subcommand("pivot", "Pivot decomposition of a GF(2) matrix file");
  pivot->add_option("--in", matrix_path, "Matrix file: 'rows cols' then one 0/1 row per line")->required();

  MergeArgs ma;
  auto* merge = app.add_subcommand("merge", "Merge two copies of a graph state");
  merge->add_option("--graph", ma.graph, "Graph file: vertex count then one edge per line")->required();
  merge->add_option("--honest", ma.honest, "Comma-separated honest vertices")->required();
  merge->add_flag("--enumerate", ma.enumerate, "All measurement branches instead of one sample");
  merge->add_flag("--oracle", ma.oracle, "Compare every output with |G>");
  merge->add_option("--backend", ma.backend, "tableau or statevector")
      ->check(CLI::IsMember({"tableau", "statevector"}));

  std::string tw_graph;
  std::string tw_honest;
  std::size_t tw_trials = 100;
  auto* twirl = app.add_subcommand("twirl-check", "Check the twirl identity on sampled merge corrections");
  twirl->add_option("--graph", tw_graph)->required();
  twirl->add_option("--honest", tw_honest)->required();
  twirl->add_option("--trials", tw_trials)->check(CLI::PositiveNumber);

  GhzArgs ga;
  double theta = 0.0;
  auto* ghz_cmd = app.add_subcommand("verify-ghz", "Run the GHZ verification protocol");
  ghz_cmd->add_option("--n", ga.n)->check(CLI::Range(2, 20));
  ghz_cmd->add_option("--S", ga.S);
  auto* theta_opt = ghz_cmd->add_option("--theta", theta, "Source cos(t)|0..0> + sin(t)|1..1>; omit for GHZ");
  ghz_cmd->add_option("--trials", ga.trials)->check(CLI::PositiveNumber);
  ghz_cmd->add_flag("--exact-loop", ga.exact_loop, "Draw all S bits of r every round");

  auto* bounds_cmd = app.add_subcommand("bounds", "Security bounds");
  bounds_cmd->require_subcommand(1);
  std::uint64_t bg_n = 3;
  std::uint64_t bg_s = 20;
  auto* bghz = bounds_cmd->add_subcommand("ghz", "(4n+1)/2^(S/2)");
  bghz->add_option("--n", bg_n);
  bghz->add_option("--S", bg_s);
  bounds::GraphBoundInput gi{16, 100, 1, 1, 4};
  auto* bgraph = bounds_cmd->add_subcommand("graph", "1 - p0 + 2 eta0 - eta0^2");
  bgraph->add_option("--J", gi.J);
  bgraph->add_option("--lambda", gi.lambda);
  bgraph->add_option("--c", gi.c);
  bgraph->add_option("--m", gi.m);
  bgraph->add_option("--n", gi.n);

  std::size_t imp_trials = 100000;
  auto* imp = app.add_subcommand("impossibility-demo", "Bell-pair distinguisher against the no-correction simulator");
  imp->add_option("--trials", imp_trials)->check(CLI::PositiveNumber);

  std::size_t st_n = 4;
  auto* self = app.add_subcommand("selftest", "Exhaustive merge check over small graphs");
  self->add_option("--max-n", st_n)->check(CLI::Range(1, 5));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  Json body;
  body["subcommand"] = app.get_subcommands().front()->get_name();
  body["seed"] = g.seed;
  if (!g.deterministic) body["timestamp"] = utc_timestamp();
  Json result;
  int code = exit_ok;
  try {
    apply_env_cap();
    if (*pivot) code = cmd_pivot(matrix_path, result);
    else if (*merge) code = cmd_merge(ma, g.seed, result);
    else if (*twirl) code = cmd_twirl_check(tw_graph, tw_honest, tw_trials, g.seed, result);
    else if (*ghz_cmd) {
      if (*theta_opt) ga.theta = theta;
      code = cmd_verify_ghz(ga, g.seed, result);
    } else if (*bghz) {
      body["subcommand"] = "bounds ghz";
      code = cmd_bounds_ghz(bg_n, bg_s, result);
    } else if (*bgraph) {
      body["subcommand"] = "bounds graph";
      code = cmd_bounds_graph(gi, result);
    } else if (*imp) code = cmd_impossibility(imp_trials, g.seed, result);
    else if (*self) code = cmd_selftest(st_n, result);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  for (auto& [k, v] : result.items()) body[k] = v;
  if (g.pretty) print_pretty(out, body);
  else out << body.dump() << '\n';
  return code;
}

} // namespace graphmerge::cli
