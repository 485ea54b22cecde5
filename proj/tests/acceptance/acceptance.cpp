// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance          all ten criteria
//   acceptance 3 8      only criteria 3 and 8
//
// Exit status is 0 iff every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graphmerge/graphmerge.hpp"
#include "support.hpp"

using namespace graphmerge;
using sim::StateVector;
using sim::Tableau;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  std::string first_failure;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) first_failure = what;
    pass = pass && cond;
  }
};

const double pi = std::acos(-1.0);

template <class F>
void for_each_graph(std::size_t n, F&& f) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * (n - 1) / 2)); ++mask) {
    f(Graph::from_edge_mask(n, mask), mask);
  }
}

std::string describe(std::size_t n, std::uint64_t mask, std::uint64_t hm) {
  return "n=" + std::to_string(n) + " edges=" + std::to_string(mask) + " H=" + std::to_string(hm);
}

/// Every (x, z) ∈ {0,1}^{|H|} × {0,1}^{|H|} that f accepts.
std::set<std::string> accepted_set(const CorrectionValidator& f, std::size_t h) {
  std::set<std::string> out;
  for (std::uint64_t xm = 0; xm < (std::uint64_t{1} << h); ++xm) {
    for (std::uint64_t zm = 0; zm < (std::uint64_t{1} << h); ++zm) {
      BitVec x(h);
      BitVec z(h);
      for (std::size_t i = 0; i < h; ++i) {
        x.set(i, (xm >> i) & 1U);
        z.set(i, (zm >> i) & 1U);
      }
      if (f({x, z}).accepted) out.insert(x.to_string() + "/" + z.to_string());
    }
  }
  return out;
}

Tableau twirled_graph_state(const Graph& g, const BitVec& x) {
  auto t = sim::make_graph_state<Tableau>(g);
  const auto s = stabilizer_of(g, x);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (s.x.get(v)) t.x(v);
    if (s.z.get(v)) t.z(v);
  }
  return t;
}

// 1. Merge soundness.
void merge_soundness(Verdict& v) {
  std::size_t cases = 0;
  std::size_t branches = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for_each_graph(n, [&](const Graph& g, std::uint64_t mask) {
      for (std::uint64_t hm = 0; hm < (std::uint64_t{1} << n); ++hm) {
        const auto p = Partition::from_mask(n, hm);
        ++cases;
        double total = 0.0;
        for (const auto& br : merge_branches<Tableau>(g, p)) {
          ++branches;
          total += br.probability;
          v.require(holds_graph_state(br.state, br.layout.output, g), "tableau " + describe(n, mask, hm));
        }
        v.require(std::abs(total - 1.0) < 1e-12, "tableau branch mass " + describe(n, mask, hm));
        for (const auto& br : merge_branches<StateVector>(g, p)) {
          v.require(graph_state_fidelity(br.state, br.layout.output, g) >= 1.0 - 1e-9,
                    "state vector " + describe(n, mask, hm));
        }
      }
    });
  }
  CounterRng rng(101);
  const std::size_t sizes[] = {5, 6, 8};
  for (int t = 0; t < 200; ++t) {
    const auto n = sizes[t % 3];
    const auto g = Graph::random(n, rng);
    const auto hm = rng.uniform(std::uint64_t{1} << n);
    const auto seed = rng();
    const auto res = merge_full<Tableau>(g, Partition::from_mask(n, hm), sim::RandomOutcomes{seed});
    v.require(holds_graph_state(res.state, res.layout.output, g),
              "random case " + std::to_string(t) + " n=" + std::to_string(n) + " seed=" + std::to_string(seed));
  }
  v.detail << cases << " exhaustive cases, " << branches << " branches on both backends, 200 random cases";
}

// 2. GHZ shortcut.
void ghz_shortcut(Verdict& v) {
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto ghz = sim::ghz_state(n);
    const auto star = Graph::star(n);
    const auto star_sv = sim::make_graph_state<StateVector>(star);
    for (std::uint64_t hm = 1; hm < (std::uint64_t{1} << n); ++hm) {
      const auto p = Partition::from_mask(n, hm);
      double total = 0.0;
      for (auto& br : ghz_merge_branches<StateVector>(n, p)) {
        ++checked;
        total += br.probability;
        const auto tag = "n=" + std::to_string(n) + " H=" + std::to_string(hm);
        v.require(sim::fidelity_reduced(br.state, br.layout.output, ghz) >= 1.0 - 1e-9, "GHZ " + tag);
        // Hadamards on the leaves map GHZ_n to the star graph state.
        for (std::size_t leaf = 1; leaf < n; ++leaf) br.state.h(br.layout.output[leaf]);
        v.require(sim::fidelity_reduced(br.state, br.layout.output, star_sv) >= 1.0 - 1e-9, "star " + tag);
      }
      v.require(std::abs(total - 1.0) < 1e-12, "branch mass n=" + std::to_string(n));
      for (const auto& br : merge_branches<Tableau>(star, p)) {
        v.require(holds_graph_state(br.state, br.layout.output, star), "merge_full on star n=" + std::to_string(n));
      }
    }
  }
  v.detail << checked << " GHZ branches for n = 2..6, each matching the star-graph merge";
}

// 3. f-validator consistency.
void f_consistency(Verdict& v) {
  std::size_t cases = 0;
  std::size_t corrections = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for_each_graph(n, [&](const Graph& g, std::uint64_t mask) {
      for (std::uint64_t hm = 0; hm < (std::uint64_t{1} << n); ++hm) {
        const auto p = Partition::from_mask(n, hm);
        const CorrectionValidator f(g, p);
        std::set<std::string> reachable;
        for (const auto& br : merge_branches<Tableau>(g, p)) {
          const auto& c = br.outcome.correction;
          v.require(f(c).accepted, "merge correction rejected " + describe(n, mask, hm));
          reachable.insert(c.x.to_string() + "/" + c.z.to_string());
          ++corrections;
        }
        v.require(reachable == accepted_set(f, p.h().size()), "accepted != reachable " + describe(n, mask, hm));
        ++cases;
      }
    });
  }
  CounterRng rng(103);
  for (int t = 0; t < 300; ++t) {
    const auto n = 5 + rng.uniform(4);
    const auto g = Graph::random(n, rng);
    const auto p = Partition::from_mask(n, rng.uniform(std::uint64_t{1} << n));
    const auto res = merge_full<Tableau>(g, p, sim::RandomOutcomes{rng()});
    v.require(validate_f(g, p, res.outcome.correction).accepted, "sampled correction rejected");
    ++corrections;
  }
  v.detail << corrections << " merge corrections accepted; accepted set = reachable set on " << cases << " cases";
}

// 4. Twirl identity.
void twirl_identity(Verdict& v) {
  std::size_t checked = 0;
  CounterRng rng(104);
  for (std::size_t n = 1; n <= 4; ++n) {
    for_each_graph(n, [&](const Graph& g, std::uint64_t mask) {
      const auto target = sim::make_graph_state<Tableau>(g);
      for (std::uint64_t hm = 0; hm < (std::uint64_t{1} << n); ++hm) {
        const auto p = Partition::from_mask(n, hm);
        const CorrectionValidator f(g, p);
        for (const auto& key : accepted_set(f, p.h().size())) {
          const auto slash = key.find('/');
          const auto x_h = BitVec::from_string(key.substr(0, slash));
          const auto z_h = BitVec::from_string(key.substr(slash + 1));
          const auto x_prime = complete_correction(g, p, x_h, z_h);
          const auto tag = describe(n, mask, hm) + " x=" + key;
          v.require(restrict_to(x_prime, p.h()) == x_h, "x'_H " + tag);
          v.require(restrict_to(g.adjacency() * x_prime, p.h()) == z_h, "(Gx')_H " + tag);
          v.require(sim::same_state(twirled_graph_state(g, x_prime), target), "stabilizer " + tag);
          v.require(twirl_real_matches_ideal(g, p, x_h, z_h, BitVec::random(n, rng)), "real/ideal " + tag);
          ++checked;
        }
      }
    });
  }
  v.detail << checked << " accepted corrections completed bit-exactly";
}

// 5. Stabilizer invariance.
void stabilizer_invariance(Verdict& v) {
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for_each_graph(n, [&](const Graph& g, std::uint64_t mask) {
      const auto target = sim::make_graph_state<Tableau>(g);
      for (std::uint64_t xm = 0; xm < (std::uint64_t{1} << n); ++xm) {
        BitVec x(n);
        for (std::size_t i = 0; i < n; ++i) x.set(i, (xm >> i) & 1U);
        v.require(sim::same_state(twirled_graph_state(g, x), target),
                  "n=" + std::to_string(n) + " edges=" + std::to_string(mask) + " x=" + x.to_string());
        ++checked;
      }
    });
  }
  v.detail << checked << " (graph, x) pairs for n <= 5";
}

// 6. Pivot and synthesis.
void pivot_and_synthesis(Verdict& v) {
  CounterRng rng(106);
  for (int t = 0; t < 1000; ++t) {
    const auto rows = 1 + rng.uniform(16);
    const auto cols = 1 + rng.uniform(16);
    const auto gamma = BitMat::random(rows, cols, rng);
    const auto d = gf2::pivot_decompose(gamma);
    v.require(d.reconstruct() == gamma, "reconstruct " + std::to_string(t));
    v.require(d.r == gf2::rank(gamma), "rank " + std::to_string(t));
    v.require(gf2::rank(d.u) == cols && gf2::rank(d.v) == rows, "U, V invertible " + std::to_string(t));
  }
  for (int t = 0; t < 200; ++t) {
    const auto n = 1 + rng.uniform(8);
    BitMat u(n, n);
    do {
      u = BitMat::random(n, n, rng);
    } while (gf2::rank(u) != n);
    const auto c = gf2::synthesize_cnot_swap(u);
    for (std::size_t k = 0; k < n; ++k) {
      BitVec e(n);
      e.set(k, true);
      v.require(c.apply(e) == u * e, "synthesis basis action " + std::to_string(t));
    }
    v.require(c.matrix() == u, "synthesis matrix " + std::to_string(t));
  }
  v.detail << "1000 decompositions up to 16x16, 200 syntheses up to n = 8";
}

// 7. Backend equivalence.
void backend_equivalence(Verdict& v) {
  CounterRng rng(107);
  std::size_t rows = 0;
  for (int t = 0; t < 500; ++t) {
    const auto n = 1 + rng.uniform(6);
    const auto circuit = test_util::random_clifford_circuit(n, 10 + rng.uniform(30), 6, rng);
    const auto tab = sim::enumerate_branches(circuit, Tableau(n));
    const auto sv = sim::enumerate_branches(circuit, StateVector(n));
    std::map<std::vector<std::uint8_t>, double> a;
    std::map<std::vector<std::uint8_t>, double> b;
    for (const auto& br : tab) a[br.bits] += br.probability;
    for (const auto& br : sv) b[br.bits] += br.probability;
    bool same = a.size() == b.size();
    for (const auto& [bits, p] : a) {
      const auto it = b.find(bits);
      same = same && it != b.end() && std::abs(it->second - p) <= 1e-9;
    }
    v.require(same, "probability table circuit " + std::to_string(t));
    for (std::size_t i = 0; i < tab.size() && i < sv.size(); ++i) {
      if (tab[i].bits == sv[i].bits) {
        v.require(sim::fidelity(sim::to_state_vector(tab[i].state), sv[i].state) >= 1.0 - 1e-9,
                  "post-measurement state circuit " + std::to_string(t));
      }
    }
    rows += a.size();
  }
  v.detail << "500 circuits, " << rows << " branch rows agree within 1e-9";
}

// 8. GHZ protocol statistics.
void ghz_statistics(Verdict& v) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto ghz = sim::ghz_state(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (std::popcount(mask) % 2 != 0) continue;
      std::vector<std::uint8_t> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1U;
      v.require(ghz::reject_probability(ghz, x) < 1e-12, "honest reject n=" + std::to_string(n));
    }
  }
  ghz::VerifConfig honest;
  honest.n = 4;
  honest.S = 6;
  honest.trials = 20000;
  honest.seed = 108;
  v.require(ghz::run_protocol(honest).stats.rejects == 0, "honest run rejected");
  v.detail << "honest accept = 1 for every valid x, n <= 5";

  for (const auto& [label, theta] : {std::pair{"pi/8", pi / 8}, std::pair{"pi/4", pi / 4}}) {
    ghz::VerifConfig cfg;
    cfg.n = 4;
    cfg.S = 40;
    cfg.trials = 100000;
    cfg.seed = 208;
    const auto psi = sim::theta_state(4, theta);
    cfg.source = ghz::PureStateSource{psi};
    const auto st = ghz::run_protocol(cfg).stats;
    const double tau = ghz::tau_pure(psi);
    const double predicted = tau * tau / 4.0;
    const double rounds = static_cast<double>(st.accepts + st.rejects);
    const double sigma = std::sqrt(predicted * (1.0 - predicted) / rounds);
    const double rate = st.reject_rate();
    char buf[200];
    const double exact = ghz::exact_reject_probability(psi);
    const double sigma_exact = std::sqrt(exact * (1.0 - exact) / rounds);
    std::snprintf(buf, sizeof buf,
                  "; theta=%s: empirical %.5f vs tau^2/4 %.5f (3 sigma %.5f); exact rate %.5f, %s within 3 sigma",
                  label, rate, predicted, 3 * sigma, exact,
                  std::abs(rate - exact) <= 3 * sigma_exact + 1e-15 ? "empirical" : "empirical NOT");
    v.detail << buf;
    v.require(std::abs(rate - predicted) <= 3 * sigma, std::string("tau^2/4 at theta=") + label);
  }
}

// 9. Impossibility demo.
void impossibility(Verdict& v) {
  const auto s = impossibility_demo(100000, 109);
  v.require(s.real_equal_rate == 1.0, "real world rate");
  v.require(std::abs(s.ideal_equal_rate - 0.5) <= 0.01, "simulator world rate");
  v.require(s.advantage >= 0.49 && s.advantage <= 0.51, "advantage");
  v.detail << "real " << s.real_equal_rate << ", simulator " << s.ideal_equal_rate << ", advantage "
           << s.advantage << " +- " << s.ci95;
}

// 10. Bounds.
void bounds_check(Verdict& v) {
  const auto g = bounds::ghz_epsilon(3, 20);
  v.require(g.exact && *g.exact == bounds::Rational(13, 1024), "ghz_epsilon(3, 20) = 13/1024");
  v.require(bounds::realization_bound(0.0) == 0.0, "realization_bound(0)");
  v.require(bounds::realization_bound(1.0) == 2.0, "realization_bound(1)");
  // mpmath, 60 digits.
  const std::pair<bounds::GraphBoundInput, double> grid[] = {
      {{16, 100, 1, 1, 4}, 0.19823645484916583713},
      {{32, 50, 0.5, 2, 3}, 0.11278022692659349506},
      {{64, 20, 2, 1, 8}, 1.1414591825849062037},
      {{8, 10, 1, 1, 2}, 0.51510525334093964979},
      {{1024, 1000, 1, 1, 10}, 0.0049245394410375823975},
      {{256, 400, 1.5, 1, 16}, 0.018410234059489533863},
  };
  double worst = 50.0;
  for (const auto& [in, frozen] : grid) {
    const auto fast = bounds::graph_epsilon(in);
    const auto hp = bounds::graph_epsilon_high_precision(in);
    const double digits = bounds::agreeing_digits(fast.epsilon, hp.epsilon);
    worst = std::min(worst, digits);
    v.require(digits >= 12.0, "graph_epsilon vs 50-digit evaluation");
    v.require(std::abs(fast.epsilon / frozen - 1.0) <= 1e-12, "graph_epsilon vs frozen value");
  }
  v.detail << "13/1024 exact; graph_epsilon agrees to >= " << std::floor(worst) << " digits on 6 points";
}

struct Criterion {
  int id;
  const char* name;
  double budget_s; // 0: no runtime bound
  std::function<void(Verdict&)> run;
};

} // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "merge soundness", 120, merge_soundness},
      {2, "GHZ shortcut", 10, ghz_shortcut},
      {3, "f-validator consistency", 0, f_consistency},
      {4, "twirl identity", 30, twirl_identity},
      {5, "stabilizer invariance", 0, stabilizer_invariance},
      {6, "pivot and synthesis", 0, pivot_and_synthesis},
      {7, "backend equivalence", 0, backend_equivalence},
      {8, "GHZ protocol statistics", 60, ghz_statistics},
      {9, "impossibility demo", 0, impossibility},
      {10, "bounds", 0, bounds_check},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || id < 1 || id > 10) {
      std::cerr << "usage: acceptance [criterion 1..10]...\n";
      return 2;
    }
    selected.insert(static_cast<int>(id));
  }
  bool ok = true;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) v.require(false, "over the time budget");
    std::string detail = v.detail.str();
    if (!v.pass) detail += " | first failure: " + v.first_failure;
    std::printf("[%s] criterion %d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, detail.c_str(),
                secs);
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}
