// Acceptance criteria: one PASS/FAIL line each. Exit status is the number of
// failed criteria (capped at 1).

#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mockmod/exactq.hpp"
#include "mockmod/harness.hpp"
#include "mockmod/joyce.hpp"

using namespace mockmod;

namespace {

int g_failed = 0;

void line(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

struct Summary {
  int count = 0;
  double worst = 0.0;
  bool all_pass = true;
  std::set<std::string> variants;
};

// Worst residual over every report of one id, against a criterion threshold.
Summary summarize(const std::vector<Report>& reports, const std::string& id, double threshold,
                  const std::function<bool(const Report&)>& keep = nullptr) {
  Summary s;
  for (const auto& r : reports) {
    if (r.check_id != id || (keep && !keep(r))) continue;
    ++s.count;
    if (r.verdict == Verdict::variant) {
      s.variants.insert(r.variant);
      continue;
    }
    s.worst = std::max(s.worst, r.residual);
    s.all_pass = s.all_pass && r.residual <= threshold && r.passed();
  }
  return s;
}

std::string param(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.params)
    if (k == key) return v;
  return "";
}

std::string describe(const std::string& id, const Summary& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s n=%d max=%.2e", id.c_str(), s.count, s.worst);
  return buf;
}

harness::SuiteResult run(harness::Suite suite, std::int64_t* ms) {
  harness::SuiteConfig cfg;
  cfg.suite = suite;
  Stopwatch sw;
  auto res = harness::run_suite(cfg);
  if (ms) *ms = sw.elapsed_ms();
  return res;
}

void criterion_exact_layer() {
  Stopwatch sw;
  const auto table = exactq::rank_table(30);
  const bool enumeration = table == exactq::rank_table_enumerated(30);
  const auto t60 = exactq::rank_table(60);
  bool sums = true;
  for (int n = 0; n <= 60; ++n) sums = sums && t60.moment(0, n) == exactq::partition_number(n);
  bool congr = true;
  for (int n = 0; n <= 100; ++n) {
    congr = congr && exactq::partition_number(5 * n + 4) % 5 == 0;
    congr = congr && exactq::partition_number(7 * n + 5) % 7 == 0;
    congr = congr && exactq::partition_number(11 * n + 6) % 11 == 0;
  }
  const auto ms = sw.elapsed_ms();
  line(1, "exact layer", enumeration && sums && congr && ms < 5000,
       std::string("rank table = enumeration (n<=30): ") + (enumeration ? "yes" : "no") +
           ", sum N(m,n) = p(n) (n<=60): " + (sums ? "yes" : "no") + ", congruences 5/7/11 (n<=100): " +
           (congr ? "yes" : "no") + ", " + std::to_string(ms) + " ms");
}

void criterion_identity_layer() {
  Stopwatch sw;
  const auto R = exactq::rank_generating_function(51);
  const bool r1 = R.at_zeta(1) == exactq::partition_series(51);
  const bool rm1 = R.at_zeta(-1) == exactq::mock_theta_f(51);
  const bool tp = exactq::jacobi_theta_series(40) == exactq::triple_product_series(40);
  using exactq::ThetaKind;
  const auto t1 = exactq::theta_q_expansion(ThetaKind::theta1, 60);
  const auto t3 = exactq::theta_q_expansion(ThetaKind::theta3, 60);
  const bool rw = exactq::theta_q_expansion(ThetaKind::vartheta_m1, 60) == -t1.with_den(4).dilated(2).truncated(240) &&
                  exactq::theta_q_expansion(ThetaKind::vartheta_0, 60) == -t3.dilated(2).truncated(480);
  const auto rows = joyce::comparebin_rows(12);
  bool cb = !rows.empty();
  for (const auto& row : rows) cb = cb && row.lhs == row.rhs;
  const auto ms = sw.elapsed_ms();
  line(2, "identity layer (exact)", r1 && rm1 && tp && rw && cb && ms < 10000,
       std::string("R(1)=P: ") + (r1 ? "yes" : "no") + ", R(-1)=f: " + (rm1 ? "yes" : "no") +
           ", triple product: " + (tp ? "yes" : "no") + ", theta rewrite: " + (rw ? "yes" : "no") + ", comparebin " +
           std::to_string(rows.size()) + " rows: " + (cb ? "equal" : "differ") + ", " + std::to_string(ms) + " ms");
}

void criterion_transformations(const std::vector<Report>& theta, const std::vector<Report>& appell) {
  struct Item {
    const std::vector<Report>* src;
    std::string id;
    double thr;
    int expected;
  };
  // 3 tau, each with S, T and 10 sampled matrices
  const std::vector<Item> items = {
      {&theta, "special.theta.elliptic", 1e-7, 3},  {&theta, "special.theta.modular", 1e-7, 36},
      {&theta, "special.e2.transform", 1e-7, 36},   {&theta, "special.e2hat.transform", 1e-7, 36},
      {&appell, "appell.elliptic", 1e-7, 30},       {&appell, "appell.modular", 1e-7, 72},
      {&theta, "jets.theta8.psi", 1e-8, 36},        {&theta, "jets.theta8.rho", 1e-8, 36},
      {&theta, "jets.theta_quotient.psi", 1e-8, 36}, {&theta, "jets.theta_quotient.rho", 1e-8, 36},
  };
  bool ok = true;
  std::string detail;
  for (const auto& it : items) {
    const Summary s = summarize(*it.src, it.id, it.thr);
    ok = ok && s.all_pass && s.count == it.expected;
    detail += (detail.empty() ? "" : "; ") + describe(it.id, s);
  }
  std::set<std::string> ells;
  for (const auto& r : appell)
    if (r.check_id == "appell.modular") ells.insert(param(r, "ell"));
  ok = ok && ells == std::set<std::string>{"2", "3"};
  line(3, "transformation residuals", ok, detail);
}

void criterion_rank(const std::vector<Report>& rank, std::int64_t ms) {
  const Summary st = summarize(rank, "rank.transform.ST", 1e-6);
  const Summary lsl = summarize(rank, "rank.lowering.Lsl", 1e-5);
  const Summary adj = summarize(rank, "rank.lowering.Lsl.adjudication", 1e-5);
  std::set<std::string> ells;
  for (const auto& r : rank)
    if (r.check_id == "rank.transform.ST") ells.insert(param(r, "ell"));
  const bool ok = st.all_pass && st.count == 108 && lsl.all_pass && lsl.count == 9 && adj.count == 9 &&
                  adj.variants.size() == 1 && ells == std::set<std::string>{"1", "2", "3"} && ms < 30000;
  line(4, "rank completion", ok,
       describe("rank.transform.ST", st) + "; " + describe("rank.lowering.Lsl", lsl) + "; winning variant: " +
           (adj.variants.empty() ? "none" : *adj.variants.begin()) + "; " + std::to_string(ms) + " ms");
}

void criterion_duke(const std::vector<Report>& duke) {
  const Summary match = summarize(duke, "duke.match", 1e-7);
  const Summary nonhol = summarize(duke, "duke.nonhol3", 1e-7);
  const Summary single = summarize(duke, "duke.single_term", 1e-8);
  std::set<std::string> taus, ks;
  for (const auto& r : duke) {
    if (r.check_id == "duke.match") taus.insert(param(r, "tau"));
    if (r.check_id == "duke.single_term") ks.insert(param(r, "k"));
  }
  const bool ok = match.all_pass && nonhol.all_pass && single.all_pass && taus.size() >= 2 && ks.size() == 5;
  line(5, "weight 3/2 identities", ok,
       describe("duke.match", match) + "; " + describe("duke.nonhol3", nonhol) + "; " +
           describe("duke.single_term", single) + "; tau points " + std::to_string(taus.size()));
}

void criterion_joyce(const std::vector<Report>& joyce) {
  const Summary tr = summarize(joyce, "joyce.transform", 1e-6);
  const Summary lo = summarize(joyce, "joyce.lowering", 1e-5);
  const Summary adj = summarize(joyce, "joyce.lowering.adjudication", 1e-5);
  const Summary g14 = summarize(joyce, "joyce.gamma14", 1e-8);
  const Summary lim = summarize(joyce, "joyce.appell_limit", 1e-6);
  std::set<std::string> ks;
  for (const auto& r : joyce)
    if (r.check_id == "joyce.transform") ks.insert(param(r, "k"));
  const bool ok = tr.all_pass && tr.count == 108 && lo.all_pass && lo.count == 9 && adj.count == 9 &&
                  !adj.variants.empty() && g14.all_pass && g14.count > 0 && lim.all_pass && lim.count == 9 &&
                  ks == std::set<std::string>{"2", "4", "6"};
  std::string vs;
  for (const auto& v : adj.variants) vs += (vs.empty() ? "" : ", ") + v;
  line(6, "Joyce completion", ok,
       describe("joyce.transform", tr) + "; " + describe("joyce.lowering", lo) + " (variant: " + vs + "); " +
           describe("joyce.gamma14", g14) + "; " + describe("joyce.appell_limit", lim));
}

void criterion_determinism() {
  harness::SuiteConfig cfg;
  cfg.suite = harness::Suite::all;
  cfg.seed = 1;
  Stopwatch sw;
  const auto a = harness::run_suite(cfg);
  const auto ms = sw.elapsed_ms();
  const auto b = harness::run_suite(cfg);
  const bool same = harness::to_json(cfg, a, false) == harness::to_json(cfg, b, false);
  line(7, "determinism and runtime", same && ms < 120000 && a.exit_code == 0,
       std::string("identical reports: ") + (same ? "yes" : "no") + ", " + std::to_string(a.reports.size()) +
           " reports, exit " + std::to_string(a.exit_code) + ", full default suite " + std::to_string(ms) + " ms");
}

}  // namespace

int main() {
  criterion_exact_layer();
  criterion_identity_layer();
  std::int64_t ms_rank = 0;
  const auto theta = run(harness::Suite::theta, nullptr);
  const auto appell = run(harness::Suite::appell, nullptr);
  criterion_transformations(theta.reports, appell.reports);
  const auto rank = run(harness::Suite::rank, &ms_rank);
  criterion_rank(rank.reports, ms_rank);
  criterion_duke(run(harness::Suite::duke, nullptr).reports);
  criterion_joyce(run(harness::Suite::joyce, nullptr).reports);
  criterion_determinism();
  std::printf("%d of 7 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
