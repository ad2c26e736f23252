// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dyadcert/codec.hpp"
#include "dyadcert/construction.hpp"
#include "dyadcert/measures.hpp"
#include "dyadcert/prop_t.hpp"
#include "dyadcert/talagrand.hpp"
#include "dyadcert/tau.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace dyadcert;

namespace {

struct Tally {
  std::uint64_t cases = 0;
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok && problems.size() < 5) problems.push_back(what);
    if (!ok && problems.size() == 5) problems.push_back("...");
  }
  bool ok() const { return problems.empty(); }
};

int g_failed = 0;

void Report(int id, const std::string& title, const std::function<std::string(Tally&)>& body) {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  try {
    detail = body(t);
  } catch (const std::exception& e) {
    t.problems.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  std::string line = std::string(t.ok() ? "[PASS]" : "[FAIL]") + " criterion " + std::to_string(id) + ": " + title +
                     " (" + detail + ", " + timing + ")";
  for (const auto& p : t.problems) line += "\n       " + p;
  std::printf("%s\n", line.c_str());
  std::fflush(stdout);
  if (!t.ok()) ++g_failed;
}

std::string Pos(std::uint64_t i) { return "case " + std::to_string(i); }

// ---------------------------------------------------------------------------

std::string InequalitySuite(Tally& t) {
  gen::Gen g(0x1e4);
  std::uint64_t hyp_a = 0, hyp_b = 0, oracle_checked = 0;
  const std::uint64_t kCases = 10000;
  for (std::uint64_t c = 0; c < kCases; ++c) {
    const unsigned L = g.range(0, 8);
    const ClopenSet a = g.any_set(L), b = g.any_set(L), b2 = g.any_set(L), u = g.any_set(L);
    const ClopenSet w = g.any_set(L), w2 = g.any_set(L), z = g.any_set(L);
    const ClopenSet z2 = difference(g.any_set(L), z);  // disjoint from z
    const unsigned m = g.range(0, 9);
    const Rational d = lambda(symdiff(b2, b));
    const ClopenSet ab = meet(meet(a, b), u), ab2 = meet(meet(a, b2), u);
    const ClopenSet x1 = meet(meet(a, difference(b2, b)), u), x2 = meet(meet(a, difference(b, b2)), u);
    // perturbing B to B' inside A∩U
    t.expect(lambda(ab2) <= lambda(ab) + d, Pos(c) + ": (1)");
    t.expect(lambda(difference(u, meet(a, b2))) <= lambda(difference(u, meet(a, b))) + d, Pos(c) + ": (2)");
    t.expect(phi(ab2, m) <= phi(ab, m) + psi(x1, x2, m), Pos(c) + ": (3)");
    t.expect(psi(x1, x2, m) <= d, Pos(c) + ": (4)");
    t.expect(phi(ab2, m) <= phi(ab, m) + d, Pos(c) + ": (5)");
    // disjoint Z, Z'
    const ClopenSet zz = join(z, z2);
    t.expect(phi(meet(w, zz), m) <= phi(meet(w, z), m) + phi(meet(w, z2), m), Pos(c) + ": union phi");
    t.expect(psi(meet(w, zz), meet(w2, zz), m) <= psi(meet(w, z), meet(w2, z), m) + psi(meet(w, z2), meet(w2, z2), m),
             Pos(c) + ": union psi");
    // perturbation of psi
    t.expect(psi(w, z, m) <= psi(w2, z2, m) + lambda(symdiff(w, w2)) + lambda(symdiff(z, z2)), Pos(c) + ": psi shift");
    // basic identities
    t.expect(psi(w, z, m) == psi(z, w, m) && psi(w, z, m) <= phi(w, m) + phi(z, m), Pos(c) + ": psi symmetry");
    t.expect(psi(ClopenSet::Empty(), w, m) == phi(w, m), Pos(c) + ": psi with empty");
    t.expect(lambda(w) + lambda(z) == lambda(join(w, z)) + lambda(meet(w, z)), Pos(c) + ": additivity");
    t.expect(phi(w, m) <= lambda(w), Pos(c) + ": phi <= lambda");
    if (m > w.canonical().level()) t.expect(phi(w, m).is_zero(), Pos(c) + ": even split");

    // Difference of two near-trivial sets, with halved hypotheses. U is an atom of level n and
    // A, B are perturbations of level-n sets so the hypotheses fire often.
    const unsigned n = g.range(1, 4);
    const unsigned fine = std::min(8u, n + g.range(1, 4));
    const ClopenSet uu = ClopenSet::Atom({n, g.below(std::uint64_t{2} << n)});
    const Rational eps = Rational(static_cast<long>(g.range(1, 16)), 4);
    const std::uint64_t budget = g.below(3);
    const ClopenSet aa = g.perturb(g.set(n, 1, 2), n, fine, budget);
    const ClopenSet bb = g.perturb(g.set(n, 1, 2), n, fine, budget);
    const Rational lu = lambda(uu);
    const Rational nn(static_cast<long>(n));
    auto alt = [&](const ClopenSet& s, const Rational& bound) {
      return lambda(meet(s, uu)) <= bound || lambda(difference(uu, s)) <= bound;
    };
    if (alt(aa, eps * lu / (Rational(2) * nn)) && alt(meet(aa, bb), eps * lu / (Rational(2) * nn))) {
      ++hyp_a;
      t.expect(alt(difference(aa, bb), eps * lu / nn), Pos(c) + ": complement (a)");
    }
    bool hb = true;
    for (unsigned mm = n + 1; mm <= fine && hb; ++mm) {
      const Rational bound = eps * lu / (Rational(2) * Rational(static_cast<long>(mm)));
      hb = phi(meet(aa, uu), mm) <= bound && phi(meet(meet(aa, bb), uu), mm) <= bound;
    }
    if (hb) {
      ++hyp_b;
      for (unsigned mm = n + 1; mm <= fine; ++mm) {
        t.expect(phi(meet(difference(aa, bb), uu), mm) <= eps * lu / Rational(static_cast<long>(mm)),
                 Pos(c) + ": complement (b) at m=" + std::to_string(mm));
      }
    }

    // library against the bit-vector reference on every tenth tuple
    if (c % 10 == 0) {
      ++oracle_checked;
      const unsigned top = std::max(L, m);
      const auto oa = oracle::Expand(a, top), ob = oracle::Expand(b, top), ob2 = oracle::Expand(b2, top);
      const auto ou = oracle::Expand(u, top);
      const auto oab2 = oracle::Meet(oracle::Meet(oa, ob2), ou);
      const auto ox1 = oracle::Meet(oracle::Meet(oa, oracle::Minus(ob2, ob)), ou);
      const auto ox2 = oracle::Meet(oracle::Meet(oa, oracle::Minus(ob, ob2)), ou);
      t.expect(oracle::Measure(oab2) == lambda(ab2), Pos(c) + ": lambda vs reference");
      t.expect(oracle::Phi(oab2, m) == phi(ab2, m), Pos(c) + ": phi vs reference");
      t.expect(oracle::Psi(ox1, ox2, m) == psi(x1, x2, m), Pos(c) + ": psi vs reference");
      t.expect(oracle::Measure(oracle::Sym(ob2, ob)) == d, Pos(c) + ": symdiff vs reference");
    }
    ++t.cases;
  }
  t.expect(hyp_a >= 1000 && hyp_b >= 1000, "difference hypotheses fired too rarely");
  return std::to_string(t.cases) + " tuples; complement hypotheses met " + std::to_string(hyp_a) + "/" +
         std::to_string(hyp_b) + " times; " + std::to_string(oracle_checked) + " reference cross-checks";
}

// ---------------------------------------------------------------------------

std::string PropertyT(Tally& t) {
  gen::Gen g(0x7);
  const Rational eps_list[] = {Rational(1, 2), Rational(1, 8), Rational(1, 64)};
  std::uint64_t exclusive_checked = 0;
  for (std::uint64_t c = 0; c < 1000; ++c) {
    const auto fam = g.family(6, 8);
    for (const auto& eps : eps_list) {
      const PropTLevel lvl = find_prop_t_level(fam, eps, 0);
      const std::string replay = ReverifyCertificate(fam, lvl.certificate);
      t.expect(replay.empty(), Pos(c) + ": certificate replay: " + replay);
      t.expect(lvl.n >= 1 && lvl.certificate.n == lvl.n, Pos(c) + ": level");
      if (lvl.n > 1) t.expect(!check_prop_t_at(fam, eps, lvl.n - 1).passed(), Pos(c) + ": not minimal");
      // exclusivity against reference measures of A∩U and U∖A
      if (eps / Rational(static_cast<long>(lvl.n)) < Rational(1, 2)) {
        for (const auto& r : lvl.certificate.records) {
          const ClopenSet u = ClopenSet::Atom({lvl.n, r.atom});
          const unsigned top = std::max(lvl.n, fam[r.member].level());
          const auto oa = oracle::Expand(fam[r.member], top), ou = oracle::Expand(u, top);
          const Rational bound = eps * lambda(u) / Rational(static_cast<long>(lvl.n));
          const bool omits = oracle::Measure(oracle::Meet(oa, ou)) <= bound;
          const bool fills = oracle::Measure(oracle::Minus(ou, oa)) <= bound;
          t.expect(!(omits && fills), Pos(c) + ": both alternatives hold");
          t.expect(omits == r.omits && fills == r.fills, Pos(c) + ": tag disagrees with reference");
          ++exclusive_checked;
        }
      }
      // subfamilies certify at the same n and find a level no larger
      std::vector<ClopenSet> sub;
      for (const auto& a : fam) {
        if (g.coin()) sub.push_back(a);
      }
      if (sub.empty()) sub.push_back(fam.front());
      t.expect(check_prop_t_at(sub, eps, lvl.n).passed(), Pos(c) + ": subfamily fails at n");
      t.expect(find_prop_t_level(sub, eps, 0).n <= lvl.n, Pos(c) + ": subfamily needs a larger n");
      // larger tolerance and larger n stay certified
      t.expect(check_prop_t_at(fam, eps * Rational(2), lvl.n).passed(), Pos(c) + ": doubled epsilon fails");
      ++t.cases;
    }
  }
  return std::to_string(t.cases) + " (family, epsilon) pairs; " + std::to_string(exclusive_checked) +
         " exclusivity checks";
}

// ---------------------------------------------------------------------------

std::string Witnesses(Tally& t) {
  const VwCounterexample c = build_vw_counterexample(ClopenSet::Coordinate(0, 0), 10);
  t.expect(c.witnesses.size() == 10, "expected 10 witnesses");
  for (const auto& w : c.witnesses) {
    const Rational half = lambda(w.u) / Rational(2);
    t.expect(w.half == half, "n=" + std::to_string(w.n) + ": half is not lambda(U)/2");
    t.expect(w.inside == half, "n=" + std::to_string(w.n) + ": inside " + w.inside.str());
    t.expect(w.outside == half, "n=" + std::to_string(w.n) + ": outside " + w.outside.str());
    t.expect(w.others_disjoint, "n=" + std::to_string(w.n) + ": other tau_j meet U");
    ++t.cases;
  }
  t.expect(c.all_equal(), "all_equal() is false");
  return std::to_string(t.cases) + " witness atoms, N=" + std::to_string(c.big_n);
}

// ---------------------------------------------------------------------------

std::string TauLaws(Tally& t) {
  gen::Gen g(0x7a0);
  std::uint64_t attempts = 0, pairs = 0, nontrivial = 0;
  while (t.cases < 120 && attempts < 5000) {
    ++attempts;
    const unsigned n = g.range(1, 4);
    const unsigned fine = n + g.range(2, 5);
    const Rational eps(static_cast<long>(g.range(1, 15)), 64);
    const std::uint64_t budget = (eps * Rational::Pow2(static_cast<int>(fine - n)) / Rational(static_cast<long>(n)))
                                     .floor()
                                     .get_ui();
    // cells: each level-n atom is dominated by one cell; at most `budget`
    // stray fine atoms belong to other cells
    const unsigned cells = g.range(2, 4);
    std::vector<std::vector<std::uint64_t>> cell_atoms(cells);
    const std::uint64_t per = std::uint64_t{1} << (fine - n);
    for (std::uint64_t u = 0; u < (std::uint64_t{2} << n); ++u) {
      const unsigned dom = static_cast<unsigned>(g.below(cells));
      std::vector<unsigned> owner(per, dom);
      const std::uint64_t strays = budget == 0 ? 0 : g.below(std::min<std::uint64_t>(budget, per) + 1);
      for (std::uint64_t s = 0; s < strays; ++s) owner[g.below(per)] = static_cast<unsigned>(g.below(cells));
      for (std::uint64_t h = 0; h < per; ++h) cell_atoms[owner[h]].push_back(u | (h << (n + 1)));
    }
    std::vector<ClopenSet> gens;
    for (auto& ca : cell_atoms) gens.push_back(ClopenSet::FromAtoms(fine, ca));
    const auto elements = generate_algebra(gens);
    if (elements.size() > 16) continue;
    TauMap map;
    try {
      map = build_tau(elements, n, eps);
    } catch (const TauHypothesisError&) {
      continue;  // the stray budget can still break a union's hypothesis
    }
    ++t.cases;
    const std::uint64_t count = elements.size();
    const std::uint64_t full = count - 1;
    t.expect(map.verification.ok(), Pos(t.cases) + ": built-in verification: " + map.verification.first_failure);
    t.expect(map.images[0].empty() && map.images[full].is_full(), Pos(t.cases) + ": 0 or 1 not fixed");
    for (std::uint64_t s = 0; s < count; ++s) {
      t.expect(map.images[full & ~s] == complement(map.images[s]), Pos(t.cases) + ": complement law");
      for (std::uint64_t r = 0; r < count; ++r) {
        t.expect(map.images[s | r] == join(map.images[s], map.images[r]), Pos(t.cases) + ": join law");
        t.expect(map.images[s & r] == meet(map.images[s], map.images[r]), Pos(t.cases) + ": meet law");
        ++pairs;
      }
      const auto oe = oracle::Expand(elements[s], fine), oi = oracle::Expand(map.images[s], fine);
      const Rational err = oracle::Measure(oracle::Sym(oe, oi));
      t.expect(err <= eps / Rational(static_cast<long>(n)), Pos(t.cases) + ": approximation bound");
      if (!err.is_zero()) ++nontrivial;
    }
  }
  t.expect(t.cases >= 100, "only " + std::to_string(t.cases) + " algebras met the hypothesis");
  return std::to_string(t.cases) + " algebras, " + std::to_string(pairs) + " element pairs, " +
         std::to_string(nontrivial) + " elements moved by tau";
}

// ---------------------------------------------------------------------------

std::string Nikodym(Tally& t) {
  gen::Gen g(0x41c);
  std::uint64_t rows = 0;
  for (std::uint64_t c = 0; c < 100; ++c) {
    const auto fam = g.family(4, 6);
    const Rational eps = g.coin() ? Rational(1, 2) : Rational(1, 8);
    const unsigned fam_level = max_canonical_level(fam);
    const unsigned m_max = std::max(fam_level, 1u) + 3;
    const NikodymReport rep = nikodym_demo(fam, eps, m_max);
    t.expect(rep.ok(), Pos(c) + ": report not ok");
    t.expect(rep.symbolic_from <= m_max + 1 || rep.n >= m_max, Pos(c) + ": scan stops before the symbolic tail");
    for (const auto& row : rep.rows) {
      const SignedMeasure mu = nikodym_witness(row.m, std::max(row.m, fam_level));
      t.expect(row.norm == Rational(static_cast<long>(row.m)) && mu.norm() == row.norm, Pos(c) + ": norm != m");
      for (const auto& a : fam) {
        const unsigned top = std::max(row.m, a.level());
        const Rational ref = Rational(static_cast<long>(row.m)) * oracle::Balance(oracle::Expand(a, top), row.m);
        t.expect(mu(a) == ref, Pos(c) + ": atom sum differs from the formula");
        t.expect(ref.abs() <= eps, Pos(c) + ": |mu_m(A)| > eps at m=" + std::to_string(row.m));
        if (row.m > a.canonical().level()) t.expect(ref.is_zero(), Pos(c) + ": tail value nonzero");
      }
      ++rows;
    }
    ++t.cases;
  }
  return std::to_string(t.cases) + " families, " + std::to_string(rows) + " scanned rows";
}

// ---------------------------------------------------------------------------

std::string SolverVsOracle(Tally& t) {
  t.expect(n_zero(1, Rational::Pow2(-13)) == 28, "n_zero(1, 2^-13) != 28");
  gen::Gen g(0x5017);
  std::uint64_t attempts = 0, met = 0, swaps = 0;
  while (t.cases < 200 && attempts < 20000) {
    ++attempts;
    const TalagrandInstance inst = gen::RelaxedInstance(g);
    std::variant<TalagrandReport, OracleInfeasible> oracle_result;
    try {
      oracle_result = exhaustive_oracle(inst, 100000);
    } catch (const InputError&) {
      continue;  // Q' too small for k atoms
    }
    if (std::holds_alternative<OracleInfeasible>(oracle_result)) continue;
    const auto& best = std::get<TalagrandReport>(oracle_result);
    const TalagrandReport got = solve(inst, attempts, SearchBudget{});
    ++t.cases;
    const std::string id = Pos(t.cases);
    t.expect(got.s_score >= best.s_score, id + ": solver beats the exhaustive minimum");
    t.expect(got.s_score == s_score(got.m, inst), id + ": reported S differs from recomputation");
    t.expect(lambda(got.m) == got.eta_prime, id + ": lambda(M) != eta'");
    if (best.verdict == Verdict::kBoundMet) {
      ++met;
      t.expect(got.verdict == Verdict::kBoundMet, id + ": oracle meets the bound, solver does not");
    }
    const LocalOptimality lo = ReplayLocalOptimality(inst, got.m);
    t.expect(lo.local_optimum && lo.linearized, id + ": local optimality replay failed");
    const LocalOptimality lo_oracle = ReplayLocalOptimality(inst, best.m);
    t.expect(lo_oracle.local_optimum && lo_oracle.linearized, id + ": oracle minimizer not locally optimal");
    // swap identity for a few random swaps
    const auto ms = got.m.at_level(inst.n).atom_indices();
    const ClopenSet qprime =
        difference(inst.q, join(join(inst.p, meet(inst.r, inst.q)), meet(inst.z, inst.q))).at_level(inst.n);
    std::vector<std::uint64_t> outside;
    for (auto i : qprime.atom_indices()) {
      if (!got.m.at_level(inst.n).has_atom(i)) outside.push_back(i);
    }
    for (int s = 0; s < 4 && !ms.empty() && !outside.empty(); ++s) {
      const auto u = ms[g.below(ms.size())], v = outside[g.below(outside.size())];
      t.expect(CheckSwapIdentity(inst, got.m, u, v), id + ": swap identity");
      ++swaps;
    }
  }
  t.expect(t.cases >= 200, "only " + std::to_string(t.cases) + " oracle-feasible instances");
  return std::to_string(t.cases) + " instances (" + std::to_string(met) + " with the bound met by the oracle), " +
         std::to_string(swaps) + " swap identities";
}

// ---------------------------------------------------------------------------

std::string PaleyZygmund(Tally& t) {
  t.expect(pz_zeta(Rational(1, 4), Rational(1)) == Rational(75, 256), "zeta(1/4, 1) != 75/256");
  gen::Gen g(0x9a);
  std::uint64_t preconditions = 0, degenerate = 0;
  Rational worst(1);
  for (std::uint64_t c = 0; c < 400 && preconditions < 60; ++c) {
    TalagrandInstance inst;
    inst.relaxed = true;
    inst.t = g.range(1, 2);
    inst.n = inst.t + g.range(8, 11);
    const unsigned n = inst.n;
    inst.g = {inst.t, g.below(std::uint64_t{2} << inst.t)};
    const ClopenSet gset = ClopenSet::Atom(inst.g).at_level(n);
    const std::uint64_t in_g = std::uint64_t{1} << (n - inst.t);
    // strict shape: Q fills 19/20 of G, P, R, Z and M each take a handful of atoms
    auto sprinkle = [&](std::uint64_t count) {
      const auto atoms = gset.atom_indices();
      std::vector<std::uint64_t> pick;
      for (std::uint64_t i = 0; i < count; ++i) pick.push_back(atoms[g.below(atoms.size())]);
      return ClopenSet::FromAtoms(n, pick);
    };
    inst.q = difference(gset, sprinkle(in_g / 40));
    inst.p = sprinkle(g.range(0, 2));
    inst.r = sprinkle(g.range(0, 3));
    inst.z = sprinkle(g.range(0, 3));
    const std::uint64_t k = std::max<std::uint64_t>(1, in_g / 1000);
    inst.eta = Rational(static_cast<long>(2 * k + 1), 2L << n);
    const TalagrandReport sol = solve(inst, c, SearchBudget{});
    const PzReport rep = paley_zygmund_check(inst, sol.m, Rational(1, 4), PzMode{});
    ++t.cases;
    t.expect(rep.exact && rep.trials == rep.omega_atoms, Pos(c) + ": enumeration incomplete");
    t.expect(rep.omega_large, Pos(c) + ": lambda(Omega) < (4/5) lambda(G) on a strict-shaped fixture");
    if (rep.degenerate) {
      ++degenerate;
      continue;
    }
    if (rep.omega_large) {
      ++preconditions;
      worst = Min(worst, rep.probability);
      t.expect(rep.probability > rep.zeta, Pos(c) + ": probability " + rep.probability.str() + " <= zeta");
    }
  }
  t.expect(preconditions >= 50, "only " + std::to_string(preconditions) + " instances met the preconditions");
  return std::to_string(t.cases) + " enumerated instances, " + std::to_string(preconditions) +
         " with preconditions, " + std::to_string(degenerate) + " degenerate, smallest probability " + worst.str();
}

// ---------------------------------------------------------------------------

std::string Oscillation(Tally& t) {
  const auto pre = fixtures::OscillationFixture(8);
  const ClopenSet b = ClopenSet::Coordinate(0, 0);
  const OscillationReport rep = oscillation_check(pre, b);
  t.expect(rep.issues.empty(), "prefix issues reported");
  for (const auto& e : rep.entries) {
    t.expect(e.outside_variation == Rational(1, 20), "|nu|(H^c) != 1/20");
    t.expect(e.hypothesis && e.conclusion, "hypothesis or conclusion false at index " + std::to_string(e.index));
    if (e.even) {
      t.expect(e.value == Rational(3, 20) && e.derived_bound == Rational(3, 20), "even bound is not 3/20");
    } else {
      t.expect(e.value == Rational(1, 4) && e.derived_bound == Rational(1, 4), "odd bound is not 1/4");
    }
    ++t.cases;
  }
  t.expect(rep.separated && rep.gap >= Rational(1, 10), "separation below 1/10");
  t.expect(rep.ok(), "report not ok");
  return std::to_string(t.cases) + " entries, even max " + rep.even_max.str() + ", odd min " + rep.odd_min.str() +
         ", gap " + rep.gap.str();
}

// ---------------------------------------------------------------------------

std::string Quadruples(Tally& t) {
  {
    const QuadrupleContext ctx = fixtures::PointMassContext(6, 4);
    t.expect(validate_good_quadruple(GoodQuadruple{}, ctx).good, "empty quadruple rejected");
  }
  gen::Gen g(0x900d);
  std::uint64_t truncations = 0;
  for (std::uint64_t c = 0; c < 100; ++c) {
    const auto sq = fixtures::MakeSyntheticQuadruple(g);
    const QuadrupleReport full = validate_good_quadruple(sq.e, sq.ctx);
    t.expect(full.good, Pos(c) + ": synthetic quadruple not good" +
                            (full.failures.empty() ? "" : " (" + full.failures.front().code + ")"));
    for (int p = -1; p < sq.e.p_prime(); ++p) {
      const GoodQuadruple head = sq.e.truncated(p);
      t.expect(head.p_prime() == p, Pos(c) + ": truncation length");
      t.expect(validate_good_quadruple(head, sq.ctx).good, Pos(c) + ": prefix " + std::to_string(p) + " not good");
      ++truncations;
    }
    ++t.cases;
  }

  const QuadrupleContext ctx = fixtures::PointMassContext(20, 8);
  const ExtendResult r =
      extend_quadruple(GoodQuadruple{}, ClopenSet::Coordinate(0, 0), ctx, Mode::kRelaxed, 1, SearchBudget{});
  const QuadrupleReport independent = validate_good_quadruple(r.extended, ctx);
  t.expect(independent.good && r.validation.good, "extended quadruple rejected by the validator");
  t.expect(r.extended.p_prime() == 0, "p' not incremented");
  t.expect(r.troisieme.valid(), "set constructor output fails its own validation");
  bool strict = r.extended.m.front() >= 1;
  for (std::size_t i = 1; i < r.extended.m.size(); ++i) strict = strict && r.extended.m[i] > r.extended.m[i - 1];
  for (std::size_t i = 1; i < r.extended.n.size(); ++i) strict = strict && r.extended.n[i] > r.extended.n[i - 1];
  t.expect(strict, "monotonicity not strict");

  // and once more from the extended quadruple of a synthetic one
  return std::to_string(t.cases) + " synthetic quadruples, " + std::to_string(truncations) +
         " prefixes; extension: m=" + std::to_string(r.constants.m_next) + " t=" + std::to_string(r.constants.t) +
         " gamma=" + r.constants.gamma.str() + " n=(" + std::to_string(r.constants.n_even) + "," +
         std::to_string(r.constants.n_odd) + ")";
}

// ---------------------------------------------------------------------------

std::string Determinism(Tally& t) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dyadcert_acceptance";
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const codec::Json& j) {
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump();
    return p.string();
  };
  gen::Gen g(0xd);
  const std::string family = write("family.json", codec::FamilyToJson(g.family(4, 6)));
  std::vector<ClopenSet> cells = {ClopenSet::Coordinate(0, 0), ClopenSet::Coordinate(1, 1)};
  const std::string elements = write("elements.json", codec::FamilyToJson(generate_algebra(cells)));
  TalagrandInstance inst;
  for (;;) {
    inst = gen::RelaxedInstance(g);
    try {
      solve(inst, 0, SearchBudget{});
      break;
    } catch (const InputError&) {
    }
  }
  const std::string instance = write("instance.json", codec::ToJson(inst));
  const std::string mset = write("m.json", codec::ToJson(solve(inst, 3, SearchBudget{}).m));
  const QuadrupleContext ctx = fixtures::PointMassContext(20, 8);
  codec::Json cj;
  codec::Json entries = codec::Json::array();
  for (const auto& e : ctx.prefix.entries) {
    codec::Json x;
    x["index"] = e.index;
    x["nu"] = codec::ToJson(e.nu);
    x["H"] = codec::ToJson(e.h);
    entries.push_back(x);
  }
  cj["prefix"]["entries"] = entries;
  cj["theta"] = codec::ToJson(ctx.theta);
  const auto& d = *ctx.decomposition;
  cj["decomposition"]["theta1"] = codec::ToJson(d.theta1);
  cj["decomposition"]["theta2"] = codec::ToJson(d.theta2);
  cj["decomposition"]["modulus"] = codec::Json::array({{{"epsilon", "1/100"}, {"delta", "1"}}});
  cj["decomposition"]["X"] = codec::ToJson(d.x);
  cj["decomposition"]["epsilonX"] = "1/100";
  const std::string context = write("context.json", cj);
  codec::Json q = codec::ToJson(GoodQuadruple{});
  q["extendWith"] = codec::ToJson(ClopenSet::Coordinate(0, 0));
  const std::string quad = write("quadruple.json", q);
  const std::string bset = write("b.json", codec::ToJson(ClopenSet::Coordinate(0, 0)));

  const std::vector<std::vector<std::string>> commands = {
      {"prop-t", "certify", "--family", family, "--epsilon", "1/8"},
      {"prop-t", "counterexample", "--w", bset, "--depth", "6"},
      {"tau", "build", "--elements", elements, "--n", "2", "--epsilon", "1/8"},
      {"talagrand", "solve", "--instance", instance, "--seed", "42", "--restarts", "3", "--relaxed"},
      {"talagrand", "pz", "--instance", instance, "--m", mset, "--xi", "1/4", "--mode", "sample:500:9"},
      {"talagrand", "n-zero", "--t", "1", "--eta", "1/8192"},
      {"measure", "witness", "--n", "3", "--level", "4"},
      {"measure", "nikodym-demo", "--family", family, "--epsilon", "1/8", "--m-max", "9"},
      {"measure", "decomp-validate", "--context", context},
      {"quadruple", "validate", "--quadruple", quad, "--context", context},
      {"quadruple", "extend", "--quadruple", quad, "--context", context, "--relaxed", "--seed", "5"},
      {"set", "phi", "--a", bset, "--m", "0"},
  };
  for (const auto& cmd : commands) {
    std::string outs[2], manifests[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const std::string mpath = (dir / ("manifest" + std::to_string(rep) + ".json")).string();
      std::vector<std::string> argv = cmd;
      argv.insert(argv.begin(), {"--manifest", mpath});
      std::string err;
      codes[rep] = cli::Run(argv, nullptr, outs[rep], err);
      std::ifstream f(mpath);
      manifests[rep].assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
      // manifests name their own path; compare everything else
      const auto pos = manifests[rep].find(mpath);
      if (pos != std::string::npos) manifests[rep].erase(pos, mpath.size());
    }
    const std::string name = cmd[0] + (cmd.size() > 1 && cmd[1][0] != '-' ? " " + cmd[1] : "");
    t.expect(codes[0] == codes[1] && codes[0] <= 1, name + ": exit codes " + std::to_string(codes[0]));
    t.expect(!outs[0].empty() && outs[0] == outs[1], name + ": stdout differs");
    t.expect(!manifests[0].empty() && manifests[0] == manifests[1], name + ": manifest differs");
    ++t.cases;
  }
  fs::remove_all(dir);
  return std::to_string(t.cases) + " commands run twice";
}

}  // namespace

int main() {
  Report(1, "inequality suite", InequalitySuite);
  Report(2, "property (T) certification", PropertyT);
  Report(3, "V_W witnesses split every atom in half", Witnesses);
  Report(4, "tau homomorphism laws and approximation", TauLaws);
  Report(5, "pointwise-small, norm-m witness measures", Nikodym);
  Report(6, "swap search against the exhaustive oracle", SolverVsOracle);
  Report(7, "Paley-Zygmund probability", PaleyZygmund);
  Report(8, "oscillation bounds", Oscillation);
  Report(9, "good-quadruple validation and extension", Quadruples);
  Report(10, "byte-identical reruns", Determinism);
  std::printf("%d of 10 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
