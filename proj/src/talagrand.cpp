#include "dyadcert/talagrand.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "dyadcert/errors.hpp"
#include "dyadcert/util.hpp"

namespace dyadcert {

unsigned n_zero(unsigned t, const Rational& eta) {
  if (eta.sign() <= 0) throw InputError("eta must be > 0");
  const mpz_class num = eta.numerator();
  const mpz_class den = eta.denominator();
  for (unsigned n = t;; ++n) {
    // n^3 <= (num/den)·2^n  <=>  n^3·den <= num·2^n
    mpz_class lhs = mpz_class(n) * n * n * den;
    mpz_class rhs = num;
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), n);
    if (lhs <= rhs) return n;
  }
}

Rational select_eta_prime(const Rational& eta, unsigned n) {
  if (eta.sign() <= 0) throw InputError("eta must be > 0");
  const int e = static_cast<int>(n + 1);
  const mpz_class k = (eta * Rational::Pow2(e)).ceil() - 1;
  const Rational candidate = Rational::Dyadic(k, -e);
  if (k <= 0 || !(candidate > eta / Rational(2))) {
    throw InputError("no multiple of 2^-" + std::to_string(n + 1) + " lies strictly between eta/2 and eta (eta=" +
                     eta.str() + "); use a larger n");
  }
  return candidate;
}

const char* VerdictName(Verdict v) {
  return v == Verdict::kBoundMet ? "BOUND_MET" : "BOUND_MISSED";
}

void ValidateInstance(const TalagrandInstance& inst) {
  if (inst.t == 0) throw PreconditionError("t must be > 0");
  if (inst.eta.sign() <= 0) throw PreconditionError("eta must be > 0");
  if (inst.n < inst.t) throw PreconditionError("n must be >= t");
  if (inst.g.level != inst.t || inst.g.index >= (std::uint64_t{2} << inst.t)) {
    throw PreconditionError("G must be an atom of level t");
  }
  const std::pair<const ClopenSet*, const char*> sets[] = {
      {&inst.p, "P"}, {&inst.r, "R"}, {&inst.z, "Z"}, {&inst.q, "Q"}};
  for (auto [s, name] : sets) {
    if (s->minimal_level() > inst.n) {
      throw PreconditionError(std::string(name) + " is not a union of level-n atoms");
    }
  }
  if (!inst.relaxed) {
    if (!(inst.eta < Rational::Pow2(-static_cast<int>(inst.t) - 11))) {
      throw PreconditionError("strict mode requires eta < 2^-(t+11)");
    }
    const Rational small = Rational::Pow2(-8) * inst.eta * inst.eta;
    for (auto [s, name] : {sets[0], sets[1], sets[2]}) {
      if (lambda(*s) > small) {
        throw PreconditionError(std::string("strict mode requires lambda(") + name + ") <= 2^-8 eta^2");
      }
    }
    const ClopenSet g = ClopenSet::Atom(inst.g);
    if (lambda(meet(inst.q, g)) < Rational(19, 20) * lambda(g)) {
      throw PreconditionError("strict mode requires lambda(Q∩G) >= 19/20 lambda(G)");
    }
    const unsigned n0 = n_zero(inst.t, inst.eta);
    if (n0 > max_level()) {
      ScaleReport r;
      r.reason = "strict instance needs n >= n0 = " + std::to_string(n0) +
                 ", beyond the configured maximum level " + std::to_string(max_level());
      r.required_level = n0;
      r.max_level = max_level();
      r.n_zero = n0;
      r.bytes_per_set = (std::uint64_t{2} << n0) / 8;
      throw ScaleError(r);
    }
    if (inst.n < n0) {
      throw PreconditionError("strict mode requires n >= n0 = " + std::to_string(n0));
    }
  }
  RequireLevel(inst.n, "talagrand instance");
}

namespace {

// Everything in units of d = 2^-(n+1): a set's coordinate-m imbalance is an integer.
struct Workspace {
  unsigned t = 0, n = 0, coords = 0;
  ClopenSet zq, rq, qprime_set;
  std::vector<std::uint64_t> qprime;   // atom indices at level n, ascending
  std::vector<std::int64_t> a_units;   // per coordinate index c (m = t+1+c)
  std::vector<std::int8_t> x;          // x[pos*coords + c] in {+1,-1}
  std::uint64_t k = 0;
  Rational eta_prime;
  Rational bound_units;                // eta·2^(n+1): require m·|S_m| <= bound_units
  std::uint64_t flip = 0;              // index bits t+1..n

  std::int8_t xval(std::size_t pos, unsigned c) const { return x[pos * coords + c]; }
};

Workspace Prepare(const TalagrandInstance& inst) {
  ValidateInstance(inst);
  Workspace w;
  w.t = inst.t;
  w.n = inst.n;
  w.coords = inst.n - inst.t;
  w.zq = meet(inst.z, inst.q);
  w.rq = meet(inst.r, inst.q);
  w.qprime_set = difference(inst.q, join(join(inst.p, w.rq), w.zq)).at_level(inst.n);
  w.qprime = w.qprime_set.atom_indices();
  if (w.qprime.empty()) throw InputError("Q' = Q minus (P∪R∪Z) is empty");
  w.eta_prime = select_eta_prime(inst.eta, inst.n);
  w.k = (w.eta_prime * Rational::Pow2(static_cast<int>(inst.n + 1))).floor().get_ui();
  if (w.k > w.qprime.size()) {
    throw InputError("Q' has " + std::to_string(w.qprime.size()) + " atoms, fewer than k = " +
                     std::to_string(w.k));
  }
  w.bound_units = inst.eta * Rational::Pow2(static_cast<int>(inst.n + 1));
  const ClopenSet zn = w.zq.at_level(inst.n);
  const ClopenSet rn = w.rq.at_level(inst.n);
  for (unsigned c = 0; c < w.coords; ++c) {
    const unsigned m = inst.t + 1 + c;
    w.a_units.push_back(zn.mask().balance(m) - rn.mask().balance(m));
    w.flip |= std::uint64_t{1} << m;
  }
  w.x.resize(w.qprime.size() * w.coords);
  for (std::size_t pos = 0; pos < w.qprime.size(); ++pos) {
    for (unsigned c = 0; c < w.coords; ++c) {
      w.x[pos * w.coords + c] = ((w.qprime[pos] >> (inst.t + 1 + c)) & 1u) ? -1 : 1;
    }
  }
  return w;
}

struct Candidate {
  std::vector<std::size_t> members;  // positions into qprime, ascending
  std::vector<std::int64_t> s;       // S_m = A_m + B_m per coordinate
  std::int64_t score = 0;            // Σ S_m²
  std::uint64_t swaps = 0;
  bool converged = true;
};

std::int64_t Score(const std::vector<std::int64_t>& s) {
  std::int64_t acc = 0;
  for (auto v : s) acc += v * v;
  return acc;
}

bool MeetsBound(const Workspace& w, const std::vector<std::int64_t>& s) {
  for (unsigned c = 0; c < w.coords; ++c) {
    const long m = static_cast<long>(w.t + 1 + c);
    const std::int64_t v = s[c] < 0 ? -s[c] : s[c];
    if (Rational(m * v) > w.bound_units) return false;
  }
  return true;
}

std::vector<std::int64_t> Sums(const Workspace& w, const std::vector<std::size_t>& members) {
  std::vector<std::int64_t> s = w.a_units;
  for (auto pos : members) {
    for (unsigned c = 0; c < w.coords; ++c) s[c] += w.xval(pos, c);
  }
  return s;
}

// g(V) = Σ_c S_c x_c^V via byte tables over the coordinate bits.
class Projector {
 public:
  Projector(const Workspace& w, const std::vector<std::int64_t>& s) : shift_(w.t + 1) {
    const unsigned chunks = (w.coords + 7) / 8;
    tables_.assign(chunks, std::array<std::int64_t, 256>{});
    for (unsigned ch = 0; ch < chunks; ++ch) {
      const unsigned width = std::min(8u, w.coords - ch * 8);
      for (unsigned v = 0; v < 256; ++v) {
        std::int64_t acc = 0;
        for (unsigned b = 0; b < width; ++b) acc += ((v >> b) & 1u) ? -s[ch * 8 + b] : s[ch * 8 + b];
        tables_[ch][v] = acc;
      }
      masks_.push_back(width == 8 ? 0xFFu : ((1u << width) - 1));
    }
  }
  std::int64_t operator()(std::uint64_t atom) const {
    std::int64_t acc = 0;
    const std::uint64_t bits = atom >> shift_;
    for (std::size_t ch = 0; ch < tables_.size(); ++ch) {
      acc += tables_[ch][(bits >> (8 * ch)) & masks_[ch]];
    }
    return acc;
  }

 private:
  unsigned shift_;
  std::vector<std::array<std::int64_t, 256>> tables_;
  std::vector<unsigned> masks_;
};

// Steepest descent over single swaps; ties broken by lowest (out, in) position.
Candidate Descend(const Workspace& w, std::vector<std::size_t> start, std::uint64_t max_swaps) {
  Candidate c;
  std::sort(start.begin(), start.end());
  c.members = std::move(start);
  c.s = Sums(w, c.members);
  std::vector<char> in_m(w.qprime.size(), 0);
  for (auto pos : c.members) in_m[pos] = 1;
  std::vector<std::int64_t> g(w.qprime.size());

  while (true) {
    if (c.swaps >= max_swaps) {
      c.converged = false;
      break;
    }
    Projector proj(w, c.s);
    for (std::size_t pos = 0; pos < w.qprime.size(); ++pos) g[pos] = proj(w.qprime[pos]);
    std::int64_t best = 0;
    std::size_t best_out = 0, best_in = 0, best_slot = 0;
    bool found = false;
    for (std::size_t slot = 0; slot < c.members.size(); ++slot) {
      const std::size_t out = c.members[slot];
      const std::uint64_t u = w.qprime[out];
      const std::int64_t gu = g[out];
      for (std::size_t in = 0; in < w.qprime.size(); ++in) {
        if (in_m[in]) continue;
        const std::uint64_t diff = (u ^ w.qprime[in]) & w.flip;
        const std::int64_t delta = 2 * (g[in] - gu) + 4 * std::popcount(diff);
        if (delta < best) {
          best = delta;
          best_out = out;
          best_in = in;
          best_slot = slot;
          found = true;
        }
      }
    }
    if (!found) break;
    for (unsigned cc = 0; cc < w.coords; ++cc) c.s[cc] += w.xval(best_in, cc) - w.xval(best_out, cc);
    in_m[best_out] = 0;
    in_m[best_in] = 1;
    c.members[best_slot] = best_in;
    std::sort(c.members.begin(), c.members.end());
    ++c.swaps;
  }
  c.score = Score(c.s);
  return c;
}

std::vector<std::size_t> RandomSubset(const Workspace& w, Rng& rng) {
  std::vector<std::size_t> pool(w.qprime.size());
  std::iota(pool.begin(), pool.end(), 0);
  for (std::uint64_t i = 0; i < w.k; ++i) {
    const std::uint64_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(w.k);
  return pool;
}

mpz_class Binomial(std::uint64_t q, std::uint64_t k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), q, k);
  return out;
}

Candidate Oracle(const Workspace& w) {
  Candidate best;
  bool have = false;
  std::vector<std::size_t> comb(w.k);
  std::iota(comb.begin(), comb.end(), 0);
  const std::size_t q = w.qprime.size();
  while (true) {
    std::vector<std::int64_t> s = Sums(w, comb);
    const std::int64_t score = Score(s);
    if (!have || score < best.score) {
      best.members = comb;
      best.s = std::move(s);
      best.score = score;
      have = true;
    }
    // next combination in lexicographic order
    std::size_t i = w.k;
    while (i > 0 && comb[i - 1] == q - w.k + (i - 1)) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < w.k; ++j) comb[j] = comb[j - 1] + 1;
  }
  return best;
}

TalagrandReport MakeReport(const TalagrandInstance& inst, const Workspace& w, const Candidate& c) {
  TalagrandReport rep;
  std::vector<std::uint64_t> atoms;
  for (auto pos : c.members) atoms.push_back(w.qprime[pos]);
  rep.m = ClopenSet::FromAtoms(inst.n, atoms).canonical();
  rep.eta_prime = w.eta_prime;
  rep.k = w.k;
  rep.q_prime_atoms = w.qprime.size();
  rep.trace.swaps = c.swaps;
  rep.trace.oracle_candidates = Binomial(w.qprime.size(), w.k).get_str();
  Evaluate(inst, rep);
  return rep;
}

}  // namespace

Rational s_score(const ClopenSet& m, const TalagrandInstance& inst) {
  if (m.minimal_level() > inst.n) throw InputError("M must be a union of level-n atoms");
  const ClopenSet zq = meet(inst.z, inst.q);
  const ClopenSet rq = meet(inst.r, inst.q);
  Rational acc(0);
  for (unsigned mm = inst.t + 1; mm <= inst.n; ++mm) {
    const Rational v = signed_balance(m, mm) + signed_balance(zq, mm) - signed_balance(rq, mm);
    acc += v * v;
  }
  return acc;
}

void Evaluate(const TalagrandInstance& inst, TalagrandReport& rep) {
  const ClopenSet zq = meet(inst.z, inst.q);
  const ClopenSet rq = meet(inst.r, inst.q);
  const ClopenSet mz = join(rep.m, zq);
  rep.per_m.clear();
  bool all_ok = true;
  Rational s(0);
  for (unsigned m = inst.t + 1; m <= inst.n; ++m) {
    CoordinateRecord rec;
    rec.m = m;
    rec.a = signed_balance(zq, m) - signed_balance(rq, m);
    rec.b = signed_balance(rep.m, m);
    rec.psi = psi(mz, rq, m);
    rec.bound = inst.eta / Rational(static_cast<long>(m));
    rec.ok = rec.psi <= rec.bound;
    all_ok = all_ok && rec.ok;
    s += (rec.a + rec.b) * (rec.a + rec.b);
    rep.per_m.push_back(std::move(rec));
  }
  rep.s_score = s;
  rep.verdict = all_ok ? Verdict::kBoundMet : Verdict::kBoundMissed;
}

TalagrandReport solve(const TalagrandInstance& inst, std::uint64_t seed, const SearchBudget& budget) {
  const Workspace w = Prepare(inst);
  Rng rng(seed);
  Candidate best;
  bool have = false, best_met = false;
  SearchTrace trace;
  std::uint64_t total_swaps = 0;

  auto run = [&](unsigned count) {
    for (unsigned r = 0; r < count; ++r) {
      Candidate c = Descend(w, RandomSubset(w, rng), budget.max_swaps);
      ++trace.restarts_run;
      total_swaps += c.swaps;
      const bool met = MeetsBound(w, c.s);
      if (!have || (met && !best_met) || (met == best_met && c.score < best.score)) {
        best = std::move(c);
        best_met = met;
        have = true;
      }
      if (best_met) return;
    }
  };

  run(std::max(1u, budget.restarts));
  if (!best_met && budget.extra_restarts > 0) {
    trace.escalated = true;
    run(budget.extra_restarts);
  }
  const mpz_class count = Binomial(w.qprime.size(), w.k);
  trace.convergence = best.converged ? "local-optimum" : "swap-budget";
  if (!best_met && count <= mpz_class(static_cast<unsigned long>(budget.oracle_cap))) {
    trace.escalated = true;
    Candidate o = Oracle(w);
    if (MeetsBound(w, o.s) || o.score < best.score) {
      best = std::move(o);
      trace.convergence = "oracle";
    }
    trace.oracle_used = true;
  }
  TalagrandReport rep = MakeReport(inst, w, best);
  trace.swaps = total_swaps;
  trace.oracle_candidates = count.get_str();
  rep.trace = trace;
  return rep;
}

std::variant<TalagrandReport, OracleInfeasible> exhaustive_oracle(const TalagrandInstance& inst,
                                                                  std::uint64_t cap) {
  const Workspace w = Prepare(inst);
  const mpz_class count = Binomial(w.qprime.size(), w.k);
  if (count > mpz_class(static_cast<unsigned long>(cap))) return OracleInfeasible{count.get_str()};
  TalagrandReport rep = MakeReport(inst, w, Oracle(w));
  rep.trace.convergence = "oracle";
  rep.trace.oracle_used = true;
  return rep;
}

LocalOptimality ReplayLocalOptimality(const TalagrandInstance& inst, const ClopenSet& m) {
  LocalOptimality out;
  const ClopenSet zq = meet(inst.z, inst.q);
  const ClopenSet rq = meet(inst.r, inst.q);
  const ClopenSet qprime = difference(inst.q, join(join(inst.p, rq), zq)).at_level(inst.n);
  const ClopenSet mn = m.at_level(inst.n);
  const Rational d = Rational::Pow2(-static_cast<int>(inst.n + 1));
  std::vector<Rational> ab;  // b_m + a_m
  for (unsigned mm = inst.t + 1; mm <= inst.n; ++mm) {
    ab.push_back(signed_balance(mn, mm) + signed_balance(zq, mm) - signed_balance(rq, mm));
  }
  Rational base(0);
  for (const auto& v : ab) base += v * v;
  const Rational slack = Rational(static_cast<long>(inst.n)) * Rational::Pow2(-static_cast<int>(inst.n));
  auto x = [&](std::uint64_t atom, unsigned mm) { return ((atom >> mm) & 1u) ? -1L : 1L; };
  const auto outs = mn.atom_indices();
  std::vector<std::uint64_t> ins;
  qprime.mask().for_each_set([&](std::uint64_t i) {
    if (!mn.has_atom(i)) ins.push_back(i);
  });
  for (auto u : outs) {
    for (auto v : ins) {
      ++out.swaps_checked;
      Rational swapped(0), linear(0);
      for (unsigned c = 0; c < ab.size(); ++c) {
        const unsigned mm = inst.t + 1 + c;
        const Rational step(x(v, mm) - x(u, mm));
        const Rational nv = ab[c] + d * step;
        swapped += nv * nv;
        linear += ab[c] * step;
      }
      if (swapped < base) out.local_optimum = false;
      if (linear + slack < Rational(0)) out.linearized = false;
    }
  }
  return out;
}

bool CheckSwapIdentity(const TalagrandInstance& inst, const ClopenSet& m, std::uint64_t out_atom,
                       std::uint64_t in_atom) {
  const ClopenSet mn = m.at_level(inst.n);
  const ClopenSet u = ClopenSet::Atom({inst.n, out_atom});
  const ClopenSet v = ClopenSet::Atom({inst.n, in_atom});
  const ClopenSet swapped = join(difference(mn, u), v);
  const Rational d = Rational::Pow2(-static_cast<int>(inst.n + 1));
  for (unsigned mm = inst.t + 1; mm <= inst.n; ++mm) {
    const long xv = ((in_atom >> mm) & 1u) ? -1 : 1;
    const long xu = ((out_atom >> mm) & 1u) ? -1 : 1;
    if (signed_balance(swapped, mm) != signed_balance(mn, mm) + d * Rational(xv - xu)) return false;
  }
  return true;
}

Rational pz_zeta(const Rational& xi, const Rational& c) {
  const Rational one(1);
  const Rational base = one - xi * xi;
  return base * base * Min(Rational(1, 3), one / c);
}

PzReport paley_zygmund_check(const TalagrandInstance& inst, const ClopenSet& m, const Rational& xi,
                             const PzMode& mode) {
  if (!(xi.sign() > 0 && xi < Rational(1))) throw InputError("xi must lie in (0,1)");
  ValidateInstance(inst);
  if (m.minimal_level() > inst.n) throw InputError("M must be a union of level-n atoms");
  PzReport rep;
  rep.zeta = pz_zeta(xi);
  const ClopenSet zq = meet(inst.z, inst.q);
  const ClopenSet rq = meet(inst.r, inst.q);
  const ClopenSet rest =
      difference(difference(inst.q, join(join(inst.p, rq), zq)), m).at_level(inst.n);
  std::uint64_t flip = 0;
  for (unsigned mm = inst.t + 1; mm <= inst.n; ++mm) flip |= std::uint64_t{1} << mm;
  std::vector<std::uint64_t> omega;
  rest.mask().for_each_set([&](std::uint64_t i) {
    if (rest.has_atom(i ^ flip)) omega.push_back(i);
  });
  if (omega.empty()) throw PreconditionError("Omega = (Q'∖M) ∩ T[Q'∖M] is empty");
  rep.omega_atoms = omega.size();
  rep.omega_measure = Rational::Dyadic(mpz_class(static_cast<unsigned long>(omega.size())),
                                       -static_cast<int>(inst.n + 1));
  rep.g_measure = lambda(inst.g);
  rep.omega_large = rep.omega_measure >= Rational(4, 5) * rep.g_measure;

  // Work in units of 2^-(n+1): S_m integer, the event is g(V)^2 > xi^2 Σ S_m^2.
  const ClopenSet zn = zq.at_level(inst.n), rn = rq.at_level(inst.n), mn = m.at_level(inst.n);
  std::vector<std::int64_t> s;
  mpz_class total = 0;
  for (unsigned mm = inst.t + 1; mm <= inst.n; ++mm) {
    s.push_back(mn.mask().balance(mm) + zn.mask().balance(mm) - rn.mask().balance(mm));
    total += mpz_class(static_cast<long>(s.back())) * s.back();
  }
  rep.degenerate = total == 0;
  const Rational xi2 = xi * xi;
  const mpz_class rhs = xi2.numerator() * total;
  auto hit = [&](std::uint64_t atom) {
    std::int64_t g = 0;
    for (unsigned c = 0; c < s.size(); ++c) g += ((atom >> (inst.t + 1 + c)) & 1u) ? -s[c] : s[c];
    const mpz_class gg = mpz_class(static_cast<long>(g)) * g;
    return gg * xi2.denominator() > rhs;
  };
  if (mode.enumerate) {
    for (auto a : omega) rep.hits += hit(a) ? 1 : 0;
    rep.trials = omega.size();
    rep.exact = true;
  } else {
    if (mode.samples == 0) throw InputError("sample count must be > 0");
    Rng rng(mode.seed);
    for (std::uint64_t i = 0; i < mode.samples; ++i) rep.hits += hit(omega[rng.below(omega.size())]) ? 1 : 0;
    rep.trials = mode.samples;
    rep.exact = false;
  }
  rep.probability = Rational(mpq_class(mpz_class(static_cast<unsigned long>(rep.hits)),
                                       mpz_class(static_cast<unsigned long>(rep.trials))));
  rep.estimate = rep.probability.to_double();
  rep.pass = rep.probability > rep.zeta;
  return rep;
}

}  // namespace dyadcert
