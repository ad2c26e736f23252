#include "dyadcert/construction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dyadcert/errors.hpp"
#include "dyadcert/prop_t.hpp"
#include "dyadcert/tau.hpp"
#include "dyadcert/util.hpp"

namespace dyadcert {

ClopenSet GoodQuadruple::prefix_union(int p) const {
  if (p < 0) return ClopenSet::Empty();
  const std::size_t upto = std::min<std::size_t>(static_cast<std::size_t>(p) + 1, kernels.size());
  return join_all(std::span<const ClopenSet>(kernels.data(), upto));
}

GoodQuadruple GoodQuadruple::truncated(int p) const {
  GoodQuadruple out;
  if (p < 0) return out;
  const auto keep = static_cast<std::size_t>(p) + 1;
  out.families.assign(families.begin(), families.begin() + static_cast<std::ptrdiff_t>(std::min(keep, families.size())));
  out.kernels.assign(kernels.begin(), kernels.begin() + static_cast<std::ptrdiff_t>(std::min(keep, kernels.size())));
  out.m.assign(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(std::min(keep, m.size())));
  out.n.assign(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(std::min(2 * keep, n.size())));
  return out;
}

namespace {

const WitnessEntry& Entry(const QuadrupleContext& ctx, unsigned index) {
  const WitnessEntry* e = ctx.prefix.find(index);
  if (!e) throw InputError("context has no entry for index " + std::to_string(index));
  return *e;
}

class Recorder {
 public:
  explicit Recorder(QuadrupleReport& rep) : rep_(rep) {}
  void add(ConditionRecord rec) {
    ++rep_.checks;
    const std::string key = rec.code + "#" + std::to_string(rec.p);
    auto it = rows_.find(key);
    if (it == rows_.end()) {
      order_.push_back(key);
      it = rows_.emplace(key, Row{rec, 0, 0}).first;
    } else if (Slack(rec) < Slack(it->second.tightest)) {
      it->second.tightest = rec;
    }
    ++it->second.checks;
    if (!rec.ok) {
      ++it->second.failed;
      rep_.failures.push_back(std::move(rec));
    }
  }
  void finish() {
    for (const auto& key : order_) {
      const Row& row = rows_.at(key);
      ConditionRecord s = row.tightest;
      s.ok = row.failed == 0;
      s.detail = "checks=" + std::to_string(row.checks) + " failures=" + std::to_string(row.failed) +
                 (s.detail.empty() ? "" : "; tightest: " + s.detail);
      rep_.summary.push_back(std::move(s));
    }
    rep_.good = rep_.failures.empty();
  }

 private:
  struct Row {
    ConditionRecord tightest;
    std::uint64_t checks, failed;
  };
  // G.2 and the index orderings are lower bounds; everything else is an upper bound.
  static Rational Slack(const ConditionRecord& r) {
    const bool lower = r.code == "G.2" || r.code == "structure.m-increasing" || r.code == "structure.n-increasing";
    return lower ? r.achieved - r.bound : r.bound - r.achieved;
  }

  QuadrupleReport& rep_;
  std::map<std::string, Row> rows_;
  std::vector<std::string> order_;
};

ConditionRecord Rec(std::string code, int p, bool ok, Rational achieved, Rational bound,
                    std::string detail = "") {
  ConditionRecord r;
  r.code = std::move(code);
  r.p = p;
  r.ok = ok;
  r.achieved = std::move(achieved);
  r.bound = std::move(bound);
  r.detail = std::move(detail);
  return r;
}

// Either alternative of an omit/fill condition with bound c·λ(U)/level.
void CheckAlternative(Recorder& rec, const std::string& code, int p, int q, int member,
                      std::uint64_t atom, const ClopenSet& s, const ClopenSet& u, const Rational& bound) {
  const Rational inside = lambda(meet(s, u));
  const Rational outside = lambda(difference(u, s));
  ConditionRecord r = Rec(code, p, inside <= bound || outside <= bound, Min(inside, outside), bound);
  r.q = q;
  r.member = member;
  r.atom = static_cast<std::int64_t>(atom);
  rec.add(std::move(r));
}

// φ_m(S∩U) <= c·λ(U)/m for all m > level, compared as m·φ_m <= c·λ(U).
void CheckSymmetry(Recorder& rec, const std::string& code, int p, int q, int member, std::uint64_t atom,
                   const ClopenSet& s, const ClopenSet& u, unsigned level, const Rational& c_lu) {
  const ClopenSet su = meet(s, u);
  // φ_m vanishes beyond the canonical level of S∩U.
  const unsigned top = su.level();
  Rational worst(0);
  unsigned worst_m = 0;
  bool ok = true;
  for (unsigned m = level + 1; m <= top; ++m) {
    const Rational v = Rational(static_cast<long>(m)) * phi(su, m);
    if (v > c_lu) ok = false;
    if (v > worst) {
      worst = v;
      worst_m = m;
    }
  }
  ConditionRecord r = Rec(code, p, ok, worst, c_lu, "scanned m <= " + std::to_string(top) + ", zero beyond");
  r.q = q;
  r.member = member;
  r.atom = static_cast<std::int64_t>(atom);
  r.coordinate = worst_m;
  rec.add(std::move(r));
}

}  // namespace

QuadrupleReport validate_good_quadruple(const GoodQuadruple& e, const QuadrupleContext& ctx) {
  QuadrupleReport rep;
  Recorder rec(rep);
  const std::size_t len = e.kernels.size();
  const bool shape = e.families.size() == len && e.m.size() == len && e.n.size() == 2 * len;
  rec.add(Rec("structure.lengths", -1, shape, Rational(static_cast<long>(e.n.size())),
              Rational(static_cast<long>(2 * len)), "n has 2p'+2 entries; B, N, m have p'+1"));
  if (!shape) {
    rec.finish();
    return rep;
  }
  for (unsigned r : e.n) Entry(ctx, r);

  for (std::size_t q = 0; q + 1 < len; ++q) {
    std::set<std::string> next;
    for (const auto& a : e.families[q + 1]) next.insert(CanonicalKey(a));
    bool inc = true;
    for (const auto& a : e.families[q]) inc = inc && next.count(CanonicalKey(a)) > 0;
    rec.add(Rec("structure.families-increasing", static_cast<int>(q + 1), inc, Rational(0), Rational(0)));
  }
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Rational overlap = lambda(meet(e.kernels[i], e.kernels[j]));
      rec.add(Rec("structure.kernels-disjoint", static_cast<int>(i), overlap.is_zero(), overlap, Rational(0),
                  "against N_" + std::to_string(j)));
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    const bool inc = i == 0 ? e.m[0] >= 1 : e.m[i] > e.m[i - 1];
    rec.add(Rec("structure.m-increasing", static_cast<int>(i), inc, Rational(static_cast<long>(e.m[i])),
                Rational(i == 0 ? 1L : static_cast<long>(e.m[i - 1]) + 1)));
  }
  for (std::size_t i = 1; i < e.n.size(); ++i) {
    rec.add(Rec("structure.n-increasing", static_cast<int>(i / 2), e.n[i] > e.n[i - 1],
                Rational(static_cast<long>(e.n[i])), Rational(static_cast<long>(e.n[i - 1]) + 1)));
  }

  for (std::size_t pi = 0; pi < len; ++pi) {
    const int p = static_cast<int>(pi);
    const ClopenSet& np = e.kernels[pi];
    const ClopenSet bp = e.prefix_union(p);
    // G.1
    for (std::size_t r = 0; r < 2 * pi + 1; ++r) {
      const Rational overlap = lambda(meet(np, Entry(ctx, e.n[r]).h));
      rec.add(Rec("G.1", p, overlap.is_zero(), overlap, Rational(0), "r=" + std::to_string(r)));
    }
    // G.2
    const WitnessEntry& odd = Entry(ctx, e.n[2 * pi + 1]);
    const Rational g2 = odd.nu(meet(np, odd.h)).abs();
    rec.add(Rec("G.2", p, g2 >= Rational(2, 5), g2, Rational(2, 5)));
    // G.3
    const Rational g3a = ctx.theta(bp);
    rec.add(Rec("G.3.a", p, g3a < Rational(1, 10), g3a, Rational(1, 10)));
    if (p > 0) {
      const ClopenSet prev = e.prefix_union(p - 1);
      const Rational g3b = Entry(ctx, e.n[2 * pi]).nu.variation(prev);
      rec.add(Rec("G.3.b", p, g3b < Rational(1, 10), g3b, Rational(1, 10)));
      const Rational g3c = odd.nu.variation(prev);
      rec.add(Rec("G.3.c", p, g3c < Rational(1, 10), g3c, Rational(1, 10)));
    }
    // G.4
    for (std::size_t qi = 0; qi <= pi; ++qi) {
      const int q = static_cast<int>(qi);
      const unsigned mq = e.m[qi];
      const Rational two_q = Rational::Pow2(-q);
      const Rational c_ab = two_q * (Rational(1) - Rational::Pow2(-(p + 1)));
      const std::uint64_t atoms = std::uint64_t{2} << mq;
      const Rational lu = Rational::Pow2(-static_cast<int>(mq + 1));
      for (std::size_t ai = 0; ai < e.families[qi].size(); ++ai) {
        const ClopenSet& a = e.families[qi][ai];
        const ClopenSet abp = meet(a, bp);
        const int member = static_cast<int>(ai);
        for (std::uint64_t ui = 0; ui < atoms; ++ui) {
          const ClopenSet u = ClopenSet::Atom({mq, ui});
          CheckAlternative(rec, "G.4.a", p, q, member, ui, abp, u, c_ab * lu / Rational(static_cast<long>(mq)));
          CheckSymmetry(rec, "G.4.b", p, q, member, ui, abp, u, mq, c_ab * lu);
          CheckAlternative(rec, "G.4.c", p, q, member, ui, a, u, two_q * lu / Rational(static_cast<long>(mq)));
          CheckSymmetry(rec, "G.4.d", p, q, member, ui, a, u, mq, two_q * lu);
        }
      }
    }
  }
  rec.finish();
  return rep;
}

namespace {

// Whether every atom V of level n has an algebra atom `a` with
// λ(V∖a) <= ratio·λ(V) (strict: <).
bool DominantAtoms(const AlgebraLabels& lab, unsigned n, const Rational& ratio, bool strict) {
  if (n >= lab.level) return ratio.sign() > 0 || !strict;
  const std::uint64_t per = std::uint64_t{1} << (lab.level - n);
  const std::uint64_t count = std::uint64_t{2} << n;
  // missing atoms allowed per V, as an integer threshold
  const Rational limit = ratio * Rational(mpz_class(static_cast<unsigned long>(per)));
  std::vector<std::uint32_t> tally(lab.count, 0);
  std::vector<std::uint32_t> touched;
  for (std::uint64_t v = 0; v < count; ++v) {
    std::uint32_t best = 0;
    for (std::uint64_t h = 0; h < per; ++h) {
      const std::uint32_t l = lab.label[v | (h << (n + 1))];
      if (tally[l]++ == 0) touched.push_back(l);
      best = std::max(best, tally[l]);
    }
    for (auto l : touched) tally[l] = 0;
    touched.clear();
    const Rational missing(mpz_class(static_cast<unsigned long>(per - best)));
    if (strict ? !(missing < limit) : !(missing <= limit)) return false;
  }
  return true;
}

bool EtaSelectable(const Rational& eta, unsigned n) {
  try {
    select_eta_prime(eta, n);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

std::vector<ClopenSet> CoordinateGenerators(unsigned upto) {
  std::vector<ClopenSet> out;
  for (unsigned m = 0; m <= upto; ++m) out.push_back(ClopenSet::Coordinate(m, 0));
  return out;
}

}  // namespace

void ValidateTroisieme(const TroisiemeInputs& in, TroisiemeResult& out) {
  out.a1 = disjoint(out.a, join(in.x, in.h));
  out.lambda_a = lambda(out.a);
  out.a2 = out.lambda_a <= in.eta;
  out.a3 = true;
  out.a3_failures.clear();
  const ClopenSet ay = join(out.a, in.y);
  unsigned scanned = in.t;
  for (std::size_t i = 0; i < in.d0.size(); ++i) {
    const ClopenSet& c = in.d0[i];
    const ClopenSet left = meet(ay, c);
    const ClopenSet right = meet(in.w, c);
    // ψ_m of two sets vanishes beyond both canonical levels.
    const unsigned top = std::max(left.level(), right.level());
    scanned = std::max(scanned, top);
    for (unsigned m = in.t + 1; m <= top; ++m) {
      const Rational v = psi(left, right, m);
      const Rational bound = in.eta / Rational(static_cast<long>(m));
      if (v > bound) {
        out.a3 = false;
        out.a3_failures.push_back({i, m, v, bound});
      }
    }
  }
  out.a3_scanned_through = scanned;
}

TroisiemeResult construct_A_troisieme(const TroisiemeInputs& in) {
  const bool strict = in.mode == Mode::kStrict;
  if (in.d0.size() < 2) throw PreconditionError("D0 needs at least two sets");
  if (in.t == 0) throw PreconditionError("t must be > 0");
  if (in.eta.sign() <= 0) throw PreconditionError("eta must be > 0");
  for (std::size_t i = 0; i < in.d0.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!disjoint(in.d0[i], in.d0[j])) {
        throw PreconditionError("D0 sets " + std::to_string(j) + " and " + std::to_string(i) + " intersect");
      }
    }
  }
  if (!subset(in.w, in.h)) throw PreconditionError("W is not contained in H");
  if (!subset(in.y, in.h)) throw PreconditionError("Y is not contained in H");

  TroisiemeResult out;
  const Rational d0(static_cast<long>(in.d0.size()));
  out.zeta = Rational::Pow2(-10) * in.eta * in.eta / (d0 * d0);
  out.delta = in.eta * in.eta / (Rational(30) * d0 * d0);
  out.eta_block = in.eta / d0;
  const unsigned limit = in.level_limit == 0 ? max_level() : std::min(in.level_limit, max_level());

  std::vector<AtomId> u_c(in.d0.size());
  std::vector<Rational> conc(in.d0.size());
  const std::uint64_t t_atoms = std::uint64_t{2} << in.t;
  std::vector<std::uint64_t> tally(t_atoms);
  for (std::size_t i = 0; i < in.d0.size(); ++i) {
    // atoms of C inside each level-t atom, counted at the finer of the two levels
    const unsigned fine_level = std::max(in.t, in.d0[i].level());
    const ClopenSet fine = in.d0[i].at_level(fine_level);
    const std::uint64_t low = t_atoms - 1;
    std::fill(tally.begin(), tally.end(), 0);
    fine.mask().for_each_set([&](std::uint64_t j) { ++tally[j & low]; });
    const Rational per_atom(mpz_class(static_cast<unsigned long>(std::uint64_t{1} << (fine_level - in.t))));
    bool found = false;
    std::uint64_t best = 0;
    for (std::uint64_t u = 0; u < t_atoms; ++u) {
      if (strict) {
        if (Rational(mpz_class(static_cast<unsigned long>(tally[u]))) > Rational(99, 100) * per_atom) {
          best = u;
          found = true;
          break;
        }
      } else if (tally[u] > tally[best]) {
        best = u;
      }
    }
    if (!strict) found = tally[best] > 0;
    if (found) {
      u_c[i] = {in.t, best};
      conc[i] = Rational(mpz_class(static_cast<unsigned long>(tally[best]))) / per_atom;
    }
    if (!found) {
      throw PreconditionError("no level-t atom concentrates on D0 set " + std::to_string(i) +
                              (strict ? " above 99/100" : ""));
    }
  }

  if (strict) {
    if (!(in.eta < Rational::Pow2(-static_cast<int>(in.t) - 11))) {
      throw PreconditionError("strict mode requires eta < 2^-(t+11)");
    }
    if (!(lambda(in.h) < out.zeta)) throw PreconditionError("strict mode requires lambda(H) < zeta");
    if (!(lambda(in.x) < out.zeta)) throw PreconditionError("strict mode requires lambda(X) < zeta");
    out.n0 = n_zero(in.t, out.eta_block);
    const unsigned need = std::max(out.n0, 30u);
    if (need > limit) {
      ScaleReport r;
      r.reason = "set constructor needs level >= max(n0, 30) = " + std::to_string(need) +
                 ", beyond the level limit " + std::to_string(limit);
      r.required_level = need;
      r.max_level = limit;
      r.n_zero = out.n0;
      r.bytes_per_set = (std::uint64_t{2} << need) / 8;
      throw ScaleError(r);
    }
  }

  std::vector<ClopenSet> gens(in.d0.begin(), in.d0.end());
  for (auto& c : CoordinateGenerators(in.t)) gens.push_back(std::move(c));
  for (const ClopenSet* s : {&in.x, &in.w, &in.y, &in.h}) gens.push_back(*s);
  const AlgebraLabels atoms = label_algebra(gens);
  out.algebra_atoms = atoms.count;

  unsigned n = strict ? std::max(out.n0, 30u) : in.t + 1;
  while (n <= limit && !EtaSelectable(out.eta_block, n)) ++n;
  const Rational ratio_base = out.delta;
  while (n <= limit && !DominantAtoms(atoms, n, ratio_base / Rational(static_cast<long>(n)), false)) ++n;
  if (n > limit) {
    ScaleReport r;
    r.reason = "no working level <= " + std::to_string(limit) +
               " satisfies the approximation hypothesis for the generated algebra";
    r.required_level = limit + 1;
    r.max_level = limit;
    r.bytes_per_set = (std::uint64_t{2} << std::min(limit + 1, 40u)) / 8;
    throw ScaleError(r);
  }
  out.n = n;

  // τ on the elements the construction needs; the dominant-atom check above
  // is the hypothesis over every element of the algebra.
  const ClopenSet xh = join(in.x, in.h);
  std::vector<ClopenSet> elems(in.d0.begin(), in.d0.end());
  elems.push_back(in.y);
  elems.push_back(in.w);
  elems.push_back(xh);
  const TauMap tau = build_tau(elems, n, out.delta);
  if (!tau.verification.ok()) {
    throw CheckFailure("tau verification failed: " + tau.verification.first_failure);
  }
  const std::size_t k = in.d0.size();
  const ClopenSet& z = tau.images[k];
  const ClopenSet& r = tau.images[k + 1];
  const ClopenSet& p = tau.images[k + 2];

  std::vector<ClopenSet> pieces;
  for (std::size_t i = 0; i < k; ++i) {
    TalagrandInstance inst;
    inst.t = in.t;
    inst.eta = out.eta_block;
    inst.n = n;
    inst.p = p;
    inst.r = r;
    inst.z = z;
    inst.q = tau.images[i];
    inst.g = u_c[i];
    inst.relaxed = !strict;
    PerBlock block;
    block.index = i;
    block.u = u_c[i];
    block.concentration = conc[i];
    try {
      block.report = solve(inst, MixSeed(in.seed, i), in.budget);
    } catch (const InputError& err) {
      if (strict || dynamic_cast<const PreconditionError*>(&err) != nullptr) {
        throw PreconditionError("block " + std::to_string(i) + ": " + err.what());
      }
      // Relaxed scale: a block too small for k atoms contributes nothing.
      out.warnings.push_back("block " + std::to_string(i) + ": " + err.what() + "; M_C = empty");
      block.report.m = ClopenSet::Empty();
      block.report.verdict = Verdict::kBoundMissed;
      out.blocks.push_back(std::move(block));
      continue;
    }
    if (block.report.verdict == Verdict::kBoundMissed) {
      out.warnings.push_back("block " + std::to_string(i) + ": solver verdict BOUND_MISSED");
    }
    pieces.push_back(block.report.m);
    out.blocks.push_back(std::move(block));
  }
  out.a = difference(join_all(pieces), xh);
  ValidateTroisieme(in, out);
  return out;
}

std::optional<ClopenSet> SelectY(const SignedMeasure& nu, const ClopenSet& region) {
  const ClopenSet reg = region.level() > nu.level() ? region.at_level(nu.level()) : region;
  const std::uint64_t low = (std::uint64_t{2} << reg.level()) - 1;
  std::vector<std::pair<Rational, std::uint64_t>> pos, neg;
  Rational pos_mass(0), neg_mass(0);
  for (const auto& [atom, v] : nu.values()) {
    if (!reg.has_atom(atom & low)) continue;
    if (v.sign() > 0) {
      pos.emplace_back(v, atom);
      pos_mass += v;
    } else {
      neg.emplace_back(v.abs(), atom);
      neg_mass += v.abs();
    }
  }
  auto& side = pos_mass >= neg_mass ? pos : neg;
  std::sort(side.begin(), side.end(), [](const auto& l, const auto& r) {
    if (l.first != r.first) return l.first > r.first;
    return l.second < r.second;
  });
  Rational acc(0);
  std::vector<std::uint64_t> chosen;
  for (const auto& [v, atom] : side) {
    if (acc >= Rational(2, 5)) break;
    acc += v;
    chosen.push_back(atom);
  }
  if (acc < Rational(2, 5)) return std::nullopt;
  return ClopenSet::FromAtoms(nu.level(), chosen).canonical();
}

ExtendResult extend_quadruple(const GoodQuadruple& e, const ClopenSet& b, const QuadrupleContext& ctx,
                              Mode mode, std::uint64_t seed, const SearchBudget& budget) {
  const bool strict = mode == Mode::kStrict;
  const QuadrupleReport before = validate_good_quadruple(e, ctx);
  if (!before.good) throw PreconditionError("input quadruple is not good against the context");
  if (!ctx.decomposition) throw InputError("context lacks the decomposition (theta1, theta2, modulus, X)");
  const Decomposition& dec = *ctx.decomposition;

  ExtendResult res;
  ExtendConstants& k = res.constants;
  const int p = e.p_prime();
  k.p = p;
  const ClopenSet bp = e.prefix_union(p);
  const unsigned m_p = p >= 0 ? e.m[static_cast<std::size_t>(p)] : 0;

  std::vector<ClopenSet> fam_next = p >= 0 ? e.families[static_cast<std::size_t>(p)] : std::vector<ClopenSet>{};
  {
    bool present = false;
    for (const auto& a : fam_next) present = present || a == b;
    if (!present) fam_next.push_back(b.canonical());
  }

  // m_{p+1}: property (T) at 2^-(p+2) for {A, A∩B_p}.
  k.eps_f = Rational::Pow2(-(p + 2));
  std::vector<ClopenSet> f_family;
  for (const auto& a : fam_next) {
    f_family.push_back(a);
    f_family.push_back(meet(a, bp));
  }
  k.m_next = find_prop_t_level(f_family, k.eps_f, m_p + 1).n;

  // Atoms of the algebra D.
  std::vector<ClopenSet> d_gens = fam_next;
  d_gens.push_back(bp);
  std::vector<const WitnessEntry*> early;
  const long last_index = p >= 0 ? static_cast<long>(e.n[2 * static_cast<std::size_t>(p) + 1]) : -1;
  for (const auto& entry : ctx.prefix.entries) {
    if (static_cast<long>(entry.index) <= last_index) {
      d_gens.push_back(entry.h);
      early.push_back(&entry);
    }
  }
  for (auto& c : CoordinateGenerators(k.m_next)) d_gens.push_back(std::move(c));
  const AlgebraLabels d_labels = label_algebra(d_gens);
  const std::vector<ClopenSet> d0 = atoms_from_labels(d_labels);
  k.d0_size = d0.size();
  Rational min_l = lambda(d0.front());
  for (const auto& c : d0) min_l = Min(min_l, lambda(c));
  k.eps_d = min_l / Rational(100);

  unsigned ctx_level = ctx.theta.level();
  for (const auto& entry : ctx.prefix.entries) ctx_level = std::min(ctx_level, entry.nu.level());
  const unsigned level_cap = std::min(ctx_level, max_level());
  unsigned t = k.m_next + 1;
  while (t <= level_cap && !DominantAtoms(d_labels, t, k.eps_d / Rational(static_cast<long>(t)), true)) ++t;
  if (t > level_cap) {
    throw ExtendExhausted("no level t in (" + std::to_string(k.m_next) + ", " + std::to_string(level_cap) +
                              "] concentrates every atom of D; the level cap is exhausted",
                          {});
  }
  k.t = t;

  k.xi = Rational(1, 10) - ctx.theta(bp);
  if (k.xi.sign() <= 0) throw PreconditionError("theta(B_p) >= 1/10");
  const DecompositionReport drep =
      validate_decomposition(ctx.theta, dec.theta1, dec.theta2, dec.modulus, dec.x, dec.epsilon_x);
  if (!drep.ok()) throw PreconditionError("decomposition does not validate");
  const Rational third = k.xi / Rational(3);
  if (!(dec.theta2(complement(dec.x)) < third)) throw PreconditionError("theta2(X^c) >= xi/3");
  bool have_delta = false;
  for (const auto& entry : dec.modulus) {
    if (entry.epsilon <= third && (!have_delta || entry.delta > k.delta)) {
      k.delta = entry.delta;
      have_delta = true;
    }
  }
  if (!have_delta) throw PreconditionError("modulus table has no entry with epsilon <= xi/3");

  const Rational t_r(static_cast<long>(t));
  k.gamma = Min(Min(k.delta / Rational(2), Rational::Pow2(-static_cast<int>(k.m_next) - 2 * p - 5) / t_r),
                Rational::Pow2(-static_cast<int>(t) - 12));
  const Rational d0_r(static_cast<long>(d0.size()));
  k.zeta = Rational::Pow2(-10) * k.gamma * k.gamma / (d0_r * d0_r * d0_r * d0_r);

  // Scan the prefix for n_{2p+2} < n_{2p+3}.
  std::vector<const WitnessEntry*> later;
  for (const auto& entry : ctx.prefix.entries) {
    if (static_cast<long>(entry.index) > last_index) later.push_back(&entry);
  }
  std::sort(later.begin(), later.end(), [](auto* l, auto* r) { return l->index < r->index; });
  auto even_fail = [&](const WitnessEntry& w) {
    std::vector<std::string> f;
    if (!(w.nu.variation(bp) < Rational(1, 10))) f.push_back("|nu|(B_p) < 1/10");
    if (strict && !(lambda(w.h) < k.zeta / Rational(2))) f.push_back("lambda(H) < zeta/2");
    return f;
  };
  auto odd_fail = [&](const WitnessEntry& w) {
    std::vector<std::string> f = even_fail(w);
    if (!(dec.theta2(w.h) < third)) f.push_back("theta2(H) < xi/3");
    if (!SelectY(w.nu, difference(w.h, bp))) f.push_back("|nu(Y)| >= 2/5 for some Y in H minus B_p");
    return f;
  };
  const WitnessEntry* even = nullptr;
  const WitnessEntry* odd = nullptr;
  std::vector<std::vector<std::string>> odd_cache(later.size());
  std::vector<char> odd_done(later.size(), 0);
  for (std::size_t i = 0; i < later.size() && !odd; ++i) {
    auto ef = even_fail(*later[i]);
    res.scan.push_back({later[i]->index, "n_{2p+2}", ef});
    if (!ef.empty()) continue;
    for (std::size_t j = i + 1; j < later.size(); ++j) {
      if (!odd_done[j]) {
        odd_cache[j] = odd_fail(*later[j]);
        odd_done[j] = 1;
        res.scan.push_back({later[j]->index, "n_{2p+3}", odd_cache[j]});
      }
      if (odd_cache[j].empty()) {
        even = later[i];
        odd = later[j];
        break;
      }
    }
  }
  if (!odd) throw ExtendExhausted("context exhausted before admissible n_{2p+2} < n_{2p+3}", res.scan);
  k.n_even = even->index;
  k.n_odd = odd->index;

  res.y = *SelectY(odd->nu, difference(odd->h, bp));
  k.y_value = odd->nu(res.y).abs();
  if (strict && !(lambda(dec.x) < k.zeta)) throw PreconditionError("lambda(X) >= zeta");

  TroisiemeInputs tin;
  tin.d0 = d0;
  tin.t = t;
  tin.eta = k.gamma / d0_r;
  tin.x = dec.x;
  tin.h = join(even->h, odd->h);
  tin.w = meet(bp, tin.h);
  tin.y = res.y;
  tin.mode = mode;
  tin.seed = seed;
  tin.budget = budget;
  tin.level_limit = ctx_level;
  res.troisieme = construct_A_troisieme(tin);
  for (const auto& w : res.troisieme.warnings) res.warnings.push_back("set constructor: " + w);
  if (!res.troisieme.valid()) {
    const std::string msg = "set constructor output fails (A.1)-(A.3) validation";
    if (strict) throw CheckFailure(msg);
    res.warnings.push_back(msg);
  }

  std::vector<ClopenSet> removed{bp};
  for (const auto* entry : early) removed.push_back(entry->h);
  const ClopenSet n_set = difference(res.troisieme.a, join_all(removed));
  res.kernel = join(n_set, res.y);

  res.extended = e;
  res.extended.families.push_back(fam_next);
  res.extended.kernels.push_back(res.kernel);
  res.extended.m.push_back(k.m_next);
  res.extended.n.push_back(k.n_even);
  res.extended.n.push_back(k.n_odd);
  res.validation = validate_good_quadruple(res.extended, ctx);
  return res;
}

AssemblyReport assemble_limit_set(std::span<const ClopenSet> kernels, std::span<const unsigned> n,
                                  const QuadrupleContext& ctx, unsigned k) {
  if (k >= n.size()) throw InputError("k must index an existing n_k");
  AssemblyReport rep;
  rep.k = static_cast<int>(k);
  rep.index = n[k];
  const WitnessEntry& entry = Entry(ctx, n[k]);

  rep.g1_ok = true;
  for (std::size_t p = 0; p < kernels.size(); ++p) {
    for (std::size_t r = 0; r < 2 * p + 1 && r < n.size(); ++r) {
      if (!disjoint(kernels[p], Entry(ctx, n[r]).h)) rep.g1_ok = false;
    }
  }
  // Only N_q with 2q+1 <= k can meet H_{n_k}.
  std::vector<ClopenSet> early;
  for (std::size_t q = 0; q < kernels.size() && 2 * q + 1 <= k; ++q) early.push_back(kernels[q]);
  rep.b_cap_h = meet(join_all(early), entry.h);
  rep.identity_ok = rep.b_cap_h == meet(join_all(kernels), entry.h);
  rep.value = entry.nu(rep.b_cap_h).abs();
  if (k % 2 == 0) {
    rep.condition = "B.2";
    rep.bound = Rational(1, 10);
    rep.ok = rep.value <= rep.bound;
  } else {
    rep.condition = "B.3";
    rep.bound = Rational(3, 10);
    rep.ok = rep.value >= rep.bound;
  }
  rep.ok = rep.ok && rep.g1_ok && rep.identity_ok;
  return rep;
}

}  // namespace dyadcert
