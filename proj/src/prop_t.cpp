#include "dyadcert/prop_t.hpp"

#include <algorithm>
#include <set>

#include "dyadcert/errors.hpp"
#include "dyadcert/util.hpp"

namespace dyadcert {

std::string FamilyDigest(std::span<const ClopenSet> family) {
  std::set<std::string> keys;
  for (const auto& a : family) keys.insert(CanonicalKey(a));
  std::string joined;
  for (const auto& k : keys) {
    joined += k;
    joined += '\n';
  }
  return Sha256Hex(joined);
}

PropTResult check_prop_t_at(std::span<const ClopenSet> family, const Rational& epsilon,
                            unsigned n) {
  if (n == 0) throw InputError("property (T) level n must be > 0");
  if (epsilon.sign() <= 0) throw InputError("epsilon must be > 0");

  std::vector<ClopenSet> members;
  members.reserve(family.size());
  for (const auto& a : family) members.push_back(a.canonical());

  const Rational atom_measure = Rational::Pow2(-static_cast<int>(n + 1));
  const Rational t1_bound = epsilon * atom_measure / Rational(static_cast<long>(n));
  const Rational t2_bound = epsilon * atom_measure;  // compared against m·φ_m
  const std::uint64_t atoms = std::uint64_t{2} << n;

  PropTResult result;
  PropTCertificate cert;
  cert.epsilon = epsilon;
  cert.n = n;
  cert.scanned_through = std::max(n, max_canonical_level(members));

  for (std::size_t i = 0; i < members.size(); ++i) {
    const Occupancy occ = occupancy(members[i], n);
    const int fine_exp = -static_cast<int>(occ.fine_level + 1);
    for (std::uint64_t u = 0; u < atoms; ++u) {
      AtomRecord rec;
      rec.member = i;
      rec.atom = u;
      const Rational inside =
          Rational::Dyadic(mpz_class(static_cast<unsigned long>(occ.count[u])), fine_exp);
      const Rational outside = atom_measure - inside;
      rec.omits = inside <= t1_bound;
      rec.fills = outside <= t1_bound;
      if (rec.omits) {
        rec.tag = Alternative::kOmits;
        rec.t1_slack = t1_bound - inside;
      } else if (rec.fills) {
        rec.tag = Alternative::kFills;
        rec.t1_slack = t1_bound - outside;
      } else {
        result.violations.push_back({i, u, Condition::kT1, n, Min(inside, outside), t1_bound});
      }

      std::int64_t peak = 0;
      for (unsigned m = n + 1; m <= occ.fine_level && occ.coords > 0; ++m) {
        const std::int64_t b = occ.balance_at(u, m);
        const std::int64_t scaled = static_cast<std::int64_t>(m) * (b < 0 ? -b : b);
        if (scaled == 0) continue;
        const Rational value = Rational::Dyadic(mpz_class(static_cast<long>(scaled)), fine_exp);
        if (value > t2_bound) {
          result.violations.push_back({i, u, Condition::kT2, m, value, t2_bound});
        }
        if (scaled > peak) {
          peak = scaled;
          rec.t2_peak_m = m;
        }
      }
      rec.t2_peak = Rational::Dyadic(mpz_class(static_cast<long>(peak)), fine_exp);
      rec.t2_slack = t2_bound - rec.t2_peak;
      cert.records.push_back(std::move(rec));
    }
  }

  if (result.violations.empty()) {
    cert.family_digest = FamilyDigest(family);
    result.certificate = std::move(cert);
  }
  return result;
}

PropTLevel find_prop_t_level(std::span<const ClopenSet> family, const Rational& epsilon,
                             unsigned min_level) {
  if (epsilon.sign() <= 0) throw InputError("epsilon must be > 0");
  for (unsigned n = std::max(1u, min_level);; ++n) {
    PropTResult r = check_prop_t_at(family, epsilon, n);
    if (r.passed()) return {n, std::move(*r.certificate)};
  }
}

std::string ReverifyCertificate(std::span<const ClopenSet> family, const PropTCertificate& cert) {
  const unsigned n = cert.n;
  const std::uint64_t atoms = std::uint64_t{2} << n;
  if (cert.records.size() != family.size() * atoms) return "record count mismatch";
  if (cert.family_digest != FamilyDigest(family)) return "family digest mismatch";
  if (cert.scanned_through < max_canonical_level(family)) return "scan range too short";
  const Rational lu = Rational::Pow2(-static_cast<int>(n + 1));
  const Rational t1_bound = cert.epsilon * lu / Rational(static_cast<long>(n));
  for (const auto& rec : cert.records) {
    if (rec.member >= family.size() || rec.atom >= atoms) return "record index out of range";
    const ClopenSet& a = family[rec.member];
    const ClopenSet u = ClopenSet::Atom({n, rec.atom});
    const ClopenSet au = meet(a, u);
    const Rational inside = lambda(au);
    const Rational outside = lambda(difference(u, a));
    const std::string where =
        "member " + std::to_string(rec.member) + " atom " + std::to_string(rec.atom);
    if (rec.omits != (inside <= t1_bound) || rec.fills != (outside <= t1_bound)) {
      return where + ": alternative flags";
    }
    const Rational achieved = rec.tag == Alternative::kOmits ? inside : outside;
    if (rec.t1_slack != t1_bound - achieved || rec.t1_slack.sign() < 0) {
      return where + ": T1 slack";
    }
    Rational peak(0);
    for (unsigned m = n + 1; m <= cert.scanned_through; ++m) {
      peak = Max(peak, Rational(static_cast<long>(m)) * phi(au, m));
    }
    if (peak != rec.t2_peak) return where + ": T2 peak";
    if (rec.t2_slack != cert.epsilon * lu - peak || rec.t2_slack.sign() < 0) {
      return where + ": T2 slack";
    }
  }
  return "";
}

bool VwCounterexample::all_equal() const {
  return std::all_of(witnesses.begin(), witnesses.end(), [](const VwWitness& w) {
    return w.others_disjoint && w.inside == w.half && w.outside == w.half;
  });
}

VwCounterexample build_vw_counterexample(const ClopenSet& w, unsigned depth) {
  if (w.empty()) throw InputError("W must be non-empty");
  VwCounterexample out;
  bool found = false;
  for (unsigned k = 0; k <= w.level() && !found; ++k) {
    const std::uint64_t count = std::uint64_t{2} << k;
    for (std::uint64_t i = 0; i < count; ++i) {
      if (w.contains_atom({k, i})) {
        out.sigma = {k, i};
        found = true;
        break;
      }
    }
  }
  const unsigned big_n = out.sigma.level;
  out.big_n = big_n;
  const unsigned top = big_n + depth + 2;
  RequireLevel(top, "V_W truncation");

  // τ_k = σ 1^k 0 0, an atom of level N+k+2.
  for (unsigned k = 0; k <= depth; ++k) {
    std::uint64_t idx = out.sigma.index;
    for (unsigned j = 0; j < k; ++j) idx |= std::uint64_t{1} << (big_n + 1 + j);
    out.tau.push_back({big_n + k + 2, idx});
  }
  std::vector<ClopenSet> pieces;
  for (const auto& t : out.tau) pieces.push_back(ClopenSet::Atom(t));
  const ClopenSet v_trunc = join_all(pieces);

  for (unsigned n = big_n + 1; n <= big_n + depth; ++n) {
    const unsigned k = n - big_n - 1;
    VwWitness wit;
    wit.n = n;
    const std::uint64_t low = (std::uint64_t{2} << n) - 1;
    wit.u = {n, out.tau[k].index & low};
    const ClopenSet u = ClopenSet::Atom(wit.u);
    bool disjoint_ok = true;
    for (unsigned j = 0; j <= depth; ++j) {
      if (j == k) continue;
      if (!disjoint(pieces[j], u)) disjoint_ok = false;
    }
    // τ_j for j > depth has coordinate N+k+1 equal to 1 while U has 0 there.
    const bool tail_ok = ((wit.u.index >> (big_n + k + 1)) & 1u) == 0;
    wit.others_disjoint = disjoint_ok && tail_ok;
    wit.inside = lambda(meet(v_trunc, u));
    wit.outside = lambda(difference(u, v_trunc));
    wit.half = lambda(wit.u) / Rational(2);
    out.witnesses.push_back(std::move(wit));
  }
  return out;
}

}  // namespace dyadcert
