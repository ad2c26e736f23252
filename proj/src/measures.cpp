#include "dyadcert/measures.hpp"

#include <algorithm>
#include <set>

#include "dyadcert/errors.hpp"

namespace dyadcert {

SignedMeasure::SignedMeasure(unsigned level, std::map<std::uint64_t, Rational> values)
    : level_(level) {
  RequireLevel(level, "signed measure");
  for (auto& [atom, v] : values) {
    if (atom >= atoms()) {
      throw InputError("measure atom " + std::to_string(atom) + " out of range for level " +
                       std::to_string(level));
    }
    if (!v.is_zero()) values_.emplace(atom, std::move(v));
  }
}

SignedMeasure SignedMeasure::Dense(unsigned level, std::span<const Rational> values) {
  RequireLevel(level, "signed measure");
  if (values.size() != (std::uint64_t{2} << level)) {
    throw InputError("atomValues must have 2^(level+1) = " +
                     std::to_string(std::uint64_t{2} << level) + " entries");
  }
  std::map<std::uint64_t, Rational> m;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_zero()) m.emplace(i, values[i]);
  }
  return SignedMeasure(level, std::move(m));
}

SignedMeasure SignedMeasure::PointMass(unsigned level, std::uint64_t atom, const Rational& value) {
  return SignedMeasure(level, {{atom, value}});
}

Rational SignedMeasure::value(std::uint64_t atom) const {
  auto it = values_.find(atom);
  return it == values_.end() ? Rational(0) : it->second;
}

void SignedMeasure::CheckRepresentable(const ClopenSet& a) const {
  if (a.level() > level_ && a.minimal_level() > level_) {
    throw InputError("set of level " + std::to_string(a.minimal_level()) +
                     " is not representable at the measure's level " + std::to_string(level_));
  }
}

Rational SignedMeasure::operator()(const ClopenSet& a) const {
  CheckRepresentable(a);
  const ClopenSet s = a.level() > level_ ? a.at_level(level_) : a;
  const std::uint64_t low = (std::uint64_t{2} << s.level()) - 1;
  Rational acc(0);
  for (const auto& [atom, v] : values_) {
    if (s.has_atom(atom & low)) acc += v;
  }
  return acc;
}

Rational SignedMeasure::variation(const std::optional<ClopenSet>& a) const {
  Rational acc(0);
  if (!a) {
    for (const auto& [atom, v] : values_) acc += v.abs();
    return acc;
  }
  CheckRepresentable(*a);
  const ClopenSet s = a->level() > level_ ? a->at_level(level_) : *a;
  const std::uint64_t low = (std::uint64_t{2} << s.level()) - 1;
  for (const auto& [atom, v] : values_) {
    if (s.has_atom(atom & low)) acc += v.abs();
  }
  return acc;
}

Rational total_variation(const SignedMeasure& nu, const std::optional<ClopenSet>& a) {
  return nu.variation(a);
}

SignedMeasure nikodym_witness(unsigned n, unsigned level) {
  if (level < n) throw InputError("witness level must be >= n");
  RequireLevel(level, "nikodym witness");
  const Rational mag = Rational(static_cast<long>(n)) * Rational::Pow2(-static_cast<int>(level + 1));
  std::map<std::uint64_t, Rational> values;
  const std::uint64_t atoms = std::uint64_t{2} << level;
  for (std::uint64_t i = 0; i < atoms; ++i) {
    if (n == 0) break;
    values.emplace_hint(values.end(), i, ((i >> n) & 1u) ? -mag : mag);
  }
  return SignedMeasure(level, std::move(values));
}

bool NikodymReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const NikodymRow& r) { return r.bounded && r.norm_ok; });
}

NikodymReport nikodym_demo(std::span<const ClopenSet> family, const Rational& epsilon, unsigned m_max) {
  if (epsilon.sign() <= 0) throw InputError("epsilon must be > 0");
  PropTLevel level = find_prop_t_level(family, epsilon, 0);
  NikodymReport rep;
  rep.n = level.n;
  rep.epsilon = epsilon;
  rep.certificate_digest = level.certificate.family_digest;
  rep.m_max = m_max;
  rep.symbolic_from = std::max(level.n, max_canonical_level(family)) + 1;
  const unsigned fam_level = max_canonical_level(family);
  for (unsigned m = level.n + 1; m <= m_max; ++m) {
    const SignedMeasure mu = nikodym_witness(m, std::max(m, fam_level));
    NikodymRow row;
    row.m = m;
    row.sup_value = Rational(0);
    row.formula_sup = Rational(0);
    for (const auto& a : family) {
      row.sup_value = Max(row.sup_value, mu(a).abs());
      row.formula_sup = Max(row.formula_sup, Rational(static_cast<long>(m)) * phi(a, m));
    }
    row.norm = mu.norm();
    row.bounded = row.sup_value <= epsilon && row.sup_value == row.formula_sup;
    row.norm_ok = row.norm == Rational(static_cast<long>(m));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

const WitnessEntry* WitnessSequencePrefix::find(unsigned index) const {
  for (const auto& e : entries) {
    if (e.index == index) return &e;
  }
  return nullptr;
}

std::vector<PrefixIssue> ValidatePrefix(const WitnessSequencePrefix& prefix) {
  std::vector<PrefixIssue> issues;
  std::set<unsigned> seen;
  for (std::size_t i = 0; i < prefix.entries.size(); ++i) {
    const auto& e = prefix.entries[i];
    if (!seen.insert(e.index).second) issues.push_back({e.index, "duplicate index"});
    if (e.nu.norm() != Rational(1)) issues.push_back({e.index, "norm is " + e.nu.norm().str() + ", not 1"});
    try {
      const Rational on_h = e.nu.variation(e.h);
      if (on_h < Rational(19, 20)) issues.push_back({e.index, "|nu|(H) = " + on_h.str() + " < 19/20"});
    } catch (const InputError& err) {
      issues.push_back({e.index, err.what()});
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!disjoint(e.h, prefix.entries[j].h)) {
        issues.push_back({e.index, "H meets H of index " + std::to_string(prefix.entries[j].index)});
      }
    }
  }
  return issues;
}

bool OscillationReport::ok() const {
  if (!issues.empty()) return false;
  return std::all_of(entries.begin(), entries.end(), [](const OscillationEntry& e) {
    if (!e.hypothesis) return true;
    return e.conclusion && (e.even ? e.value <= e.derived_bound : e.value >= e.derived_bound);
  });
}

OscillationReport oscillation_check(const WitnessSequencePrefix& prefix, const ClopenSet& b) {
  OscillationReport rep;
  rep.issues = ValidatePrefix(prefix);
  bool have_even = false, have_odd = false;
  for (std::size_t i = 0; i < prefix.entries.size(); ++i) {
    const auto& e = prefix.entries[i];
    OscillationEntry o;
    o.index = e.index;
    o.even = i % 2 == 0;
    o.inside = e.nu(meet(b, e.h)).abs();
    o.outside_variation = e.nu.variation(complement(e.h));
    o.value = e.nu(b).abs();
    if (o.even) {
      o.derived_bound = o.inside + o.outside_variation;
      o.hypothesis = o.inside <= Rational(1, 10);
      o.conclusion = o.value <= Rational(3, 20);
      rep.even_max = have_even ? Max(rep.even_max, o.value) : o.value;
      have_even = true;
    } else {
      o.derived_bound = o.inside - o.outside_variation;
      o.hypothesis = o.inside >= Rational(3, 10);
      o.conclusion = o.value >= Rational(1, 4);
      rep.odd_min = have_odd ? Min(rep.odd_min, o.value) : o.value;
      have_odd = true;
    }
    rep.entries.push_back(std::move(o));
  }
  rep.separated = have_even && have_odd && rep.odd_min > rep.even_max;
  rep.gap = have_even && have_odd ? rep.odd_min - rep.even_max : Rational(0);
  return rep;
}

bool DecompositionReport::ok() const {
  return level_ok && sum_failures.empty() && negative_atoms.empty() && orthogonality_ok &&
         std::all_of(modulus.begin(), modulus.end(), [](const ModulusCheck& m) { return m.ok; });
}

DecompositionReport validate_decomposition(const SignedMeasure& theta, const SignedMeasure& theta1,
                                           const SignedMeasure& theta2,
                                           std::span<const ModulusEntry> modulus, const ClopenSet& x,
                                           const Rational& epsilon_x) {
  if (theta.level() != theta1.level() || theta.level() != theta2.level()) {
    throw InputError("theta, theta1, theta2 must share one level");
  }
  DecompositionReport rep;
  const unsigned level = theta.level();
  std::set<std::uint64_t> support;
  for (const auto* mu : {&theta, &theta1, &theta2}) {
    for (const auto& [atom, v] : mu->values()) support.insert(atom);
  }
  for (auto atom : support) {
    if (theta.value(atom) != theta1.value(atom) + theta2.value(atom)) rep.sum_failures.push_back(atom);
    if (theta1.value(atom).sign() < 0 || theta2.value(atom).sign() < 0) rep.negative_atoms.push_back(atom);
  }

  // Atoms are equal-weight, so the λ(A) < δ sets are those with at most
  // ceil(δ·2^(level+1)) - 1 atoms; the worst one takes the largest θ₁ values.
  std::vector<std::pair<Rational, std::uint64_t>> ranked;
  for (const auto& [atom, v] : theta1.values()) {
    if (v.sign() > 0) ranked.emplace_back(v, atom);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& l, const auto& r) {
    if (l.first != r.first) return l.first > r.first;
    return l.second < r.second;
  });
  const mpz_class total_atoms = mpz_class(1) << (level + 1);
  for (const auto& entry : modulus) {
    ModulusCheck mc;
    mc.epsilon = entry.epsilon;
    mc.delta = entry.delta;
    mpz_class c = (entry.delta * Rational(total_atoms)).ceil() - 1;
    if (c < 0) c = 0;
    if (c > total_atoms) c = total_atoms;
    mc.max_atoms = c.get_ui();
    Rational acc(0);
    std::vector<std::uint64_t> chosen;
    for (std::size_t i = 0; i < ranked.size() && i < mc.max_atoms; ++i) {
      acc += ranked[i].first;
      chosen.push_back(ranked[i].second);
    }
    mc.worst_value = acc;
    mc.worst_set = ClopenSet::FromAtoms(level, chosen).canonical();
    mc.ok = acc < entry.epsilon;
    rep.modulus.push_back(std::move(mc));
  }
  rep.lambda_x = lambda(x);
  rep.theta2_outside_x = theta2(complement(x));
  rep.orthogonality_ok = rep.lambda_x < epsilon_x && rep.theta2_outside_x < epsilon_x;
  return rep;
}

}  // namespace dyadcert
