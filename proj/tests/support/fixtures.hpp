#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "dyadcert/construction.hpp"
#include "dyadcert/measures.hpp"
#include "support/generators.hpp"

namespace fixtures {

using dyadcert::ClopenSet;
using dyadcert::GoodQuadruple;
using dyadcert::QuadrupleContext;
using dyadcert::Rational;
using dyadcert::SignedMeasure;
using dyadcert::WitnessEntry;

// Unit point masses ν_j at atom h_j of `level`, H_j = {h_j}; θ = θ₂ is a unit
// point mass on atom 0 = X and θ₁ = 0.
inline QuadrupleContext PointMassContext(unsigned level, unsigned entries) {
  QuadrupleContext ctx;
  const std::uint64_t atoms = std::uint64_t{2} << level;
  for (unsigned j = 0; j < entries; ++j) {
    const std::uint64_t h = (1 + 2654435761ULL * (j + 1)) % atoms;
    WitnessEntry e;
    e.index = j;
    e.nu = SignedMeasure::PointMass(level, h, Rational(1));
    e.h = ClopenSet::Atom({level, h});
    ctx.prefix.entries.push_back(std::move(e));
  }
  ctx.theta = SignedMeasure::PointMass(level, 0, Rational(1));
  dyadcert::Decomposition d;
  d.theta1 = SignedMeasure(level, {});
  d.theta2 = ctx.theta;
  d.modulus = {{Rational(1, 100), Rational(1)}};
  d.x = ClopenSet::Atom({level, 0});
  d.epsilon_x = Rational(1, 100);
  ctx.decomposition = std::move(d);
  return ctx;
}

struct SyntheticQuadruple {
  GoodQuadruple e;
  QuadrupleContext ctx;
};

// A quadruple that is good by construction: every kernel is the atom carrying
// the mass of ν_{n_{2p+1}} plus at most one stray atom, the families use sets of
// level <= m_q, and the context level is fine enough that kernels are tiny
// against the G.4 bounds.
inline SyntheticQuadruple MakeSyntheticQuadruple(gen::Gen& g) {
  constexpr unsigned kLevel = 14;
  const std::uint64_t atoms = std::uint64_t{2} << kLevel;
  SyntheticQuadruple out;
  const unsigned kernels = g.range(1, 3);
  const unsigned entries = 2 * kernels + g.range(0, 3);

  std::vector<std::uint64_t> used;
  auto fresh = [&]() {
    for (;;) {
      const std::uint64_t a = g.below(atoms);
      if (std::find(used.begin(), used.end(), a) == used.end()) {
        used.push_back(a);
        return a;
      }
    }
  };
  for (unsigned j = 0; j < entries; ++j) {
    WitnessEntry e;
    e.index = 3 * j + g.range(0, 2);
    const std::uint64_t h = fresh();
    const std::uint64_t h2 = fresh();
    const Rational sign = g.coin() ? Rational(1) : Rational(-1);
    // mass 19/20 or all of it on h, the rest on a neighbour inside H
    if (g.coin()) {
      e.nu = SignedMeasure(kLevel, {{h, sign}});
    } else {
      e.nu = SignedMeasure(kLevel, {{h, sign * Rational(19, 20)}, {h2, Rational(1, 20)}});
    }
    const std::uint64_t hs[] = {h, h2};
    e.h = ClopenSet::FromAtoms(kLevel, hs);
    out.ctx.prefix.entries.push_back(std::move(e));
  }
  const std::uint64_t theta_atom = fresh();
  out.ctx.theta = SignedMeasure(kLevel, {{theta_atom, Rational(1, 20)}});

  // indices n_0 < ... < n_{2P+1}: an increasing choice of entries
  std::vector<unsigned> picks(entries);
  for (unsigned j = 0; j < entries; ++j) picks[j] = j;
  while (picks.size() > 2 * kernels) picks.erase(picks.begin() + static_cast<long>(g.below(picks.size())));
  for (auto j : picks) out.e.n.push_back(out.ctx.prefix.entries[j].index);

  unsigned m = g.range(1, 2);
  std::vector<ClopenSet> family;
  for (unsigned p = 0; p < kernels; ++p) {
    if (p > 0) m += g.range(1, 2);
    out.e.m.push_back(m);
    const unsigned adds = p == 0 ? g.range(1, 2) : g.range(0, 1);
    for (unsigned a = 0; a < adds; ++a) family.push_back(g.any_set(m).canonical());
    out.e.families.push_back(family);
    const auto& odd = out.ctx.prefix.entries[picks[2 * p + 1]];
    const auto hs = odd.h.atom_indices();
    std::vector<std::uint64_t> ker = {hs.front()};
    if (odd.nu.value(hs.back()).abs() > odd.nu.value(hs.front()).abs()) ker.front() = hs.back();
    if (g.coin(1, 3)) ker.push_back(fresh());
    out.e.kernels.push_back(ClopenSet::FromAtoms(kLevel, ker));
  }
  return out;
}

// Alternating even/odd entries at level 5 against B = V_0^0 with the extreme
// values allowed by the oscillation hypotheses: |ν(B∩H)| = 1/10 or 3/10 and
// |ν|(Hᶜ) = 1/20 placed to push |ν(B)| to 3/20 and 1/4.
inline dyadcert::WitnessSequencePrefix OscillationFixture(unsigned entries) {
  constexpr unsigned kLevel = 5;
  dyadcert::WitnessSequencePrefix pre;
  for (unsigned i = 0; i < entries; ++i) {
    const std::uint64_t base = 8 * i;  // H = {base..base+3}; base is even so base ∈ B
    const bool even = i % 2 == 0;
    std::map<std::uint64_t, Rational> v;
    if (even) {
      v[base] = Rational(1, 10);
      v[base + 1] = Rational(17, 20);
      v[base + 4] = Rational(1, 20);
    } else {
      v[base] = Rational(3, 10);
      v[base + 1] = Rational(13, 20);
      v[base + 4] = Rational(-1, 20);
    }
    WitnessEntry e;
    e.index = i;
    e.nu = SignedMeasure(kLevel, std::move(v));
    const std::uint64_t hs[] = {base, base + 1, base + 2, base + 3};
    e.h = ClopenSet::FromAtoms(kLevel, hs);
    pre.entries.push_back(std::move(e));
  }
  return pre;
}

}  // namespace fixtures
