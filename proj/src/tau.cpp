#include "dyadcert/tau.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>

#include "dyadcert/errors.hpp"

namespace dyadcert {

AlgebraLabels label_algebra(std::span<const ClopenSet> generators) {
  AlgebraLabels out;
  for (const auto& g : generators) out.level = std::max(out.level, g.canonical().level());
  RequireLevel(out.level, "algebra atoms");
  out.label.assign(std::uint64_t{2} << out.level, 0);
  std::uint32_t next = 1;
  std::vector<std::uint32_t> split;  // old label -> label of its part inside the generator
  for (const auto& g : generators) {
    const ClopenSet fine = g.at_level(out.level);
    split.assign(next, 0);
    fine.mask().for_each_set([&](std::uint64_t j) {
      auto& target = split[out.label[j]];
      if (target == 0) target = next++;
      out.label[j] = target;
    });
  }
  // Relabel densely in order of first appearance; pieces that ended up empty vanish.
  std::vector<std::uint32_t> dense(next, UINT32_MAX);
  out.count = 0;
  for (auto& l : out.label) {
    if (dense[l] == UINT32_MAX) dense[l] = out.count++;
    l = dense[l];
  }
  return out;
}

std::vector<ClopenSet> atoms_from_labels(const AlgebraLabels& labels) {
  std::vector<std::vector<std::uint64_t>> members(labels.count);
  for (std::uint64_t j = 0; j < labels.label.size(); ++j) members[labels.label[j]].push_back(j);
  std::vector<ClopenSet> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(ClopenSet::FromAtoms(labels.level, m).canonical());
  return out;
}

std::vector<ClopenSet> algebra_atoms(std::span<const ClopenSet> generators) {
  return atoms_from_labels(label_algebra(generators));
}

std::vector<ClopenSet> generate_algebra(std::span<const ClopenSet> generators, std::uint64_t cap) {
  std::vector<ClopenSet> atoms = algebra_atoms(generators);
  if (atoms.size() >= 63 || (std::uint64_t{1} << atoms.size()) > cap) {
    throw InputError("algebra has " + std::to_string(atoms.size()) +
                     " atoms; element count exceeds the cap of " + std::to_string(cap));
  }
  const std::uint64_t count = std::uint64_t{1} << atoms.size();
  std::vector<ClopenSet> elements;
  elements.reserve(count);
  elements.push_back(ClopenSet::Empty());
  for (std::uint64_t s = 1; s < count; ++s) {
    const unsigned low = static_cast<unsigned>(std::countr_zero(s));
    elements.push_back(join(elements[s & (s - 1)], atoms[low]));
  }
  return elements;
}

TauHypothesisError::TauHypothesisError(TauHypothesisFailure f)
    : std::runtime_error("hypothesis fails for element " + std::to_string(f.element) +
                         " at atom " + std::to_string(f.atom)),
      failure_(std::move(f)) {}

TauMap build_tau(std::span<const ClopenSet> elements, unsigned n, const Rational& epsilon) {
  if (n == 0) throw InputError("n must be > 0");
  if (epsilon.sign() <= 0 || epsilon >= Rational(1, 4)) {
    throw PreconditionError("epsilon must satisfy 0 < epsilon < 1/4");
  }
  RequireLevel(n, "tau target level");
  TauMap map;
  map.n = n;
  map.epsilon = epsilon;
  map.error_bound = epsilon / Rational(static_cast<long>(n));
  const std::uint64_t atoms = std::uint64_t{2} << n;
  const Rational lu = Rational::Pow2(-static_cast<int>(n + 1));

  for (std::size_t i = 0; i < elements.size(); ++i) {
    const ClopenSet e = elements[i].canonical();
    map.elements.push_back(e);
    const Occupancy occ = occupancy(e, n);
    const unsigned extra = occ.fine_level - n;
    const std::uint64_t per_atom = std::uint64_t{1} << extra;
    // bound in units of 2^-(fine+1); comparisons with integers use its floor
    const Rational bound_units =
        epsilon * Rational::Pow2(static_cast<int>(extra)) / Rational(static_cast<long>(n));
    const std::uint64_t limit = bound_units.floor().get_ui();
    AtomMask image(atoms);
    for (std::uint64_t u = 0; u < atoms; ++u) {
      const std::uint64_t inside = occ.count[u];
      const std::uint64_t outside = per_atom - inside;
      if (outside <= limit) {
        image.set(u);
      } else if (inside > limit) {
        const int exp = -static_cast<int>(occ.fine_level + 1);
        throw TauHypothesisError({i, u, Rational::Dyadic(mpz_class(static_cast<unsigned long>(inside)), exp),
                                  Rational::Dyadic(mpz_class(static_cast<unsigned long>(outside)), exp),
                                  epsilon * lu / Rational(static_cast<long>(n))});
      }
    }
    ClopenSet img = ClopenSet::FromMask(std::move(image)).canonical();
    map.error.push_back(lambda(symdiff(e, img)));
    map.images.push_back(std::move(img));
  }
  map.verification = verify_tau(map);
  return map;
}

TauVerification verify_tau(const TauMap& map) {
  TauVerification v;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < map.elements.size(); ++i) {
    index.emplace(CanonicalKey(map.elements[i]), i);
  }
  auto fail = [&](bool& flag, const std::string& what) {
    flag = false;
    if (v.first_failure.empty()) v.first_failure = what;
  };
  auto lookup = [&](const ClopenSet& s) -> long {
    auto it = index.find(CanonicalKey(s));
    return it == index.end() ? -1 : static_cast<long>(it->second);
  };

  for (std::size_t i = 0; i < map.elements.size(); ++i) {
    const ClopenSet& a = map.elements[i];
    const ClopenSet& ta = map.images[i];
    if (a.empty() && !ta.empty()) fail(v.zero, "tau(empty) is not empty");
    if (a.is_full() && !ta.is_full()) fail(v.unit, "tau(full) is not full");
    if (ta.minimal_level() > map.n) fail(v.approximation, "image is not a union of level-n atoms");
    if (lambda(symdiff(a, ta)) > map.error_bound) {
      fail(v.approximation, "approximation bound fails for element " + std::to_string(i));
    }
    if (a.minimal_level() <= map.n && !(ta == a)) {
      fail(v.identity_on_level, "element " + std::to_string(i) + " of level <= n not fixed");
    }
    const long c = lookup(complement(a));
    if (c >= 0 && !(map.images[static_cast<std::size_t>(c)] == complement(ta))) {
      fail(v.complement, "complement law fails for element " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < map.elements.size(); ++i) {
    for (std::size_t j = i + 1; j < map.elements.size(); ++j) {
      ++v.pairs_checked;
      const long u = lookup(join(map.elements[i], map.elements[j]));
      if (u >= 0 && !(map.images[static_cast<std::size_t>(u)] == join(map.images[i], map.images[j]))) {
        fail(v.join, "join law fails for pair " + std::to_string(i) + "," + std::to_string(j));
      }
      const long m = lookup(meet(map.elements[i], map.elements[j]));
      if (m >= 0 && !(map.images[static_cast<std::size_t>(m)] == meet(map.images[i], map.images[j]))) {
        fail(v.meet, "meet law fails for pair " + std::to_string(i) + "," + std::to_string(j));
      }
    }
  }
  return v;
}

}  // namespace dyadcert
