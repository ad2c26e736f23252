#include "dyadcert/clopen.hpp"

#include <algorithm>
#include <atomic>

#include "dyadcert/errors.hpp"

namespace dyadcert {

namespace {

std::atomic<unsigned> g_max_level{22};

std::uint64_t AtomsAt(unsigned level) { return std::uint64_t{2} << level; }

// Brings both sets to their common (larger) level.
std::pair<AtomMask, unsigned> Aligned(const ClopenSet& a, unsigned level) {
  return {a.mask().tiled(std::uint64_t{1} << (level - a.level())), level};
}

}  // namespace

unsigned max_level() { return g_max_level.load(); }

void set_max_level(unsigned level) {
  if (level > 40) throw InputError("max level must be <= 40");
  g_max_level.store(level);
}

void RequireLevel(unsigned level, const std::string& what) {
  if (level > max_level()) {
    ScaleReport r;
    r.reason = what + ": level " + std::to_string(level) + " exceeds the configured maximum " +
               std::to_string(max_level());
    r.required_level = level;
    r.max_level = max_level();
    r.bytes_per_set = std::max<std::uint64_t>(8, (std::uint64_t{2} << level) / 8);
    throw ScaleError(r);
  }
}

ClopenSet ClopenSet::Full() { return ClopenSet(0, AtomMask::Full(2)); }

ClopenSet ClopenSet::FromMask(AtomMask mask) {
  unsigned level = mask.log2_size() - 1;
  RequireLevel(level, "clopen set");
  return ClopenSet(level, std::move(mask));
}

ClopenSet ClopenSet::FromAtoms(unsigned level, std::span<const std::uint64_t> indices) {
  RequireLevel(level, "clopen set");
  AtomMask m(AtomsAt(level));
  for (auto i : indices) {
    if (i >= m.size()) {
      throw InputError("atom index " + std::to_string(i) + " out of range for level " +
                       std::to_string(level));
    }
    m.set(i);
  }
  return ClopenSet(level, std::move(m));
}

ClopenSet ClopenSet::Atom(const AtomId& atom) {
  std::uint64_t idx = atom.index;
  return FromAtoms(atom.level, std::span<const std::uint64_t>(&idx, 1));
}

ClopenSet ClopenSet::Coordinate(unsigned m, int value) {
  RequireLevel(m, "coordinate set");
  AtomMask mask(AtomsAt(m));
  const std::uint64_t half = std::uint64_t{1} << m;
  for (std::uint64_t i = 0; i < mask.size(); ++i) {
    if (((i & half) != 0) == (value != 0)) mask.set(i);
  }
  return ClopenSet(m, std::move(mask));
}

unsigned ClopenSet::minimal_level() const {
  unsigned level = level_;
  if (level == 0) return 0;
  AtomMask m = mask_;
  while (level > 0 && m.halves_equal()) {
    m = m.lower_half();
    --level;
  }
  return level;
}

ClopenSet ClopenSet::canonical() const {
  unsigned level = level_;
  AtomMask m = mask_;
  while (level > 0 && m.halves_equal()) {
    m = m.lower_half();
    --level;
  }
  return ClopenSet(level, std::move(m));
}

ClopenSet ClopenSet::at_level(unsigned target) const {
  if (target == level_) return *this;
  if (target > level_) {
    RequireLevel(target, "refinement");
    return ClopenSet(target, mask_.tiled(std::uint64_t{1} << (target - level_)));
  }
  unsigned min_level = minimal_level();
  if (target < min_level) {
    throw LevelError("set is not a union of level-" + std::to_string(target) +
                         " atoms; minimal level is " + std::to_string(min_level),
                     min_level);
  }
  AtomMask m = mask_;
  for (unsigned l = level_; l > target; --l) m = m.lower_half();
  return ClopenSet(target, std::move(m));
}

bool ClopenSet::contains_atom(const AtomId& atom) const {
  if (atom.level >= level_) {
    return mask_.test(atom.index & (AtomsAt(level_) - 1));
  }
  // The atom splits into 2^(level_-atom.level) atoms at this level; all must be set.
  const std::uint64_t stride = AtomsAt(atom.level);
  for (std::uint64_t j = atom.index; j < mask_.size(); j += stride) {
    if (!mask_.test(j)) return false;
  }
  return true;
}

std::vector<std::uint64_t> ClopenSet::atom_indices() const {
  std::vector<std::uint64_t> out;
  mask_.for_each_set([&](std::uint64_t i) { out.push_back(i); });
  return out;
}

bool operator==(const ClopenSet& a, const ClopenSet& b) {
  if (a.level_ == b.level_) return a.mask_ == b.mask_;
  const ClopenSet& lo = a.level_ < b.level_ ? a : b;
  const ClopenSet& hi = a.level_ < b.level_ ? b : a;
  if (hi.minimal_level() > lo.level_) return false;
  return hi.at_level(lo.level_).mask_ == lo.mask_;
}

ClopenSet normalize(const ClopenSet& set, unsigned target_level) {
  return set.at_level(target_level);
}

Rational lambda(const ClopenSet& a) {
  return Rational::Dyadic(mpz_class(static_cast<unsigned long>(a.atom_count())),
                          -static_cast<int>(a.level() + 1));
}

Rational lambda(const AtomId& atom) { return Rational::Pow2(-static_cast<int>(atom.level + 1)); }

Rational signed_balance(const ClopenSet& a, unsigned m) {
  if (m > a.level()) return Rational(0);
  return Rational::Dyadic(mpz_class(static_cast<long>(a.mask().balance(m))),
                          -static_cast<int>(a.level() + 1));
}

Rational phi(const ClopenSet& a, unsigned m) { return signed_balance(a, m).abs(); }

Rational psi(const ClopenSet& a, const ClopenSet& b, unsigned m) {
  return (signed_balance(a, m) - signed_balance(b, m)).abs();
}

namespace {

template <typename Op>
ClopenSet Combine(const ClopenSet& a, const ClopenSet& b, Op op) {
  unsigned level = std::max(a.level(), b.level());
  auto [ma, l] = Aligned(a, level);
  auto [mb, l2] = Aligned(b, level);
  (void)l;
  (void)l2;
  op(ma, mb);
  return ClopenSet::FromMask(std::move(ma)).canonical();
}

}  // namespace

ClopenSet meet(const ClopenSet& a, const ClopenSet& b) {
  return Combine(a, b, [](AtomMask& x, const AtomMask& y) { x &= y; });
}
ClopenSet join(const ClopenSet& a, const ClopenSet& b) {
  return Combine(a, b, [](AtomMask& x, const AtomMask& y) { x |= y; });
}
ClopenSet difference(const ClopenSet& a, const ClopenSet& b) {
  return Combine(a, b, [](AtomMask& x, const AtomMask& y) { x.and_not(y); });
}
ClopenSet symdiff(const ClopenSet& a, const ClopenSet& b) {
  return Combine(a, b, [](AtomMask& x, const AtomMask& y) { x ^= y; });
}
ClopenSet complement(const ClopenSet& a) {
  AtomMask m = a.mask();
  m.flip();
  return ClopenSet::FromMask(std::move(m)).canonical();
}

bool subset(const ClopenSet& a, const ClopenSet& b) { return difference(a, b).empty(); }
bool disjoint(const ClopenSet& a, const ClopenSet& b) { return meet(a, b).empty(); }

ClopenSet join_all(std::span<const ClopenSet> sets) {
  if (sets.empty()) return ClopenSet::Empty();
  unsigned level = 0;
  for (const auto& s : sets) level = std::max(level, s.level());
  AtomMask acc(AtomsAt(level));
  for (const auto& s : sets) acc |= s.mask().tiled(std::uint64_t{1} << (level - s.level()));
  return ClopenSet::FromMask(std::move(acc)).canonical();
}

std::optional<SetOp> ParseSetOp(const std::string& name) {
  if (name == "meet") return SetOp::kMeet;
  if (name == "join") return SetOp::kJoin;
  if (name == "complement") return SetOp::kComplement;
  if (name == "difference") return SetOp::kDifference;
  if (name == "symdiff") return SetOp::kSymdiff;
  return std::nullopt;
}

ClopenSet algebra(SetOp op, const ClopenSet& a, const std::optional<ClopenSet>& b) {
  if (op == SetOp::kComplement) {
    if (b) throw InputError("complement takes exactly one argument");
    return complement(a);
  }
  if (!b) throw InputError("binary set operation needs two arguments");
  switch (op) {
    case SetOp::kMeet: return meet(a, *b);
    case SetOp::kJoin: return join(a, *b);
    case SetOp::kDifference: return difference(a, *b);
    case SetOp::kSymdiff: return symdiff(a, *b);
    case SetOp::kComplement: break;
  }
  return complement(a);
}

unsigned max_canonical_level(std::span<const ClopenSet> sets) {
  unsigned out = 0;
  for (const auto& s : sets) out = std::max(out, s.minimal_level());
  return out;
}

Occupancy occupancy(const ClopenSet& a, unsigned n) {
  Occupancy occ;
  occ.n = n;
  const std::uint64_t atoms = AtomsAt(n);
  occ.count.assign(atoms, 0);
  if (n >= a.level()) {
    occ.fine_level = n;
    const std::uint64_t low = AtomsAt(a.level()) - 1;
    for (std::uint64_t u = 0; u < atoms; ++u) occ.count[u] = a.mask().test(u & low) ? 1 : 0;
    return occ;
  }
  occ.fine_level = a.level();
  occ.coords = a.level() - n;
  occ.balance.assign(atoms * occ.coords, 0);
  const std::uint64_t low = atoms - 1;
  a.mask().for_each_set([&](std::uint64_t j) {
    const std::uint64_t u = j & low;
    ++occ.count[u];
    std::int64_t* row = &occ.balance[u * occ.coords];
    for (unsigned c = 0; c < occ.coords; ++c) {
      row[c] += ((j >> (n + 1 + c)) & 1u) ? -1 : 1;
    }
  });
  return occ;
}

}  // namespace dyadcert

namespace dyadcert {

std::string MaskHex(const AtomMask& mask) {
  static constexpr char kHex[] = "0123456789abcdef";
  const std::uint64_t digits = std::max<std::uint64_t>(1, mask.size() / 4);
  std::string out(digits, '0');
  for (std::uint64_t d = 0; d < digits; ++d) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4; ++b) {
      const std::uint64_t bit = d * 4 + b;
      if (bit < mask.size() && mask.test(bit)) nibble |= 1u << b;
    }
    out[digits - 1 - d] = kHex[nibble];
  }
  return out;
}

AtomMask ParseMaskHex(unsigned level, std::string_view hex) {
  RequireLevel(level, "clopen set");
  AtomMask mask(std::uint64_t{2} << level);
  const std::uint64_t digits = std::max<std::uint64_t>(1, mask.size() / 4);
  if (hex.empty() || hex.size() > digits) {
    throw InputError("atoms hex string must have 1.." + std::to_string(digits) +
                     " digits at level " + std::to_string(level));
  }
  const std::uint64_t n = hex.size();
  for (std::uint64_t d = 0; d < n; ++d) {
    const char c = hex[n - 1 - d];
    unsigned v;
    if (c >= '0' && c <= '9') {
      v = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw InputError(std::string("bad hex digit '") + c + "'");
    }
    for (unsigned b = 0; b < 4; ++b) {
      if (!((v >> b) & 1u)) continue;
      const std::uint64_t bit = d * 4 + b;
      if (bit >= mask.size()) {
        throw InputError("atoms hex string sets bits beyond level " + std::to_string(level));
      }
      mask.set(bit);
    }
  }
  return mask;
}

std::string CanonicalKey(const ClopenSet& a) {
  ClopenSet c = a.canonical();
  return std::to_string(c.level()) + ":" + MaskHex(c.mask());
}

}  // namespace dyadcert
