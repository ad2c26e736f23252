#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dyadcert/atom_mask.hpp"
#include "dyadcert/rational.hpp"

namespace dyadcert {

// Atom of level `level`: the cylinder fixing coordinates 0..level.
// Bit j of `index` is the value of coordinate j.
struct AtomId {
  unsigned level = 0;
  std::uint64_t index = 0;
  bool operator==(const AtomId&) const = default;
};

// A finite union of atoms at some level. The mask has 2^(level+1) bits.
// Equality is semantic (compares canonical forms).
class ClopenSet {
 public:
  ClopenSet() = default;  // empty set at level 0

  static ClopenSet Empty() { return ClopenSet(); }
  static ClopenSet Full();
  // Takes the mask as given; level = log2(mask.size()) - 1.
  static ClopenSet FromMask(AtomMask mask);
  static ClopenSet FromAtoms(unsigned level, std::span<const std::uint64_t> indices);
  static ClopenSet Atom(const AtomId& atom);
  // V_m^i: points whose coordinate m equals i. Emitted at level m.
  static ClopenSet Coordinate(unsigned m, int value);

  unsigned level() const { return level_; }
  const AtomMask& mask() const { return mask_; }
  std::uint64_t atom_count() const { return mask_.count(); }
  bool empty() const { return mask_.none(); }
  bool is_full() const { return mask_.all(); }
  // Whether the atom with this index at this set's level is included.
  bool has_atom(std::uint64_t index) const { return mask_.test(index); }

  unsigned minimal_level() const;
  ClopenSet canonical() const;
  // Same point set at `target`; throws LevelError below minimal_level().
  ClopenSet at_level(unsigned target) const;

  // Whether the point set contains every point of `atom` (atom at any level).
  bool contains_atom(const AtomId& atom) const;

  std::vector<std::uint64_t> atom_indices() const;

  friend bool operator==(const ClopenSet& a, const ClopenSet& b);

 private:
  ClopenSet(unsigned level, AtomMask mask) : level_(level), mask_(std::move(mask)) {}

  unsigned level_ = 0;
  AtomMask mask_;
};

ClopenSet normalize(const ClopenSet& set, unsigned target_level);

Rational lambda(const ClopenSet& a);
Rational lambda(const AtomId& atom);
// λ(A∩V_m^0) - λ(A∩V_m^1).
Rational signed_balance(const ClopenSet& a, unsigned m);
Rational phi(const ClopenSet& a, unsigned m);
Rational psi(const ClopenSet& a, const ClopenSet& b, unsigned m);

ClopenSet meet(const ClopenSet& a, const ClopenSet& b);
ClopenSet join(const ClopenSet& a, const ClopenSet& b);
ClopenSet complement(const ClopenSet& a);
ClopenSet difference(const ClopenSet& a, const ClopenSet& b);
ClopenSet symdiff(const ClopenSet& a, const ClopenSet& b);
bool subset(const ClopenSet& a, const ClopenSet& b);
bool disjoint(const ClopenSet& a, const ClopenSet& b);
ClopenSet join_all(std::span<const ClopenSet> sets);

enum class SetOp { kMeet, kJoin, kComplement, kDifference, kSymdiff };
std::optional<SetOp> ParseSetOp(const std::string& name);
// Arity-checked dispatcher; throws InputError on arity mismatch.
ClopenSet algebra(SetOp op, const ClopenSet& a, const std::optional<ClopenSet>& b);

// Highest canonical level among the sets (0 for an empty list).
unsigned max_canonical_level(std::span<const ClopenSet> sets);

// For each atom U of level n: the number of atoms of `a` at level max(n, a.level())
// lying inside U, and for each coordinate m in (n, a.level()] the balance
// (#bit m = 0) - (#bit m = 1) of those atoms. Counts are in units of
// 2^-(max(n, a.level())+1).
struct Occupancy {
  unsigned n = 0;
  unsigned fine_level = 0;
  std::vector<std::uint64_t> count;           // size 2^(n+1)
  std::vector<std::int64_t> balance;          // size 2^(n+1) * coords, row-major by atom
  unsigned coords = 0;                        // fine_level - n when fine_level > n
  std::int64_t balance_at(std::uint64_t u, unsigned m) const {
    return balance[u * coords + (m - n - 1)];
  }
};
Occupancy occupancy(const ClopenSet& a, unsigned n);

// Hex of the mask, most-significant nibble first, ceil(2^(level+1)/4) digits.
std::string MaskHex(const AtomMask& mask);
// Inverse of MaskHex; throws InputError on bad digits or bits beyond the mask.
AtomMask ParseMaskHex(unsigned level, std::string_view hex);
// "level:hex" of the canonical form; equal sets give equal keys.
std::string CanonicalKey(const ClopenSet& a);

}  // namespace dyadcert
