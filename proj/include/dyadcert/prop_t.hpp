#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyadcert/clopen.hpp"
#include "dyadcert/rational.hpp"

namespace dyadcert {

enum class Alternative { kOmits, kFills };

struct AtomRecord {
  std::size_t member = 0;  // position in the input family
  std::uint64_t atom = 0;  // index of U at level n
  Alternative tag = Alternative::kOmits;
  bool omits = false;      // λ(A∩U) <= ελ(U)/n
  bool fills = false;      // λ(U∖A) <= ελ(U)/n
  Rational t1_slack;       // bound - achieved for the tagged alternative
  // max over m in (n, scanned] of m·φ_m(A∩U); 0 when the range is empty.
  Rational t2_peak;
  unsigned t2_peak_m = 0;  // 0 when no m attains a nonzero value
  Rational t2_slack;       // ελ(U) - t2_peak
  bool operator==(const AtomRecord&) const = default;
};

struct PropTCertificate {
  std::string family_digest;
  Rational epsilon;
  unsigned n = 0;
  // Coordinates (n, scanned_through] were checked by exact evaluation; every
  // coordinate beyond is zero because all members are unions of atoms at
  // level <= scanned_through (even split), so mMax is unbounded.
  unsigned scanned_through = 0;
  std::string tail_justification = "even-split";
  std::vector<AtomRecord> records;
};

enum class Condition { kT1, kT2 };

struct Violation {
  std::size_t member = 0;
  std::uint64_t atom = 0;
  Condition condition = Condition::kT1;
  unsigned m = 0;  // coordinate for T2, n for T1
  Rational achieved;
  Rational bound;
};

struct PropTResult {
  std::optional<PropTCertificate> certificate;
  std::vector<Violation> violations;
  bool passed() const { return certificate.has_value(); }
};

// Order-independent digest: sorted unique canonical keys, then SHA-256.
std::string FamilyDigest(std::span<const ClopenSet> family);

PropTResult check_prop_t_at(std::span<const ClopenSet> family, const Rational& epsilon,
                            unsigned n);

struct PropTLevel {
  unsigned n = 0;
  PropTCertificate certificate;
};
PropTLevel find_prop_t_level(std::span<const ClopenSet> family, const Rational& epsilon,
                             unsigned min_level);

// Recomputes every recorded quantity from raw masks through meet/lambda/phi.
// Returns an empty string when consistent, otherwise a description of the first mismatch.
std::string ReverifyCertificate(std::span<const ClopenSet> family, const PropTCertificate& cert);

struct VwWitness {
  unsigned n = 0;
  AtomId u;
  Rational inside;   // λ(V_W∩U)
  Rational outside;  // λ(U∖V_W)
  Rational half;     // λ(U)/2
  bool others_disjoint = false;
};

struct VwCounterexample {
  AtomId sigma;
  unsigned big_n = 0;
  std::vector<AtomId> tau;  // τ_k for k = 0..depth
  std::vector<VwWitness> witnesses;
  bool all_equal() const;
};

VwCounterexample build_vw_counterexample(const ClopenSet& w, unsigned depth);

}  // namespace dyadcert
