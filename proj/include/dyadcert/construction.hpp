#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "dyadcert/clopen.hpp"
#include "dyadcert/measures.hpp"
#include "dyadcert/rational.hpp"
#include "dyadcert/talagrand.hpp"

namespace dyadcert {

// Families B_q, kernels N_q, levels m_q, measure indices n_q (2 per kernel).
// The empty quadruple has no entries and p' = -1.
struct GoodQuadruple {
  std::vector<std::vector<ClopenSet>> families;
  std::vector<ClopenSet> kernels;
  std::vector<unsigned> m;
  std::vector<unsigned> n;

  int p_prime() const { return static_cast<int>(kernels.size()) - 1; }
  // B_p = N_0 ∪ ... ∪ N_p; ∅ for p < 0.
  ClopenSet prefix_union(int p) const;
  // Entries with index <= p.
  GoodQuadruple truncated(int p) const;
};

struct Decomposition {
  SignedMeasure theta1;
  SignedMeasure theta2;
  std::vector<ModulusEntry> modulus;
  ClopenSet x;
  Rational epsilon_x;
};

struct QuadrupleContext {
  WitnessSequencePrefix prefix;
  SignedMeasure theta;
  std::optional<Decomposition> decomposition;
};

struct ConditionRecord {
  std::string code;  // "G.1", "G.4.b", "structure", ...
  int p = 0;
  int q = -1;
  int member = -1;     // index into B_q
  std::int64_t atom = -1;  // atom of level m_q
  unsigned coordinate = 0;
  Rational achieved;
  Rational bound;
  bool ok = false;
  std::string detail;
};

struct QuadrupleReport {
  bool good = false;
  std::uint64_t checks = 0;
  // Every failed check; passes are counted, not listed.
  std::vector<ConditionRecord> failures;
  // One summary row per (condition, p): the tightest achieved value.
  std::vector<ConditionRecord> summary;
};

// Checks the structural constraints and G.1-G.4 from raw masks.
// Throws InputError when an index n_r is missing from the context.
QuadrupleReport validate_good_quadruple(const GoodQuadruple& e, const QuadrupleContext& ctx);

enum class Mode { kStrict, kRelaxed };

struct TroisiemeInputs {
  std::vector<ClopenSet> d0;
  unsigned t = 1;
  Rational eta;
  ClopenSet x, w, y, h;
  Mode mode = Mode::kRelaxed;
  std::uint64_t seed = 0;
  SearchBudget budget;
  // Upper bound for the working level (e.g. the level of the context measures).
  unsigned level_limit = 0;  // 0: use max_level()
};

struct PerBlock {
  std::size_t index = 0;
  AtomId u;
  Rational concentration;  // λ(U∩C)/λ(U)
  TalagrandReport report;
};

struct A3Record {
  std::size_t block = 0;
  unsigned m = 0;
  Rational achieved;
  Rational bound;
};

struct TroisiemeResult {
  ClopenSet a;
  Rational zeta, delta, eta_block;
  unsigned n = 0;
  unsigned n0 = 0;  // strict mode only
  std::size_t algebra_atoms = 0;
  std::vector<PerBlock> blocks;
  std::vector<std::string> warnings;
  // validation, recomputed from raw masks
  bool a1 = false, a2 = false, a3 = false;
  Rational lambda_a;
  unsigned a3_scanned_through = 0;
  std::vector<A3Record> a3_failures;
  bool valid() const { return a1 && a2 && a3; }
};

TroisiemeResult construct_A_troisieme(const TroisiemeInputs& in);

// Validation of (A.1)-(A.3) for a given A, independent of the constructor.
void ValidateTroisieme(const TroisiemeInputs& in, TroisiemeResult& out);

struct ScanRecord {
  unsigned index = 0;
  std::string role;  // "n_{2p+2}" or "n_{2p+3}"
  std::vector<std::string> failed;
};

// No admissible pair of indices (or no admissible t) inside the context.
class ExtendExhausted : public std::runtime_error {
 public:
  ExtendExhausted(const std::string& what, std::vector<ScanRecord> scan)
      : std::runtime_error(what), scan_(std::move(scan)) {}
  const std::vector<ScanRecord>& scan() const { return scan_; }

 private:
  std::vector<ScanRecord> scan_;
};

struct ExtendConstants {
  int p = -1;
  Rational eps_f;
  unsigned m_next = 0;
  std::size_t d0_size = 0;
  Rational eps_d;
  unsigned t = 0;
  Rational xi, delta, gamma, zeta;
  unsigned n_even = 0, n_odd = 0;
  Rational y_value;
};

struct ExtendResult {
  GoodQuadruple extended;
  ExtendConstants constants;
  ClopenSet y;
  ClopenSet kernel;
  TroisiemeResult troisieme;
  std::vector<ScanRecord> scan;
  std::vector<std::string> warnings;
  QuadrupleReport validation;
};

ExtendResult extend_quadruple(const GoodQuadruple& e, const ClopenSet& b, const QuadrupleContext& ctx,
                              Mode mode, std::uint64_t seed, const SearchBudget& budget);

// Greedy single-sign selection of atoms of ν inside `region` until |ν(Y)| >= 2/5.
std::optional<ClopenSet> SelectY(const SignedMeasure& nu, const ClopenSet& region);

struct AssemblyReport {
  int k = 0;
  ClopenSet b_cap_h;
  unsigned index = 0;  // n_k
  Rational value;      // |ν_{n_k}(B∩H_{n_k})|
  Rational bound;
  std::string condition;  // "B.2" or "B.3"
  bool g1_ok = false;
  bool identity_ok = false;
  bool ok = false;
};

AssemblyReport assemble_limit_set(std::span<const ClopenSet> kernels, std::span<const unsigned> n,
                                  const QuadrupleContext& ctx, unsigned k);

}  // namespace dyadcert
