#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dyadcert/clopen.hpp"
#include "dyadcert/rational.hpp"

namespace dyadcert {

struct TalagrandInstance {
  unsigned t = 1;
  Rational eta;
  unsigned n = 1;
  ClopenSet p, r, z, q;
  AtomId g;
  bool relaxed = false;
};

// Minimal n >= t with n^3 <= eta * 2^n.
unsigned n_zero(unsigned t, const Rational& eta);

// Largest k·2^-(n+1) strictly inside (eta/2, eta). Throws InputError if none.
Rational select_eta_prime(const Rational& eta, unsigned n);

// Typing checks always; scalar hypotheses unless relaxed. Throws
// PreconditionError / ScaleError.
void ValidateInstance(const TalagrandInstance& inst);

struct SearchBudget {
  unsigned restarts = 4;        // descents tried before escalation
  unsigned extra_restarts = 8;  // further descents after a missed bound
  std::uint64_t oracle_cap = 100000;
  std::uint64_t max_swaps = 1000000;
};

struct CoordinateRecord {
  unsigned m = 0;
  Rational a, b, psi, bound;
  bool ok = false;
};

enum class Verdict { kBoundMet, kBoundMissed };
const char* VerdictName(Verdict v);

struct SearchTrace {
  unsigned restarts_run = 0;
  std::uint64_t swaps = 0;
  std::string convergence;  // "local-optimum", "swap-budget", "oracle"
  bool escalated = false;
  bool oracle_used = false;
  std::string oracle_candidates;  // exact C(|Q'|, k) as decimal
};

struct TalagrandReport {
  ClopenSet m;
  Rational eta_prime;
  std::uint64_t k = 0;
  std::uint64_t q_prime_atoms = 0;
  Rational s_score;
  std::vector<CoordinateRecord> per_m;
  SearchTrace trace;
  Verdict verdict = Verdict::kBoundMissed;
};

// S(M) for M at level <= n, after replacing Z, R by Z∩Q, R∩Q.
Rational s_score(const ClopenSet& m, const TalagrandInstance& inst);

TalagrandReport solve(const TalagrandInstance& inst, std::uint64_t seed, const SearchBudget& budget);

struct OracleInfeasible {
  std::string count;  // exact C(|Q'|, k)
};
std::variant<TalagrandReport, OracleInfeasible> exhaustive_oracle(const TalagrandInstance& inst,
                                                                  std::uint64_t cap);

// Fills per-coordinate records from raw sets (ψ via dyadic_core) and the verdict.
void Evaluate(const TalagrandInstance& inst, TalagrandReport& report);

// Every swap of one atom of M for one atom of Q'∖M does not decrease S, replayed
// exactly with rationals; also asserts the linearized inequality with n·2^-n.
struct LocalOptimality {
  bool local_optimum = true;
  bool linearized = true;
  std::uint64_t swaps_checked = 0;
};
LocalOptimality ReplayLocalOptimality(const TalagrandInstance& inst, const ClopenSet& m);

// Checks b_m(M^{U,V}) = b_m(M) + 2^-(n+1)(x_m^V - x_m^U) for the given atoms.
bool CheckSwapIdentity(const TalagrandInstance& inst, const ClopenSet& m, std::uint64_t out_atom,
                       std::uint64_t in_atom);

struct PzMode {
  bool enumerate = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct PzReport {
  Rational zeta;
  bool exact = true;
  Rational probability;          // exact (ENUMERATE) or hits/samples (SAMPLE)
  double estimate = 0.0;         // Monte Carlo frequency, SAMPLE only
  std::uint64_t omega_atoms = 0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  Rational omega_measure;
  Rational g_measure;
  bool omega_large = false;      // λ(Ω) >= (4/5)λ(G)
  bool degenerate = false;       // S(M) = 0
  bool pass = false;
};

Rational pz_zeta(const Rational& xi, const Rational& c = Rational(1));
PzReport paley_zygmund_check(const TalagrandInstance& inst, const ClopenSet& m, const Rational& xi,
                             const PzMode& mode);

}  // namespace dyadcert
