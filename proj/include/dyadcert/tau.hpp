#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dyadcert/clopen.hpp"
#include "dyadcert/rational.hpp"

namespace dyadcert {

// Atoms of the algebra generated by `generators` as one label per atom of the
// finest generator level. Labels are dense and numbered by first appearance.
struct AlgebraLabels {
  unsigned level = 0;
  std::vector<std::uint32_t> label;
  std::uint32_t count = 0;
};
AlgebraLabels label_algebra(std::span<const ClopenSet> generators);
std::vector<ClopenSet> atoms_from_labels(const AlgebraLabels& labels);

// Atoms of the finite algebra generated by `generators`, ordered by lowest
// atom index. Empty atoms never appear; an empty generator list gives {2^N}.
std::vector<ClopenSet> algebra_atoms(std::span<const ClopenSet> generators);

// All unions of the algebra atoms. Element s is the union of atoms whose bit is
// set in s, so element 0 is ∅ and the last is 2^N. Throws InputError when the
// element count would exceed `cap`.
std::vector<ClopenSet> generate_algebra(std::span<const ClopenSet> generators,
                                        std::uint64_t cap = std::uint64_t{1} << 16);

struct TauVerification {
  bool zero = true;        // τ(∅) = ∅ when ∅ is listed
  bool unit = true;        // τ(2^N) = 2^N when 2^N is listed
  bool complement = true;  // τ(Aᶜ) = τ(A)ᶜ for listed pairs
  bool join = true;        // τ(A∪B) = τ(A)∪τ(B) for listed triples
  bool meet = true;        // τ(A∩B) = τ(A)∩τ(B) for listed triples
  bool approximation = true;
  bool identity_on_level = true;  // τ(A) = A when A is a union of level-n atoms
  std::uint64_t pairs_checked = 0;
  std::string first_failure;
  bool ok() const {
    return zero && unit && complement && join && meet && approximation && identity_on_level;
  }
};

struct TauMap {
  std::vector<ClopenSet> elements;
  unsigned n = 0;
  Rational epsilon;
  std::vector<ClopenSet> images;
  std::vector<Rational> error;  // λ(A△τ(A))
  Rational error_bound;         // ε/n
  TauVerification verification;
};

// The hypothesis failed for (element, atom of level n).
struct TauHypothesisFailure {
  std::size_t element = 0;
  std::uint64_t atom = 0;
  Rational inside;
  Rational outside;
  Rational bound;
};

class TauHypothesisError : public std::runtime_error {
 public:
  explicit TauHypothesisError(TauHypothesisFailure f);
  const TauHypothesisFailure& failure() const { return failure_; }

 private:
  TauHypothesisFailure failure_;
};

TauMap build_tau(std::span<const ClopenSet> elements, unsigned n, const Rational& epsilon);

// Replays the homomorphism laws and the approximation bound from the images.
TauVerification verify_tau(const TauMap& map);

}  // namespace dyadcert
