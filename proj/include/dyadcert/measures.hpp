#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyadcert/clopen.hpp"
#include "dyadcert/prop_t.hpp"
#include "dyadcert/rational.hpp"

namespace dyadcert {

// Finitely additive signed measure given by its values on the atoms of one level.
// Stored sparsely: atoms not listed carry 0.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  SignedMeasure(unsigned level, std::map<std::uint64_t, Rational> values);
  static SignedMeasure Dense(unsigned level, std::span<const Rational> values);
  static SignedMeasure PointMass(unsigned level, std::uint64_t atom, const Rational& value);

  unsigned level() const { return level_; }
  std::uint64_t atoms() const { return std::uint64_t{2} << level_; }
  const std::map<std::uint64_t, Rational>& values() const { return values_; }
  Rational value(std::uint64_t atom) const;

  // ν(A); throws InputError when A is not a union of atoms of this level.
  Rational operator()(const ClopenSet& a) const;
  // |ν|(A); the whole space when absent.
  Rational variation(const std::optional<ClopenSet>& a = std::nullopt) const;
  Rational norm() const { return variation(); }

 private:
  void CheckRepresentable(const ClopenSet& a) const;

  unsigned level_ = 0;
  std::map<std::uint64_t, Rational> values_;
};

Rational total_variation(const SignedMeasure& nu, const std::optional<ClopenSet>& a);

// μ_n at `level`: atom value +nλ(a) inside V_n^0, -nλ(a) inside V_n^1.
SignedMeasure nikodym_witness(unsigned n, unsigned level);

struct NikodymRow {
  unsigned m = 0;
  Rational sup_value;  // max over the family of |μ_m(A)|
  Rational formula_sup;  // max over the family of m·φ_m(A)
  Rational norm;       // ‖μ_m‖
  bool bounded = false;  // sup_value <= ε and sup_value == formula_sup
  bool norm_ok = false;  // norm == m
};

struct NikodymReport {
  unsigned n = 0;
  Rational epsilon;
  std::string certificate_digest;
  unsigned m_max = 0;
  // Every μ_m(A) with m beyond this level vanishes by even-split symmetry.
  unsigned symbolic_from = 0;
  std::vector<NikodymRow> rows;
  bool ok() const;
};

NikodymReport nikodym_demo(std::span<const ClopenSet> family, const Rational& epsilon, unsigned m_max);

struct WitnessEntry {
  unsigned index = 0;
  SignedMeasure nu;
  ClopenSet h;
};

struct WitnessSequencePrefix {
  std::vector<WitnessEntry> entries;
  const WitnessEntry* find(unsigned index) const;
};

struct PrefixIssue {
  unsigned index = 0;
  std::string problem;
};
// ‖ν‖ = 1, |ν|(H) >= 19/20, H's pairwise disjoint.
std::vector<PrefixIssue> ValidatePrefix(const WitnessSequencePrefix& prefix);

struct OscillationEntry {
  unsigned index = 0;
  bool even = true;     // even position in the prefix
  Rational inside;      // |ν(B∩H)|
  Rational outside_variation;  // |ν|(Hᶜ)
  Rational value;       // |ν(B)|
  Rational derived_bound;  // |ν(B∩H)| ± |ν|(Hᶜ)
  bool hypothesis = false;  // <= 1/10 (even) or >= 3/10 (odd)
  bool conclusion = false;  // <= 3/20 (even) or >= 1/4 (odd)
};

struct OscillationReport {
  std::vector<OscillationEntry> entries;
  Rational even_max;
  Rational odd_min;
  bool separated = false;
  Rational gap;
  std::vector<PrefixIssue> issues;
  bool ok() const;
};

OscillationReport oscillation_check(const WitnessSequencePrefix& prefix, const ClopenSet& b);

struct ModulusEntry {
  Rational epsilon;
  Rational delta;
};

struct ModulusCheck {
  Rational epsilon, delta;
  std::uint64_t max_atoms = 0;  // largest atom count with λ < δ
  Rational worst_value;         // θ₁ of the worst such set
  ClopenSet worst_set;
  bool ok = false;
};

struct DecompositionReport {
  std::vector<std::uint64_t> sum_failures;  // atoms where θ != θ₁ + θ₂
  std::vector<std::uint64_t> negative_atoms;  // θ₁ or θ₂ < 0
  std::vector<ModulusCheck> modulus;
  Rational lambda_x;
  Rational theta2_outside_x;
  bool orthogonality_ok = false;
  bool level_ok = true;
  bool ok() const;
};

DecompositionReport validate_decomposition(const SignedMeasure& theta, const SignedMeasure& theta1,
                                           const SignedMeasure& theta2,
                                           std::span<const ModulusEntry> modulus, const ClopenSet& x,
                                           const Rational& epsilon_x);

}  // namespace dyadcert
