#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kats {

// Every failure the library can raise, by name. Codes marked "checked" below
// describe a mathematical condition that was tested on well-formed input and
// found false (they carry a witness in the message); the rest are structural
// or precondition violations.
enum class errc {
  // gf
  composite_characteristic,
  degree_overflow,
  division_by_zero,
  field_mismatch,
  no_such_root,
  no_embedding,
  // characters / cyclotomics
  bad_order,
  incomplete_assignment,
  ramified_order,
  imprimitive_character,
  not_p_integral,
  // qseries
  precision_underflow,
  not_coprime,
  bad_level_divisibility,
  characteristic_divides_level,
  not_pure,
  non_integral_level,
  not_normalizable,
  not_eigenform,
  // eisenstein
  parity_violation,
  illegal_e2,
  bad_prime,
  // newform
  bad_level,
  level_not_divisible,
  mixed_metadata,
  s_not_dividing_level,
  theta_nonzero,
  negative_weight,
  not_a_root,
  hypothesis_violation,
  stage1_fail,
  stage2_fail,
  identity_fail,
  // cli
  unknown_entry,
  parse_error,
  usage_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::composite_characteristic: return "CompositeCharacteristic";
    case errc::degree_overflow: return "DegreeOverflow";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::no_such_root: return "NoSuchRoot";
    case errc::no_embedding: return "NoEmbedding";
    case errc::bad_order: return "BadOrder";
    case errc::incomplete_assignment: return "IncompleteAssignment";
    case errc::ramified_order: return "RamifiedOrder";
    case errc::imprimitive_character: return "ImprimitiveCharacter";
    case errc::not_p_integral: return "NotPIntegral";
    case errc::precision_underflow: return "PrecisionUnderflow";
    case errc::not_coprime: return "NotCoprime";
    case errc::bad_level_divisibility: return "BadLevelDivisibility";
    case errc::characteristic_divides_level: return "CharacteristicDividesLevel";
    case errc::not_pure: return "NotPure";
    case errc::non_integral_level: return "NonIntegralLevel";
    case errc::not_normalizable: return "NotNormalizable";
    case errc::not_eigenform: return "NotEigenform";
    case errc::parity_violation: return "ParityViolation";
    case errc::illegal_e2: return "IllegalE2";
    case errc::bad_prime: return "BadPrime";
    case errc::bad_level: return "BadLevel";
    case errc::level_not_divisible: return "LevelNotDivisible";
    case errc::mixed_metadata: return "MixedMetadata";
    case errc::s_not_dividing_level: return "SNotDividingLevel";
    case errc::theta_nonzero: return "ThetaNonzero";
    case errc::negative_weight: return "NegativeWeight";
    case errc::not_a_root: return "NotARoot";
    case errc::hypothesis_violation: return "HypothesisViolation";
    case errc::stage1_fail: return "Stage1Fail";
    case errc::stage2_fail: return "Stage2Fail";
    case errc::identity_fail: return "IdentityFail";
    case errc::unknown_entry: return "UnknownEntry";
    case errc::parse_error: return "ParseError";
    case errc::usage_error: return "UsageError";
  }
  return "?";
}

// True for failures of a mathematical check on well-formed input (the CLI maps
// these to exit 1, "checked and failed, witness in the message"); false for
// usage and precondition errors (exit 2).
inline bool errc_is_checked_failure(errc c) {
  switch (c) {
    case errc::not_p_integral:
    case errc::not_pure:
    case errc::non_integral_level:
    case errc::not_eigenform:
    case errc::theta_nonzero:
    case errc::not_a_root:
    case errc::hypothesis_violation:
    case errc::stage1_fail:
    case errc::stage2_fail:
    case errc::identity_fail:
      return true;
    default:
      return false;
  }
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  error(errc code, const std::string& what, uint64_t witness)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code),
        witness_(witness), has_witness_(true) {}
  errc code() const { return code_; }
  bool has_witness() const { return has_witness_; }
  // The index (coefficient exponent, prime, ...) at which the check failed.
  uint64_t witness() const { return witness_; }

 private:
  errc code_;
  uint64_t witness_ = 0;
  bool has_witness_ = false;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }
[[noreturn]] inline void raise(errc code, const std::string& what, uint64_t witness) {
  throw error(code, what, witness);
}

}  // namespace kats
