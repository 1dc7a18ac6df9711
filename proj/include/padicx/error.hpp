#ifndef PADICX_ERROR_HPP
#define PADICX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace padicx {

enum class errc {
  prime_mismatch,
  division_by_zero,
  zero_residue,
  zero_input,
  convergence_domain,
  singular_matrix,
  not_hyperbolic,
  out_of_table,
  bad_moment_index,
  depth_too_shallow,
  z0_in_qp,
  zero_schneider,
  integral_j_invariant,
  domain_violation,
  not_multiplicative,
  embedding_unsupported,
  missing_level,
  level_unavailable,
  inconsistent_case,
  invalid_cocycle,
  no_stabilization,
  row_sum_nonzero,
  missing_param,
  pole_at_s,
  divergent_parameters,
  parse_error,
  usage,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::prime_mismatch: return "PrimeMismatch";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::zero_residue: return "ZeroResidue";
    case errc::zero_input: return "ZeroInput";
    case errc::convergence_domain: return "ConvergenceDomain";
    case errc::singular_matrix: return "SingularMatrix";
    case errc::not_hyperbolic: return "NotHyperbolic";
    case errc::out_of_table: return "OutOfTable";
    case errc::bad_moment_index: return "BadMomentIndex";
    case errc::depth_too_shallow: return "DepthTooShallow";
    case errc::z0_in_qp: return "Z0InQp";
    case errc::zero_schneider: return "ZeroSchneider";
    case errc::integral_j_invariant: return "IntegralJInvariant";
    case errc::domain_violation: return "DomainViolation";
    case errc::not_multiplicative: return "NotMultiplicative";
    case errc::embedding_unsupported: return "EmbeddingUnsupported";
    case errc::missing_level: return "MissingLevel";
    case errc::level_unavailable: return "LevelUnavailable";
    case errc::inconsistent_case: return "InconsistentCase";
    case errc::invalid_cocycle: return "InvalidCocycle";
    case errc::no_stabilization: return "NoStabilization";
    case errc::row_sum_nonzero: return "RowSumNonzero";
    case errc::missing_param: return "MissingParam";
    case errc::pole_at_s: return "PoleAtS";
    case errc::divergent_parameters: return "DivergentParameters";
    case errc::parse_error: return "ParseError";
    case errc::usage: return "Usage";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace padicx

#endif
