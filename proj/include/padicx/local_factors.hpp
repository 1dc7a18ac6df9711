#ifndef PADICX_LOCAL_FACTORS_HPP
#define PADICX_LOCAL_FACTORS_HPP

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "padicx/error.hpp"

namespace padicx {

// Exact rational coefficient times a formal product of opaque transcendental
// tokens ("pi", "Gamma(k)", "L(1,Ad)", "sqrt(x)", ...).  Equality is equality
// of normal forms.  Gamma at positive integer arguments and perfect-square
// square roots fold into the rational part.
class SymbolicValue {
 public:
  SymbolicValue() : coef_(0) {}
  explicit SymbolicValue(const mpq_class& c) : coef_(c) {}

  static SymbolicValue rational(const mpq_class& c) { return SymbolicValue(c); }
  static SymbolicValue token(const std::string& name, long exponent = 1);
  static SymbolicValue gamma(long k);         // folds to (k-1)! for k >= 1
  static SymbolicValue sqrt_of(const mpq_class& x);  // folds perfect squares
  static SymbolicValue pi_power(long e);

  const mpq_class& coefficient() const { return coef_; }
  const std::map<std::string, long>& tokens() const { return tokens_; }
  bool is_rational() const { return tokens_.empty(); }
  bool is_zero() const { return coef_ == 0; }

  SymbolicValue operator*(const SymbolicValue& o) const;
  SymbolicValue operator/(const SymbolicValue& o) const;
  SymbolicValue pow(long e) const;
  bool operator==(const SymbolicValue& o) const {
    return coef_ == o.coef_ && (coef_ == 0 || tokens_ == o.tokens_);
  }
  bool operator!=(const SymbolicValue& o) const { return !(*this == o); }

  std::string str() const;

 private:
  mpq_class coef_;
  std::map<std::string, long> tokens_;
};

enum class LocalCase { kUnramifiedPrincipal, kUnramifiedSpecial };
enum class PlaceSplitting { kSplit, kInert, kRamified };

// L(s, pi (x) chi) at X = |w|^s, exact in the Satake parameters.
mpq_class local_L_factor(LocalCase c, const mpq_class& chi_mu1_X, const mpq_class& chi_mu2_X);

// Whittaker newform value W0(diag(w^n, 1)); SqrtQ carries |w|^{1/2}.
// mu values are the exact Satake/special parameters mu_i(w).
SymbolicValue whittaker_value(LocalCase c, long n, const mpq_class& q_inv, const mpq_class& mu1,
                              const mpq_class& mu2);

struct ZetaIntegralCheck {
  mpq_class partial;
  mpq_class closed;
  mpq_class tail;
  bool exact() const { return partial + tail == closed; }
};
// Geometric zeta-integral identity on exact parameters u_i = mu_i chi X with
// |u_i| < 1; normalization = vol * chi(D) |D|^s as one exact rational.
ZetaIntegralCheck zeta_integral_check(LocalCase c, const mpq_class& u1, const mpq_class& u2,
                                      long truncation, const mpq_class& normalization);

// Local pairing values b_v by case.
SymbolicValue pairing_b_value_archimedean(long weight_k);
SymbolicValue pairing_b_value_unramified(const mpq_class& abs_different);
SymbolicValue pairing_b_value_special(int epsilon_half, const mpq_class& abs_different);

struct ToricParams {
  PlaceSplitting splitting = PlaceSplitting::kSplit;
  LocalCase rep = LocalCase::kUnramifiedPrincipal;
  mpq_class q_inv = 0;        // |w|_v
  mpq_class abs_dF = 1;       // |d_{F_v}|_v
  mpq_class abs_dK = 1;       // |d_{K_v}|_v
  int epsilon_half = 1;       // epsilon(1/2) in {+1,-1}
  mpq_class alpha = 1;        // U_v eigenvalue (+-1 in the special case)
  mpq_class chi_P_w = 1;      // chi_P(w) for the split special case
  long c_v = 0;               // ord_v of the auxiliary conductor
  int nu_matches_alpha = 1;   // ramified n_b^- case: nu(wtilde) = +-alpha
};

// The local toric integrals, one evaluator per splitting/representation case.
SymbolicValue toric_P_split_principal(const ToricParams& t);
SymbolicValue toric_P_split_special(const ToricParams& t);       // carries 1/||phi|| token
SymbolicValue toric_P_nonsplit_principal(const ToricParams& t);
SymbolicValue toric_P_inert_special(const ToricParams& t);
SymbolicValue toric_P_ramified_special(const ToricParams& t);
SymbolicValue toric_P_old_split(const ToricParams& t, bool val_beta_odd);
SymbolicValue toric_P_old_nonsplit(const ToricParams& t);
SymbolicValue toric_P_new_inert(const ToricParams& t);
SymbolicValue toric_P_nb_inert(const ToricParams& t);
SymbolicValue toric_P_nb_ramified(const ToricParams& t);
SymbolicValue toric_P_archimedean(long k, long m);

struct VolumePlace {
  bool split = true;
  mpq_class q_inv = 0;
  long level_n = 0;
};
// The volume display: unit-index and discriminant-norm prefactors times the
// local zeta / L(1,tau) factors and the conductor powers.
SymbolicValue volume_formula(long unit_index, const mpq_class& nd_ratio_sqrt_arg,
                             const mpz_class& norm_conductor,
                             const std::vector<VolumePlace>& places);

struct PeriodRatioCheck {
  SymbolicValue reduced;
  bool is_one;
};
// Product of split-exceptional epsilon factors; each factorized epsilon
// collapses to 1 by the Tate local functional equation argument.
PeriodRatioCheck period_ratio_check(const std::vector<std::pair<bool, int>>& primes);

}  // namespace padicx

#endif
