#include "padicx/local_factors.hpp"

#include <sstream>

namespace padicx {

namespace {

mpq_class pow_q(const mpq_class& b, long e) {
  mpq_class r = 1;
  for (long i = 0; i < std::labs(e); ++i) r *= b;
  if (e < 0) {
    if (r == 0) fail(errc::division_by_zero, "0 to a negative power");
    r = 1 / r;
  }
  return r;
}

}  // namespace

SymbolicValue SymbolicValue::token(const std::string& name, long exponent) {
  SymbolicValue v(mpq_class(1));
  if (exponent != 0) v.tokens_[name] = exponent;
  return v;
}

SymbolicValue SymbolicValue::gamma(long k) {
  if (k >= 1) {
    mpz_class f = 1;
    for (long i = 2; i < k; ++i) f *= i;
    return SymbolicValue(mpq_class(f));
  }
  return token("Gamma(" + std::to_string(k) + ")");
}

SymbolicValue SymbolicValue::sqrt_of(const mpq_class& x) {
  if (x == 0) return SymbolicValue(mpq_class(0));
  if (x < 0) fail(errc::domain_violation, "sqrt of a negative rational");
  mpz_class ns, nr, ds, dr;
  mpz_sqrtrem(ns.get_mpz_t(), nr.get_mpz_t(), x.get_num().get_mpz_t());
  mpz_sqrtrem(ds.get_mpz_t(), dr.get_mpz_t(), x.get_den().get_mpz_t());
  if (nr == 0 && dr == 0) return SymbolicValue(mpq_class(ns) / mpq_class(ds));
  std::ostringstream os;
  os << "sqrt(" << x << ")";
  return token(os.str());
}

SymbolicValue SymbolicValue::pi_power(long e) { return token("pi", e); }

SymbolicValue SymbolicValue::operator*(const SymbolicValue& o) const {
  SymbolicValue r;
  r.coef_ = coef_ * o.coef_;
  if (r.coef_ == 0) return r;
  r.tokens_ = tokens_;
  for (const auto& [name, e] : o.tokens_) {
    r.tokens_[name] += e;
    if (r.tokens_[name] == 0) r.tokens_.erase(name);
  }
  return r;
}

SymbolicValue SymbolicValue::operator/(const SymbolicValue& o) const {
  if (o.coef_ == 0) fail(errc::division_by_zero, "symbolic division by zero");
  SymbolicValue inv(1 / o.coef_);
  for (const auto& [name, e] : o.tokens_) inv.tokens_[name] = -e;
  return *this * inv;
}

SymbolicValue SymbolicValue::pow(long e) const {
  SymbolicValue r(mpq_class(1));
  SymbolicValue b = *this;
  if (e < 0) {
    b = SymbolicValue(mpq_class(1)) / b;
    e = -e;
  }
  for (long i = 0; i < e; ++i) r = r * b;
  return r;
}

std::string SymbolicValue::str() const {
  std::ostringstream os;
  os << coef_;
  for (const auto& [name, e] : tokens_) {
    os << " * " << name;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

mpq_class local_L_factor(LocalCase c, const mpq_class& chi_mu1_X, const mpq_class& chi_mu2_X) {
  if (c == LocalCase::kUnramifiedSpecial) {
    if (chi_mu1_X == 1) fail(errc::pole_at_s, "pole of the special L-factor");
    return 1 / (1 - chi_mu1_X);
  }
  if (chi_mu1_X == 1 || chi_mu2_X == 1) fail(errc::pole_at_s, "pole of the L-factor");
  return 1 / ((1 - chi_mu1_X) * (1 - chi_mu2_X));
}

SymbolicValue whittaker_value(LocalCase c, long n, const mpq_class& q_inv, const mpq_class& mu1,
                              const mpq_class& mu2) {
  if (n < 0) return SymbolicValue(mpq_class(0));
  // |w^n|^{1/2} = q_inv^{n/2}: even part folds, odd part keeps one SqrtQ token
  SymbolicValue half = SymbolicValue(pow_q(q_inv, n / 2));
  if (n % 2 == 1) half = half * SymbolicValue::sqrt_of(q_inv);
  if (c == LocalCase::kUnramifiedSpecial) {
    return half * SymbolicValue(pow_q(mu1, n));
  }
  if (mu1 == mu2)
    fail(errc::divergent_parameters, "degenerate Macdonald denominator mu1 = mu2");
  mpq_class num = pow_q(mu1, n + 1) - pow_q(mu2, n + 1);
  return half * SymbolicValue(num / (mu1 - mu2));
}

ZetaIntegralCheck zeta_integral_check(LocalCase c, const mpq_class& u1, const mpq_class& u2,
                                      long truncation, const mpq_class& normalization) {
  auto abs_lt_1 = [](const mpq_class& u) { return abs(u.get_num()) < u.get_den(); };
  if (!abs_lt_1(u1) || (c == LocalCase::kUnramifiedPrincipal && !abs_lt_1(u2)))
    fail(errc::divergent_parameters, "need |u| < 1");
  ZetaIntegralCheck r;
  if (c == LocalCase::kUnramifiedSpecial) {
    // sum u1^i
    mpq_class partial = 0, pw = 1;
    for (long i = 0; i <= truncation; ++i) {
      partial += pw;
      pw *= u1;
    }
    r.partial = normalization * partial;
    r.closed = normalization / (1 - u1);
    r.tail = normalization * pw / (1 - u1);
    return r;
  }
  if (u1 == u2) fail(errc::divergent_parameters, "degenerate parameters u1 = u2");
  // sum over i of the complete homogeneous h_i(u1, u2)
  mpq_class partial = 0;
  for (long i = 0; i <= truncation; ++i) {
    mpq_class h = (pow_q(u1, i + 1) - pow_q(u2, i + 1)) / (u1 - u2);
    partial += h;
  }
  r.partial = normalization * partial;
  r.closed = normalization / ((1 - u1) * (1 - u2));
  // exact tail: sum_{i > T} h_i = [u1^{T+2}/(1-u1) - u2^{T+2}/(1-u2)] / (u1-u2)
  r.tail = normalization *
           (pow_q(u1, truncation + 2) / (1 - u1) - pow_q(u2, truncation + 2) / (1 - u2)) /
           (u1 - u2);
  return r;
}

SymbolicValue pairing_b_value_archimedean(long k) {
  return SymbolicValue(pow_q(mpq_class(1, 4), k)) * SymbolicValue::pi_power(-k) *
         SymbolicValue::gamma(k);
}

SymbolicValue pairing_b_value_unramified(const mpq_class& abs_different) {
  return SymbolicValue::token("zeta(1)") / SymbolicValue::token("zeta(2)") *
         SymbolicValue::token("L(1,Ad)") * SymbolicValue::sqrt_of(abs_different);
}

SymbolicValue pairing_b_value_special(int epsilon_half, const mpq_class& abs_different) {
  if (epsilon_half != 1 && epsilon_half != -1)
    fail(errc::inconsistent_case, "epsilon(1/2) must be +-1");
  return SymbolicValue(mpq_class(epsilon_half)) * SymbolicValue::token("L(1,Ad)") *
         SymbolicValue::sqrt_of(abs_different);
}

namespace {

SymbolicValue dk_over_sqrt_df(const ToricParams& t) {
  return SymbolicValue(t.abs_dK) / SymbolicValue::sqrt_of(t.abs_dF);
}

void check_eps(const ToricParams& t) {
  if (t.epsilon_half != 1 && t.epsilon_half != -1)
    fail(errc::inconsistent_case, "epsilon(1/2) must be +-1");
}

void need_q(const ToricParams& t) {
  if (t.q_inv <= 0 || t.q_inv >= 1) fail(errc::missing_param, "need |w|_v in (0,1)");
}

}  // namespace

SymbolicValue toric_P_split_principal(const ToricParams& t) { return SymbolicValue(t.abs_dF); }

SymbolicValue toric_P_split_special(const ToricParams& t) {
  check_eps(t);
  return SymbolicValue(mpq_class(t.epsilon_half) * t.chi_P_w * t.abs_dF) /
         SymbolicValue::token("phinorm");
}

SymbolicValue toric_P_nonsplit_principal(const ToricParams& t) {
  return SymbolicValue(t.abs_dK) / SymbolicValue::sqrt_of(t.abs_dF);
}

SymbolicValue toric_P_inert_special(const ToricParams& t) {
  check_eps(t);
  need_q(t);
  if (t.alpha != 1 && t.alpha != -1) fail(errc::inconsistent_case, "alpha must be +-1");
  mpq_class num = t.q_inv * (mpq_class(t.epsilon_half) + t.alpha);
  mpq_class den = 1 - t.q_inv * t.q_inv;
  return dk_over_sqrt_df(t) * SymbolicValue(num / den);
}

SymbolicValue toric_P_ramified_special(const ToricParams& t) {
  check_eps(t);
  need_q(t);
  return dk_over_sqrt_df(t) *
         SymbolicValue(2 * (1 + t.q_inv) / mpq_class(t.epsilon_half));
}

SymbolicValue toric_P_old_split(const ToricParams& t, bool val_beta_odd) {
  if (!val_beta_odd) return SymbolicValue(t.abs_dF);
  return SymbolicValue(t.abs_dF * t.chi_P_w);
}

SymbolicValue toric_P_old_nonsplit(const ToricParams& t) {
  need_q(t);
  SymbolicValue base = dk_over_sqrt_df(t);
  if (t.c_v == 0) return base;
  // L(1, tau)^2 |w|^{c_v}
  mpq_class Ltau = (t.splitting == PlaceSplitting::kInert) ? mpq_class(1 / (1 + t.q_inv)) : mpq_class(1);
  return base * SymbolicValue(Ltau * Ltau * pow_q(t.q_inv, t.c_v));
}

SymbolicValue toric_P_new_inert(const ToricParams& t) { return toric_P_inert_special(t); }

SymbolicValue toric_P_nb_inert(const ToricParams& t) {
  need_q(t);
  // 1/zeta(1) * |d_K|/|d_F|^{1/2} with zeta(1) = 1/(1-|w|)
  return dk_over_sqrt_df(t) * SymbolicValue(1 - t.q_inv);
}

SymbolicValue toric_P_nb_ramified(const ToricParams& t) {
  need_q(t);
  if (t.nu_matches_alpha != 1 && t.nu_matches_alpha != -1)
    fail(errc::inconsistent_case, "nu(wtilde) must be +-alpha");
  if (t.nu_matches_alpha == -1) return SymbolicValue(mpq_class(0));
  return dk_over_sqrt_df(t) * SymbolicValue(2 * (1 - t.q_inv));
}

SymbolicValue toric_P_archimedean(long k, long m) {
  if (k < 2 || k % 2 != 0 || std::labs(m) >= k / 2)
    fail(errc::missing_param, "need even k >= 2 and |m| < k/2");
  return SymbolicValue::gamma(k) * SymbolicValue::pi_power(-1) /
         (SymbolicValue::gamma(k / 2 + m) * SymbolicValue::gamma(k / 2 - m));
}

SymbolicValue volume_formula(long unit_index, const mpq_class& nd_ratio_sqrt_arg,
                             const mpz_class& norm_conductor,
                             const std::vector<VolumePlace>& places) {
  if (unit_index < 1) fail(errc::domain_violation, "unit index >= 1");
  SymbolicValue v = SymbolicValue(mpq_class(1, unit_index)) *
                    SymbolicValue::sqrt_of(nd_ratio_sqrt_arg) *
                    SymbolicValue(mpq_class(1, norm_conductor));
  for (const auto& pl : places) {
    if (pl.q_inv <= 0 || pl.q_inv >= 1) fail(errc::missing_param, "need |w|_v in (0,1)");
    // 1 / prod |w|^{-n}
    v = v * SymbolicValue(pow_q(pl.q_inv, pl.level_n));
    // zeta(1) = 1/(1-|w|) at split places, L(1,tau) = 1/(1+|w|) at inert ones
    v = v * SymbolicValue(pl.split ? mpq_class(1 / (1 - pl.q_inv)) : mpq_class(1 / (1 + pl.q_inv)));
  }
  return v;
}

PeriodRatioCheck period_ratio_check(const std::vector<std::pair<bool, int>>& primes) {
  SymbolicValue prod(mpq_class(1));
  for (const auto& [factorized, eps] : primes) {
    if (eps != 1 && eps != -1) fail(errc::inconsistent_case, "epsilon must be +-1");
    // epsilon(1/2, pi) = epsilon(1/2, mu) epsilon(1/2, mu|.|^{-1}) = 1 when
    // the factorization through the Tate functional equation is available.
    prod = prod * SymbolicValue(mpq_class(factorized ? 1 : eps));
  }
  return PeriodRatioCheck{prod, prod == SymbolicValue(mpq_class(1))};
}

}  // namespace padicx
