#ifndef PADICX_PADIC_HPP
#define PADICX_PADIC_HPP

#include <gmpxx.h>

#include <string>

#include "padicx/error.hpp"

namespace padicx {

// Capped-precision element of Q_p, kept in canonical form p^v * u with
// u a unit mod p^(N-v).  N counts p-adic digits of absolute precision.
// An exact zero carries only its precision tag (valuation displayed as +inf).
class PadicNumber {
 public:
  static constexpr int kDefaultPrecision = 20;

  PadicNumber() : p_(3), prec_(kDefaultPrecision), zero_(true), val_(0), unit_(0) {}

  static PadicNumber zero(long p, int prec);
  static PadicNumber from_integer(long p, const mpz_class& n, int prec);
  static PadicNumber from_rational(long p, const mpq_class& q, int prec);
  // p^val * unit, reduced into canonical form.
  static PadicNumber make(long p, long val, const mpz_class& unit, int prec);

  long prime() const { return p_; }
  int precision() const { return prec_; }
  bool is_zero() const { return zero_; }
  long valuation() const;          // throws ZeroInput on exact zero
  long valuation_or(long big) const { return zero_ ? big : val_; }
  const mpz_class& unit() const;   // throws ZeroInput on exact zero
  int relative_precision() const { return zero_ ? 0 : prec_ - static_cast<int>(val_); }

  PadicNumber operator-() const;
  PadicNumber operator+(const PadicNumber& o) const;
  PadicNumber operator-(const PadicNumber& o) const;
  PadicNumber operator*(const PadicNumber& o) const;
  PadicNumber operator/(const PadicNumber& o) const;

  PadicNumber inverse() const;
  PadicNumber pow(long e) const;
  // Multiplication by an exact rational (exact valuation shift, no digit loss
  // beyond the rational's own p-part).
  PadicNumber scale(const mpq_class& r) const;

  // Truncate to absolute precision n (n <= precision()).
  PadicNumber truncated(int n) const;

  bool operator==(const PadicNumber& o) const;
  bool operator!=(const PadicNumber& o) const { return !(*this == o); }

  // v(x - y) >= digits, evaluated at the joint precision.
  bool agrees(const PadicNumber& o, int digits) const;

  // Canonical lift in [0, p^prec): p^val * unit.
  mpz_class lift() const;
  // The same lift as an exact rational (negative valuations give p-power denominators).
  mpq_class lift_rational() const;

  std::string str() const;                       // "p^v * u + O(p^N)"
  static PadicNumber parse(const std::string&);  // strict inverse of str()

 private:
  PadicNumber(long p, int prec, bool zero, long val, mpz_class unit)
      : p_(p), prec_(prec), zero_(zero), val_(val), unit_(std::move(unit)) {}
  void canonicalize();

  long p_;
  int prec_;
  bool zero_;
  long val_;
  mpz_class unit_;
};

mpz_class pow_mpz(long base, long exp);
long valuation_mpz(const mpz_class& n, long p, mpz_class* unit_out = nullptr);
long valuation_mpq(const mpq_class& q, long p);

// Teichmueller lift: omega(a)^(p-1) = 1 exactly at precision prec, omega(a) = a mod p.
PadicNumber teichmuller(long a, long p, int prec);

// Iwasawa branch: log(p) = 0, log(roots of unity) = 0.
PadicNumber iwasawa_log(const PadicNumber& x);

// exp(x) for v(x) >= 1 (p odd).
PadicNumber exp_p(const PadicNumber& x);

// A branch of the p-adic logarithm pinned by log_u(u) = 0, v(u) >= 1.
class LogBranch {
 public:
  explicit LogBranch(PadicNumber u);
  static LogBranch iwasawa(long p, int prec);  // u = p

  long prime() const { return u_.prime(); }
  long height() const { return h_; }  // v(u)
  const PadicNumber& branch_point() const { return u_; }
  // log_Iw(u), cached.
  const PadicNumber& log_of_branch_point() const { return log_u_; }

  PadicNumber log(const PadicNumber& x) const;

 private:
  PadicNumber u_;
  long h_;
  PadicNumber log_u_;
};

// The unramified quadratic extension Q_p(omega), omega^2 = D with D the
// Teichmueller lift of the least quadratic non-residue mod p.  omega is a
// torsion unit, so conjugation a + b*omega -> a - b*omega is the nontrivial
// automorphism over Q_p and the Iwasawa log kills omega.
class Qp2Number {
 public:
  Qp2Number() = default;
  Qp2Number(PadicNumber a, PadicNumber b);
  static Qp2Number from_qp(const PadicNumber& a);
  // The generator omega itself at precision prec.
  static Qp2Number omega(long p, int prec);
  // D = omega^2 as an element of Q_p.
  static PadicNumber omega_square(long p, int prec);

  long prime() const { return a_.prime(); }
  int precision() const { return std::min(a_.precision(), b_.precision()); }
  const PadicNumber& re() const { return a_; }
  const PadicNumber& im() const { return b_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool in_qp(int digits) const;  // im() vanishes to the given depth
  long valuation() const;        // min of coordinate valuations (unramified, e = 1)

  Qp2Number conj() const { return Qp2Number(a_, -b_); }
  PadicNumber norm() const;  // x * conj(x) in Q_p

  Qp2Number operator-() const { return Qp2Number(-a_, -b_); }
  Qp2Number operator+(const Qp2Number& o) const;
  Qp2Number operator-(const Qp2Number& o) const;
  Qp2Number operator*(const Qp2Number& o) const;
  Qp2Number operator/(const Qp2Number& o) const;
  Qp2Number inverse() const;
  Qp2Number pow_mod_precision(const mpz_class& e) const;

  bool agrees(const Qp2Number& o, int digits) const;
  std::string str() const;

 private:
  PadicNumber a_, b_;
};

Qp2Number iwasawa_log(const Qp2Number& x);
// log_u extended to Q_p(omega) with the valuation normalized in e = 1.
Qp2Number branch_log(const LogBranch& branch, const Qp2Number& x);

}  // namespace padicx

#endif
