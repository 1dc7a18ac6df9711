#include "padicx/padic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace padicx {

namespace {

void check_same_prime(const PadicNumber& a, const PadicNumber& b) {
  if (a.prime() != b.prime())
    fail(errc::prime_mismatch,
         "p=" + std::to_string(a.prime()) + " vs p=" + std::to_string(b.prime()));
}

long floor_log(long n, long p) {
  long k = 0;
  while (n >= p) {
    n /= p;
    ++k;
  }
  return k;
}

}  // namespace

mpz_class pow_mpz(long base, long exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return r;
}

long valuation_mpz(const mpz_class& n, long p, mpz_class* unit_out) {
  if (n == 0) fail(errc::zero_input, "valuation of 0");
  mpz_class u;
  mpz_class pp(p);
  unsigned long v = mpz_remove(u.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
  if (unit_out) *unit_out = u;
  return static_cast<long>(v);
}

long valuation_mpq(const mpq_class& q, long p) {
  if (q == 0) fail(errc::zero_input, "valuation of 0");
  return valuation_mpz(q.get_num(), p) - valuation_mpz(q.get_den(), p);
}

PadicNumber PadicNumber::zero(long p, int prec) { return PadicNumber(p, prec, true, 0, 0); }

PadicNumber PadicNumber::make(long p, long val, const mpz_class& unit, int prec) {
  PadicNumber x(p, prec, false, val, unit);
  x.canonicalize();
  return x;
}

PadicNumber PadicNumber::from_integer(long p, const mpz_class& n, int prec) {
  return make(p, 0, n, prec);
}

PadicNumber PadicNumber::from_rational(long p, const mpq_class& q, int prec) {
  if (q == 0) return zero(p, prec);
  mpz_class nu, du;
  long vn = valuation_mpz(q.get_num(), p, &nu);
  long vd = valuation_mpz(q.get_den(), p, &du);
  long v = vn - vd;
  int rel = prec - static_cast<int>(v);
  if (rel <= 0) return zero(p, prec);
  mpz_class mod = pow_mpz(p, rel);
  mpz_class dinv;
  if (mpz_invert(dinv.get_mpz_t(), du.get_mpz_t(), mod.get_mpz_t()) == 0)
    fail(errc::division_by_zero, "denominator not invertible");
  mpz_class u = (nu * dinv) % mod;
  return make(p, v, u, prec);
}

void PadicNumber::canonicalize() {
  if (zero_) {
    val_ = 0;
    unit_ = 0;
    return;
  }
  if (unit_ == 0) {
    zero_ = true;
    val_ = 0;
    return;
  }
  mpz_class u;
  long extra = valuation_mpz(unit_, p_, &u);
  val_ += extra;
  if (val_ >= prec_) {
    zero_ = true;
    val_ = 0;
    unit_ = 0;
    return;
  }
  mpz_class mod = pow_mpz(p_, prec_ - static_cast<int>(val_));
  u %= mod;
  if (u < 0) u += mod;
  if (u == 0) {
    // Cannot happen for a p-free unit and positive modulus exponent.
    zero_ = true;
    val_ = 0;
    unit_ = 0;
    return;
  }
  unit_ = u;
}

long PadicNumber::valuation() const {
  if (zero_) fail(errc::zero_input, "valuation of exact zero");
  return val_;
}

const mpz_class& PadicNumber::unit() const {
  if (zero_) fail(errc::zero_input, "unit of exact zero");
  return unit_;
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  mpz_class mod = pow_mpz(p_, prec_ - static_cast<int>(val_));
  return PadicNumber(p_, prec_, false, val_, mod - unit_);
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const {
  check_same_prime(*this, o);
  int prec = std::min(prec_, o.prec_);
  if (zero_ && o.zero_) return zero(p_, prec);
  if (zero_) return o.truncated(prec);
  if (o.zero_) return truncated(prec);
  long m = std::min(val_, o.val_);
  if (m >= prec) return zero(p_, prec);
  mpz_class mod = pow_mpz(p_, prec - static_cast<int>(m));
  mpz_class a = (unit_ * pow_mpz(p_, val_ - m)) % mod;
  mpz_class b = (o.unit_ * pow_mpz(p_, o.val_ - m)) % mod;
  mpz_class s = (a + b) % mod;
  if (s == 0) return zero(p_, prec);
  return make(p_, m, s, prec);
}

PadicNumber PadicNumber::operator-(const PadicNumber& o) const { return *this + (-o); }

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
  check_same_prime(*this, o);
  if (zero_ || o.zero_) {
    // v(xy) >= (bound on v(x)) + (bound on v(y))
    long va = zero_ ? prec_ : val_;
    long vb = o.zero_ ? o.prec_ : o.val_;
    return zero(p_, std::max<long>(1, va + vb));
  }
  int rel = std::min(relative_precision(), o.relative_precision());
  long v = val_ + o.val_;
  mpz_class mod = pow_mpz(p_, rel);
  mpz_class u = (unit_ * o.unit_) % mod;
  return PadicNumber(p_, static_cast<int>(v) + rel, false, v, u);
}

PadicNumber PadicNumber::inverse() const {
  if (zero_) fail(errc::division_by_zero, "inverse of zero");
  int rel = relative_precision();
  mpz_class mod = pow_mpz(p_, rel);
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t()) == 0)
    fail(errc::division_by_zero, "unit not invertible");
  return PadicNumber(p_, static_cast<int>(-val_) + rel, false, -val_, inv);
}

PadicNumber PadicNumber::operator/(const PadicNumber& o) const {
  check_same_prime(*this, o);
  if (o.zero_) fail(errc::division_by_zero, "division by zero");
  if (zero_) {
    int prec = static_cast<int>(prec_ - o.val_);
    return zero(p_, std::max(1, prec));
  }
  return *this * o.inverse();
}

PadicNumber PadicNumber::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  PadicNumber r = from_integer(p_, 1, prec_);
  PadicNumber b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    if (e >>= 1) b = b * b;
  }
  return r;
}

PadicNumber PadicNumber::scale(const mpq_class& r) const {
  if (r == 0) return zero(p_, prec_);
  if (zero_) {
    long w = valuation_mpq(r, p_);
    return zero(p_, std::max(1, static_cast<int>(prec_ + w)));
  }
  mpz_class nu, du;
  long vn = valuation_mpz(r.get_num(), p_, &nu);
  long vd = valuation_mpz(r.get_den(), p_, &du);
  int rel = relative_precision();
  mpz_class mod = pow_mpz(p_, rel);
  mpz_class dinv;
  mpz_invert(dinv.get_mpz_t(), du.get_mpz_t(), mod.get_mpz_t());
  mpz_class u = (unit_ * nu % mod) * dinv % mod;
  long v = val_ + vn - vd;
  return make(p_, v, u, static_cast<int>(v) + rel);
}

PadicNumber PadicNumber::truncated(int n) const {
  if (n >= prec_) return *this;
  if (zero_) return zero(p_, n);
  if (val_ >= n) return zero(p_, n);
  mpz_class mod = pow_mpz(p_, n - static_cast<int>(val_));
  return make(p_, val_, unit_ % mod, n);
}

bool PadicNumber::operator==(const PadicNumber& o) const {
  return p_ == o.p_ && prec_ == o.prec_ && zero_ == o.zero_ && val_ == o.val_ && unit_ == o.unit_;
}

bool PadicNumber::agrees(const PadicNumber& o, int digits) const {
  PadicNumber d = *this - o;
  if (d.is_zero()) return true;
  return d.valuation() >= digits;
}

mpz_class PadicNumber::lift() const {
  if (zero_) return 0;
  if (val_ < 0) fail(errc::domain_violation, "integer lift of negative valuation");
  return unit_ * pow_mpz(p_, val_);
}

mpq_class PadicNumber::lift_rational() const {
  if (zero_) return 0;
  mpq_class r(unit_);
  if (val_ >= 0)
    r *= mpq_class(pow_mpz(p_, val_));
  else
    r /= mpq_class(pow_mpz(p_, -val_));
  return r;
}

std::string PadicNumber::str() const {
  std::ostringstream os;
  if (zero_)
    os << "0";
  else
    os << p_ << "^" << val_ << " * " << unit_;
  os << " + O(" << p_ << "^" << prec_ << ")";
  return os.str();
}

PadicNumber PadicNumber::parse(const std::string& s) {
  auto bad = [&]() -> void { fail(errc::parse_error, "bad p-adic literal: " + s); };
  size_t i = 0;
  auto skip_ws = [&]() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto read_int = [&]() -> mpz_class {
    skip_ws();
    size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) bad();
    return mpz_class(s.substr(start, i - start));
  };
  auto expect = [&](char c) {
    skip_ws();
    if (i >= s.size() || s[i] != c) bad();
    ++i;
  };

  mpz_class first = read_int();
  skip_ws();
  bool is_zero_literal = false;
  long val = 0;
  mpz_class unit = 0;
  long p = 0;
  if (i < s.size() && s[i] == '^') {
    ++i;
    mpz_class v = read_int();
    expect('*');
    unit = read_int();
    p = first.get_si();
    val = v.get_si();
  } else if (first == 0) {
    is_zero_literal = true;
  } else {
    bad();
  }
  expect('+');
  skip_ws();
  if (s.compare(i, 2, "O(") != 0) bad();
  i += 2;
  mpz_class pb = read_int();
  expect('^');
  mpz_class nn = read_int();
  expect(')');
  skip_ws();
  if (i != s.size()) bad();
  if (p != 0 && p != pb.get_si()) bad();
  p = pb.get_si();
  int prec = static_cast<int>(nn.get_si());
  if (p < 3 || prec < 1) bad();
  if (is_zero_literal) return zero(p, prec);
  return make(p, val, unit, prec);
}

PadicNumber teichmuller(long a, long p, int prec) {
  long r = ((a % p) + p) % p;
  if (r == 0) fail(errc::zero_residue, "Teichmuller lift of 0 mod p");
  mpz_class mod = pow_mpz(p, prec);
  mpz_class x(r), prev;
  mpz_class pp(p);
  do {
    prev = x;
    mpz_powm(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t(), mod.get_mpz_t());
  } while (x != prev);
  return PadicNumber::make(p, 0, x, prec);
}

PadicNumber iwasawa_log(const PadicNumber& x) {
  if (x.is_zero()) fail(errc::zero_input, "log of zero");
  long p = x.prime();
  int rel = x.relative_precision();
  if (rel <= 1) return PadicNumber::zero(p, 1);
  // Strip p^v (Iwasawa: log p = 0) and the Teichmueller part.
  PadicNumber u = PadicNumber::make(p, 0, x.unit(), rel);
  long a = mpz_class(x.unit() % p).get_si();
  PadicNumber zeta = teichmuller(a, p, rel);
  PadicNumber w = u / zeta;
  PadicNumber one = PadicNumber::from_integer(p, 1, rel);
  PadicNumber t = w - one;
  if (t.is_zero()) return PadicNumber::zero(p, rel);
  PadicNumber sum = PadicNumber::zero(p, rel);
  PadicNumber powt = one;
  long kmax = rel + 2 * floor_log(std::max(2L, static_cast<long>(rel)), p) + 8;
  long slack = floor_log(kmax, p) + 1;
  for (long k = 1; k <= kmax; ++k) {
    powt = powt * t;
    if (powt.is_zero() || powt.valuation() >= rel + slack + 1) {
      PadicNumber term = powt.scale(mpq_class((k % 2 == 1) ? 1 : -1, k));
      sum = sum + term;
      break;
    }
    PadicNumber term = powt.scale(mpq_class((k % 2 == 1) ? 1 : -1, k));
    sum = sum + term;
  }
  return sum;
}

PadicNumber exp_p(const PadicNumber& x) {
  long p = x.prime();
  int prec = x.precision();
  PadicNumber one = PadicNumber::from_integer(p, 1, prec);
  if (x.is_zero()) return one;
  if (x.valuation() < 1) fail(errc::convergence_domain, "exp needs v(x) >= 1");
  PadicNumber sum = one;
  PadicNumber term = one;
  long v = x.valuation();
  // term valuation grows at least by v - 1/(p-1) per step.
  long kmax = 2 * prec / std::max(1L, v) + 2 * prec / (p - 1) + 8;
  for (long k = 1; k <= kmax; ++k) {
    term = (term * x).scale(mpq_class(1, k));
    if (term.is_zero()) break;
    sum = sum + term;
    if (term.valuation() > prec) break;
  }
  return sum;
}

LogBranch::LogBranch(PadicNumber u) : u_(std::move(u)) {
  if (u_.is_zero()) fail(errc::zero_input, "branch point must be nonzero");
  h_ = u_.valuation();
  if (h_ < 1) fail(errc::domain_violation, "branch point needs v(u) >= 1");
  log_u_ = iwasawa_log(u_);
}

LogBranch LogBranch::iwasawa(long p, int prec) {
  return LogBranch(PadicNumber::make(p, 1, 1, prec));
}

PadicNumber LogBranch::log(const PadicNumber& x) const {
  if (x.is_zero()) fail(errc::zero_input, "log of zero");
  if (x.prime() != prime()) fail(errc::prime_mismatch, "branch_log prime");
  PadicNumber base = iwasawa_log(x);
  return base - log_u_.scale(mpq_class(x.valuation(), h_));
}

Qp2Number::Qp2Number(PadicNumber a, PadicNumber b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.prime() != b_.prime()) fail(errc::prime_mismatch, "Qp2 coordinates");
}

Qp2Number Qp2Number::from_qp(const PadicNumber& a) {
  return Qp2Number(a, PadicNumber::zero(a.prime(), a.precision()));
}

PadicNumber Qp2Number::omega_square(long p, int prec) {
  // Least quadratic non-residue mod p, then its Teichmueller lift: a torsion
  // unit whose square root generates the unramified quadratic extension.
  for (long d = 2; d < p; ++d) {
    mpz_class dd(d), pp(p), e((p - 1) / 2), r;
    mpz_powm(r.get_mpz_t(), dd.get_mpz_t(), e.get_mpz_t(), pp.get_mpz_t());
    if (r == p - 1) return teichmuller(d, p, prec);
  }
  fail(errc::domain_violation, "no quadratic non-residue (p must be an odd prime)");
}

Qp2Number Qp2Number::omega(long p, int prec) {
  return Qp2Number(PadicNumber::zero(p, prec), PadicNumber::from_integer(p, 1, prec));
}

bool Qp2Number::in_qp(int digits) const {
  if (b_.is_zero()) return true;
  return b_.valuation() >= digits;
}

long Qp2Number::valuation() const {
  if (is_zero()) fail(errc::zero_input, "valuation of zero");
  if (a_.is_zero()) return b_.valuation();
  if (b_.is_zero()) return a_.valuation();
  return std::min(a_.valuation(), b_.valuation());
}

PadicNumber Qp2Number::norm() const {
  PadicNumber d = omega_square(prime(), precision());
  return a_ * a_ - b_ * b_ * d;
}

Qp2Number Qp2Number::operator+(const Qp2Number& o) const {
  return Qp2Number(a_ + o.a_, b_ + o.b_);
}
Qp2Number Qp2Number::operator-(const Qp2Number& o) const {
  return Qp2Number(a_ - o.a_, b_ - o.b_);
}

Qp2Number Qp2Number::operator*(const Qp2Number& o) const {
  PadicNumber d = omega_square(prime(), std::min(precision(), o.precision()));
  return Qp2Number(a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_);
}

Qp2Number Qp2Number::inverse() const {
  if (is_zero()) fail(errc::division_by_zero, "Qp2 inverse of zero");
  PadicNumber n = norm();
  Qp2Number c = conj();
  return Qp2Number(c.a_ / n, c.b_ / n);
}

Qp2Number Qp2Number::operator/(const Qp2Number& o) const { return *this * o.inverse(); }

Qp2Number Qp2Number::pow_mod_precision(const mpz_class& e) const {
  if (e < 0) return inverse().pow_mod_precision(-e);
  Qp2Number r = from_qp(PadicNumber::from_integer(prime(), 1, precision()));
  Qp2Number b = *this;
  mpz_class k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) r = r * b;
    k >>= 1;
    if (k > 0) b = b * b;
  }
  return r;
}

bool Qp2Number::agrees(const Qp2Number& o, int digits) const {
  return a_.agrees(o.a_, digits) && b_.agrees(o.b_, digits);
}

std::string Qp2Number::str() const { return "(" + a_.str() + ") + (" + b_.str() + ")*w"; }

Qp2Number iwasawa_log(const Qp2Number& x) {
  if (x.is_zero()) fail(errc::zero_input, "log of zero");
  long p = x.prime();
  long v = x.valuation();
  int rel = x.precision() - static_cast<int>(v);
  if (rel <= 1) return Qp2Number::from_qp(PadicNumber::zero(p, 1));
  mpq_class shift = (v >= 0) ? mpq_class(1, pow_mpz(p, v)) : mpq_class(pow_mpz(p, -v));
  Qp2Number y(x.re().scale(shift), x.im().scale(shift));
  // Teichmueller part: iterate the q = p^2 power Frobenius until it fixes.
  mpz_class q = pow_mpz(p, 2);
  Qp2Number zeta = y, prev = y;
  for (int it = 0; it < 4 * rel + 8; ++it) {
    prev = zeta;
    zeta = zeta.pow_mod_precision(q);
    if (zeta.agrees(prev, rel)) break;
  }
  Qp2Number one = Qp2Number::from_qp(PadicNumber::from_integer(p, 1, rel));
  Qp2Number w = y / zeta;
  Qp2Number t = w - one;
  if (t.is_zero()) return Qp2Number::from_qp(PadicNumber::zero(p, rel));
  if (!t.is_zero() && t.valuation() < 1)
    fail(errc::convergence_domain, "unit not principal after Teichmueller split");
  Qp2Number sum = Qp2Number::from_qp(PadicNumber::zero(p, rel));
  Qp2Number powt = one;
  long kmax = rel + 2 * floor_log(std::max(2L, static_cast<long>(rel)), p) + 8;
  for (long k = 1; k <= kmax; ++k) {
    powt = powt * t;
    if (powt.is_zero()) break;
    mpq_class coef((k % 2 == 1) ? 1 : -1, k);
    Qp2Number term(powt.re().scale(coef), powt.im().scale(coef));
    sum = sum + term;
  }
  return sum;
}

Qp2Number branch_log(const LogBranch& branch, const Qp2Number& x) {
  if (x.is_zero()) fail(errc::zero_input, "log of zero");
  Qp2Number base = iwasawa_log(x);
  mpq_class ratio(x.valuation(), branch.height());
  PadicNumber corr = branch.log_of_branch_point().scale(ratio);
  return base - Qp2Number::from_qp(corr);
}

}  // namespace padicx
