#include "padicx/distribution.hpp"

#include <algorithm>

namespace padicx {

namespace {

mpz_class binom_mpz(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

mpq_class p_abs(const PadicNumber& x, long p) {
  if (x.is_zero()) return 0;
  long v = x.valuation();
  return v >= 0 ? mpq_class(1, pow_mpz(p, v)) : mpq_class(pow_mpz(p, -v));
}

mpq_class p_abs_q(const mpq_class& x, long p) {
  if (x == 0) return 0;
  long v = vp(x, p);
  return v >= 0 ? mpq_class(1, pow_mpz(p, v)) : mpq_class(pow_mpz(p, -v));
}

mpq_class pow_q(const mpq_class& b, long e) {
  mpq_class r = 1;
  for (long i = 0; i < std::abs(e); ++i) r *= b;
  if (e < 0) r = 1 / r;
  return r;
}

}  // namespace

TreeDistribution::TreeDistribution(const HarmonicCocycle& c) : c_(&c) {}

PadicNumber TreeDistribution::raw_moment(const Disc& d, int j) const {
  if (j < 0 || j > weight() - 2) fail(errc::bad_moment_index, "j out of range");
  Disc cd = c_->tree().canonical(d);
  if (cd.complement && j > 0)
    fail(errc::bad_moment_index, "x^j is not integrable on a neighborhood of infinity");
  std::string key = c_->tree().label(cd);
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find({key, j});
    if (it != cache_.end()) return it->second;
  }
  CoeffVector v = c_->evaluate(c_->tree().disc_to_edge(cd));
  PadicNumber m = v.at(j).scale(mpq_class(1, binom_mpz(weight() - 2, j)));
  {
    std::lock_guard<std::mutex> lk(mu_);
    cache_.emplace(std::make_pair(key, j), m);
  }
  return m;
}

PadicNumber TreeDistribution::central_moment(const Disc& d, int j) const {
  if (j < 0 || j > weight() - 2) fail(errc::bad_moment_index, "j out of range");
  Disc cd = c_->tree().canonical(d);
  if (cd.complement) fail(errc::bad_moment_index, "central moment needs a finite disc");
  // (x-a)^j = sum_i binom(j,i) (-a)^(j-i) x^i
  long p = prime();
  int prec = c_->precision();
  PadicNumber acc = PadicNumber::zero(p, prec);
  for (int i = 0; i <= j; ++i) {
    mpq_class coef = mpq_class(binom_mpz(j, i)) * pow_q(-cd.a, j - i);
    if (coef == 0) continue;
    acc = acc + raw_moment(cd, i).scale(coef);
  }
  if (j == 0) acc = raw_moment(cd, 0);
  return acc;
}

PadicNumber TreeDistribution::additivity_residual(const Disc& d, int j) const {
  Disc cd = c_->tree().canonical(d);
  if (cd.complement) fail(errc::bad_moment_index, "additivity over finite discs");
  PadicNumber parent = raw_moment(cd, j);
  const Tree& tree = c_->tree();
  TreeVertex inner{cd.m, cd.a};
  PadicNumber sum = PadicNumber::zero(prime(), c_->precision());
  for (const auto& ch : tree.children(inner)) {
    sum = sum + raw_moment(Disc{false, ch.c, ch.n}, j);
  }
  return parent - sum;
}

mpq_class TreeDistribution::measure_growth_constant(long max_depth) const {
  const Tree& tree = c_->tree();
  long p = prime();
  int k = weight();
  mpq_class best = 0;
  for (long m = 1; m <= max_depth; ++m) {
    for (const auto& e : tree.depth_partition(m)) {
      Disc d = tree.edge_to_disc(e);
      if (d.complement) continue;
      mpq_class Aa = std::max(mpq_class(1), p_abs_q(d.a, p));
      mpq_class Aak = pow_q(Aa, k);
      for (int j = 0; j <= k - 2; ++j) {
        PadicNumber mom = central_moment(d, j);
        if (mom.is_zero()) continue;
        // |mom| <= A * A(a) * p^{-m(j+1-k/2)}
        mpq_class rhs_wo_A = Aak * pow_q(mpq_class(1, p), d.m * (j + 1 - k / 2));
        mpq_class need = p_abs(mom, p) / rhs_wo_A;
        if (need > best) best = need;
      }
    }
  }
  return best == 0 ? mpq_class(1) : best;
}

bool TreeDistribution::check_growth_bound(const mpq_class& A, long max_depth) const {
  const Tree& tree = c_->tree();
  long p = prime();
  int k = weight();
  for (long m = 1; m <= max_depth; ++m) {
    for (const auto& e : tree.depth_partition(m)) {
      Disc d = tree.edge_to_disc(e);
      if (d.complement) continue;
      mpq_class Aa = std::max(mpq_class(1), p_abs_q(d.a, p));
      for (int j = 0; j <= k - 2; ++j) {
        PadicNumber mom = central_moment(d, j);
        if (mom.is_zero()) continue;
        mpq_class bound = A * pow_q(Aa, k) * pow_q(mpq_class(1, p), d.m * (j + 1 - k / 2));
        if (p_abs(mom, p) > bound) return false;
      }
    }
  }
  return true;
}

namespace {

// Taylor shift: rewrite sum c_i (x-a)^i as sum c'_i (x-b)^i with delta = b-a.
std::vector<PadicNumber> recenter(const std::vector<PadicNumber>& coeffs, const mpq_class& delta,
                                  long p, int prec) {
  size_t n = coeffs.size();
  std::vector<PadicNumber> out(n, PadicNumber::zero(p, prec));
  // (x-a)^i = ((x-b) + delta)^i = sum_t binom(i,t) delta^(i-t) (x-b)^t
  for (size_t i = 0; i < n; ++i) {
    if (coeffs[i].is_zero()) continue;
    for (size_t t = 0; t <= i; ++t) {
      mpq_class coef = mpq_class(binom_mpz(i, t)) * pow_q(delta, static_cast<long>(i - t));
      if (coef == 0) continue;
      out[t] = out[t] + coeffs[i].scale(coef);
    }
  }
  return out;
}

std::vector<Disc> refine_disc(const Tree& tree, const Disc& d, long level) {
  std::vector<Disc> out;
  if (d.m >= level) {
    out.push_back(d);
    return out;
  }
  std::vector<TreeVertex> frontier{TreeVertex{d.m, d.a}};
  for (long m = d.m; m < level; ++m) {
    std::vector<TreeVertex> next;
    next.reserve(frontier.size() * tree.prime());
    for (const auto& v : frontier)
      for (const auto& ch : tree.children(v)) next.push_back(ch);
    frontier = std::move(next);
  }
  out.reserve(frontier.size());
  for (const auto& v : frontier) out.push_back(Disc{false, v.c, v.n});
  return out;
}

}  // namespace

IntegrationResult integrate(const TreeDistribution& dist, const LocallyAnalyticFunction& f,
                            long depth) {
  long p = dist.prime();
  int k = dist.weight();
  int prec = dist.cocycle().precision();
  const Tree& tree = dist.cocycle().tree();
  PadicNumber total = PadicNumber::zero(p, prec);
  long tail = prec;  // exact until a truncation happens
  mpq_class A;       // growth constant, measured lazily
  bool haveA = false;
  for (const auto& piece : f.pieces) {
    if (piece.domain.complement)
      fail(errc::domain_violation, "polynomial pieces live on finite discs");
    std::vector<Disc> cover;
    try {
      cover = refine_disc(tree, tree.canonical(piece.domain), depth);
    } catch (const Error&) {
      fail(errc::depth_too_shallow, "cannot refine to requested depth");
    }
    for (const auto& sub : cover) {
      std::vector<PadicNumber> local =
          recenter(piece.coeffs, sub.a - piece.domain.a, p, prec);
      int dmax = std::min<int>(static_cast<int>(local.size()) - 1, k - 2);
      PadicNumber val = PadicNumber::zero(p, prec);
      for (int j = 0; j <= dmax; ++j) {
        if (local[j].is_zero()) continue;
        PadicNumber mom;
        try {
          mom = dist.central_moment(sub, j);
        } catch (const Error& e) {
          if (e.code() == errc::out_of_table)
            fail(errc::depth_too_shallow, "table too shallow at " + tree.label(sub));
          throw;
        }
        val = val + local[j] * mom;
      }
      total = total + val;
      // dropped degrees: Prop-estimate shaped bound with the measured A
      for (size_t j = dmax + 1; j < local.size(); ++j) {
        if (local[j].is_zero()) continue;
        if (!haveA) {
          A = dist.measure_growth_constant(std::min<long>(depth, 4));
          haveA = true;
        }
        mpq_class Aa = std::max(mpq_class(1), p_abs_q(sub.a, p));
        mpq_class bound = A * pow_q(Aa, k) *
                          pow_q(mpq_class(1, p), sub.m * (static_cast<long>(j) + 1 - k / 2)) *
                          p_abs(local[j], p);
        if (bound != 0) {
          // -log_p of the bound
          mpq_class t = bound;
          long e = 0;
          while (t < 1) {
            t *= p;
            ++e;
          }
          tail = std::min(tail, e);
        }
      }
    }
  }
  return IntegrationResult{total, tail};
}

IntegrationResult vanishing_check(const MultiCocycle& m,
                                  const std::vector<LocallyAnalyticFunction>& g_restrictions,
                                  long depth) {
  if (m.rank() < 2) fail(errc::domain_violation, "vanishing check needs rank >= 2");
  if (g_restrictions.size() != m.rank() - 1)
    fail(errc::domain_violation, "need one restriction per leading coordinate");
  long p = m.component(0).prime();
  int prec = m.component(0).precision();
  PadicNumber prod = PadicNumber::from_integer(p, 1, prec);
  long tail = prec;
  for (size_t i = 0; i + 1 < m.rank(); ++i) {
    TreeDistribution di(m.component(i));
    auto r = integrate(di, g_restrictions[i], depth);
    prod = prod * r.value;
    tail = std::min(tail, r.tail_exponent);
  }
  // Last coordinate: x^0 over the whole P^1 via the depth partition.
  const HarmonicCocycle& last = m.component(m.rank() - 1);
  TreeDistribution dl(last);
  const Tree& tree = last.tree();
  PadicNumber full = PadicNumber::zero(p, prec);
  for (const auto& e : tree.depth_partition(depth))
    full = full + dl.raw_moment(tree.edge_to_disc(e), 0);
  return IntegrationResult{prod * full, tail};
}

PadicNumber schneider_value(const HarmonicCocycle& c, const TwistedMatrix& gamma,
                            const TreeVertex& v) {
  const Tree& tree = c.tree();
  TreeVertex w = tree.act(gamma, v);
  PadicNumber sum = PadicNumber::zero(c.prime(), c.precision());
  for (const auto& e : tree.geodesic(v, w)) sum = sum + c.evaluate_scalar(e);
  return sum;
}

IntegrationResult lambda_value(const HarmonicCocycle& c, const PadicNumber& qtilde,
                               const LogBranch& branch, const Qp2Number& z0, long depth) {
  if (c.weight() != 2) fail(errc::domain_violation, "lambda is implemented for weight 2");
  long p = c.prime();
  int prec = c.precision();
  if (z0.im().is_zero() || z0.im().valuation() > prec - 2)
    fail(errc::z0_in_qp, "z0 must have a unit-scale omega part");
  if (depth < 1) fail(errc::depth_too_shallow, "depth >= 1");
  const Tree& tree = c.tree();
  Qp2Number gz0 = Qp2Number::from_qp(qtilde) * z0;

  auto riemann = [&](const Qp2Number& base, const Qp2Number& gbase) {
    Qp2Number acc = Qp2Number::from_qp(PadicNumber::zero(p, prec));
    for (const auto& e : tree.depth_partition(depth)) {
      PadicNumber w = c.evaluate_scalar(e);
      if (w.is_zero()) continue;
      Disc d = tree.edge_to_disc(e);
      if (d.complement) continue;  // center at infinity: integrand -> log 1 = 0
      Qp2Number t = Qp2Number::from_qp(PadicNumber::from_rational(p, d.a, prec));
      Qp2Number ratio = (t - gbase) / (t - base);
      Qp2Number lg = branch_log(branch, ratio);
      acc = acc + Qp2Number(lg.re() * w, lg.im() * w);
    }
    return acc;
  };

  Qp2Number v1 = riemann(z0, gz0);
  Qp2Number v2 = riemann(z0.conj(), gz0.conj());
  int digits = std::max(1, prec - 3);
  if (!v1.re().agrees(v2.re(), std::min<long>(digits, depth + 1)))
    fail(errc::domain_violation, "z0 / conj(z0) values disagree beyond the tail bound");
  return IntegrationResult{v1.re(), depth};
}

PadicNumber l_invariant(const HarmonicCocycle& c, const PadicNumber& qtilde,
                        const LogBranch& branch, long depth, std::optional<Qp2Number> z0) {
  const Tree& tree = c.tree();
  auto ax = tree.hyperbolic_axis(qtilde);
  PadicNumber delta = schneider_value(c, ax.gamma, tree.base_vertex());
  if (delta.is_zero()) fail(errc::zero_schneider, "Schneider value vanishes");
  Qp2Number z = z0 ? *z0 : Qp2Number::omega(c.prime(), c.precision());
  auto lam = lambda_value(c, qtilde, branch, z, depth);
  return lam.value / delta;
}

std::optional<PadicNumber> telescoped_lambda_check(const HarmonicCocycle& c,
                                                   const PadicNumber& qtilde,
                                                   const LogBranch& branch, long depth) {
  // Gate: the telescoped form of the lambda integral presumes no mass at the
  // axis endpoints; probe the deep balls around 0 and around infinity.
  TreeDistribution dist(c);
  const Tree& tree = c.tree();
  long h = qtilde.valuation();
  for (long m = depth - h; m <= depth; ++m) {
    if (m < 1) continue;
    if (!dist.raw_moment(Disc{false, 0, m}, 0).is_zero()) return std::nullopt;
    if (!dist.raw_moment(Disc{true, 0, -m}, 0).is_zero()) return std::nullopt;
  }
  // int over the strip {0 <= v(x) < h} of (log_u z0 - log_u x) dmu, evaluated
  // as a Riemann sum at the given depth; z0-part drops (strip mass is total
  // mass = 0 here), leaving -int log_u(x).
  long p = c.prime();
  int prec = c.precision();
  PadicNumber acc = PadicNumber::zero(p, prec);
  for (const auto& e : tree.depth_partition(depth)) {
    Disc d = tree.edge_to_disc(e);
    if (d.complement) continue;
    if (d.a == 0) continue;  // 0 not in the strip
    long v = vp(d.a, p);
    if (v < 0 || v >= h) continue;
    PadicNumber w = c.evaluate_scalar(e);
    if (w.is_zero()) continue;
    PadicNumber lg = branch.log(PadicNumber::from_rational(p, d.a, prec));
    acc = acc - lg * w;
  }
  return acc;
}

std::vector<mpz_class> j_series_coefficients(long order) {
  // j(q) = E4(q)^3 / Delta(q); returns c(0..order) with
  // j(q) = 1/q + sum_{n>=0} c(n) q^n.
  long M = order + 2;
  std::vector<mpz_class> e4(M, 0), delta_over_q(M, 0);
  e4[0] = 1;
  for (long n = 1; n < M; ++n) {
    mpz_class s3 = 0;
    for (long d = 1; d <= n; ++d)
      if (n % d == 0) s3 += mpz_class(d) * d * d;
    e4[n] = 240 * s3;
  }
  // Delta/q = prod (1-q^n)^24
  delta_over_q[0] = 1;
  for (long n = 1; n < M; ++n) {
    for (int rep = 0; rep < 24; ++rep) {
      for (long i = M - 1; i >= n; --i) delta_over_q[i] -= delta_over_q[i - n];
    }
  }
  // cube of E4
  auto mul = [&](const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
    std::vector<mpz_class> r(M, 0);
    for (long i = 0; i < M; ++i) {
      if (a[i] == 0) continue;
      for (long j = 0; i + j < M; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
  };
  std::vector<mpz_class> num = mul(mul(e4, e4), e4);
  // divide by Delta/q (unit constant term): num = (j*q) series, j*q = 1 + c0 q + ...
  std::vector<mpz_class> jq(M, 0);
  for (long n = 0; n < M; ++n) {
    mpz_class acc = num[n];
    for (long i = 1; i <= n; ++i) acc -= delta_over_q[i] * jq[n - i];
    jq[n] = acc;  // leading coefficient of divisor is 1
  }
  // j = 1/q + jq[1] + jq[2] q + ...
  std::vector<mpz_class> out(order + 1);
  for (long n = 0; n <= order; ++n) out[n] = jq[n + 1];
  return out;
}

PadicNumber j_from_q(const PadicNumber& q) {
  if (q.is_zero() || q.valuation() < 1) fail(errc::domain_violation, "need v(q) >= 1");
  long p = q.prime();
  int prec = q.precision();
  long order = prec / q.valuation() + 2;
  auto c = j_series_coefficients(order);
  PadicNumber acc = q.inverse() + PadicNumber::from_integer(p, c[0], prec);
  PadicNumber qk = PadicNumber::from_integer(p, 1, prec);
  for (long n = 1; n <= order; ++n) {
    qk = qk * q;
    if (qk.is_zero()) break;
    acc = acc + qk.scale(mpq_class(c[n]));
  }
  return acc;
}

PadicNumber tate_parameter(const PadicNumber& j) {
  if (j.is_zero() || j.valuation() >= 0)
    fail(errc::integral_j_invariant, "Tate parameter needs v(j) < 0");
  long p = j.prime();
  int prec = j.precision();
  long vq = -j.valuation();
  long order = prec / vq + 2;
  auto c = j_series_coefficients(order);
  PadicNumber q = j.inverse();
  for (int it = 0; it < prec + 4; ++it) {
    // q <- 1 / (j - c0 - c1 q - c2 q^2 - ...)
    PadicNumber den = j - PadicNumber::from_integer(p, c[0], prec);
    PadicNumber qk = PadicNumber::from_integer(p, 1, prec);
    for (long n = 1; n <= order; ++n) {
      qk = qk * q;
      if (qk.is_zero()) break;
      den = den - qk.scale(mpq_class(c[n]));
    }
    PadicNumber next = den.inverse();
    if (next == q) break;
    q = next;
  }
  return q;
}

}  // namespace padicx
