#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <thread>

#include "padicx/distribution.hpp"

using namespace padicx;

namespace {

std::mt19937_64 rng(0x0ddba11ULL);

// Independent oracle: the linear functional sum_i w_i delta_{t_i} with total
// moments of degree <= k-2 equal to zero is a bounded harmonic cocycle via
// c(e)[j] = binom(k-2,j) * sum_i w_i t_i^j [t_i in U_e].
HarmonicCocycle point_mass_cocycle(long p, int k, long depth, const std::vector<long>& pts,
                                   const std::vector<long>& wts, int prec = 20) {
  HarmonicCocycle c(p, k, depth, prec);
  Tree tree(p);
  std::vector<std::vector<mpq_class>> binom(k - 1, std::vector<mpq_class>(k - 1, 0));
  auto bin = [&](long n, long kk) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, kk);
    return mpq_class(r);
  };
  std::function<void(const TreeVertex&, std::set<std::string>&)> visit =
      [&](const TreeVertex& v, std::set<std::string>& seen) {
        if (!seen.insert(tree.label(v)).second) return;
        for (const auto& w : tree.neighbors(v)) {
          TreeEdge e{v, w};
          if (tree.distance(w, tree.base_vertex()) > depth) continue;
          Disc d = tree.edge_to_disc(e);
          CoeffVector val;
          bool nonzero = false;
          for (int j = 0; j <= k - 2; ++j) {
            mpq_class acc = 0;
            for (size_t i = 0; i < pts.size(); ++i) {
              if (!tree.contains(d, P1Point::of(pts[i]))) continue;
              mpq_class tj = 1;
              for (int t = 0; t < j; ++t) tj *= pts[i];
              acc += mpq_class(wts[i]) * tj;
            }
            acc *= bin(k - 2, j);
            val.push_back(PadicNumber::from_rational(p, acc, prec));
            nonzero = nonzero || (acc != 0);
          }
          if (nonzero) c.set_value(e, val);
          visit(w, seen);
        }
      };
  std::set<std::string> seen;
  visit(tree.base_vertex(), seen);
  return c;
}

}  // namespace

TEST_CASE("axis moments") {
  long p = 3;
  auto q = PadicNumber::make(p, 1, 1, 16);
  auto c = axis_cocycle(p, q, 6);
  TreeDistribution d(c);
  auto one = PadicNumber::from_integer(p, 1, 16);
  for (long m = 0; m <= 5; ++m) CHECK(d.raw_moment(Disc{false, 0, m}, 0).agrees(one, 14));
  CHECK(d.raw_moment(Disc{false, 1, 1}, 0).is_zero());
  CHECK(d.raw_moment(Disc{false, 2, 1}, 0).is_zero());
  // additivity parent = sum of children
  for (long m = 0; m <= 4; ++m) {
    CHECK(d.additivity_residual(Disc{false, 0, m}, 0).is_zero());
    CHECK(d.additivity_residual(Disc{false, 1, m + 1}, 0).is_zero());
  }
}

TEST_CASE("weight-4 point-mass oracle: moments, additivity, growth bound") {
  long p = 5;
  const int k = 4, prec = 16;
  std::vector<long> pts{0, 1, 2, 3};
  std::vector<long> wts{1, -3, 3, -1};  // kills total moments of degree <= 2
  auto c = point_mass_cocycle(p, k, 5, pts, wts, prec);
  CHECK(c.validate().ok());
  TreeDistribution d(c);
  Tree tree(p);

  // frozen oracle values: int_{U(a,m)} (x-a)^j dmu = sum w_i (t_i - a)^j [t_i in U]
  auto oracle = [&](const Disc& disc, int j) {
    mpq_class acc = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (!tree.contains(disc, P1Point::of(pts[i]))) continue;
      mpq_class t = mpq_class(pts[i]) - disc.a;
      mpq_class tj = 1;
      for (int s = 0; s < j; ++s) tj *= t;
      acc += mpq_class(wts[i]) * tj;
    }
    return PadicNumber::from_rational(p, acc, prec);
  };
  for (long m = 1; m <= 3; ++m) {
    for (const auto& e : tree.depth_partition(m)) {
      Disc disc = tree.edge_to_disc(e);
      if (disc.complement) continue;
      for (int j = 0; j <= k - 2; ++j) {
        CHECK(d.central_moment(disc, j).agrees(oracle(disc, j), prec - 2));
        CHECK(d.additivity_residual(disc, j).is_zero());
      }
    }
  }
  mpq_class A = d.measure_growth_constant(3);
  CHECK(A > 0);
  CHECK(d.check_growth_bound(A, 4));
}

TEST_CASE("integrate polynomial pieces") {
  long p = 3;
  auto q = PadicNumber::make(p, 1, 1, 16);
  auto c = axis_cocycle(p, q, 7);
  TreeDistribution d(c);
  auto one = PadicNumber::from_integer(p, 1, 16);

  // f = 1 on Z_p: exact 1 at every depth
  LocallyAnalyticFunction f1{{{Disc{false, 0, 0}, {one}}}};
  for (long m : {1L, 3L, 5L}) {
    auto r = integrate(d, f1, m);
    CHECK(r.value.agrees(one, 14));
  }

  // f = x on Z_p: converges to 0 (mass sits at the point 0)
  LocallyAnalyticFunction fx{{{Disc{false, 0, 0}, {PadicNumber::zero(p, 16), one}}}};
  for (long m : {2L, 4L, 6L}) {
    auto r = integrate(d, fx, m);
    CHECK((r.value.is_zero() || r.value.valuation() >= m));
  }
  // Riemann-sum stability between depths
  auto r4 = integrate(d, fx, 4), r5 = integrate(d, fx, 5);
  CHECK((r5.value - r4.value).valuation_or(99) >= 4);

  // characteristic function of D(1,2) -> moment
  LocallyAnalyticFunction fc{{{Disc{false, 1, 2}, {one}}}};
  auto rc = integrate(d, fc, 4);
  CHECK(rc.value.agrees(d.raw_moment(Disc{false, 1, 2}, 0), 14));
}

TEST_CASE("multi-variable vanishing") {
  long p = 3;
  auto q1 = PadicNumber::make(p, 1, 1, 16);
  auto q2 = PadicNumber::from_integer(p, 3 * 4, 16);
  MultiCocycle m({axis_cocycle(p, q1, 7), axis_cocycle(p, q2, 7)});
  auto one = PadicNumber::from_integer(p, 1, 16);
  LocallyAnalyticFunction g{{{Disc{false, 0, 0}, {one}}}};
  auto r = vanishing_check(m, {g}, 6);
  CHECK((r.value.is_zero() || r.value.valuation() >= r.tail_exponent));

  // f supported off both axes: exact 0
  LocallyAnalyticFunction off{{{Disc{false, 1, 2}, {one}}}};
  auto r2 = vanishing_check(m, {off}, 5);
  CHECK(r2.value.is_zero());

  MultiCocycle single({axis_cocycle(p, q1, 4)});
  CHECK_THROWS_AS(vanishing_check(single, {}, 3), Error);
}

TEST_CASE("schneider values") {
  long p = 5;
  for (long h : {1L, 3L}) {
    auto q = PadicNumber::make(p, h, 1 + p, 16);
    auto c = axis_cocycle(p, q, 8);
    auto ax = c.tree().hyperbolic_axis(q);
    auto v = schneider_value(c, ax.gamma, c.tree().base_vertex());
    CHECK(v.agrees(PadicNumber::from_integer(p, h, 16), 14));
    // independence of the base point along the axis
    auto v2 = schneider_value(c, ax.gamma, TreeVertex{2, 0});
    CHECK(v.agrees(v2, 14));
  }
}

TEST_CASE("lambda and the L-invariant oracle") {
  for (long p : {3L, 5L}) {
    const int N = 20;
    auto br = LogBranch::iwasawa(p, N);
    std::vector<PadicNumber> qs = {
        PadicNumber::make(p, 1, 1, N),                                  // p
        PadicNumber::from_integer(p, p * (1 + p), N),                   // p(1+p)
        PadicNumber::from_integer(p, p * p * (1 + p + p * p), N),       // p^2(1+p+p^2)
    };
    for (const auto& q : qs) {
      auto c = axis_cocycle(p, q, 8);
      auto lam = lambda_value(c, q, br, Qp2Number::omega(p, N), 6);
      CHECK(lam.value.agrees(br.log(q), N - 4));
      auto L = l_invariant(c, q, br, 6);
      auto expect = br.log(q).scale(mpq_class(1, q.valuation()));
      CHECK(L.agrees(expect, N - 5));
    }
    // branch point u = qtilde: L-invariant 0
    auto q = qs[1];
    auto c = axis_cocycle(p, q, 8);
    LogBranch brq(q);
    auto L0 = l_invariant(c, q, brq, 6);
    CHECK((L0.is_zero() || L0.valuation() >= N - 5));
  }
}

TEST_CASE("lambda z0 independence across different z0") {
  long p = 3;
  const int N = 18;
  auto q = PadicNumber::from_integer(p, 3 * 4, N);
  auto c = axis_cocycle(p, q, 8);
  auto br = LogBranch::iwasawa(p, N);
  auto w = Qp2Number::omega(p, N);
  auto z1 = w;
  auto z2 = w + Qp2Number::from_qp(PadicNumber::from_integer(p, 2, N));
  auto z3 = Qp2Number(PadicNumber::from_integer(p, 1, N), PadicNumber::from_integer(p, 5, N));
  auto l1 = lambda_value(c, q, br, z1, 6).value;
  auto l2 = lambda_value(c, q, br, z2, 6).value;
  auto l3 = lambda_value(c, q, br, z3, 6).value;
  CHECK(l1.agrees(l2, N - 4));
  CHECK(l1.agrees(l3, N - 4));
  // z0 in Q_p is rejected
  CHECK_THROWS_AS(
      lambda_value(c, q, br, Qp2Number::from_qp(PadicNumber::from_integer(p, 2, N)), 4), Error);
}

TEST_CASE("branch change law") {
  long p = 3;
  const int N = 20;
  auto q = PadicNumber::from_integer(p, 3 * 4, N);
  auto c = axis_cocycle(p, q, 8);
  auto pi = PadicNumber::make(p, 1, 1, N);
  for (int i = 0; i < 8; ++i) {
    long a1 = 1 + static_cast<long>(rng() % (p - 1)), a2 = 1 + static_cast<long>(rng() % (p - 1));
    auto u1 = PadicNumber::from_integer(p, p * (a1 + p * (1 + rng() % 5)), N);
    auto u2 = PadicNumber::from_integer(p, p * (a2 + p * (1 + rng() % 5)), N);
    LogBranch b1(u1), b2(u2);
    auto L1 = l_invariant(c, q, b1, 6);
    auto L2 = l_invariant(c, q, b2, 6);
    auto diff = b1.log(pi) - b2.log(pi);
    CHECK((L1 - L2).agrees(diff, N - 5));
  }
}

TEST_CASE("lambda Riemann sums are stable across depths") {
  long p = 3;
  const int N = 18;
  auto q = PadicNumber::from_integer(p, 3 * 4, N);
  auto c = axis_cocycle(p, q, 8);
  auto br = LogBranch::iwasawa(p, N);
  auto w = Qp2Number::omega(p, N);
  PadicNumber prev;
  for (long m = 3; m <= 6; ++m) {
    auto r = lambda_value(c, q, br, w, m);
    if (m > 3) CHECK((r.value - prev).valuation_or(99) >= m - 1);
    prev = r.value;
  }
}

TEST_CASE("telescoped lambda gate") {
  long p = 3;
  auto q = PadicNumber::from_integer(p, 3 * 4, 16);
  auto c = axis_cocycle(p, q, 7);
  // The synthetic cocycle has endpoint atoms: the gate must refuse.
  CHECK(!telescoped_lambda_check(c, q, LogBranch::iwasawa(p, 16), 5).has_value());
}

TEST_CASE("tate parameter") {
  long p = 5;
  const int N = 14;
  // j with v(j) = -5
  auto j = PadicNumber::make(p, -5, 2 + 3 * p, N);
  auto q = tate_parameter(j);
  CHECK(q.valuation() == 5);
  auto jq = j_from_q(q);
  CHECK(jq.agrees(j, N - 2));
  // q * j = 1 mod p
  auto prod = q * j;
  CHECK(prod.agrees(PadicNumber::from_integer(p, 1, N), 1));
  CHECK_THROWS_AS(tate_parameter(PadicNumber::from_integer(p, 3, N)), Error);
}

TEST_CASE("moment cache is safe under concurrent use") {
  long p = 3;
  auto q = PadicNumber::make(p, 1, 1, 16);
  auto c = axis_cocycle(p, q, 6);
  TreeDistribution d(c);
  Tree tree(p);
  auto edges = tree.depth_partition(4);
  std::vector<PadicNumber> serial;
  for (const auto& e : edges) serial.push_back(d.raw_moment(tree.edge_to_disc(e), 0));
  TreeDistribution d2(c);
  std::vector<PadicNumber> parallel(edges.size());
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t]() {
      for (size_t i = t; i < edges.size(); i += 4)
        parallel[i] = d2.raw_moment(tree.edge_to_disc(edges[i]), 0);
    });
  }
  for (auto& th : pool) th.join();
  for (size_t i = 0; i < edges.size(); ++i) CHECK(parallel[i] == serial[i]);
}

TEST_CASE("j-series sanity") {
  auto c = j_series_coefficients(3);
  CHECK(c[0] == 744);
  CHECK(c[1] == 196884);
  CHECK(c[2] == 21493760);
  CHECK(c[3] == 864299970);
}
