#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicx/theta.hpp"

using namespace padicx;

namespace {

const long P = 3;
const int N = 20;

PadicNumber pn(long v) { return PadicNumber::from_integer(P, v, N); }

GrossPointData dirac_data(long levels, long at_teich_power) {
  auto tower = make_split_tower(P, {1}, levels);
  GrossPointData data(tower, {pn(1)});
  for (const auto& n : data.tower().levels()) {
    std::vector<PadicNumber> vals(data.tower().order(n), PadicNumber::zero(P, N));
    GroupElement g = data.tower().identity(n);
    if (n[0] >= 1) {
      const auto& lev = data.tower().level(n);
      for (size_t j = 0; j < lev.labels.size(); ++j)
        if (lev.labels[j] == "p0.teich") g[j] = at_teich_power % lev.orders[j];
    }
    vals[data.tower().index_of(n, g)] = pn(1);
    data.set_level_values(n, vals);
  }
  return data;
}

}  // namespace

TEST_CASE("multipliers: Theorem-A display and case identities") {
  // split, s = 0, alpha = 1, chi(P) = chi(Pbar) = 1 -> e = 0
  MultiplierParams t;
  t.splitting = MultiplierCase::kSplit;
  t.alpha = 1;
  t.p = 5;
  t.f = 1;
  t.r_p = 1;
  t.s = 0;
  CHECK(multiplier_e(t).e == 0);

  // split, s = n > 0 -> e = p^{nf} / alpha^{2n}
  for (long n : {1L, 2L, 3L}) {
    for (long f : {1L, 2L}) {
      MultiplierParams u;
      u.splitting = MultiplierCase::kSplit;
      u.alpha = -1;
      u.p = 5;
      u.f = f;
      u.r_p = 1;
      u.s = n;
      mpq_class expect = 1;
      for (long i = 0; i < n * f; ++i) expect *= 5;
      CHECK(multiplier_e(u).e == expect);
    }
  }
  // unramified pi (r_p = 0) with a generic unit alpha
  {
    MultiplierParams u;
    u.splitting = MultiplierCase::kSplit;
    u.alpha = mpq_class(2, 7);
    u.p = 5;
    u.f = 1;
    u.r_p = 0;
    u.s = 2;
    auto v = multiplier_e(u);
    mpq_class a4 = mpq_class(2, 7) * mpq_class(2, 7) * mpq_class(2, 7) * mpq_class(2, 7);
    CHECK(v.e == mpq_class(25) / a4);
  }

  // inert, s = 0, alpha = -1: ebar = 1 - alpha^{-2} = 0 so e = 0
  {
    MultiplierParams u;
    u.splitting = MultiplierCase::kInert;
    u.alpha = -1;
    u.p = 5;
    u.f = 1;
    u.r_p = 1;
    u.s = 0;
    auto v = multiplier_e(u);
    CHECK(v.ebar == 0);
    CHECK(v.e == 0);
  }

  // definitional identities, symbol for symbol
  {
    MultiplierParams u;
    u.splitting = MultiplierCase::kSplit;
    u.alpha = mpq_class(3, 4);
    u.p = 7;
    u.f = 2;
    u.r_p = 0;
    u.s = 0;
    u.chi_P = mpq_class(5, 2);
    u.chi_Pbar = mpq_class(2, 5);
    auto v = multiplier_e(u);
    mpq_class q_inv(1, 49);
    mpq_class ainv = mpq_class(4, 3);
    mpq_class ebar = (1 - ainv * u.chi_P) * (1 - ainv * u.chi_Pbar);
    CHECK(v.ebar == ebar);
    CHECK(v.etilde == ebar * ebar * u.alpha * u.alpha * q_inv * q_inv);
    CHECK(v.e == v.etilde);  // s = 0
  }

  // vanishing iff alpha = 1 and split-unramified trivial chi (within the
  // family's value domain: chi(P) a 1-unit or 1, chi(Pbar) its inverse)
  for (mpq_class alpha : {mpq_class(1), mpq_class(-1)}) {
    for (mpq_class x : {mpq_class(1), mpq_class(4, 3), mpq_class(9, 13)}) {
      MultiplierParams u;
      u.splitting = MultiplierCase::kSplit;
      u.alpha = alpha;
      u.p = 3;
      u.f = 1;
      u.r_p = 1;
      u.s = 0;
      u.chi_P = x;
      u.chi_Pbar = 1 / x;
      bool expect_zero = (alpha == 1 && x == 1);
      CHECK((multiplier_e(u).e == 0) == expect_zero);
    }
  }
  // r_p = 1 demands alpha = +-1
  MultiplierParams bad;
  bad.alpha = mpq_class(2);
  bad.r_p = 1;
  CHECK_THROWS_AS(multiplier_e(bad), Error);
}

TEST_CASE("Dirac towers") {
  auto data = dirac_data(4, 0);
  CHECK(data.validate().ok());
  // Theta_n = [identity]
  auto th = data.theta_element({2});
  long idx = data.tower().index_of({2}, data.tower().identity({2}));
  for (long i = 0; i < data.tower().order({2}); ++i) {
    if (i == idx)
      CHECK(th.coeffs[i].agrees(pn(1), N));
    else
      CHECK(th.coeffs[i].is_zero());
  }
  CHECK(data.check_compatibility({3}, {1}));
  CHECK(data.check_compatibility({4}, {0}));

  auto triv = FiniteCharacter::trivial(&data.tower(), LevelVector{1});
  CHECK(data.script_L(triv).agrees(pn(1), N));
  CHECK(data.L_value(triv).agrees(pn(1), N));

  // Dirac at g: script_L = chi(g), L = chi(g)^2
  auto data_g = dirac_data(4, 1);
  CHECK(data_g.validate().ok());
  auto zeta = teichmuller(2, P, N);  // order p-1 = 2 value
  FiniteCharacter chi(&data_g.tower(), {1}, {pn(1), zeta, pn(1)});
  auto sv = data_g.script_L(chi);
  CHECK(sv.agrees(zeta, N - 1));
  CHECK(data_g.L_value(chi).agrees(zeta * zeta, N - 1));
  // level independence
  ThetaElement t3 = data_g.theta_element({3});
  PadicNumber acc = PadicNumber::zero(P, N);
  for (long i = 0; i < data_g.tower().order({3}); ++i)
    acc = acc + t3.coeffs[i] * chi.value_at_level({3}, data_g.tower().element_at({3}, i));
  CHECK(acc.agrees(sv, N - 1));

  // corrupting one value breaks compatibility
  auto broken = dirac_data(3, 0);
  auto vals = broken.level_values({2});
  vals[3] = pn(1);
  broken.set_level_values({2}, vals);
  CHECK(!broken.check_compatibility({2}, {1}));
  CHECK(!broken.validate().ok());
}

TEST_CASE("Dirac L-series is exp(t l(g))") {
  auto data = dirac_data(5, 1);
  LogFunctional lg("sigma", &data.tower());
  auto lam = iwasawa_log(PadicNumber::from_integer(P, 1 + P, N));
  lg.set_value("p0.one", lam);
  lg.set_value("p0.teich", PadicNumber::make(P, 2, 1, N));  // synthetic torsion-killed value
  auto triv = FiniteCharacter::trivial(&data.tower(), LevelVector{0});
  std::vector<PadicNumber> s{pn(1)};
  auto r1 = integrate_log_power(data, triv, {lg}, s, 1);
  CHECK(r1.stabilized);
  // l(g) at the stabilized levels: teich exponent 1
  auto lval = PadicNumber::make(P, 2, 1, N);
  CHECK(r1.value.agrees(lval, N - 3));
  auto r2 = integrate_log_power(data, triv, {lg}, s, 2);
  CHECK(r2.value.agrees(lval * lval, N - 3));

  auto series = L_series(data, triv, {lg}, {}, s, 3, 0);
  CHECK(series[0].agrees(pn(1), N));
  CHECK(series[1].agrees(lval, N - 3));
  CHECK(series[2].agrees((lval * lval).scale(mpq_class(1, 2)), N - 4));
}

TEST_CASE("no stabilization is reported") {
  auto data = dirac_data(1, 1);  // only levels 0 and 1
  LogFunctional lg("sigma", &data.tower());
  lg.set_value("p0.teich", PadicNumber::make(P, 1, 1, N));
  auto triv = FiniteCharacter::trivial(&data.tower(), LevelVector{0});
  CHECK_THROWS_AS(integrate_log_power(data, triv, {lg}, {pn(1)}, 1), Error);
}

TEST_CASE("cocycle-built data: compatibility, vanishing, transfer") {
  auto q = PadicNumber::from_integer(P, P * 4, N);  // h = 1
  auto c = axis_cocycle(P, q, 8);
  auto data = build_gross_data_from_cocycle({c}, 5);
  CHECK(data.validate().ok());

  for (long m = 0; m < 5; ++m) CHECK(data.check_compatibility({m + 1}, {m}));
  CHECK(data.check_compatibility({5}, {0}));

  // total measure at level 0 vanishes (endpoint atoms cancel)
  auto th0 = data.theta_element({0});
  PadicNumber total = PadicNumber::zero(P, N);
  for (const auto& v : th0.coeffs) total = total + v;
  CHECK(total.is_zero());

  // exceptional vanishing: script_L(chi) = 0 for slot-trivial chi
  auto triv = FiniteCharacter::trivial(&data.tower(), LevelVector{2});
  CHECK(data.script_L(triv).is_zero());

  // extension consistency (the transfer law at the measure level)
  CHECK(data.transfer_check(4));
  CHECK(data.restricted_value(triv).agrees(pn(1), N));
}

TEST_CASE("cohomological shadow of the derivative identity") {
  auto q = PadicNumber::from_integer(P, P * 4, N);
  auto c = axis_cocycle(P, q, 8);
  auto data = build_gross_data_from_cocycle({c}, 3);
  auto triv = FiniteCharacter::trivial(&data.tower(), LevelVector{1});
  for (const auto& u :
       {PadicNumber::make(P, 1, 1, N), q, PadicNumber::from_integer(P, P * (1 + 2 * P), N)}) {
    LogBranch branch(u);
    auto res = coh_shadow_residual(data, triv, 0, branch, 6);
    CHECK((res.is_zero() || res.valuation() >= N - 5));
  }
}

TEST_CASE("flagship r = 1: leading term against the L-invariant") {
  auto q = PadicNumber::from_integer(P, P * 4, N);  // h = 1
  auto c = axis_cocycle(P, q, 9);
  auto data = build_gross_data_from_cocycle({c}, 4);
  auto triv = FiniteCharacter::trivial(&data.tower(), LevelVector{1});
  std::vector<PadicNumber> s{pn(1)};

  // branch u = p: c1 = h L^Tei * restricted = log_Iw(1+p)-type value, nonzero
  LogBranch br = LogBranch::iwasawa(P, N);
  auto rep = leading_term_check(data, triv, {br}, s, 7);
  CHECK(rep.rank == 1);
  CHECK(rep.low_coefficients[0].is_zero());
  CHECK(rep.matched_digits >= N - 6);
  auto expected = iwasawa_log(pn(4));
  CHECK(rep.engine_side.agrees(expected, N - 6));
  CHECK(!rep.invariant_side.is_zero());

  // branch u = qtilde: the first derivative vanishes
  LogBranch brq(q);
  auto rep0 = leading_term_check(data, triv, {brq}, s, 7);
  CHECK((rep0.engine_side.is_zero() || rep0.engine_side.valuation() >= N - 6));
  CHECK((rep0.invariant_side.is_zero() || rep0.invariant_side.valuation() >= N - 6));

  // h = 2 cross-check: engine and invariant sides still agree
  auto q2 = PadicNumber::from_integer(P, P * P * (1 + P + P * P), N);
  auto c2 = axis_cocycle(P, q2, 9);
  auto data2 = build_gross_data_from_cocycle({c2}, 3);
  auto triv2 = FiniteCharacter::trivial(&data2.tower(), LevelVector{1});
  auto rep2 = leading_term_check(data2, triv2, {br}, s, 7);
  CHECK(rep2.matched_digits >= N - 6);
  CHECK(rep2.engine_side.agrees(br.log(q2), N - 6));
}

TEST_CASE("rank 2 product data: order of vanishing") {
  auto q1 = PadicNumber::from_integer(P, P * 4, N);
  auto q2 = PadicNumber::from_integer(P, P * 7, N);
  auto c1 = axis_cocycle(P, q1, 7);
  auto c2 = axis_cocycle(P, q2, 7);
  auto data = build_gross_data_from_cocycle({c1, c2}, 2);
  CHECK(data.validate().ok());
  CHECK(data.check_compatibility({2, 2}, {1, 1}));
  CHECK(data.check_compatibility({2, 1}, {0, 0}));

  auto triv = FiniteCharacter::trivial(&data.tower(), LevelVector{1, 1});
  std::vector<PadicNumber> s{pn(1), pn(1)};
  LogBranch br = LogBranch::iwasawa(P, N);
  auto series = L_series(data, triv, {}, {br, br}, s, 2, 6);
  CHECK(series[0].is_zero());
  CHECK((series[1].is_zero() || series[1].valuation() >= N - 6));

  // the leading k = r = 2 term matches prod h L^Tei times the restricted value
  auto rep = leading_term_check(data, triv, {br, br}, s, 6);
  CHECK(rep.rank == 2);
  CHECK(rep.matched_digits >= N - 6);
  auto expect = iwasawa_log(pn(4)) * iwasawa_log(pn(7));
  CHECK(rep.engine_side.agrees(expect, N - 6));
}

TEST_CASE("theta is linear in the value tables") {
  auto data = dirac_data(3, 1);
  auto scaled = dirac_data(3, 1);
  auto lam = PadicNumber::from_integer(P, 7, N);
  for (const auto& n : scaled.tower().levels()) {
    auto vals = scaled.level_values(n);
    for (auto& v : vals) v = v * lam;
    scaled.set_level_values(n, vals);
  }
  for (const auto& n : data.tower().levels()) {
    auto a = data.theta_element(n);
    auto b = scaled.theta_element(n);
    for (size_t i = 0; i < a.coeffs.size(); ++i)
      CHECK((b.coeffs[i] - a.coeffs[i] * lam).is_zero());
  }
}

TEST_CASE("Dirac log-power with a nontrivial character") {
  auto data = dirac_data(4, 1);
  LogFunctional lg("sigma", &data.tower());
  auto lam = PadicNumber::make(P, 2, 1, N);
  lg.set_value("p0.teich", lam);
  auto zeta = teichmuller(2, P, N);
  FiniteCharacter chi(&data.tower(), {1}, {pn(1), zeta, pn(1)});
  std::vector<PadicNumber> s{pn(1)};
  auto r = integrate_log_power(data, chi, {lg}, s, 2);
  // chi(g) * l(g)^2 with g the Teichmueller generator class
  CHECK(r.value.agrees(zeta * lam * lam, N - 4));
}

TEST_CASE("gross data json round trip") {
  auto q = PadicNumber::from_integer(P, P * 4, N);
  auto c = axis_cocycle(P, q, 4);
  auto data = build_gross_data_from_cocycle({c}, 2);
  auto text = data.to_json();
  auto back = GrossPointData::from_json(text);
  CHECK(back.validate().ok());
  CHECK(back.fully_exceptional());
  for (long m = 0; m < 2; ++m) CHECK(back.check_compatibility({m + 1}, {m}));
  auto triv = FiniteCharacter::trivial(&back.tower(), LevelVector{1});
  CHECK(back.script_L(triv).is_zero());
}
