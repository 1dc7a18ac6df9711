#include "padicx/theta.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace padicx {

namespace {

mpq_class pow_q(const mpq_class& b, long e) {
  mpq_class r = 1;
  for (long i = 0; i < std::labs(e); ++i) r *= b;
  if (e < 0) r = 1 / r;
  return r;
}

long primitive_root(long p) {
  auto order = [&](long g) {
    long o = 1, x = g % p;
    while (x != 1) {
      x = (x * g) % p;
      ++o;
    }
    return o;
  };
  for (long g = 2; g < p; ++g)
    if (order(g) == p - 1) return g;
  fail(errc::domain_violation, "no primitive root (p not prime?)");
}

}  // namespace

MultiplierValue multiplier_e(const MultiplierParams& t) {
  if (t.r_p != 0 && t.r_p != 1) fail(errc::inconsistent_case, "r_p must be 0 or 1");
  if (t.s < 0) fail(errc::inconsistent_case, "conductor exponent s >= 0");
  if (t.alpha == 0) fail(errc::inconsistent_case, "alpha must be a unit");
  if (t.r_p == 1 && t.alpha != 1 && t.alpha != -1)
    fail(errc::inconsistent_case, "alpha is +-1 in the special case");
  mpq_class q_inv = pow_q(mpq_class(1, t.p), t.f);  // |w|_p = p^{-f}
  mpq_class ainv = 1 / t.alpha;

  MultiplierValue v;
  if (t.s > 0) {
    v.ebar = 1;
  } else {
    switch (t.splitting) {
      case MultiplierCase::kSplit:
        v.ebar = (1 - ainv * t.chi_P) * (1 - ainv * t.chi_Pbar);
        break;
      case MultiplierCase::kInert:
        v.ebar = 1 - ainv * ainv;
        break;
      case MultiplierCase::kRamified:
        v.ebar = 1 - ainv * t.chi_P;
        break;
    }
  }
  mpq_class case_factor = (t.s == 0) ? mpq_class(t.alpha * t.alpha * q_inv * q_inv)
                                     : pow_q(q_inv, t.s);
  v.etilde = pow_q(v.ebar, 2 - t.r_p) * case_factor;
  // The |p| in the defining relation is the K_p-normalized |w| = q^{-2}; this
  // is what reproduces the unramified/ramified two-case display.
  v.e = pow_q(t.alpha * t.alpha * q_inv * q_inv, -t.s) * v.etilde;
  return v;
}

GrossPointData::GrossPointData(ClassGroupTower tower, std::vector<PadicNumber> alpha)
    : tower_(std::move(tower)), alpha_(std::move(alpha)), slots_(tower_.rank()) {
  if (alpha_.size() != tower_.rank())
    fail(errc::domain_violation, "one alpha per tower prime");
  for (const auto& a : alpha_) {
    if (a.is_zero() || a.valuation() != 0)
      fail(errc::domain_violation, "ordinarity: alpha must be a p-adic unit");
  }
}

int GrossPointData::precision() const { return alpha_.empty() ? 20 : alpha_[0].precision(); }

void GrossPointData::set_level_values(const LevelVector& n, std::vector<PadicNumber> values) {
  if (static_cast<long>(values.size()) != tower_.order(n))
    fail(errc::domain_violation, "one value per group element at " + level_key(n));
  values_[level_key(n)] = std::move(values);
}

bool GrossPointData::has_level_values(const LevelVector& n) const {
  return values_.count(level_key(n)) > 0;
}

const std::vector<PadicNumber>& GrossPointData::level_values(const LevelVector& n) const {
  auto it = values_.find(level_key(n));
  if (it == values_.end()) fail(errc::missing_level, "no values at " + level_key(n));
  return it->second;
}

std::vector<LevelVector> GrossPointData::value_levels() const {
  std::vector<LevelVector> out;
  for (const auto& n : tower_.levels())
    if (has_level_values(n)) out.push_back(n);
  return out;
}

void GrossPointData::attach_exceptional_slot(size_t prime_index, ExceptionalSlot slot) {
  if ((slot.cocycle.weight()) != 2)
    fail(errc::invalid_cocycle, "exceptional slots carry weight-2 cocycles");
  PadicNumber one = PadicNumber::from_integer(prime(), 1, precision());
  if (!(alpha_.at(prime_index) - one).is_zero())
    fail(errc::domain_violation, "exceptional slot needs alpha = 1");
  slots_.at(prime_index) = std::move(slot);
}

bool GrossPointData::fully_exceptional() const {
  for (const auto& s : slots_)
    if (!s) return false;
  return !slots_.empty();
}

const GrossPointData::ExceptionalSlot& GrossPointData::slot(size_t i) const {
  if (!slots_.at(i)) fail(errc::domain_violation, "no exceptional slot at index");
  return *slots_.at(i);
}

ClassGroupTower::Report GrossPointData::validate() const {
  ClassGroupTower::Report rep;
  auto levels = value_levels();
  for (const auto& n : levels) {
    for (size_t i = 0; i < tower_.rank(); ++i) {
      if (n[i] == 0) continue;
      LevelVector m = n;
      m[i] -= 1;
      if (!has_level_values(m)) continue;
      const auto& upper = level_values(n);
      const auto& lower = level_values(m);
      std::vector<PadicNumber> sums(lower.size(), PadicNumber::zero(prime(), precision()));
      for (long idx = 0; idx < tower_.order(n); ++idx) {
        GroupElement g = tower_.element_at(n, idx);
        long j = tower_.index_of(m, tower_.project(n, m, g));
        sums[j] = sums[j] + upper[idx];
      }
      for (size_t j = 0; j < lower.size(); ++j) {
        if (!(sums[j] - alpha_[i] * lower[j]).is_zero()) {
          rep.violations.push_back("U-trace fails " + level_key(n) + " -> " + level_key(m) +
                                   " at element " + std::to_string(j));
          break;
        }
      }
    }
  }
  return rep;
}

ThetaElement GrossPointData::theta_element(const LevelVector& n) const {
  const auto& vals = level_values(n);
  PadicNumber scale = PadicNumber::from_integer(prime(), 1, precision());
  for (size_t i = 0; i < tower_.rank(); ++i) scale = scale * alpha_[i].pow(-n[i]);
  ThetaElement th;
  th.level = n;
  th.coeffs.reserve(vals.size());
  for (const auto& v : vals) th.coeffs.push_back(v * scale);
  return th;
}

bool GrossPointData::check_compatibility(const LevelVector& from, const LevelVector& to) const {
  ThetaElement hi = theta_element(from);
  ThetaElement lo = theta_element(to);
  std::vector<PadicNumber> push(lo.coeffs.size(), PadicNumber::zero(prime(), precision()));
  for (long idx = 0; idx < tower_.order(from); ++idx) {
    GroupElement g = tower_.element_at(from, idx);
    long j = tower_.index_of(to, tower_.project(from, to, g));
    push[j] = push[j] + hi.coeffs[idx];
  }
  for (size_t j = 0; j < push.size(); ++j)
    if (!(push[j] - lo.coeffs[j]).is_zero()) return false;
  return true;
}

PadicNumber GrossPointData::script_L(const FiniteCharacter& chi) const {
  // evaluate at the character's level if present, else at any present level
  // that projects onto it
  LevelVector n = chi.level();
  if (!has_level_values(n)) {
    bool found = false;
    for (const auto& m : value_levels()) {
      if (tower_.has_projection_path(m, n)) {
        n = m;
        found = true;
        break;
      }
    }
    if (!found) fail(errc::level_unavailable, "no usable level for the character");
  }
  ThetaElement th = theta_element(n);
  PadicNumber acc = PadicNumber::zero(prime(), precision());
  for (long idx = 0; idx < tower_.order(n); ++idx) {
    GroupElement g = tower_.element_at(n, idx);
    acc = acc + th.coeffs[idx] * chi.value_at_level(n, g);
  }
  return acc;
}

PadicNumber GrossPointData::L_value(const FiniteCharacter& chi) const {
  PadicNumber s = script_L(chi);
  return s * s;
}

PadicNumber GrossPointData::ball_value(size_t si, long i) const {
  const ExceptionalSlot& sl = slot(si);
  TreeDistribution dist(sl.cocycle);
  return dist.raw_moment(Disc{false, 0, i}, 0);
}

PadicNumber GrossPointData::band_value(size_t si, long a, long b) const {
  return ball_value(si, a) - ball_value(si, b);
}

PadicNumber GrossPointData::log_band_value(size_t si, const LogBranch& branch, long a, long b,
                                           long depth) const {
  const ExceptionalSlot& sl = slot(si);
  if (depth < std::max(b, 1 - a) || depth > sl.cocycle.depth())
    fail(errc::depth_too_shallow, "band depth out of range");
  long p = prime();
  int prec = precision();
  const Tree& tree = sl.cocycle.tree();
  PadicNumber acc = PadicNumber::zero(p, prec);
  for (const auto& e : tree.depth_partition(depth)) {
    Disc d = tree.edge_to_disc(e);
    if (d.complement) continue;  // valuations below -depth: outside the band
    if (d.a == 0) continue;      // the deep ball: v >= depth >= b
    long v = vp(d.a, p);
    if (v < a || v >= b) continue;
    PadicNumber w = sl.cocycle.evaluate_scalar(e);
    if (w.is_zero()) continue;
    acc = acc + branch.log(PadicNumber::from_rational(p, d.a, prec)) * w;
  }
  return acc;
}

PadicNumber GrossPointData::finite_part_character_sum(const FiniteCharacter& chi) const {
  const auto& lev = tower_.level(chi.level());
  // character must be trivial on every prime-slot factor
  for (size_t j = 0; j < lev.labels.size(); ++j) {
    if (lev.labels[j].rfind("H", 0) == 0) continue;
    GroupElement gen = tower_.identity(chi.level());
    gen[j] = 1;
    PadicNumber v = chi.value(gen);
    PadicNumber one = PadicNumber::from_integer(prime(), 1, v.precision());
    if (!(v - one).is_zero())
      fail(errc::domain_violation, "character must be trivial at the exceptional slots");
  }
  // sum over the finite-part subgroup
  std::vector<size_t> hidx;
  for (size_t j = 0; j < lev.labels.size(); ++j)
    if (lev.labels[j].rfind("H", 0) == 0) hidx.push_back(j);
  PadicNumber acc = PadicNumber::zero(prime(), precision());
  std::function<void(size_t, GroupElement&)> walk = [&](size_t k, GroupElement& g) {
    if (k == hidx.size()) {
      acc = acc + chi.value(g);
      return;
    }
    for (long e = 0; e < lev.orders[hidx[k]]; ++e) {
      g[hidx[k]] = e;
      walk(k + 1, g);
    }
    g[hidx[k]] = 0;
  };
  GroupElement g = tower_.identity(chi.level());
  walk(0, g);
  return acc;
}

PadicNumber GrossPointData::restricted_value(const FiniteCharacter& chi) const {
  if (!fully_exceptional())
    fail(errc::domain_violation, "restricted value needs cocycle-built data");
  PadicNumber acc = finite_part_character_sum(chi);
  for (size_t i = 0; i < rank(); ++i) acc = acc * ball_value(i, 0);
  return acc;
}

bool GrossPointData::transfer_check(long max_i) const {
  if (!fully_exceptional()) return false;
  long p = prime();
  int prec = precision();
  long g0 = primitive_root(p);
  for (size_t si = 0; si < rank(); ++si) {
    const ExceptionalSlot& sl = slot(si);
    const Tree& tree = sl.cocycle.tree();
    for (long i = 0; i <= max_i; ++i) {
      // mu(ball i) = sum over unit classes of the level-1 table + mu(ball i+1)
      PadicNumber units = PadicNumber::zero(p, prec);
      for (long b = 0; b < p - 1; ++b) {
        mpz_class w = teichmuller(g0, p, 1).unit();
        mpz_class wb = 1;
        for (long t = 0; t < b; ++t) wb = (wb * w) % p;
        mpq_class center = mpq_class(wb) * pow_q(mpq_class(p), i);
        units = units +
                sl.cocycle.evaluate_scalar(tree.disc_to_edge(Disc{false, center, i + 1}));
      }
      if (!(ball_value(si, i) - units - ball_value(si, i + 1)).is_zero()) return false;
    }
  }
  return true;
}

namespace {

struct SlotLayout {
  long val_idx = -1, teich_idx = -1, one_idx = -1;
};

SlotLayout slot_layout(const ClassGroupTower& tower, const LevelVector& n, size_t slot) {
  const auto& lev = tower.level(n);
  std::string base = "p" + std::to_string(slot);
  SlotLayout lay;
  for (size_t j = 0; j < lev.labels.size(); ++j) {
    if (lev.labels[j] == base + ".val") lay.val_idx = static_cast<long>(j);
    if (lev.labels[j] == base + ".teich") lay.teich_idx = static_cast<long>(j);
    if (lev.labels[j] == base + ".one") lay.one_idx = static_cast<long>(j);
  }
  if (lay.val_idx < 0) fail(errc::domain_violation, "tower has no slot layout for the engine");
  return lay;
}

}  // namespace

GrossPointData build_gross_data_from_cocycle(const std::vector<HarmonicCocycle>& cocycles,
                                             long max_level,
                                             const std::vector<long>& finite_orders) {
  if (cocycles.empty()) fail(errc::invalid_cocycle, "need at least one cocycle");
  long p = cocycles[0].prime();
  int prec = cocycles[0].precision();
  std::vector<long> h;
  for (const auto& c : cocycles) {
    if (c.prime() != p) fail(errc::prime_mismatch, "cocycle primes differ");
    if (c.weight() != 2) fail(errc::invalid_cocycle, "weight-2 cocycles only");
    if (!c.periodic()) fail(errc::invalid_cocycle, "cocycles must be periodic");
    auto rep = c.validate();
    if (!rep.ok()) fail(errc::invalid_cocycle, rep.violations.front());
    h.push_back(c.translation_length());
    if (c.depth() < max_level + c.translation_length())
      fail(errc::depth_too_shallow, "cocycle table shallower than max_level + h");
  }
  ClassGroupTower tower = make_split_tower(p, h, max_level, finite_orders);
  std::vector<PadicNumber> alpha(cocycles.size(), PadicNumber::from_integer(p, 1, prec));
  GrossPointData data(std::move(tower), std::move(alpha));
  for (size_t i = 0; i < cocycles.size(); ++i)
    data.attach_exceptional_slot(
        i, GrossPointData::ExceptionalSlot{cocycles[i], cocycles[i].qtilde(),
                                           cocycles[i].translation_length()});

  long g0 = primitive_root(p);
  const ClassGroupTower& tw = data.tower();

  // slot value at level n_s for exponent triple (a, b, c): the boundary
  // measure of the eta-image ball p^a w (1 + p^{n_s} Z_p), i.e. the cocycle
  // value on the disc D(p^a w, a + n_s); at n_s = 0 the class is the annulus
  // {v = a} and the value is the ball difference.
  auto slot_value = [&](size_t si, long ns, long a, long b, long c) {
    const HarmonicCocycle& coc = cocycles[si];
    const Tree& tree = coc.tree();
    if (ns == 0) {
      TreeDistribution dist(coc);
      return dist.raw_moment(Disc{false, 0, a}, 0) -
             dist.raw_moment(Disc{false, 0, a + 1}, 0);
    }
    PadicNumber w = teichmuller(g0, p, std::max<int>(ns, 1)).pow(b);
    if (c > 0) w = w * PadicNumber::from_integer(p, 1 + p, std::max<int>(ns, 1)).pow(c);
    mpq_class center = mpq_class(w.lift()) * pow_q(mpq_class(p), a);
    return coc.evaluate_scalar(tree.disc_to_edge(Disc{false, center, a + ns}));
  };

  for (const auto& n : tw.levels()) {
    const auto& lev = tw.level(n);
    std::vector<PadicNumber> vals;
    vals.reserve(tw.order(n));
    for (long idx = 0; idx < tw.order(n); ++idx) {
      GroupElement g = tw.element_at(n, idx);
      PadicNumber prod = PadicNumber::from_integer(p, 1, prec);
      for (size_t si = 0; si < cocycles.size(); ++si) {
        SlotLayout lay = slot_layout(tw, n, si);
        long a = g[lay.val_idx] % lev.orders[lay.val_idx];
        long bb = (lay.teich_idx >= 0) ? g[lay.teich_idx] : 0;
        long cc = (lay.one_idx >= 0) ? g[lay.one_idx] : 0;
        prod = prod * slot_value(si, n[si], a, bb, cc);
      }
      vals.push_back(prod);
    }
    data.set_level_values(n, std::move(vals));
  }
  return data;
}

StabilizedValue integrate_log_power(const GrossPointData& data, const FiniteCharacter& chi,
                                    const std::vector<LogFunctional>& logs,
                                    const std::vector<PadicNumber>& s, long k) {
  if (logs.size() != s.size()) fail(errc::domain_violation, "one weight per log functional");
  const ClassGroupTower& tw = data.tower();
  long p = data.prime();
  int prec = data.precision();
  auto level_sum = [&](const LevelVector& n) {
    ThetaElement th = data.theta_element(n);
    PadicNumber acc = PadicNumber::zero(p, prec);
    for (long idx = 0; idx < tw.order(n); ++idx) {
      GroupElement g = tw.element_at(n, idx);
      PadicNumber term = th.coeffs[idx] * chi.value_at_level(n, g);
      if (term.is_zero()) continue;
      if (k > 0) {
        PadicNumber l = PadicNumber::zero(p, prec);
        for (size_t i = 0; i < logs.size(); ++i) l = l + s[i] * logs[i].value(n, g);
        term = term * l.pow(k);
      }
      acc = acc + term;
    }
    return acc;
  };

  // walk the diagonal chain of levels above the character's conductor
  std::vector<LevelVector> chain;
  for (const auto& n : data.value_levels()) {
    bool diag = true;
    for (size_t i = 1; i < n.size(); ++i) diag = diag && (n[i] == n[0]);
    if (diag && tw.has_projection_path(n, chi.level())) chain.push_back(n);
  }
  std::sort(chain.begin(), chain.end());
  if (chain.empty()) fail(errc::level_unavailable, "no levels above the character conductor");

  StabilizedValue out;
  out.value = level_sum(chain.front());
  out.level = chain.front();
  long best_gap = -1;
  for (size_t i = 1; i < chain.size(); ++i) {
    PadicNumber next = level_sum(chain[i]);
    PadicNumber diff = next - out.value;
    out.value = next;
    out.level = chain[i];
    long gap = diff.is_zero() ? prec : diff.valuation();
    best_gap = std::max(best_gap, gap);
    if (gap >= prec - 2) {
      out.stabilized = true;
      out.gap_valuation = gap;
      return out;
    }
    out.gap_valuation = gap;
  }
  if (chain.size() == 1) {
    out.stabilized = true;  // a single-level (finite) tower is its own limit
    out.gap_valuation = prec;
    return out;
  }
  if (!out.stabilized) {
    std::ostringstream os;
    os << "no stabilization: best value " << out.value.str() << " at " << level_key(out.level)
       << ", last gap valuation " << out.gap_valuation;
    fail(errc::no_stabilization, os.str());
  }
  return out;
}

PadicNumber derivative_coefficient(const GrossPointData& data, const FiniteCharacter& chi,
                                   const std::vector<LogBranch>& branches,
                                   const std::vector<PadicNumber>& s, long k, long depth) {
  if (!data.fully_exceptional())
    fail(errc::domain_violation, "the derivative engine needs cocycle-built data");
  size_t r = data.rank();
  if (branches.size() != r || s.size() != r)
    fail(errc::domain_violation, "one branch and one weight per slot");
  if (k < 0 || k > static_cast<long>(r)) fail(errc::domain_violation, "need 0 <= k <= rank");
  long p = data.prime();
  int prec = data.precision();

  // Delta group: generator j is the slot-j period class, whose ratio has
  // valuation -h_j; the slot-s log component on generator j is s_s log_u of
  // that ratio: -s_s log_{u_s}(qtilde_s) on the diagonal, 0 off it for the
  // product data.
  std::vector<long> h;
  std::vector<std::vector<PadicNumber>> ell(r, std::vector<PadicNumber>(r,
                                                                        PadicNumber::zero(p, prec)));
  for (size_t j = 0; j < r; ++j) {
    h.push_back(data.slot(j).h);
    ell[j][j] = -(s[j] * branches[j].log(data.slot(j).qtilde));
  }
  DeltaGroup delta(h, ell);

  PadicNumber finite = data.finite_part_character_sum(chi);

  auto pair_region = [&](const RegionFunction& f) {
    PadicNumber acc = PadicNumber::zero(p, prec);
    for (const auto& term : f.terms()) {
      PadicNumber val = term.coef;
      for (size_t sl = 0; sl < r; ++sl) {
        auto it = term.slots.find(static_cast<int>(sl));
        if (it == term.slots.end())
          fail(errc::domain_violation, "unconstrained slot in the pairing");
        const SlotRegion& reg = it->second;
        switch (reg.kind) {
          case SlotRegion::kBall:
            val = val * data.ball_value(sl, reg.a);
            break;
          case SlotRegion::kBand:
            val = val * data.band_value(sl, reg.a, reg.b);
            break;
          case SlotRegion::kLogBand:
            val = val * (s[sl] * data.log_band_value(sl, branches[sl], reg.a, reg.b, depth));
            break;
        }
      }
      acc = acc + val;
    }
    return acc;
  };

  // sum over k-subsets S: cup of the slot log-cocycles on S, padded with the
  // fundamental domains elsewhere
  PadicNumber total = PadicNumber::zero(p, prec);
  std::vector<int> subset;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (static_cast<long>(subset.size()) == k) {
      RegionFunction region(&delta);
      if (k == 0) {
        region.add_term({}, PadicNumber::from_integer(p, 1, prec));
      } else {
        std::vector<CocycleKind> kinds(subset.size(), CocycleKind::kLog);
        std::vector<DeltaWord> words;
        for (int sl : subset) {
          DeltaWord w(r, 0);
          w[sl] = 1;
          words.push_back(w);
        }
        region = cup_eval(delta, subset, kinds, words);
      }
      // pad the unused slots with their fundamental domains
      RegionFunction pad(&delta);
      std::map<int, SlotRegion> slots;
      for (size_t sl = 0; sl < r; ++sl) {
        if (std::find(subset.begin(), subset.end(), static_cast<int>(sl)) != subset.end())
          continue;
        slots[static_cast<int>(sl)] =
            SlotRegion{SlotRegion::kBand, 0, data.slot(sl).h};
      }
      pad.add_term(slots, PadicNumber::from_integer(p, 1, prec));
      total = total + pair_region(region * pad);
      return;
    }
    for (size_t i = start; i < r; ++i) {
      subset.push_back(static_cast<int>(i));
      rec(i + 1);
      subset.pop_back();
    }
  };
  rec(0);
  return total * finite;
}

std::vector<PadicNumber> L_series(const GrossPointData& data, const FiniteCharacter& chi,
                                  const std::vector<LogFunctional>& logs,
                                  const std::vector<LogBranch>& branches,
                                  const std::vector<PadicNumber>& s, long order, long depth) {
  if (order < 0 || order > 6) fail(errc::domain_violation, "series order must be <= 6");
  long p = data.prime();
  int prec = data.precision();
  std::vector<PadicNumber> out;
  out.push_back(data.script_L(chi));
  mpz_class kfact = 1;
  for (long k = 1; k <= order; ++k) {
    kfact *= k;
    PadicNumber dk;
    if (data.fully_exceptional() && k <= static_cast<long>(data.rank())) {
      dk = derivative_coefficient(data, chi, branches, s, k, depth);
    } else if (data.fully_exceptional()) {
      dk = PadicNumber::zero(p, prec);  // beyond the top degree of the engine
    } else {
      dk = integrate_log_power(data, chi, logs, s, k).value;
    }
    out.push_back(dk.scale(mpq_class(1, kfact)));
  }
  return out;
}

LeadingTermReport leading_term_check(const GrossPointData& data, const FiniteCharacter& chi,
                                     const std::vector<LogBranch>& branches,
                                     const std::vector<PadicNumber>& s, long depth) {
  if (!data.fully_exceptional())
    fail(errc::domain_violation, "leading_term_check needs cocycle-built data");
  LeadingTermReport rep;
  rep.rank = static_cast<long>(data.rank());
  rep.low_coefficients.push_back(data.script_L(chi));
  for (long k = 1; k < rep.rank; ++k)
    rep.low_coefficients.push_back(derivative_coefficient(data, chi, branches, s, k, depth));
  rep.engine_side = derivative_coefficient(data, chi, branches, s, rep.rank, depth);

  // invariant side: prod over slots of h * s * (lambda/delta), times the
  // restricted measure value from the transfer identity
  PadicNumber inv = data.restricted_value(chi);
  for (size_t i = 0; i < data.rank(); ++i) {
    const auto& sl = data.slot(i);
    PadicNumber L = l_invariant(sl.cocycle, sl.qtilde, branches[i], depth);
    inv = inv * (s[i] * L).scale(mpq_class(sl.h));
  }
  rep.invariant_side = inv;
  rep.difference = rep.engine_side - rep.invariant_side;
  rep.matched_digits =
      rep.difference.is_zero() ? rep.difference.precision() : static_cast<int>(rep.difference.valuation());
  return rep;
}

PadicNumber coh_shadow_residual(const GrossPointData& data, const FiniteCharacter& chi,
                                size_t slot_index, const LogBranch& branch, long depth) {
  std::vector<LogBranch> branches;
  std::vector<PadicNumber> s;
  long p = data.prime();
  int prec = data.precision();
  for (size_t i = 0; i < data.rank(); ++i) {
    branches.push_back(branch);
    s.push_back(PadicNumber::from_integer(p, 1, prec));
  }
  std::vector<long> h;
  std::vector<std::vector<PadicNumber>> ell(data.rank(),
                                            std::vector<PadicNumber>(data.rank(),
                                                                     PadicNumber::zero(p, prec)));
  for (size_t j = 0; j < data.rank(); ++j) {
    h.push_back(data.slot(j).h);
    ell[j][j] = -branches[j].log(data.slot(j).qtilde);
  }
  DeltaGroup delta(h, ell);
  DeltaWord w(data.rank(), 0);
  w[slot_index] = 1;

  auto pair_slotwise = [&](const RegionFunction& f) {
    PadicNumber acc = PadicNumber::zero(p, prec);
    for (const auto& term : f.terms()) {
      PadicNumber val = term.coef;
      for (const auto& [sl, reg] : term.slots) {
        switch (reg.kind) {
          case SlotRegion::kBall: val = val * data.ball_value(sl, reg.a); break;
          case SlotRegion::kBand: val = val * data.band_value(sl, reg.a, reg.b); break;
          case SlotRegion::kLogBand:
            val = val * data.log_band_value(sl, branch, reg.a, reg.b, depth);
            break;
        }
      }
      acc = acc + val;
    }
    return acc;
  };

  const auto& sl = data.slot(slot_index);
  PadicNumber L = l_invariant(sl.cocycle, sl.qtilde, branch, depth);
  PadicNumber lhs = pair_slotwise(c_log_eval(delta, static_cast<int>(slot_index), w));
  PadicNumber rhs = L * pair_slotwise(c_ord_eval(delta, static_cast<int>(slot_index), w));
  PadicNumber finite = data.finite_part_character_sum(chi);
  return (lhs - rhs) * finite;
}

std::string GrossPointData::to_json() const {
  nlohmann::json j;
  j["tower"] = nlohmann::json::parse(tower_.to_json());
  nlohmann::json alphas = nlohmann::json::array();
  for (const auto& a : alpha_) alphas.push_back(a.str());
  j["alpha"] = alphas;
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [key, vals] : values_) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vals) arr.push_back(v.str());
    values[key] = arr;
  }
  j["values"] = values;
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& sl : slots_) {
    if (!sl) {
      slots.push_back(nullptr);
    } else {
      nlohmann::json item;
      item["cocycle"] = nlohmann::json::parse(sl->cocycle.to_json());
      item["qtilde"] = sl->qtilde.str();
      slots.push_back(item);
    }
  }
  j["exceptional"] = slots;
  return j.dump(2);
}

GrossPointData GrossPointData::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::parse_error, std::string("gross data file: ") + e.what());
  }
  ClassGroupTower tower = ClassGroupTower::from_json(j.at("tower").dump());
  std::vector<PadicNumber> alpha;
  for (const auto& a : j.at("alpha")) alpha.push_back(PadicNumber::parse(a.get<std::string>()));
  GrossPointData data(std::move(tower), std::move(alpha));
  for (auto it = j.at("values").begin(); it != j.at("values").end(); ++it) {
    LevelVector n;
    std::string key = it.key();
    std::string body = key.substr(3, key.size() - 4);
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) n.push_back(std::stol(tok));
    std::vector<PadicNumber> vals;
    for (const auto& v : it.value()) vals.push_back(PadicNumber::parse(v.get<std::string>()));
    data.set_level_values(n, std::move(vals));
  }
  if (j.contains("exceptional")) {
    size_t i = 0;
    for (const auto& item : j.at("exceptional")) {
      if (!item.is_null()) {
        HarmonicCocycle c = HarmonicCocycle::from_json(item.at("cocycle").dump());
        PadicNumber q = PadicNumber::parse(item.at("qtilde").get<std::string>());
        data.attach_exceptional_slot(i, ExceptionalSlot{c, q, q.valuation()});
      }
      ++i;
    }
  }
  auto rep = data.validate();
  if (!rep.ok()) fail(errc::domain_violation, "U-trace invariant fails: " + rep.violations.front());
  return data;
}

}  // namespace padicx
