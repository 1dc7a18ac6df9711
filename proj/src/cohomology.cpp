#include "padicx/cohomology.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace padicx {

DeltaGroup::DeltaGroup(std::vector<long> h, std::vector<std::vector<PadicNumber>> ell)
    : h_(std::move(h)), ell_(std::move(ell)) {
  if (h_.empty()) fail(errc::domain_violation, "empty Delta group");
  for (long hi : h_)
    if (hi < 1) fail(errc::not_hyperbolic, "translation length must be >= 1");
  if (ell_.size() != h_.size()) fail(errc::domain_violation, "ell matrix rows");
  for (const auto& row : ell_)
    if (row.size() != h_.size()) fail(errc::domain_violation, "ell matrix columns");
}

long DeltaGroup::prime() const { return ell_[0][0].prime(); }
int DeltaGroup::precision() const { return ell_[0][0].precision(); }

void RegionFunction::add_term(std::map<int, SlotRegion> slots, const PadicNumber& coef) {
  if (coef.is_zero()) return;
  // drop empty bands
  for (const auto& [s, r] : slots) {
    (void)s;
    if (r.kind != SlotRegion::kBall && r.a >= r.b) return;
  }
  // canonical basis: plain bands expand as Ball(a) - Ball(b); only balls and
  // log bands are stored, so equal functions have equal term lists
  for (const auto& [s, r] : slots) {
    if (r.kind == SlotRegion::kBand) {
      auto lo = slots;
      lo[s] = SlotRegion{SlotRegion::kBall, r.a, 0};
      add_term(std::move(lo), coef);
      auto hi = slots;
      hi[s] = SlotRegion{SlotRegion::kBall, r.b, 0};
      add_term(std::move(hi), -coef);
      return;
    }
  }
  terms_.push_back(RegionTerm{std::move(slots), coef});
  normalize();
}

void RegionFunction::normalize() {
  std::map<std::string, std::pair<std::map<int, SlotRegion>, PadicNumber>> acc;
  for (const auto& t : terms_) {
    std::ostringstream key;
    for (const auto& [s, r] : t.slots) key << s << ":" << r.kind << "," << r.a << "," << r.b << ";";
    auto it = acc.find(key.str());
    if (it == acc.end())
      acc.emplace(key.str(), std::make_pair(t.slots, t.coef));
    else
      it->second.second = it->second.second + t.coef;
  }
  terms_.clear();
  for (auto& [key, pr] : acc) {
    (void)key;
    if (!pr.second.is_zero()) terms_.push_back(RegionTerm{std::move(pr.first), pr.second});
  }
}

RegionFunction RegionFunction::operator+(const RegionFunction& o) const {
  RegionFunction r = *this;
  for (const auto& t : o.terms_) r.terms_.push_back(t);
  r.normalize();
  return r;
}

RegionFunction RegionFunction::operator-(const RegionFunction& o) const {
  return *this + o.scaled(-PadicNumber::from_integer(delta_->prime(), 1, delta_->precision()));
}

RegionFunction RegionFunction::scaled(const PadicNumber& c) const {
  RegionFunction r(delta_);
  for (const auto& t : terms_) {
    PadicNumber nc = t.coef * c;
    if (!nc.is_zero()) r.terms_.push_back(RegionTerm{t.slots, nc});
  }
  r.normalize();
  return r;
}

namespace {

// meet of two constraints on one slot; false when the intersection is empty
bool meet(const SlotRegion& x, const SlotRegion& y, SlotRegion* out) {
  if (x.kind == SlotRegion::kLogBand && y.kind == SlotRegion::kLogBand)
    fail(errc::domain_violation, "product of two log factors on one slot");
  auto as_range = [](const SlotRegion& r, long* a, long* b, bool* ball) {
    *a = r.a;
    *b = r.b;
    *ball = (r.kind == SlotRegion::kBall);
  };
  long xa, xb, ya, yb;
  bool xball, yball;
  as_range(x, &xa, &xb, &xball);
  as_range(y, &ya, &yb, &yball);
  long a = std::max(xa, ya);
  long b;
  if (xball && yball)
    b = 0;  // unused
  else if (xball)
    b = yb;
  else if (yball)
    b = xb;
  else
    b = std::min(xb, yb);
  bool log = (x.kind == SlotRegion::kLogBand) || (y.kind == SlotRegion::kLogBand);
  if (xball && yball) {
    *out = SlotRegion{SlotRegion::kBall, a, 0};
    return true;
  }
  if (a >= b) return false;
  *out = SlotRegion{log ? SlotRegion::kLogBand : SlotRegion::kBand, a, b};
  return true;
}

}  // namespace

RegionFunction RegionFunction::operator*(const RegionFunction& o) const {
  RegionFunction r(delta_);
  for (const auto& t1 : terms_) {
    for (const auto& t2 : o.terms_) {
      std::map<int, SlotRegion> slots = t1.slots;
      bool alive = true;
      for (const auto& [s, reg] : t2.slots) {
        auto it = slots.find(s);
        if (it == slots.end()) {
          slots[s] = reg;
        } else {
          SlotRegion met;
          if (!meet(it->second, reg, &met)) {
            alive = false;
            break;
          }
          it->second = met;
        }
      }
      if (!alive) continue;
      PadicNumber c = t1.coef * t2.coef;
      if (!c.is_zero()) r.terms_.push_back(RegionTerm{std::move(slots), c});
    }
  }
  r.normalize();
  return r;
}

RegionFunction RegionFunction::gamma_star(int j, int sign) const {
  RegionFunction out(delta_);
  long hj = delta_->h(j);
  for (const auto& t : terms_) {
    // expand slot by slot; log factors may split into two terms
    std::vector<std::pair<std::map<int, SlotRegion>, PadicNumber>> partial;
    partial.emplace_back(std::map<int, SlotRegion>{}, t.coef);
    for (const auto& [s, reg] : t.slots) {
      long shift = (s == j) ? sign * hj : 0;
      SlotRegion shifted = reg;
      shifted.a += shift;
      if (reg.kind != SlotRegion::kBall) shifted.b += shift;
      std::vector<std::pair<SlotRegion, PadicNumber>> pieces;
      PadicNumber one = PadicNumber::from_integer(delta_->prime(), 1, delta_->precision());
      pieces.emplace_back(shifted, one);
      if (reg.kind == SlotRegion::kLogBand) {
        // log(x_s of gamma^sign x) = log(x_s) + sign * ell[s][j]
        PadicNumber pick = delta_->ell(s, j).scale(mpq_class(sign));
        if (!pick.is_zero()) {
          SlotRegion band = shifted;
          band.kind = SlotRegion::kBand;
          pieces.emplace_back(band, pick);
        }
      }
      std::vector<std::pair<std::map<int, SlotRegion>, PadicNumber>> next;
      for (const auto& [slots0, c0] : partial) {
        for (const auto& [piece, pc] : pieces) {
          auto slots1 = slots0;
          slots1[s] = piece;
          next.emplace_back(std::move(slots1), c0 * pc);
        }
      }
      partial = std::move(next);
    }
    for (auto& [slots1, c1] : partial) out.add_term(std::move(slots1), c1);
  }
  return out;
}

RegionFunction RegionFunction::gamma_star_word(const DeltaWord& w) const {
  RegionFunction out = *this;
  for (int j = 0; j < delta_->rank(); ++j) {
    long e = w.at(j);
    int sign = e >= 0 ? 1 : -1;
    for (long i = 0; i < std::abs(e); ++i) out = out.gamma_star(j, sign);
  }
  return out;
}

bool RegionFunction::equals(const RegionFunction& o, int digits) const {
  RegionFunction d = *this - o;
  for (const auto& t : d.terms_) {
    if (t.coef.is_zero()) continue;
    if (t.coef.valuation() < digits) return false;
  }
  return true;
}

std::string RegionFunction::str() const {
  std::ostringstream os;
  if (terms_.empty()) return "0";
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coef.str() << ")";
    for (const auto& [s, r] : t.slots) {
      os << "*";
      switch (r.kind) {
        case SlotRegion::kBall: os << "B" << s << "[" << r.a << ",inf)"; break;
        case SlotRegion::kBand: os << "I" << s << "[" << r.a << "," << r.b << ")"; break;
        case SlotRegion::kLogBand: os << "logI" << s << "[" << r.a << "," << r.b << ")"; break;
      }
    }
  }
  return os.str();
}

namespace {

// cocycle rule on words: c(gamma delta) = c(gamma) + gamma^* c(delta)
RegionFunction word_eval(const DeltaGroup& delta, const DeltaWord& w,
                         const std::function<RegionFunction(int, int)>& on_generator) {
  RegionFunction acc = RegionFunction::zero(&delta);
  DeltaWord done(delta.rank(), 0);
  for (int j = 0; j < delta.rank(); ++j) {
    long e = w.at(j);
    int sign = e >= 0 ? 1 : -1;
    for (long i = 0; i < std::abs(e); ++i) {
      RegionFunction cj = on_generator(j, sign);
      acc = acc + cj.gamma_star_word(done);
      done[j] += sign;
    }
  }
  return acc;
}

}  // namespace

RegionFunction c_ord_eval(const DeltaGroup& delta, int slot, const DeltaWord& w) {
  auto gen = [&](int j, int sign) {
    RegionFunction r = RegionFunction::zero(&delta);
    if (j != slot) return r;
    PadicNumber one = PadicNumber::from_integer(delta.prime(), 1, delta.precision());
    long h = delta.h(slot);
    if (sign > 0) {
      for (long i = 1; i <= h; ++i)
        r.add_term({{slot, SlotRegion{SlotRegion::kBall, i, 0}}}, one);
    } else {
      // c(beta^{-1}) = -(beta^{-1})^* c(beta)
      for (long i = 1; i <= h; ++i)
        r.add_term({{slot, SlotRegion{SlotRegion::kBall, i - h, 0}}}, -one);
    }
    return r;
  };
  return word_eval(delta, w, gen);
}

RegionFunction c_log_eval(const DeltaGroup& delta, int slot, const DeltaWord& w) {
  auto c_on_generator = [&](int j) {
    RegionFunction r = RegionFunction::zero(&delta);
    long h = delta.h(slot);
    PadicNumber one = PadicNumber::from_integer(delta.prime(), 1, delta.precision());
    if (j == slot) {
      r.add_term({{slot, SlotRegion{SlotRegion::kLogBand, 0, h}}}, one);
      r.add_term({{slot, SlotRegion{SlotRegion::kBall, h, 0}}}, -delta.ell(slot, slot));
    } else {
      r.add_term({{slot, SlotRegion{SlotRegion::kBall, 0, 0}}}, -delta.ell(slot, j));
    }
    return r;
  };
  auto gen = [&](int j, int sign) {
    RegionFunction c = c_on_generator(j);
    if (sign > 0) return c;
    return c.gamma_star(j, -1).scaled(
        -PadicNumber::from_integer(delta.prime(), 1, delta.precision()));
  };
  return word_eval(delta, w, gen);
}

RegionFunction cup_eval(const DeltaGroup& delta, const std::vector<int>& slots,
                        const std::vector<CocycleKind>& kinds,
                        const std::vector<DeltaWord>& words) {
  size_t k = slots.size();
  if (kinds.size() != k || words.size() != k)
    fail(errc::domain_violation, "cup_eval argument lengths");
  if (k == 0) fail(errc::domain_violation, "empty cup");
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  RegionFunction acc = RegionFunction::zero(&delta);
  do {
    // permutation sign
    int sign = 1;
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    RegionFunction prod =
        (kinds[0] == CocycleKind::kOrd ? c_ord_eval(delta, slots[0], words[perm[0]])
                                       : c_log_eval(delta, slots[0], words[perm[0]]));
    for (size_t i = 1; i < k; ++i) {
      RegionFunction ci =
          (kinds[i] == CocycleKind::kOrd ? c_ord_eval(delta, slots[i], words[perm[i]])
                                         : c_log_eval(delta, slots[i], words[perm[i]]));
      prod = prod * ci;
    }
    acc = acc + prod.scaled(PadicNumber::from_integer(delta.prime(), sign, delta.precision()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

std::vector<std::vector<int>> admissible_maps(int k, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> f(k, 0);
  long total = 1;
  for (int i = 0; i < k; ++i) total *= m;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < k; ++i) {
      f[i] = static_cast<int>(c % m);
      c /= m;
    }
    bool ok = true;
    for (long mask = 1; mask < (1L << k) && ok; ++mask) {
      bool contained = true;
      for (int i = 0; i < k && contained; ++i) {
        if (!(mask & (1L << i))) continue;
        contained = (f[i] < k) && (mask & (1L << f[i]));
      }
      if (contained) ok = false;  // f(S) subset of S
    }
    if (ok) out.push_back(f);
  }
  return out;
}

SpiessCheck spiess_det_check(const std::vector<std::vector<mpq_class>>& c) {
  int k = static_cast<int>(c.size());
  if (k == 0) fail(errc::domain_violation, "empty matrix");
  int m = static_cast<int>(c[0].size());
  if (m < k) fail(errc::domain_violation, "need k <= m");
  for (const auto& row : c) {
    mpq_class s = 0;
    for (const auto& x : row) s += x;
    if (s != 0) fail(errc::row_sum_nonzero, "row sums must vanish");
  }
  // det(-c_ij)_{k x k} via Leibniz
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  mpq_class det = 0;
  do {
    int sign = 1;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    mpq_class prod = sign;
    for (int i = 0; i < k; ++i) prod *= -c[i][perm[i]];
    det += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));

  mpq_class sum = 0;
  for (const auto& f : admissible_maps(k, m)) {
    mpq_class prod = 1;
    for (int i = 0; i < k; ++i) prod *= c[i][f[i]];
    sum += prod;
  }
  return SpiessCheck{det, sum};
}

void EllPoly::add(const EllMonomial& m, const PadicNumber& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end())
    terms_.emplace(m, c);
  else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool EllPoly::equals(const EllPoly& o, int digits) const {
  auto check = [&](const std::map<EllMonomial, PadicNumber>& a,
                   const std::map<EllMonomial, PadicNumber>& b) {
    for (const auto& [m, c] : a) {
      auto it = b.find(m);
      PadicNumber other = (it == b.end()) ? PadicNumber::zero(p_, prec_) : it->second;
      if (!c.agrees(other, digits)) return false;
    }
    return true;
  };
  return check(terms_, o.terms_) && check(o.terms_, terms_);
}

EllPoly one_minus_gamma_expand(const std::map<int, long>& monomial,
                               const std::vector<PadicNumber>& ell_of_beta, long p, int prec) {
  // prod_i (ell_i + c_i)^{t_i}, expanded
  EllPoly prod(p, prec);
  prod.add(EllMonomial{}, PadicNumber::from_integer(p, 1, prec));
  for (const auto& [i, t] : monomial) {
    const PadicNumber& ci = ell_of_beta.at(i);
    EllPoly next(p, prec);
    for (const auto& [m, coef] : prod.terms()) {
      // multiply by (ell_i + c_i)^t: binomial expansion
      for (long s = 0; s <= t; ++s) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), t, s);
        PadicNumber c = coef.scale(mpq_class(b));
        for (long u = 0; u < t - s; ++u) c = c * ci;
        EllMonomial m2 = m;
        if (s) m2.powers[i] += s;
        next.add(m2, c);
      }
    }
    prod = next;
  }
  EllPoly out(p, prec);
  EllMonomial base;
  for (const auto& [i, t] : monomial)
    if (t) base.powers[i] = t;
  out.add(base, PadicNumber::from_integer(p, 1, prec));
  for (const auto& [m, c] : prod.terms()) out.add(m, -c);
  return out;
}

DeterminantExpansionReport determinant_expansion(const std::vector<std::vector<PadicNumber>>& ell,
                                                 long p, int prec, int digits) {
  DeterminantExpansionReport rep;
  int h = static_cast<int>(ell.size());
  if (h == 0) fail(errc::domain_violation, "empty ell matrix");
  int m = static_cast<int>(ell[0].size());
  if (m < h) fail(errc::domain_violation, "need at least h generators");
  rep.row_sums_zero = true;
  for (const auto& row : ell) {
    PadicNumber s = PadicNumber::zero(p, prec);
    for (const auto& x : row) s = s + x;
    if (!s.is_zero() && s.valuation() < digits) rep.row_sums_zero = false;
  }
  if (!rep.row_sums_zero) fail(errc::row_sum_nonzero, "eq. of vanishing row sums violated");

  // determinant side: coefficient of Lambda_{l,Xi} Lambda_0^{h-|Xi|} equals
  // det(-ell minor on the complement of Xi)
  std::vector<int> idx(h);
  std::iota(idx.begin(), idx.end(), 0);
  for (long mask = 0; mask < (1L << h); ++mask) {
    std::vector<int> Xi, C;
    for (int i = 0; i < h; ++i)
      (mask & (1L << i)) ? Xi.push_back(i) : C.push_back(i);
    // det(-ell[i][j])_{i,j in C}
    PadicNumber det = PadicNumber::from_integer(p, 1, prec);
    if (!C.empty()) {
      std::vector<int> perm(C.size());
      std::iota(perm.begin(), perm.end(), 0);
      PadicNumber acc = PadicNumber::zero(p, prec);
      do {
        int sign = 1;
        for (size_t i = 0; i < perm.size(); ++i)
          for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
        PadicNumber prod = PadicNumber::from_integer(p, sign, prec);
        for (size_t i = 0; i < C.size(); ++i) prod = prod * (-ell[C[i]][C[perm[i]]]);
        acc = acc + prod;
      } while (std::next_permutation(perm.begin(), perm.end()));
      det = acc;
    }
    rep.coefficients[Xi] = det;

    // admissible-map side for the same Xi
    PadicNumber sum = (C.empty()) ? PadicNumber::from_integer(p, 1, prec)
                                  : PadicNumber::zero(p, prec);
    if (!C.empty()) {
      int k = static_cast<int>(C.size());
      std::vector<int> f(k);
      long total = 1;
      for (int i = 0; i < k; ++i) total *= m;
      for (long code = 0; code < total; ++code) {
        long cc = code;
        for (int i = 0; i < k; ++i) {
          f[i] = static_cast<int>(cc % m);
          cc /= m;
        }
        bool ok = true;
        for (long smask = 1; smask < (1L << k) && ok; ++smask) {
          bool contained = true;
          for (int i = 0; i < k && contained; ++i) {
            if (!(smask & (1L << i))) continue;
            // f(C[i]) must land back inside the C-subset encoded by smask
            int target = f[i];
            int pos = -1;
            for (int t = 0; t < k; ++t)
              if (C[t] == target) pos = t;
            contained = (pos >= 0) && (smask & (1L << pos));
          }
          if (contained) ok = false;
        }
        if (!ok) continue;
        PadicNumber prod = PadicNumber::from_integer(p, 1, prec);
        for (int i = 0; i < k; ++i) prod = prod * ell[C[i]][f[i]];
        sum = sum + prod;
      }
    }
    if (!det.agrees(sum, digits)) {
      rep.match = false;
      std::ostringstream os;
      os << "Xi={";
      for (int i : Xi) os << i << " ";
      os << "}: det side " << det.str() << " vs map sum " << sum.str();
      rep.mismatches.push_back(os.str());
    }
  }
  return rep;
}

}  // namespace padicx
