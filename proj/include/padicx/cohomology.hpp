#ifndef PADICX_COHOMOLOGY_HPP
#define PADICX_COHOMOLOGY_HPP

#include <map>
#include <string>
#include <vector>

#include "padicx/padic.hpp"

namespace padicx {

// The free abelian group Delta with one generator per slot; generator j
// rescales its own slot's coordinate by valuation -h_j (so the pullback
// shifts regions up by h_j) and acts trivially on the other slots.
// ell[s][j] is the slot-s log component evaluated on generator j.
class DeltaGroup {
 public:
  DeltaGroup(std::vector<long> h, std::vector<std::vector<PadicNumber>> ell);

  int rank() const { return static_cast<int>(h_.size()); }
  long h(int j) const { return h_.at(j); }
  const PadicNumber& ell(int slot, int j) const { return ell_.at(slot).at(j); }
  long prime() const;
  int precision() const;

 private:
  std::vector<long> h_;
  std::vector<std::vector<PadicNumber>> ell_;
};

using DeltaWord = std::vector<long>;  // exponents on the generators

// One slot's factor of a product region: a closed ball 1_{v >= a}, an
// annulus band 1_{a <= v < b}, or a log-weighted band log(x) 1_{a <= v < b}.
struct SlotRegion {
  enum Kind { kBall, kBand, kLogBand } kind = kBall;
  long a = 0, b = 0;

  bool operator<(const SlotRegion& o) const {
    return std::tie(kind, a, b) < std::tie(o.kind, o.a, o.b);
  }
  bool operator==(const SlotRegion& o) const {
    return kind == o.kind && a == o.a && b == o.b;
  }
};

struct RegionTerm {
  std::map<int, SlotRegion> slots;  // absent slot: unconstrained
  PadicNumber coef;
};

// Finite formal combination of product regions, closed under the Delta
// action and under products (at most one log factor per slot).
class RegionFunction {
 public:
  explicit RegionFunction(const DeltaGroup* delta) : delta_(delta) {}
  static RegionFunction zero(const DeltaGroup* delta) { return RegionFunction(delta); }

  const DeltaGroup* delta() const { return delta_; }
  const std::vector<RegionTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(std::map<int, SlotRegion> slots, const PadicNumber& coef);

  RegionFunction operator+(const RegionFunction& o) const;
  RegionFunction operator-(const RegionFunction& o) const;
  RegionFunction scaled(const PadicNumber& c) const;
  RegionFunction operator*(const RegionFunction& o) const;

  // pullback by generator j (sign = +-1): (gamma^* f)(x) = f(gamma x).
  RegionFunction gamma_star(int j, int sign) const;
  RegionFunction gamma_star_word(const DeltaWord& w) const;

  bool equals(const RegionFunction& o, int digits) const;
  std::string str() const;

 private:
  void normalize();
  const DeltaGroup* delta_;
  std::vector<RegionTerm> terms_;
};

// c_{p,ord} evaluated on a word by the cocycle rule; on a generator:
// sum_{i=1..h_p} Ball(i) at the matching slot, zero otherwise.
RegionFunction c_ord_eval(const DeltaGroup& delta, int slot, const DeltaWord& w);
// c_{p,l} with the slot's log functional: on the matching generator
// LogBand(0,h) - ell(slot,slot) Ball(h); on the others -ell(slot,j) Ball(0).
RegionFunction c_log_eval(const DeltaGroup& delta, int slot, const DeltaWord& w);

// Alternating permutation sum of products of the cocycle values.
enum class CocycleKind { kOrd, kLog };
RegionFunction cup_eval(const DeltaGroup& delta, const std::vector<int>& slots,
                        const std::vector<CocycleKind>& kinds,
                        const std::vector<DeltaWord>& words);

// All maps f: {0..k-1} -> {0..m-1} with f(S) not contained in S for every
// nonempty S subset of {0..k-1}.
std::vector<std::vector<int>> admissible_maps(int k, int m);

// Spiess determinant lemma: for a k x m rational matrix with zero row sums,
// det(-c_ij)_{k x k} equals the sum over admissible maps of prod c_{i f(i)}.
struct SpiessCheck {
  mpq_class det_side;
  mpq_class sum_side;
  bool equal() const { return det_side == sum_side; }
};
SpiessCheck spiess_det_check(const std::vector<std::vector<mpq_class>>& c);

// Formal polynomials in abstract ell-symbols with p-adic coefficients.
struct EllMonomial {
  std::map<int, long> powers;
  bool operator<(const EllMonomial& o) const { return powers < o.powers; }
  bool operator==(const EllMonomial& o) const { return powers == o.powers; }
};
class EllPoly {
 public:
  EllPoly(long p, int prec) : p_(p), prec_(prec) {}
  void add(const EllMonomial& m, const PadicNumber& c);
  const std::map<EllMonomial, PadicNumber>& terms() const { return terms_; }
  bool equals(const EllPoly& o, int digits) const;

 private:
  long p_;
  int prec_;
  std::map<EllMonomial, PadicNumber> terms_;
};
// (1 - beta^*) ell^t = ell^t - prod (ell_i + ell_i(beta))^{t_i}.
EllPoly one_minus_gamma_expand(const std::map<int, long>& monomial,
                               const std::vector<PadicNumber>& ell_of_beta, long p, int prec);

// Symbolic expansion of the prop-ell determinant over the ring generated by
// the Lambda symbols; verified against the admissible-map sum.
struct DeterminantExpansionReport {
  bool row_sums_zero = false;
  bool match = true;
  std::vector<std::string> mismatches;
  // coefficient (as PadicNumber) of Lambda_{l,Xi} * Lambda_0^(h-|Xi|), keyed
  // by the sorted index set Xi
  std::map<std::vector<int>, PadicNumber> coefficients;
};
// ell: full r x m value matrix ell[i][j] (rows indexed by the h chosen
// functionals, columns by all generators); the determinant uses the first
// h columns.
DeterminantExpansionReport determinant_expansion(const std::vector<std::vector<PadicNumber>>& ell,
                                                 long p, int prec, int digits);

}  // namespace padicx

#endif
