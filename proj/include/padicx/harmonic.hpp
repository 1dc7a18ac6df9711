#ifndef PADICX_HARMONIC_HPP
#define PADICX_HARMONIC_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padicx/padic.hpp"
#include "padicx/tree.hpp"

namespace padicx {

// Coefficient vector in the dual monomial basis X^j Y^(k-2-j), j = 0..k-2.
using CoeffVector = std::vector<PadicNumber>;

// rho-check(g) applied to a dual-basis coefficient vector of weight k.
CoeffVector apply_rho_check(const TwistedMatrix& g, int weight, const CoeffVector& v, long p,
                            int prec);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Finite edge-value table around the base vertex with optional hyperbolic
// periodicity.  Antisymmetric values; vertex sums vanish (validated, not
// enforced at construction).  Unlisted in-window edges are zero.
class HarmonicCocycle {
 public:
  HarmonicCocycle(long p, int weight, long depth, int prec = PadicNumber::kDefaultPrecision);

  long prime() const { return p_; }
  int weight() const { return weight_; }
  long depth() const { return depth_; }
  int precision() const { return prec_; }
  const Tree& tree() const { return tree_; }
  bool periodic() const { return qtilde_.has_value(); }
  const PadicNumber& qtilde() const;
  long translation_length() const;

  void set_periodicity(const PadicNumber& qtilde);
  void set_value(const TreeEdge& e, CoeffVector v);
  void set_value(const TreeEdge& e, const PadicNumber& x);  // weight 2

  bool in_window(const TreeVertex& v) const;
  bool in_window(const TreeEdge& e) const;

  // Value with antisymmetry and periodicity reductions; zero on unlisted
  // in-window edges; OutOfTable beyond reach.
  CoeffVector evaluate(const TreeEdge& e) const;
  PadicNumber evaluate_scalar(const TreeEdge& e) const;  // weight 2

  ValidationReport validate() const;

  // (g star c)(e) = rho-check(g) c(g^{-1} e) over this cocycle's window.
  HarmonicCocycle act_star(const TwistedMatrix& g) const;

  // sup over the sampled g of |rho-check(g) c(g^{-1} e_*)|, as a power of p
  // (rational); zero contributes 0.
  mpq_class boundedness_norm(const std::vector<TwistedMatrix>& samples) const;

  // Stored entries as label -> coefficients (built on demand; the internal
  // index is structural for lookup speed).
  std::map<std::string, CoeffVector> table() const;

  std::string to_json() const;
  static HarmonicCocycle from_json(const std::string& text);  // validates

 private:
  struct EdgeKey {
    long n1;
    mpq_class c1;
    long n2;
    mpq_class c2;
    bool operator<(const EdgeKey& o) const {
      if (n1 != o.n1) return n1 < o.n1;
      if (int c = cmp(c1, o.c1)) return c < 0;
      if (n2 != o.n2) return n2 < o.n2;
      return cmp(c2, o.c2) < 0;
    }
  };
  static EdgeKey key_of(const TreeEdge& canonical_edge);
  const CoeffVector* find(const TreeEdge& e) const;

  long p_;
  int weight_;
  long depth_;
  int prec_;
  Tree tree_;
  std::optional<PadicNumber> qtilde_;
  std::optional<Tree::Axis> axis_;
  std::map<EdgeKey, CoeffVector> values_;
};

// The rank-one synthetic invariant cocycle: +1 on axis edges oriented from
// inf toward 0, -1 on reverses, 0 elsewhere; periodic under the hyperbolic
// scaling by qtilde.
HarmonicCocycle axis_cocycle(long p, const PadicNumber& qtilde, long depth);

// Product of weight-2 components over a tuple of tree coordinates.
class MultiCocycle {
 public:
  explicit MultiCocycle(std::vector<HarmonicCocycle> comps);
  size_t rank() const { return comps_.size(); }
  const HarmonicCocycle& component(size_t i) const { return comps_.at(i); }
  PadicNumber value(const std::vector<TreeEdge>& edges) const;
  ValidationReport validate() const;

 private:
  std::vector<HarmonicCocycle> comps_;
};

}  // namespace padicx

#endif
