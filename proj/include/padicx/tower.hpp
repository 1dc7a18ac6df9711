#ifndef PADICX_TOWER_HPP
#define PADICX_TOWER_HPP

#include <map>
#include <string>
#include <vector>

#include "padicx/padic.hpp"

namespace padicx {

using LevelVector = std::vector<long>;
// Element of a finite abelian group written as exponents on cyclic factors.
using GroupElement = std::vector<long>;

std::string level_key(const LevelVector& n);

// Per-level finite abelian groups with surjective projections; abstract
// ingested data (class-field arithmetic is the caller's responsibility).
class ClassGroupTower {
 public:
  struct Level {
    std::vector<long> orders;          // cyclic factor orders
    std::vector<std::string> labels;   // one per factor
  };

  ClassGroupTower(long p, std::vector<std::string> primes, long c0);

  long prime() const { return p_; }
  long c0() const { return c0_; }
  const std::vector<std::string>& primes() const { return primes_; }
  size_t rank() const { return primes_.size(); }

  void add_level(const LevelVector& n, Level level);
  // projection n_from -> n_to: images[i] = exponent vector of generator i.
  void add_projection(const LevelVector& from, const LevelVector& to,
                      std::vector<GroupElement> images);

  bool has_level(const LevelVector& n) const;
  const Level& level(const LevelVector& n) const;
  std::vector<LevelVector> levels() const;

  long order(const LevelVector& n) const;  // group size
  GroupElement identity(const LevelVector& n) const;
  GroupElement add(const LevelVector& n, const GroupElement& a, const GroupElement& b) const;
  long index_of(const LevelVector& n, const GroupElement& g) const;
  GroupElement element_at(const LevelVector& n, long index) const;

  // apply the (possibly composed) projection from -> to
  GroupElement project(const LevelVector& from, const LevelVector& to,
                       const GroupElement& g) const;
  bool has_projection_path(const LevelVector& from, const LevelVector& to) const;
  // all elements of 'from' mapping to g under the projection to 'to'
  std::vector<GroupElement> fiber(const LevelVector& from, const LevelVector& to,
                                  const GroupElement& g) const;

  struct Report {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
  };
  Report validate() const;

  std::string to_json() const;
  static ClassGroupTower from_json(const std::string& text);

 private:
  const std::vector<GroupElement>* direct_projection(const LevelVector& from,
                                                     const LevelVector& to) const;

  long p_;
  long c0_;
  std::vector<std::string> primes_;
  std::map<std::string, Level> levels_;
  std::map<std::pair<std::string, std::string>, std::vector<GroupElement>> projections_;
};

// G_n = (finite part) x prod_p [ Z/h_p x (Z/p^n_p)^x ]; the split-prime tower
// shape used by the shipped examples.  Factor layout per prime slot:
// [Z/h_p, Z/(p-1), Z/p^(n_p - 1)] for n_p >= 1, [Z/h_p] at n_p = 0.
ClassGroupTower make_split_tower(long p, const std::vector<long>& h, long max_level,
                                 const std::vector<long>& finite_orders = {});

// Homomorphism to (C_p, +) killing torsion: per-factor generator values;
// elements are evaluated through integer-lift exponents of the section.
class LogFunctional {
 public:
  LogFunctional(std::string sigma, const ClassGroupTower* tower);

  const std::string& name() const { return sigma_; }
  void set_value(const std::string& factor_label, const PadicNumber& v);

  PadicNumber value(const LevelVector& n, const GroupElement& g) const;

 private:
  std::string sigma_;
  const ClassGroupTower* tower_;
  std::map<std::string, PadicNumber> values_;
};

// Domain-checked analytic direction: |s_sigma| <= |c0|_p p^{-2}.
class CharacterFamilyPoint {
 public:
  CharacterFamilyPoint(const ClassGroupTower& tower, std::vector<PadicNumber> s);
  const std::vector<PadicNumber>& components() const { return s_; }

 private:
  std::vector<PadicNumber> s_;
};

// epsilon^s(g) = exp(sum_sigma s_sigma log_sigma(g)).
PadicNumber epsilon_eval(const std::vector<LogFunctional>& logs, const CharacterFamilyPoint& s,
                         const LevelVector& n, const GroupElement& g);

// Finite-order character through values on the cyclic factor generators.
class FiniteCharacter {
 public:
  FiniteCharacter(const ClassGroupTower* tower, LevelVector n, std::vector<PadicNumber> gen_values);

  const LevelVector& level() const { return n_; }
  PadicNumber value(const GroupElement& g) const;
  // value at an element of a level >= this character's level
  PadicNumber value_at_level(const LevelVector& m, const GroupElement& g) const;
  // minimal level through which the character factors
  LevelVector conductor() const;
  static FiniteCharacter trivial(const ClassGroupTower* tower, const LevelVector& n);

  FiniteCharacter operator*(const FiniteCharacter& o) const;

 private:
  const ClassGroupTower* tower_;
  LevelVector n_;
  std::vector<PadicNumber> gen_values_;
};

}  // namespace padicx

#endif
