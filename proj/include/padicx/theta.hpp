#ifndef PADICX_THETA_HPP
#define PADICX_THETA_HPP

#include <optional>

#include "padicx/cohomology.hpp"
#include "padicx/distribution.hpp"
#include "padicx/tower.hpp"

namespace padicx {

// ---------------------------------------------------------------------------
// Interpolation multipliers by local case, exact rationals.

enum class MultiplierCase { kSplit, kInert, kRamified };

struct MultiplierParams {
  MultiplierCase splitting = MultiplierCase::kSplit;
  mpq_class alpha = 1;   // unit U-eigenvalue; +-1 forced when r_p = 1
  long p = 3;
  long f = 1;            // residue size p^f
  int r_p = 0;           // ord_p of the level, in {0, 1}
  long s = 0;            // conductor exponent of chi_p
  mpq_class chi_P = 1;   // split unramified case
  mpq_class chi_Pbar = 1;
};

struct MultiplierValue {
  mpq_class ebar;
  mpq_class etilde;
  mpq_class e;
};

MultiplierValue multiplier_e(const MultiplierParams& params);

// ---------------------------------------------------------------------------
// Theta elements over a tower.

struct ThetaElement {
  LevelVector level;
  std::vector<PadicNumber> coeffs;  // indexed by the level's element index
};

struct StabilizedValue {
  PadicNumber value;
  LevelVector level;   // level at which two consecutive sums agreed
  bool stabilized = false;
  long gap_valuation = 0;  // v(last difference) when not stabilized
};

// A compatible tower of Gross-point values: per-level tables of
// phi-dagger values, the U-eigenvalues, and (when built from cocycles) the
// per-prime boundary measures that drive the exceptional-zero engine.
class GrossPointData {
 public:
  struct ExceptionalSlot {
    HarmonicCocycle cocycle;
    PadicNumber qtilde;
    long h;
  };

  GrossPointData(ClassGroupTower tower, std::vector<PadicNumber> alpha);

  const ClassGroupTower& tower() const { return tower_; }
  long prime() const { return tower_.prime(); }
  int precision() const;
  const PadicNumber& alpha(size_t i) const { return alpha_.at(i); }
  size_t rank() const { return tower_.rank(); }

  void set_level_values(const LevelVector& n, std::vector<PadicNumber> values);
  bool has_level_values(const LevelVector& n) const;
  const std::vector<PadicNumber>& level_values(const LevelVector& n) const;
  std::vector<LevelVector> value_levels() const;

  void attach_exceptional_slot(size_t prime_index, ExceptionalSlot slot);
  bool fully_exceptional() const;  // every prime slot carries a cocycle
  const ExceptionalSlot& slot(size_t i) const;

  // U-trace invariant: fiber sums reproduce alpha times the lower value.
  ClassGroupTower::Report validate() const;

  ThetaElement theta_element(const LevelVector& n) const;
  bool check_compatibility(const LevelVector& from, const LevelVector& to) const;

  // Theta evaluated at the character (any present level >= conductor).
  PadicNumber script_L(const FiniteCharacter& chi) const;
  PadicNumber L_value(const FiniteCharacter& chi) const;

  // Region integrals of the boundary measure at an exceptional slot.
  PadicNumber ball_value(size_t slot, long i) const;
  PadicNumber band_value(size_t slot, long a, long b) const;
  PadicNumber log_band_value(size_t slot, const LogBranch& branch, long a, long b,
                             long depth) const;

  // Restricted measure value (the transfer identity's right side): product of
  // the slot ball masses at 0 times the finite-part character sum.
  PadicNumber restricted_value(const FiniteCharacter& chi) const;
  // Character sum over the finite part; requires chi trivial at the slots.
  PadicNumber finite_part_character_sum(const FiniteCharacter& chi) const;
  // Consistency of the extension: ball(i) = sum of the level-1 annulus table
  // over units + ball(i+1), per slot.
  bool transfer_check(long max_i) const;

  std::string to_json() const;
  static GrossPointData from_json(const std::string& text);

 private:
  ClassGroupTower tower_;
  std::vector<PadicNumber> alpha_;
  std::map<std::string, std::vector<PadicNumber>> values_;
  std::vector<std::optional<ExceptionalSlot>> slots_;
};

// Synthetic exceptional data from one weight-2 periodic cocycle per split
// prime: level tables are the boundary-measure values on the unit-ball
// orbits (annulus classes), which satisfy the trace invariant with alpha = 1.
GrossPointData build_gross_data_from_cocycle(const std::vector<HarmonicCocycle>& cocycles,
                                             long max_level,
                                             const std::vector<long>& finite_orders = {});

// Level-sum integral of chi * l^k against the theta tower, with the
// two-consecutive-levels stopping rule.  Throws NoStabilization when the
// available levels never agree to (precision - 2) digits.
StabilizedValue integrate_log_power(const GrossPointData& data, const FiniteCharacter& chi,
                                    const std::vector<LogFunctional>& logs,
                                    const std::vector<PadicNumber>& s, long k);

// Degree-k coefficient of the exceptional-zero engine: the cup product of the
// per-slot log cocycles over a k-subset of slots, padded with fundamental
// domains, paired against the extended boundary measure.
PadicNumber derivative_coefficient(const GrossPointData& data, const FiniteCharacter& chi,
                                   const std::vector<LogBranch>& branches,
                                   const std::vector<PadicNumber>& s, long k, long depth);

// Taylor coefficients c_0..c_M of the one-direction restriction; c_0 is the
// interpolation value, higher coefficients come from level sums (generic
// data) or the exceptional engine (cocycle-built data).
std::vector<PadicNumber> L_series(const GrossPointData& data, const FiniteCharacter& chi,
                                  const std::vector<LogFunctional>& logs,
                                  const std::vector<LogBranch>& branches,
                                  const std::vector<PadicNumber>& s, long order, long depth);

struct LeadingTermReport {
  long rank = 0;
  std::vector<PadicNumber> low_coefficients;  // c_0 .. c_{r-1}
  PadicNumber engine_side;                    // c_r from the region engine
  PadicNumber invariant_side;                 // prod h L^Tei * restricted value
  PadicNumber difference;
  int matched_digits = 0;
};

LeadingTermReport leading_term_check(const GrossPointData& data, const FiniteCharacter& chi,
                                     const std::vector<LogBranch>& branches,
                                     const std::vector<PadicNumber>& s, long depth);

// The cohomological shadow of the derivative identity at one slot:
// <chi c_log(beta) - L c_ord(beta), mu> with L the Coleman/Schneider ratio.
PadicNumber coh_shadow_residual(const GrossPointData& data, const FiniteCharacter& chi,
                                size_t slot, const LogBranch& branch, long depth);

}  // namespace padicx

#endif
