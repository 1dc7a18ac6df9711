#ifndef PADICX_DISTRIBUTION_HPP
#define PADICX_DISTRIBUTION_HPP

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "padicx/harmonic.hpp"

namespace padicx {

// Moment / Riemann-sum view of a bounded harmonic cocycle.
class TreeDistribution {
 public:
  explicit TreeDistribution(const HarmonicCocycle& c);

  const HarmonicCocycle& cocycle() const { return *c_; }
  long prime() const { return c_->prime(); }
  int weight() const { return c_->weight(); }

  // int_{U} x^j dmu for the disc U (complement discs only for j = 0).
  PadicNumber raw_moment(const Disc& d, int j) const;
  // int_{U(a,m)} (x-a)^j dmu, finite discs.
  PadicNumber central_moment(const Disc& d, int j) const;

  // Exact additivity over the p child discs; returns the residual (zero for a
  // harmonic table).
  PadicNumber additivity_residual(const Disc& d, int j) const;

  // |central_moment| <= A * A(a) * p^{-m (j+1-k/2)}: measure the smallest
  // admissible A over the table discs up to the given depth.
  mpq_class measure_growth_constant(long max_depth) const;
  bool check_growth_bound(const mpq_class& A, long max_depth) const;

 private:
  const HarmonicCocycle* c_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::string, int>, PadicNumber> cache_;
};

// Finite list of polynomial pieces on pairwise disjoint finite discs;
// coefficients are in (x - center).
struct LocallyAnalyticFunction {
  struct Piece {
    Disc domain;                  // finite disc
    std::vector<PadicNumber> coeffs;  // c_0 + c_1 (x-a) + ...
  };
  std::vector<Piece> pieces;
};

struct IntegrationResult {
  PadicNumber value;
  // Riemann tail bound as a p-power exponent: |error| <= p^(-tail_exponent).
  long tail_exponent = 0;
};

// Depth-m Riemann sum with degree <= k-2 truncations per piece.
IntegrationResult integrate(const TreeDistribution& d, const LocallyAnalyticFunction& f,
                            long depth);

// Multi-variable vanishing (rank >= 2): integrate g (pieces in the first
// coordinates) tensor x^0 over the whole P^1 in the last coordinate.
IntegrationResult vanishing_check(const MultiCocycle& m,
                                  const std::vector<LocallyAnalyticFunction>& g_restrictions,
                                  long depth);

// Sum of cocycle values along the geodesic v -> gamma v.
PadicNumber schneider_value(const HarmonicCocycle& c, const TwistedMatrix& gamma,
                            const TreeVertex& v);

// Riemann-sum value of int log_u((t - qtilde z0)/(t - z0)) dmu_c over P^1.
// Weight 2 only; checks z0-independence against conj(z0) and returns the
// Q_p part.
IntegrationResult lambda_value(const HarmonicCocycle& c, const PadicNumber& qtilde,
                               const LogBranch& branch, const Qp2Number& z0, long depth);

// Teitelbaum-type ratio lambda / delta on the generator.
PadicNumber l_invariant(const HarmonicCocycle& c, const PadicNumber& qtilde,
                        const LogBranch& branch, long depth,
                        std::optional<Qp2Number> z0 = std::nullopt);

// Optional telescoped identity (valid only when the deep-ball moments at the
// axis endpoints vanish).  Returns nullopt when the gate fails.
std::optional<PadicNumber> telescoped_lambda_check(const HarmonicCocycle& c,
                                                   const PadicNumber& qtilde,
                                                   const LogBranch& branch, long depth);

// Tate parameter q with j(q) = 1/q + 744 + 196884 q + ...; v(j) < 0.
PadicNumber tate_parameter(const PadicNumber& j);
// j-series coefficients c(0..M) of j(q) - 1/q = sum c(n) q^n (c(0) = 744).
std::vector<mpz_class> j_series_coefficients(long order);
// Evaluate j(q) from the series (oracle for round trips); v(q) > 0.
PadicNumber j_from_q(const PadicNumber& q);

}  // namespace padicx

#endif
