#include "padicx/harmonic.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace padicx {

namespace {

// Coefficient of X^i Y^(k-2-i) in (aX+cY)^j (bX+dY)^(k-2-j), divided by det^((k-2)/2).
std::vector<std::vector<mpq_class>> rho_matrix(const TwistedMatrix& g, int weight) {
  int d = weight - 2;
  TwistedMatrix e = g.effective();
  mpq_class a = e.at(0, 0), b = e.at(0, 1), c = e.at(1, 0), dd = e.at(1, 1);
  mpq_class det = a * dd - b * c;
  // det^(-(k-2)/2)
  mpq_class scale = 1;
  for (int i = 0; i < d / 2; ++i) scale /= det;
  std::vector<std::vector<mpq_class>> M(d + 1, std::vector<mpq_class>(d + 1, 0));
  // binomials
  std::vector<std::vector<mpq_class>> binom(d + 1, std::vector<mpq_class>(d + 1, 0));
  for (int i = 0; i <= d; ++i) {
    binom[i][0] = 1;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + ((j <= i - 1) ? binom[i - 1][j] : 0);
  }
  for (int j = 0; j <= d; ++j) {
    // (aX+cY)^j (bX+dY)^(d-j) = sum_i M[i][j] X^i Y^(d-i)
    for (int s = 0; s <= j; ++s) {
      mpq_class as = 1, cs = 1;
      for (int t = 0; t < s; ++t) as *= a;
      for (int t = 0; t < j - s; ++t) cs *= c;
      for (int t = 0; t <= d - j; ++t) {
        mpq_class bs = 1, ds = 1;
        for (int u = 0; u < t; ++u) bs *= b;
        for (int u = 0; u < d - j - t; ++u) ds *= dd;
        int i = s + t;
        M[i][j] += scale * binom[j][s] * as * cs * binom[d - j][t] * bs * ds;
      }
    }
  }
  return M;
}

}  // namespace

CoeffVector apply_rho_check(const TwistedMatrix& g, int weight, const CoeffVector& v, long p,
                            int prec) {
  int d = weight - 2;
  if (static_cast<int>(v.size()) != d + 1) fail(errc::domain_violation, "coefficient length");
  if (d == 0) return v;  // weight 2: trivial action
  // (rho-check(g) c)_j = c(rho(g^{-1}) X^j Y^(d-j)) = sum_i rhoinv[i][j] c_i
  auto rhoinv = rho_matrix(g.inverse_effective(), weight);
  CoeffVector out(d + 1, PadicNumber::zero(p, prec));
  for (int j = 0; j <= d; ++j) {
    PadicNumber acc = PadicNumber::zero(p, prec);
    for (int i = 0; i <= d; ++i) {
      if (rhoinv[i][j] == 0) continue;
      acc = acc + v[i].scale(rhoinv[i][j]);
    }
    out[j] = acc;
  }
  return out;
}

HarmonicCocycle::HarmonicCocycle(long p, int weight, long depth, int prec)
    : p_(p), weight_(weight), depth_(depth), prec_(prec), tree_(p) {
  if (weight < 2 || weight % 2 != 0) fail(errc::domain_violation, "weight must be even >= 2");
  if (depth < 1) fail(errc::domain_violation, "depth must be >= 1");
}

const PadicNumber& HarmonicCocycle::qtilde() const {
  if (!qtilde_) fail(errc::domain_violation, "cocycle is not periodic");
  return *qtilde_;
}

long HarmonicCocycle::translation_length() const {
  if (!axis_) fail(errc::domain_violation, "cocycle is not periodic");
  return axis_->h;
}

void HarmonicCocycle::set_periodicity(const PadicNumber& qtilde) {
  qtilde_ = qtilde;
  axis_ = tree_.hyperbolic_axis(qtilde);
}

HarmonicCocycle::EdgeKey HarmonicCocycle::key_of(const TreeEdge& e) {
  return EdgeKey{e.src.n, e.src.c, e.dst.n, e.dst.c};
}

void HarmonicCocycle::set_value(const TreeEdge& e, CoeffVector v) {
  if (static_cast<int>(v.size()) != weight_ - 1)
    fail(errc::domain_violation, "coefficient vector length != k-1");
  if (!in_window(e)) fail(errc::out_of_table, "edge outside depth window");
  TreeEdge ce{tree_.canonical(e.src), tree_.canonical(e.dst)};
  values_[key_of(ce)] = std::move(v);
}

void HarmonicCocycle::set_value(const TreeEdge& e, const PadicNumber& x) {
  set_value(e, CoeffVector{x});
}

bool HarmonicCocycle::in_window(const TreeVertex& v) const {
  return tree_.distance(v, tree_.base_vertex()) <= depth_;
}

bool HarmonicCocycle::in_window(const TreeEdge& e) const {
  return in_window(e.src) && in_window(e.dst);
}

const CoeffVector* HarmonicCocycle::find(const TreeEdge& e) const {
  auto it = values_.find(key_of(e));
  return it == values_.end() ? nullptr : &it->second;
}

CoeffVector HarmonicCocycle::evaluate(const TreeEdge& e) const {
  TreeEdge ce{tree_.canonical(e.src), tree_.canonical(e.dst)};
  if (in_window(ce)) {
    if (const CoeffVector* v = find(ce)) return *v;
    if (const CoeffVector* v = find(ce.reversed())) {
      CoeffVector out = *v;
      for (auto& x : out) x = -x;
      return out;
    }
    return CoeffVector(weight_ - 1, PadicNumber::zero(p_, prec_));
  }
  if (axis_) {
    // Shift into the window: gamma moves levels by +h.
    TwistedMatrix gi = axis_->gamma.inverse_effective();
    long h = axis_->h;
    long lvl = std::max(std::abs(ce.src.n), std::abs(ce.dst.n));
    long bound = lvl / h + 2;
    TreeEdge cur = ce;
    long k = 0;
    for (long step = 0; step < bound && !in_window(cur); ++step) {
      TreeEdge fwd = tree_.act(gi, cur);
      TreeEdge bwd = tree_.act(axis_->gamma, cur);
      long dif = tree_.distance(fwd.src, tree_.base_vertex());
      long dib = tree_.distance(bwd.src, tree_.base_vertex());
      if (dif <= dib) {
        cur = fwd;
        ++k;
      } else {
        cur = bwd;
        --k;
      }
    }
    if (in_window(cur)) {
      CoeffVector base = evaluate(cur);
      if (weight_ == 2 || k == 0) return base;
      // c(e) = rho-check(gamma^k) c(gamma^{-k} e)
      TwistedMatrix gk = TwistedMatrix::identity();
      for (long i = 0; i < std::abs(k); ++i)
        gk = gk * (k > 0 ? axis_->gamma : gi);
      return apply_rho_check(gk, weight_, base, p_, prec_);
    }
  }
  fail(errc::out_of_table, "edge not reachable: " + tree_.label(ce));
}

PadicNumber HarmonicCocycle::evaluate_scalar(const TreeEdge& e) const {
  return evaluate(e).at(0);
}

ValidationReport HarmonicCocycle::validate() const {
  ValidationReport rep;
  // Each unordered pair is read through its child-direction representative
  // (the orientation whose disc is finite); the reverse is derived by
  // antisymmetry.  A stored reverse must then match the derived one.
  auto child_dir = [&](const TreeEdge& e) {
    return (e.dst.n == e.src.n + 1) ? e : e.reversed();
  };
  auto pair_value = [&](const TreeEdge& e) -> CoeffVector {
    TreeEdge c = child_dir(e);
    if (const CoeffVector* v = find(c)) return *v;
    if (const CoeffVector* v = find(c.reversed())) {
      CoeffVector out = *v;
      for (auto& x : out) x = -x;
      return out;
    }
    return CoeffVector(weight_ - 1, PadicNumber::zero(p_, prec_));
  };
  // antisymmetry, once per stored pair with both orientations present
  for (const auto& [key, val] : values_) {
    TreeEdge e{TreeVertex{key.n1, key.c1}, TreeVertex{key.n2, key.c2}};
    if (e.dst.n != e.src.n + 1) continue;  // report from the child direction only
    if (const CoeffVector* rv = find(e.reversed())) {
      bool ok = true;
      for (int j = 0; j < weight_ - 1; ++j) ok = ok && (val[j] + (*rv)[j]).is_zero();
      if (!ok) rep.violations.push_back("antisymmetry fails at " + tree_.label(e));
    }
  }
  // vertex sums at every vertex whose full star is inside the window
  std::set<std::string> seen;
  std::function<void(const TreeVertex&)> visit = [&](const TreeVertex& v) {
    std::string lab = tree_.label(v);
    if (!seen.insert(lab).second) return;
    if (tree_.distance(v, tree_.base_vertex()) <= depth_ - 1) {
      CoeffVector sum(weight_ - 1, PadicNumber::zero(p_, prec_));
      for (const auto& w : tree_.neighbors(v)) {
        TreeEdge in{w, v};
        CoeffVector c = pair_value(in);
        bool flip = child_dir(in) != in;
        for (int j = 0; j < weight_ - 1; ++j) sum[j] = flip ? sum[j] - c[j] : sum[j] + c[j];
      }
      for (int j = 0; j < weight_ - 1; ++j)
        if (!sum[j].is_zero()) {
          rep.violations.push_back("vertex sum fails at " + lab);
          break;
        }
      for (const auto& w : tree_.neighbors(v)) visit(w);
    }
  };
  visit(tree_.base_vertex());
  // periodicity on the overlap
  if (axis_) {
    for (const auto& [key, val] : values_) {
      TreeEdge e{TreeVertex{key.n1, key.c1}, TreeVertex{key.n2, key.c2}};
      TreeEdge ge = tree_.act(axis_->gamma, e);
      if (!in_window(ge)) continue;
      CoeffVector expect =
          (weight_ == 2) ? val : apply_rho_check(axis_->gamma, weight_, val, p_, prec_);
      CoeffVector got = evaluate(ge);
      bool ok = true;
      for (int j = 0; j < weight_ - 1; ++j) ok = ok && (got[j] - expect[j]).is_zero();
      if (!ok) rep.violations.push_back("periodicity fails at " + tree_.label(e));
    }
  }
  return rep;
}

HarmonicCocycle HarmonicCocycle::act_star(const TwistedMatrix& g) const {
  // g star c is invariant under g gamma g^{-1}, not gamma, so the output
  // carries no periodicity tag; it is a plain window table.
  HarmonicCocycle out(p_, weight_, depth_, prec_);
  TwistedMatrix gi = g.inverse_effective();
  std::set<std::string> placed;
  std::function<void(const TreeVertex&)> visit = [&](const TreeVertex& v) {
    if (!placed.insert(tree_.label(v)).second) return;
    for (const auto& w : tree_.neighbors(v)) {
      TreeEdge e{v, w};
      if (!in_window(e)) continue;
      TreeEdge pre = tree_.act(gi, e);
      CoeffVector val = evaluate(pre);  // OutOfTable propagates
      if (weight_ > 2) val = apply_rho_check(g, weight_, val, p_, prec_);
      bool nonzero = false;
      for (const auto& x : val) nonzero = nonzero || !x.is_zero();
      if (nonzero) out.set_value(e, val);
      if (in_window(w)) visit(w);
    }
  };
  visit(tree_.base_vertex());
  return out;
}

mpq_class HarmonicCocycle::boundedness_norm(const std::vector<TwistedMatrix>& samples) const {
  mpq_class best = 0;
  auto consider = [&](const CoeffVector& v) {
    for (const auto& x : v) {
      if (x.is_zero()) continue;
      long val = x.valuation();
      mpq_class nrm = (val >= 0) ? mpq_class(1, pow_mpz(p_, val)) : mpq_class(pow_mpz(p_, -val));
      if (nrm > best) best = nrm;
    }
  };
  TreeEdge estar = tree_.standard_edge();
  for (const auto& g : samples) {
    TreeEdge pre = tree_.act(g.inverse_effective(), estar);
    if (!in_window(pre)) continue;  // restrict to the table
    CoeffVector v = evaluate(pre);
    if (weight_ > 2) v = apply_rho_check(g, weight_, v, p_, prec_);
    consider(v);
  }
  consider(evaluate(estar));
  return best;
}

std::map<std::string, CoeffVector> HarmonicCocycle::table() const {
  std::map<std::string, CoeffVector> out;
  for (const auto& [key, val] : values_) {
    TreeEdge e{TreeVertex{key.n1, key.c1}, TreeVertex{key.n2, key.c2}};
    out[tree_.label(e)] = val;
  }
  return out;
}

std::string HarmonicCocycle::to_json() const {
  nlohmann::json j;
  j["p"] = p_;
  j["weight"] = weight_;
  j["depth"] = depth_;
  if (qtilde_)
    j["periodic"] = {{"qtilde", qtilde_->str()}};
  else
    j["periodic"] = nullptr;
  nlohmann::json edges = nlohmann::json::object();
  for (const auto& [lab, val] : table()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : val) arr.push_back(x.str());
    edges[lab] = arr;
  }
  j["edges"] = edges;
  return j.dump(2);
}

HarmonicCocycle HarmonicCocycle::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::parse_error, std::string("cocycle file: ") + e.what());
  }
  long p = j.at("p").get<long>();
  int weight = j.at("weight").get<int>();
  long depth = j.at("depth").get<long>();
  HarmonicCocycle c(p, weight, depth);
  if (!j.at("periodic").is_null())
    c.set_periodicity(PadicNumber::parse(j.at("periodic").at("qtilde").get<std::string>()));
  for (auto it = j.at("edges").begin(); it != j.at("edges").end(); ++it) {
    TreeEdge e = c.tree().parse_edge(it.key());
    CoeffVector v;
    for (const auto& s : it.value()) v.push_back(PadicNumber::parse(s.get<std::string>()));
    c.set_value(e, std::move(v));
  }
  ValidationReport rep = c.validate();
  if (!rep.ok()) {
    std::ostringstream os;
    os << "invalid cocycle file:";
    for (const auto& v : rep.violations) os << " [" << v << "]";
    fail(errc::invalid_cocycle, os.str());
  }
  return c;
}

HarmonicCocycle axis_cocycle(long p, const PadicNumber& qtilde, long depth) {
  HarmonicCocycle c(p, 2, depth, qtilde.precision());
  c.set_periodicity(qtilde);
  PadicNumber one = PadicNumber::from_integer(p, 1, qtilde.precision());
  for (long i = -depth; i < depth; ++i) {
    TreeEdge e{TreeVertex{i, 0}, TreeVertex{i + 1, 0}};
    if (!c.in_window(e)) continue;
    c.set_value(e, one);
    c.set_value(e.reversed(), -one);
  }
  return c;
}

MultiCocycle::MultiCocycle(std::vector<HarmonicCocycle> comps) : comps_(std::move(comps)) {
  if (comps_.empty()) fail(errc::domain_violation, "empty multi-cocycle");
  for (const auto& c : comps_)
    if (c.weight() != 2) fail(errc::domain_violation, "multi-cocycle components must be weight 2");
}

PadicNumber MultiCocycle::value(const std::vector<TreeEdge>& edges) const {
  if (edges.size() != comps_.size()) fail(errc::domain_violation, "edge tuple length");
  PadicNumber out = PadicNumber::from_integer(comps_[0].prime(), 1, comps_[0].precision());
  for (size_t i = 0; i < comps_.size(); ++i) out = out * comps_[i].evaluate_scalar(edges[i]);
  return out;
}

ValidationReport MultiCocycle::validate() const {
  ValidationReport rep;
  for (size_t i = 0; i < comps_.size(); ++i) {
    auto r = comps_[i].validate();
    for (auto& v : r.violations)
      rep.violations.push_back("component " + std::to_string(i) + ": " + v);
  }
  return rep;
}

}  // namespace padicx
