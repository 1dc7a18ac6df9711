#include "padicx/tower.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace padicx {

std::string level_key(const LevelVector& n) {
  std::ostringstream os;
  os << "n=[";
  for (size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
  os << "]";
  return os.str();
}

ClassGroupTower::ClassGroupTower(long p, std::vector<std::string> primes, long c0)
    : p_(p), c0_(c0), primes_(std::move(primes)) {
  if (c0 < 1) fail(errc::domain_violation, "c0 must be positive");
}

void ClassGroupTower::add_level(const LevelVector& n, Level level) {
  if (n.size() != primes_.size()) fail(errc::domain_violation, "level vector length");
  if (level.labels.size() != level.orders.size())
    fail(errc::domain_violation, "one label per cyclic factor");
  for (long o : level.orders)
    if (o < 1) fail(errc::domain_violation, "cyclic order must be >= 1");
  levels_[level_key(n)] = std::move(level);
}

void ClassGroupTower::add_projection(const LevelVector& from, const LevelVector& to,
                                     std::vector<GroupElement> images) {
  const Level& lf = level(from);
  const Level& lt = level(to);
  if (images.size() != lf.orders.size())
    fail(errc::domain_violation, "one image per source generator");
  for (const auto& img : images)
    if (img.size() != lt.orders.size()) fail(errc::domain_violation, "image exponent length");
  projections_[{level_key(from), level_key(to)}] = std::move(images);
}

bool ClassGroupTower::has_level(const LevelVector& n) const {
  return levels_.count(level_key(n)) > 0;
}

const ClassGroupTower::Level& ClassGroupTower::level(const LevelVector& n) const {
  auto it = levels_.find(level_key(n));
  if (it == levels_.end()) fail(errc::missing_level, level_key(n));
  return it->second;
}

std::vector<LevelVector> ClassGroupTower::levels() const {
  std::vector<LevelVector> out;
  for (const auto& [key, lev] : levels_) {
    (void)lev;
    LevelVector n;
    std::string body = key.substr(3, key.size() - 4);
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) n.push_back(std::stol(tok));
    out.push_back(n);
  }
  return out;
}

long ClassGroupTower::order(const LevelVector& n) const {
  long o = 1;
  for (long d : level(n).orders) o *= d;
  return o;
}

GroupElement ClassGroupTower::identity(const LevelVector& n) const {
  return GroupElement(level(n).orders.size(), 0);
}

GroupElement ClassGroupTower::add(const LevelVector& n, const GroupElement& a,
                                  const GroupElement& b) const {
  const Level& lev = level(n);
  GroupElement out(lev.orders.size());
  for (size_t i = 0; i < lev.orders.size(); ++i)
    out[i] = (((a.at(i) + b.at(i)) % lev.orders[i]) + lev.orders[i]) % lev.orders[i];
  return out;
}

long ClassGroupTower::index_of(const LevelVector& n, const GroupElement& g) const {
  const Level& lev = level(n);
  long idx = 0;
  for (size_t i = 0; i < lev.orders.size(); ++i) idx = idx * lev.orders[i] + (g.at(i) % lev.orders[i]);
  return idx;
}

GroupElement ClassGroupTower::element_at(const LevelVector& n, long index) const {
  const Level& lev = level(n);
  GroupElement g(lev.orders.size());
  for (size_t i = lev.orders.size(); i-- > 0;) {
    g[i] = index % lev.orders[i];
    index /= lev.orders[i];
  }
  return g;
}

const std::vector<GroupElement>* ClassGroupTower::direct_projection(const LevelVector& from,
                                                                    const LevelVector& to) const {
  auto it = projections_.find({level_key(from), level_key(to)});
  return it == projections_.end() ? nullptr : &it->second;
}

bool ClassGroupTower::has_projection_path(const LevelVector& from, const LevelVector& to) const {
  if (from == to) return true;
  if (direct_projection(from, to)) return true;
  // follow any chain of direct projections
  for (const auto& [key, images] : projections_) {
    (void)images;
    if (key.first != level_key(from)) continue;
    for (const auto& mid : levels()) {
      if (level_key(mid) != key.second) continue;
      if (has_projection_path(mid, to)) return true;
    }
  }
  return false;
}

GroupElement ClassGroupTower::project(const LevelVector& from, const LevelVector& to,
                                      const GroupElement& g) const {
  if (from == to) return g;
  if (const auto* images = direct_projection(from, to)) {
    GroupElement out = identity(to);
    const Level& lf = level(from);
    for (size_t i = 0; i < lf.orders.size(); ++i) {
      GroupElement scaled = (*images)[i];
      const Level& lt = level(to);
      for (size_t j = 0; j < scaled.size(); ++j)
        scaled[j] = (scaled[j] * (g.at(i) % lf.orders[i])) % lt.orders[j];
      out = add(to, out, scaled);
    }
    return out;
  }
  for (const auto& [key, images] : projections_) {
    (void)images;
    if (key.first != level_key(from)) continue;
    for (const auto& mid : levels()) {
      if (level_key(mid) != key.second) continue;
      if (has_projection_path(mid, to)) return project(mid, to, project(from, mid, g));
    }
  }
  fail(errc::missing_level, "no projection " + level_key(from) + " -> " + level_key(to));
}

std::vector<GroupElement> ClassGroupTower::fiber(const LevelVector& from, const LevelVector& to,
                                                 const GroupElement& g) const {
  std::vector<GroupElement> out;
  long N = order(from);
  for (long i = 0; i < N; ++i) {
    GroupElement e = element_at(from, i);
    if (project(from, to, e) == g) out.push_back(e);
  }
  return out;
}

ClassGroupTower::Report ClassGroupTower::validate() const {
  Report rep;
  LevelVector zero(primes_.size(), 0);
  if (!has_level(zero)) rep.violations.push_back("level (0,...,0) missing");
  // surjectivity of the stored projections
  for (const auto& [key, images] : projections_) {
    (void)images;
    LevelVector from, to;
    for (const auto& n : levels()) {
      if (level_key(n) == key.first) from = n;
      if (level_key(n) == key.second) to = n;
    }
    if (from.empty() && to.empty()) continue;
    std::set<long> image_indices;
    for (long i = 0; i < order(from); ++i)
      image_indices.insert(index_of(to, project(from, to, element_at(from, i))));
    if (static_cast<long>(image_indices.size()) != order(to))
      rep.violations.push_back("projection " + key.first + " -> " + key.second +
                               " not surjective");
  }
  // composed consistency: chains with a direct shortcut must agree
  auto levs = levels();
  for (const auto& a : levs)
    for (const auto& b : levs)
      for (const auto& c : levs) {
        if (!direct_projection(a, b) || !direct_projection(b, c) || !direct_projection(a, c))
          continue;
        for (long i = 0; i < order(a); ++i) {
          GroupElement g = element_at(a, i);
          if (project(b, c, project(a, b, g)) != project(a, c, g)) {
            rep.violations.push_back("projections " + level_key(a) + " -> " + level_key(b) +
                                     " -> " + level_key(c) + " do not compose");
            break;
          }
        }
      }
  return rep;
}

std::string ClassGroupTower::to_json() const {
  nlohmann::json j;
  j["primes"] = primes_;
  j["p"] = p_;
  j["c0"] = c0_;
  nlohmann::json levs = nlohmann::json::array();
  for (const auto& n : levels()) {
    const Level& lev = level(n);
    nlohmann::json item;
    item["n"] = n;
    item["cyclic"] = lev.orders;
    item["labels"] = lev.labels;
    levs.push_back(item);
  }
  j["levels"] = levs;
  nlohmann::json projs = nlohmann::json::object();
  for (const auto& [key, images] : projections_) {
    projs[key.first + "->" + key.second] = images;
  }
  j["projections"] = projs;
  return j.dump(2);
}

ClassGroupTower ClassGroupTower::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::parse_error, std::string("tower file: ") + e.what());
  }
  ClassGroupTower t(j.at("p").get<long>(), j.at("primes").get<std::vector<std::string>>(),
                    j.at("c0").get<long>());
  for (const auto& item : j.at("levels")) {
    Level lev;
    lev.orders = item.at("cyclic").get<std::vector<long>>();
    lev.labels = item.at("labels").get<std::vector<std::string>>();
    t.add_level(item.at("n").get<LevelVector>(), lev);
  }
  if (j.contains("projections")) {
    for (auto it = j.at("projections").begin(); it != j.at("projections").end(); ++it) {
      std::string key = it.key();
      size_t arrow = key.find("->");
      if (arrow == std::string::npos) fail(errc::parse_error, "projection key " + key);
      auto parse_level = [&](const std::string& s) {
        LevelVector n;
        size_t lb = s.find('['), rb = s.find(']');
        std::istringstream is(s.substr(lb + 1, rb - lb - 1));
        std::string tok;
        while (std::getline(is, tok, ',')) n.push_back(std::stol(tok));
        return n;
      };
      t.add_projection(parse_level(key.substr(0, arrow)), parse_level(key.substr(arrow + 2)),
                       it.value().get<std::vector<GroupElement>>());
    }
  }
  return t;
}

ClassGroupTower make_split_tower(long p, const std::vector<long>& h, long max_level,
                                 const std::vector<long>& finite_orders) {
  std::vector<std::string> primes;
  for (size_t i = 0; i < h.size(); ++i) primes.push_back("p" + std::to_string(i));
  ClassGroupTower t(p, primes, 1);

  // factor layout: finite part first, then per prime slot
  auto make_level = [&](const LevelVector& n) {
    ClassGroupTower::Level lev;
    for (size_t i = 0; i < finite_orders.size(); ++i) {
      lev.orders.push_back(finite_orders[i]);
      lev.labels.push_back("H" + std::to_string(i));
    }
    for (size_t i = 0; i < h.size(); ++i) {
      std::string pi = primes[i];
      lev.orders.push_back(h[i]);
      lev.labels.push_back(pi + ".val");
      if (n[i] >= 1) {
        lev.orders.push_back(p - 1);
        lev.labels.push_back(pi + ".teich");
        lev.orders.push_back(pow_mpz(p, n[i] - 1).get_si());
        lev.labels.push_back(pi + ".one");
      }
    }
    return lev;
  };

  // all level vectors with entries in [0, max_level]
  std::vector<LevelVector> all;
  LevelVector cur(h.size(), 0);
  std::function<void(size_t)> gen = [&](size_t i) {
    if (i == h.size()) {
      all.push_back(cur);
      return;
    }
    for (long v = 0; v <= max_level; ++v) {
      cur[i] = v;
      gen(i + 1);
    }
  };
  gen(0);
  for (const auto& n : all) t.add_level(n, make_level(n));

  // adjacent projections n -> n - e_i
  for (const auto& n : all) {
    for (size_t i = 0; i < h.size(); ++i) {
      if (n[i] == 0) continue;
      LevelVector m = n;
      m[i] -= 1;
      const auto& lf = t.level(n);
      const auto& lt = t.level(m);
      // map factor labels to target indices
      std::map<std::string, size_t> target_idx;
      for (size_t j = 0; j < lt.labels.size(); ++j) target_idx[lt.labels[j]] = j;
      std::vector<GroupElement> images;
      for (size_t j = 0; j < lf.labels.size(); ++j) {
        GroupElement img(lt.orders.size(), 0);
        auto it = target_idx.find(lf.labels[j]);
        if (it != target_idx.end()) img[it->second] = 1;  // reduction of the same generator
        images.push_back(img);
      }
      t.add_projection(n, m, images);
    }
  }
  return t;
}

LogFunctional::LogFunctional(std::string sigma, const ClassGroupTower* tower)
    : sigma_(std::move(sigma)), tower_(tower) {}

void LogFunctional::set_value(const std::string& factor_label, const PadicNumber& v) {
  values_[factor_label] = v;
}

PadicNumber LogFunctional::value(const LevelVector& n, const GroupElement& g) const {
  const auto& lev = tower_->level(n);
  PadicNumber acc = PadicNumber::zero(tower_->prime(), PadicNumber::kDefaultPrecision);
  bool first = true;
  for (size_t i = 0; i < lev.orders.size(); ++i) {
    auto it = values_.find(lev.labels[i]);
    if (it == values_.end()) continue;  // torsion factors carry no value
    long e = ((g.at(i) % lev.orders[i]) + lev.orders[i]) % lev.orders[i];
    PadicNumber term = it->second.scale(mpq_class(e));
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

CharacterFamilyPoint::CharacterFamilyPoint(const ClassGroupTower& tower,
                                           std::vector<PadicNumber> s)
    : s_(std::move(s)) {
  long p = tower.prime();
  long vc0 = valuation_mpz(mpz_class(tower.c0()), p);
  for (const auto& si : s_) {
    if (si.is_zero()) continue;
    if (si.valuation() < vc0 + 2)
      fail(errc::domain_violation, "|s| must be <= |c0|_p p^{-2}");
  }
}

PadicNumber epsilon_eval(const std::vector<LogFunctional>& logs, const CharacterFamilyPoint& s,
                         const LevelVector& n, const GroupElement& g) {
  if (logs.size() != s.components().size())
    fail(errc::domain_violation, "one direction component per log functional");
  if (logs.empty()) fail(errc::domain_violation, "need at least one log functional");
  PadicNumber acc;
  bool first = true;
  for (size_t i = 0; i < logs.size(); ++i) {
    PadicNumber term = s.components()[i] * logs[i].value(n, g);
    acc = first ? term : acc + term;
    first = false;
  }
  return exp_p(acc);
}

FiniteCharacter::FiniteCharacter(const ClassGroupTower* tower, LevelVector n,
                                 std::vector<PadicNumber> gen_values)
    : tower_(tower), n_(std::move(n)), gen_values_(std::move(gen_values)) {
  const auto& lev = tower_->level(n_);
  if (gen_values_.size() != lev.orders.size())
    fail(errc::domain_violation, "one value per cyclic generator");
  for (size_t i = 0; i < gen_values_.size(); ++i) {
    const PadicNumber& v = gen_values_[i];
    if (v.is_zero()) fail(errc::not_multiplicative, "character value zero");
    PadicNumber pw = v.pow(lev.orders[i]);
    PadicNumber one = PadicNumber::from_integer(v.prime(), 1, v.precision());
    if (!(pw - one).is_zero())
      fail(errc::not_multiplicative,
           "value at generator " + lev.labels[i] + " does not kill the cyclic order");
  }
}

FiniteCharacter FiniteCharacter::trivial(const ClassGroupTower* tower, const LevelVector& n) {
  const auto& lev = tower->level(n);
  std::vector<PadicNumber> ones(lev.orders.size(),
                                PadicNumber::from_integer(tower->prime(), 1,
                                                          PadicNumber::kDefaultPrecision));
  return FiniteCharacter(tower, n, ones);
}

PadicNumber FiniteCharacter::value(const GroupElement& g) const {
  const auto& lev = tower_->level(n_);
  PadicNumber acc = PadicNumber::from_integer(tower_->prime(), 1,
                                              gen_values_.empty()
                                                  ? PadicNumber::kDefaultPrecision
                                                  : gen_values_[0].precision());
  for (size_t i = 0; i < gen_values_.size(); ++i) {
    long e = ((g.at(i) % lev.orders[i]) + lev.orders[i]) % lev.orders[i];
    if (e) acc = acc * gen_values_[i].pow(e);
  }
  return acc;
}

PadicNumber FiniteCharacter::value_at_level(const LevelVector& m, const GroupElement& g) const {
  return value(tower_->project(m, n_, g));
}

LevelVector FiniteCharacter::conductor() const {
  LevelVector best = n_;
  bool improved = true;
  while (improved) {
    improved = false;
    for (size_t i = 0; i < best.size(); ++i) {
      if (best[i] == 0) continue;
      LevelVector lower = best;
      lower[i] -= 1;
      if (!tower_->has_level(lower) || !tower_->has_projection_path(best, lower)) continue;
      // factors through iff trivial on the kernel
      bool trivial_on_kernel = true;
      for (const auto& k : tower_->fiber(n_, lower, tower_->identity(lower))) {
        PadicNumber v = value(k);
        PadicNumber one = PadicNumber::from_integer(v.prime(), 1, v.precision());
        if (!(v - one).is_zero()) {
          trivial_on_kernel = false;
          break;
        }
      }
      if (trivial_on_kernel) {
        best = lower;
        improved = true;
      }
    }
  }
  return best;
}

FiniteCharacter FiniteCharacter::operator*(const FiniteCharacter& o) const {
  if (level_key(n_) != level_key(o.n_))
    fail(errc::domain_violation, "character product needs a common level");
  std::vector<PadicNumber> vals;
  for (size_t i = 0; i < gen_values_.size(); ++i) vals.push_back(gen_values_[i] * o.gen_values_[i]);
  return FiniteCharacter(tower_, n_, vals);
}

}  // namespace padicx
