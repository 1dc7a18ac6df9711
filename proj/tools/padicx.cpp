// padicx: batch CLI over the p-adic L-function library.
//
// Exit codes: 0 ok, 1 validation error, 2 convergence failure, 3 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "padicx/acceptance.hpp"
#include "padicx/distribution.hpp"
#include "padicx/local_factors.hpp"
#include "padicx/theta.hpp"

using namespace padicx;
using nlohmann::json;

namespace {

int default_precision() {
  if (const char* env = std::getenv("PADICX_PRECISION")) {
    int n = std::atoi(env);
    if (n >= 2 && n <= 200) return n;
  }
  return PadicNumber::kDefaultPrecision;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::usage, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

LogBranch parse_branch(const std::string& text, long p, int prec) {
  if (text == "iwasawa") return LogBranch::iwasawa(p, prec);
  if (text.rfind("u:", 0) == 0) return LogBranch(PadicNumber::parse(text.substr(2)));
  fail(errc::usage, "branch must be 'iwasawa' or 'u:<padic>'");
}

mpq_class parse_rational(const std::string& s) {
  mpq_class q(s);
  q.canonicalize();
  return q;
}

void emit(const json& report, const std::string& format) {
  if (format == "tsv") {
    for (auto it = report.begin(); it != report.end(); ++it) {
      std::cout << it.key() << "\t"
                << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
                << "\n";
    }
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

FiniteCharacter load_character(const std::string& path, const ClassGroupTower* tower) {
  json j = json::parse(slurp(path));
  LevelVector n = j.at("level").get<LevelVector>();
  std::vector<PadicNumber> vals;
  for (const auto& v : j.at("values")) vals.push_back(PadicNumber::parse(v.get<std::string>()));
  return FiniteCharacter(tower, n, vals);
}

struct Direction {
  std::vector<PadicNumber> s;
  std::vector<LogBranch> branches;
  std::vector<LogFunctional> logs;
};

Direction load_direction(const std::string& path, const GrossPointData& data) {
  json j = json::parse(slurp(path));
  Direction d;
  for (const auto& v : j.at("s")) d.s.push_back(PadicNumber::parse(v.get<std::string>()));
  if (j.contains("branches")) {
    for (const auto& b : j.at("branches"))
      d.branches.push_back(
          parse_branch(b.get<std::string>(), data.prime(), data.precision()));
  }
  if (j.contains("logs")) {
    for (const auto& item : j.at("logs")) {
      LogFunctional lg(item.at("sigma").get<std::string>(), &data.tower());
      for (auto it = item.at("values").begin(); it != item.at("values").end(); ++it)
        lg.set_value(it.key(), PadicNumber::parse(it.value().get<std::string>()));
      d.logs.push_back(std::move(lg));
    }
  }
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"padicx: p-adic distributions, L-invariants and theta towers"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));

  // ---- linvariant ----
  auto* linv = app.add_subcommand("linvariant", "Teitelbaum-type L-invariant");
  std::string linv_cocycle, linv_qtilde, linv_branch = "", linv_j;
  long linv_depth = 8;
  linv->add_option("--cocycle", linv_cocycle, "cocycle JSON file");
  linv->add_option("--qtilde", linv_qtilde, "period as a p-adic literal (overrides the file)");
  linv->add_option("--branch", linv_branch, "iwasawa or u:<padic>")->required();
  linv->add_option("--depth", linv_depth, "Riemann-sum depth");
  linv->add_option("--j", linv_j, "j-invariant literal for the Tate route");

  // ---- tate-q ----
  auto* tate = app.add_subcommand("tate-q", "Tate parameter from a j-invariant");
  std::string tate_j;
  tate->add_option("--j", tate_j, "j-invariant p-adic literal")->required();

  // ---- theta ----
  auto* theta_cmd = app.add_subcommand("theta", "theta element coefficients");
  std::string theta_data, theta_level;
  theta_cmd->add_option("--data", theta_data, "Gross-point data JSON file")->required();
  theta_cmd->add_option("--level", theta_level, "comma-separated level vector")->required();

  // ---- lfun-eval ----
  auto* leval = app.add_subcommand("lfun-eval", "theta evaluation at a finite character");
  std::string leval_data, leval_chi;
  leval->add_option("--data", leval_data)->required();
  leval->add_option("--chi", leval_chi, "character JSON file")->required();

  // ---- lfun-deriv ----
  auto* lderiv = app.add_subcommand("lfun-deriv", "restricted series coefficients");
  std::string lderiv_data, lderiv_dir, lderiv_chi;
  long lderiv_order = 1, lderiv_depth = 6;
  lderiv->add_option("--data", lderiv_data)->required();
  lderiv->add_option("--direction", lderiv_dir, "direction JSON file")->required();
  lderiv->add_option("--chi", lderiv_chi, "character JSON file");
  lderiv->add_option("--order", lderiv_order, "series order");
  lderiv->add_option("--depth", lderiv_depth, "region depth");

  // ---- local-factor ----
  auto* local = app.add_subcommand("local-factor", "exact local formula evaluation");
  std::string local_case, local_params;
  local->add_option("--case", local_case)->required();
  local->add_option("--params", local_params, "parameter JSON file")->required();

  // ---- check ----
  auto* check = app.add_subcommand("check", "acceptance suites");
  std::string check_suite = "all";
  check->add_option("suite", check_suite, "suite name or 'all'");

  CLI11_PARSE(app, argc, argv);
  int prec = default_precision();

  try {
    if (linv->parsed()) {
      json rep;
      rep["precision"] = prec;
      rep["branch"] = linv_branch;
      if (!linv_j.empty()) {
        PadicNumber j = PadicNumber::parse(linv_j);
        LogBranch branch = parse_branch(linv_branch, j.prime(), j.precision());
        PadicNumber q = tate_parameter(j);
        PadicNumber lg = branch.log(q);
        long ord = q.valuation();
        rep["p"] = j.prime();
        rep["q"] = q.str();
        rep["ord"] = ord;
        rep["log"] = lg.str();
        rep["linvariant"] = lg.scale(mpq_class(1, ord)).str();
        emit(rep, format);
        return 0;
      }
      if (linv_cocycle.empty()) fail(errc::usage, "need --cocycle or --j");
      HarmonicCocycle c = HarmonicCocycle::from_json(slurp(linv_cocycle));
      PadicNumber q = linv_qtilde.empty() ? c.qtilde() : PadicNumber::parse(linv_qtilde);
      LogBranch branch = parse_branch(linv_branch, c.prime(), c.precision());
      auto ax = c.tree().hyperbolic_axis(q);
      PadicNumber delta = schneider_value(c, ax.gamma, c.tree().base_vertex());
      auto lam = lambda_value(c, q, branch, Qp2Number::omega(c.prime(), c.precision()),
                              linv_depth);
      rep["p"] = c.prime();
      rep["depth"] = linv_depth;
      rep["qtilde"] = q.str();
      rep["lambda"] = lam.value.str();
      rep["delta"] = delta.str();
      rep["tail_exponent"] = lam.tail_exponent;
      rep["linvariant"] = (lam.value / delta).str();
      emit(rep, format);
      return 0;
    }

    if (tate->parsed()) {
      PadicNumber j = PadicNumber::parse(tate_j);
      PadicNumber q = tate_parameter(j);
      json rep;
      rep["p"] = j.prime();
      rep["precision"] = j.precision();
      rep["q"] = q.str();
      rep["ord"] = q.valuation();
      rep["j_roundtrip"] = j_from_q(q).str();
      emit(rep, format);
      return 0;
    }

    if (theta_cmd->parsed()) {
      GrossPointData data = GrossPointData::from_json(slurp(theta_data));
      LevelVector n;
      std::istringstream is(theta_level);
      std::string tok;
      while (std::getline(is, tok, ',')) n.push_back(std::stol(tok));
      ThetaElement th = data.theta_element(n);
      json rep;
      rep["p"] = data.prime();
      rep["precision"] = data.precision();
      rep["level"] = n;
      json coeffs = json::array();
      for (long i = 0; i < data.tower().order(n); ++i) {
        GroupElement g = data.tower().element_at(n, i);
        json item;
        item["element"] = g;
        item["value"] = th.coeffs[i].str();
        coeffs.push_back(item);
      }
      rep["coefficients"] = coeffs;
      emit(rep, format);
      return 0;
    }

    if (leval->parsed()) {
      GrossPointData data = GrossPointData::from_json(slurp(leval_data));
      FiniteCharacter chi = load_character(leval_chi, &data.tower());
      PadicNumber sv = data.script_L(chi);
      json rep;
      rep["p"] = data.prime();
      rep["precision"] = data.precision();
      rep["scriptL"] = sv.str();
      rep["L"] = (sv * sv).str();
      rep["conductor"] = chi.conductor();
      emit(rep, format);
      return 0;
    }

    if (lderiv->parsed()) {
      GrossPointData data = GrossPointData::from_json(slurp(lderiv_data));
      FiniteCharacter chi = lderiv_chi.empty()
                                ? FiniteCharacter::trivial(&data.tower(),
                                                           LevelVector(data.rank(), 1))
                                : load_character(lderiv_chi, &data.tower());
      Direction dir = load_direction(lderiv_dir, data);
      auto coeffs = L_series(data, chi, dir.logs, dir.branches, dir.s, lderiv_order,
                             lderiv_depth);
      json rep;
      rep["p"] = data.prime();
      rep["precision"] = data.precision();
      rep["depth"] = lderiv_depth;
      json arr = json::array();
      for (const auto& c : coeffs) arr.push_back(c.str());
      rep["coefficients"] = arr;
      if (data.fully_exceptional()) {
        auto lt = leading_term_check(data, chi, dir.branches, dir.s, lderiv_depth);
        rep["leading_engine"] = lt.engine_side.str();
        rep["leading_invariant"] = lt.invariant_side.str();
        rep["matched_digits"] = lt.matched_digits;
      }
      emit(rep, format);
      return 0;
    }

    if (local->parsed()) {
      json params = json::parse(slurp(local_params));
      auto q = [&](const std::string& key) {
        const json& v = params.at(key);
        if (v.is_number_integer()) return mpq_class(v.get<long>());
        return parse_rational(v.get<std::string>());
      };
      auto qi = [&](const std::string& key, long dflt) {
        return params.contains(key) ? params.at(key).get<long>() : dflt;
      };
      json rep;
      rep["case"] = local_case;
      SymbolicValue v;
      if (local_case == "l_special") {
        rep["value"] = local_L_factor(LocalCase::kUnramifiedSpecial, q("u1"), 0).get_str();
        emit(rep, format);
        return 0;
      } else if (local_case == "l_principal") {
        rep["value"] = local_L_factor(LocalCase::kUnramifiedPrincipal, q("u1"), q("u2")).get_str();
        emit(rep, format);
        return 0;
      } else if (local_case == "whittaker_special") {
        v = whittaker_value(LocalCase::kUnramifiedSpecial, qi("n", 0), q("q_inv"), q("mu"), 0);
      } else if (local_case == "whittaker_principal") {
        v = whittaker_value(LocalCase::kUnramifiedPrincipal, qi("n", 0), q("q_inv"), q("mu1"),
                            q("mu2"));
      } else if (local_case == "zeta_special" || local_case == "zeta_principal") {
        bool special = local_case == "zeta_special";
        auto r = zeta_integral_check(
            special ? LocalCase::kUnramifiedSpecial : LocalCase::kUnramifiedPrincipal, q("u1"),
            special ? mpq_class(0) : q("u2"), qi("T", 5),
            params.contains("norm") ? q("norm") : mpq_class(1));
        rep["partial"] = r.partial.get_str();
        rep["closed"] = r.closed.get_str();
        rep["tail"] = r.tail.get_str();
        rep["exact"] = r.exact();
        emit(rep, format);
        return 0;
      } else if (local_case == "pairing_arch") {
        v = pairing_b_value_archimedean(qi("k", 2));
      } else if (local_case == "pairing_unram") {
        v = pairing_b_value_unramified(q("abs_different"));
      } else if (local_case == "pairing_special") {
        v = pairing_b_value_special(static_cast<int>(qi("eps", 1)), q("abs_different"));
      } else if (local_case.rfind("toric_", 0) == 0) {
        ToricParams t;
        if (params.contains("q_inv")) t.q_inv = q("q_inv");
        if (params.contains("abs_dF")) t.abs_dF = q("abs_dF");
        if (params.contains("abs_dK")) t.abs_dK = q("abs_dK");
        t.epsilon_half = static_cast<int>(qi("eps", 1));
        if (params.contains("alpha")) t.alpha = q("alpha");
        if (params.contains("chi_P_w")) t.chi_P_w = q("chi_P_w");
        t.c_v = qi("c_v", 0);
        t.nu_matches_alpha = static_cast<int>(qi("nu_matches_alpha", 1));
        if (params.contains("splitting")) {
          std::string s = params.at("splitting").get<std::string>();
          t.splitting = s == "inert" ? PlaceSplitting::kInert
                        : s == "ramified" ? PlaceSplitting::kRamified
                                          : PlaceSplitting::kSplit;
        }
        if (local_case == "toric_split_principal") v = toric_P_split_principal(t);
        else if (local_case == "toric_split_special") v = toric_P_split_special(t);
        else if (local_case == "toric_nonsplit_principal") v = toric_P_nonsplit_principal(t);
        else if (local_case == "toric_inert_special") v = toric_P_inert_special(t);
        else if (local_case == "toric_ramified_special") v = toric_P_ramified_special(t);
        else if (local_case == "toric_old_split") v = toric_P_old_split(t, qi("val_beta_odd", 0));
        else if (local_case == "toric_old_nonsplit") v = toric_P_old_nonsplit(t);
        else if (local_case == "toric_new_inert") v = toric_P_new_inert(t);
        else if (local_case == "toric_nb_inert") v = toric_P_nb_inert(t);
        else if (local_case == "toric_nb_ramified") v = toric_P_nb_ramified(t);
        else if (local_case == "toric_arch") v = toric_P_archimedean(qi("k", 2), qi("m", 0));
        else fail(errc::usage, "unknown toric case " + local_case);
      } else if (local_case == "period_ratio") {
        std::vector<std::pair<bool, int>> primes;
        for (const auto& item : params.at("primes"))
          primes.emplace_back(item.at("factorized").get<bool>(), item.at("eps").get<int>());
        auto r = period_ratio_check(primes);
        rep["reduced"] = r.reduced.str();
        rep["is_one"] = r.is_one;
        emit(rep, format);
        return 0;
      } else {
        fail(errc::usage, "unknown case " + local_case);
      }
      rep["value"] = v.str();
      emit(rep, format);
      return 0;
    }

    if (check->parsed()) {
      auto results = run_acceptance(check_suite);
      std::cout << format_results(results);
      for (const auto& r : results)
        if (!r.pass) return 1;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::usage:
        return 3;
      case errc::no_stabilization:
      case errc::depth_too_shallow:
      case errc::convergence_domain:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 3;
}
