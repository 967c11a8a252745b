#pragma once

#include <algorithm>
#include <limits>
#include <set>

#include "shiftbound/measures.hpp"

namespace shiftbound::bounds {

using measures::DiscrepancyResult;
using measures::QuadDiscrepancyResult;
using measures::RiskValue;

// ---------- settings ----------

enum class SettingKind { standard_da, binary_da, output_da, analogy_oda, two_sided, domain_transfer };

inline std::string setting_kind_name(SettingKind k) {
  switch (k) {
    case SettingKind::standard_da: return "standard_da";
    case SettingKind::binary_da: return "binary_da";
    case SettingKind::output_da: return "output_da";
    case SettingKind::analogy_oda: return "analogy_oda";
    case SettingKind::two_sided: return "two_sided";
    case SettingKind::domain_transfer: return "domain_transfer";
  }
  throw std::logic_error("setting_kind_name: bad kind");
}

inline SettingKind setting_kind_from_name(const std::string& s) {
  if (s == "standard_da") return SettingKind::standard_da;
  if (s == "binary_da") return SettingKind::binary_da;
  if (s == "output_da") return SettingKind::output_da;
  if (s == "analogy_oda") return SettingKind::analogy_oda;
  if (s == "two_sided") return SettingKind::two_sided;
  if (s == "domain_transfer") return SettingKind::domain_transfer;
  throw std::invalid_argument("unknown setting kind: " + s);
}

// A fully materialized adaptation problem: named distributions, named target
// hypotheses, named hypothesis classes, and the loss they are measured under.
struct DASetting final {
  SettingKind kind = SettingKind::standard_da;
  LossSpec loss = LossSpec::absolute(1);
  std::map<std::string, FiniteDistribution> distributions;
  std::map<std::string, Hypothesis> targets;
  std::map<std::string, HypothesisClass> classes;

  const FiniteDistribution& dist(const std::string& name) const {
    auto it = distributions.find(name);
    if (it == distributions.end()) throw std::invalid_argument("setting: missing distribution " + name);
    return it->second;
  }
  const Hypothesis& target(const std::string& name) const {
    auto it = targets.find(name);
    if (it == targets.end()) throw std::invalid_argument("setting: missing target " + name);
    return it->second;
  }
  const HypothesisClass& cls(const std::string& name) const {
    auto it = classes.find(name);
    if (it == classes.end()) throw std::invalid_argument("setting: missing class " + name);
    return it->second;
  }
};

// check presence, dimension chains and per-kind structural requirements
inline void validate_setting(const DASetting& s) {
  auto chain = [](const std::string& what, int got, int want) {
    if (got != want)
      throw std::invalid_argument("setting: " + what + " dimension " + std::to_string(got) +
                                  " != " + std::to_string(want));
  };
  switch (s.kind) {
    case SettingKind::standard_da:
    case SettingKind::binary_da:
    case SettingKind::output_da:
    case SettingKind::analogy_oda: {
      const auto& ds = s.dist("D_S");
      const auto& dt = s.dist("D_T");
      const auto& h1 = s.cls("H1");
      chain("D_T", dt.dim(), ds.dim());
      chain("H1 input", h1.input_dim(), ds.dim());
      const int dF = h1.output_dim();
      const int dY = s.loss.dimension;
      chain("y_S input", s.target("y_S").input_dim(), ds.dim());
      chain("y_S output", s.target("y_S").output_dim(), dY);
      chain("y_T input", s.target("y_T").input_dim(), ds.dim());
      chain("y_T output", s.target("y_T").output_dim(), dY);
      const auto& h2 = s.cls("H2");
      chain("H2 input", h2.input_dim(), dF);
      chain("H2 output", h2.output_dim(), dY);
      if (s.kind == SettingKind::binary_da) {
        if (s.loss.kind != LossKind::zero_one)
          throw std::invalid_argument("setting: binary_da requires zero_one loss");
        if (!(s.target("y_S") == s.target("y_T")))
          throw std::invalid_argument("setting: binary_da requires y_S = y_T");
      }
      if (s.kind == SettingKind::output_da) {
        const auto& h2p = s.cls("H2_prime");
        chain("H2_prime input", h2p.input_dim(), dY);
        chain("H2_prime output", h2p.output_dim(), dF);
      }
      if (s.kind == SettingKind::analogy_oda) {
        const auto& h3 = s.cls("H3");
        const auto& h4 = s.cls("H4");
        chain("H3 input", h3.input_dim(), dY);
        chain("H3 output", h3.output_dim(), dY);
        chain("H4 input", h4.input_dim(), dF);
        chain("H4 output", h4.output_dim(), dY);
        if (!h3.inverse() || !h4.inverse())
          throw std::invalid_argument("setting: analogy_oda requires inverse classes on H3 and H4");
      }
      break;
    }
    case SettingKind::two_sided: {
      const auto& d1 = s.dist("D_1");
      const auto& d2 = s.dist("D_2");
      chain("D_2", d2.dim(), d1.dim());
      const auto& h1 = s.cls("H1");
      chain("H1 input", h1.input_dim(), d1.dim());
      const int dY = s.loss.dimension;
      chain("y_1 input", s.target("y_1").input_dim(), d1.dim());
      chain("y_1 output", s.target("y_1").output_dim(), dY);
      chain("y_2 input", s.target("y_2").input_dim(), d1.dim());
      chain("y_2 output", s.target("y_2").output_dim(), dY);
      chain("H2 input", s.cls("H2").input_dim(), h1.output_dim());
      chain("H2 output", s.cls("H2").output_dim(), dY);
      chain("H3 input", s.cls("H3").input_dim(), dY);   // adapters on outputs
      chain("H4 input", s.cls("H4").input_dim(), s.cls("H3").output_dim());  // critic class
      break;
    }
    case SettingKind::domain_transfer: {
      const auto& d1 = s.dist("D_1");
      const auto& d2 = s.dist("D_2");
      chain("D_2", d2.dim(), d1.dim());
      const auto& y = s.target("y");
      chain("y input", y.input_dim(), d1.dim());
      chain("y output", y.output_dim(), d1.dim());
      const auto& f = s.target("f");
      chain("f input", f.input_dim(), d1.dim());
      const auto& h2 = s.cls("H2");
      chain("H2 input", h2.input_dim(), f.output_dim());
      chain("H2 output", h2.output_dim(), d1.dim());
      chain("loss", s.loss.dimension, d1.dim());
      // y must be idempotent: y(y(x)) == y(x) exactly on both supports
      for (const FiniteDistribution* d : {&d1, &d2})
        for (const auto& x : d->support()) {
          const Point yx = evaluate(y, x);
          if (!(evaluate(y, yx) == yx))
            throw std::invalid_argument("setting: domain_transfer target y is not idempotent on supports");
        }
      break;
    }
  }
}

// ---------- reports ----------

// one verified proof-chain inequality: lhs <= rhs (+1e-9), rhs = constant * sum(rhs terms)
struct ProofStepReport final {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 1.0;
  bool pass = false;
};

struct BoundReport final {
  std::string setting;
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> terms;  // named, order fixed per bound
  double constant = 1.0;                              // composed from per-step factors
  double rhs = 0.0;                                   // constant * sum of terms
  double slack = 0.0;                                 // rhs - lhs
  std::vector<ProofStepReport> steps;
  bool pass = false;

  double term(const std::string& name) const {
    for (const auto& [k, v] : terms)
      if (k == name) return v;
    throw std::invalid_argument("BoundReport: no term named " + name);
  }
};

inline constexpr double kStepTolerance = 1e-9;

// candidate member indices, keyed per setting ("f", "g", "ghat", "a", "b", ...)
struct Candidate final {
  std::map<std::string, int> idx;

  int at(const std::string& key) const {
    auto it = idx.find(key);
    if (it == idx.end()) throw std::invalid_argument("candidate: missing index " + key);
    return it->second;
  }
};

// ---------- argmin helpers ----------

struct BestInClass final {
  int index = -1;
  Hypothesis hypothesis;  // member composed with the prefix when one is given
  RiskValue risk;
};

// exact argmin of risk(D, member o prefix, target); ties pick the lowest index
inline BestInClass best_in_class(const HypothesisClass& c, const std::optional<Hypothesis>& prefix,
                                 const FiniteDistribution& d, const Hypothesis& target,
                                 const LossSpec& spec) {
  int best = -1;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < c.size(); ++i) {
    const Hypothesis h = prefix ? compose(*prefix, c.member(i)) : c.member(i);
    const double v = measures::risk(d, h, target, spec).value;
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const Hypothesis h = prefix ? compose(*prefix, c.member(best)) : c.member(best);
  return BestInClass{best, h, RiskValue{best_v}};
}

struct BestRecovery final {
  int index = -1;
  Hypothesis member;
  double objective = 0.0;
};

// argmin over the recovery class of
//   R_{ghat o y_T o D_T}[gbar o g*_T, Id] + R_{f o D_T}[gbar o g*_T, Id]
// i.e. the member that best left-inverts g*_T on the reachable feature mass
inline BestRecovery best_ghat_T(const HypothesisClass& h2_prime, const Hypothesis& g_star_T,
                                const Hypothesis& ghat, const Hypothesis& f, const DASetting& s) {
  const FiniteDistribution dyt = pushforward(s.target("y_T"), s.dist("D_T"));
  const FiniteDistribution ghat_dyt = pushforward(ghat, dyt);
  const FiniteDistribution f_dt = pushforward(f, s.dist("D_T"));
  const int dF = f.output_dim();
  const LossSpec spec_f = s.loss.at_dimension(dF);
  const Hypothesis id_f = Hypothesis::identity(dF);
  int best = -1;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < h2_prime.size(); ++i) {
    const Hypothesis cand = compose(g_star_T, h2_prime.member(i));
    const double v =
        measures::risk(ghat_dyt, cand, id_f, spec_f).value + measures::risk(f_dt, cand, id_f, spec_f).value;
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  return BestRecovery{best, h2_prime.member(best), best_v};
}

// ---------- proof-chain engine ----------

namespace detail {

// A chain is a DAG of named non-negative values rooted at the bound's lhs.
// Each step asserts node <= constant * sum(children). Composed leaf
// coefficients are the path-products of step constants, summed over paths, so
// "all steps pass => the composed bound passes" holds by pure arithmetic.
class Chain final {
 public:
  explicit Chain(std::string root, double root_value) : root_(std::move(root)) {
    values_.emplace(root_, root_value);
    coeff_.emplace(root_, 1.0);
  }

  void node(const std::string& name, double value) {
    if (!values_.emplace(name, value).second) throw std::logic_error("chain: duplicate node " + name);
  }

  void step(const std::string& id, const std::string& lhs, const std::vector<std::string>& rhs,
            double constant) {
    constant = std::max(1.0, constant);
    if (!values_.count(lhs)) throw std::logic_error("chain: step lhs unknown: " + lhs);
    if (!coeff_.count(lhs)) throw std::logic_error("chain: step lhs unreachable: " + lhs);
    if (!expanded_.insert(lhs).second) throw std::logic_error("chain: node expanded twice: " + lhs);
    double rhs_sum = 0.0;
    for (const auto& r : rhs) {
      auto it = values_.find(r);
      if (it == values_.end()) throw std::logic_error("chain: step rhs unknown: " + r);
      rhs_sum += it->second;
      coeff_[r] += coeff_.at(lhs) * constant;
    }
    ProofStepReport rep;
    rep.id = id;
    rep.lhs = values_.at(lhs);
    rep.constant = constant;
    rep.rhs = constant * rhs_sum;
    rep.pass = rep.lhs <= rep.rhs + kStepTolerance;
    steps_.push_back(std::move(rep));
  }

  double value(const std::string& name) const { return values_.at(name); }

  // report terms; each is one leaf node or an aggregate of leaves sharing the
  // same composed coefficient (e.g. the lambda pair)
  BoundReport finish(const std::string& setting_name,
                     const std::vector<std::pair<std::string, std::vector<std::string>>>& term_defs) const {
    std::set<std::string> leaves;
    for (const auto& [name, c] : coeff_)
      if (!expanded_.count(name) && name != root_) leaves.insert(name);
    BoundReport rep;
    rep.setting = setting_name;
    rep.lhs = values_.at(root_);
    rep.steps = steps_;
    double composed = 1.0;
    double term_sum = 0.0;
    std::set<std::string> used;
    for (const auto& [term_name, nodes] : term_defs) {
      double v = 0.0;
      double c = -1.0;
      for (const auto& n : nodes) {
        if (!leaves.count(n)) throw std::logic_error("chain: term node is not a leaf: " + n);
        if (!used.insert(n).second) throw std::logic_error("chain: leaf used twice: " + n);
        v += values_.at(n);
        const double cn = coeff_.at(n);
        if (c < 0.0) c = cn;
        else if (std::fabs(cn - c) > 1e-9 * std::max(1.0, c))
          throw std::logic_error("chain: aggregate leaves with unequal coefficients: " + n);
        c = std::max(c, cn);
      }
      rep.terms.emplace_back(term_name, v);
      term_sum += v;
      composed = std::max(composed, c);
    }
    if (used.size() != leaves.size()) throw std::logic_error("chain: unaccounted leaf terms");
    rep.constant = composed;
    rep.rhs = composed * term_sum;
    rep.slack = rep.rhs - rep.lhs;
    rep.pass = rep.lhs <= rep.rhs + kStepTolerance;
    for (const auto& st : rep.steps) rep.pass = rep.pass && st.pass;
    return rep;
  }

 private:
  std::string root_;
  std::map<std::string, double> values_;
  std::map<std::string, double> coeff_;
  std::set<std::string> expanded_;
  std::vector<ProofStepReport> steps_;
};

inline double rk(const DASetting& s, const FiniteDistribution& d, const Hypothesis& a,
                 const Hypothesis& b, int dim) {
  return measures::risk(d, a, b, s.loss.at_dimension(dim)).value;
}

}  // namespace detail

// ---------- four-term source/target bound ----------

// R_DT[h, yT] <= K^2 ( R_DS[h,hS*] + R_DS[hS*,hT*] ) + K ( R_DT[hT*,yT] + disc );
// with K = 1 this is the plain four-term sum
inline BoundReport compute_bound_mansour(const DASetting& s, int f_idx, int g_idx, int workers = 1) {
  if (s.kind != SettingKind::standard_da && s.kind != SettingKind::binary_da &&
      s.kind != SettingKind::output_da)
    throw std::invalid_argument("compute_bound_mansour: needs a source/target setting");
  const auto& h1 = s.cls("H1");
  const auto& h2 = s.cls("H2");
  const Hypothesis& f = h1.member(f_idx);
  const Hypothesis h = compose(f, h2.member(g_idx));
  const auto& ds = s.dist("D_S");
  const auto& dt = s.dist("D_T");
  const auto& y_s = s.target("y_S");
  const auto& y_t = s.target("y_T");
  const int dY = s.loss.dimension;
  const double K = s.loss.triangle_constant_K;

  const BestInClass hs = best_in_class(h2, f, ds, y_s, s.loss);
  const BestInClass ht = best_in_class(h2, f, dt, y_t, s.loss);
  const DiscrepancyResult disc =
      measures::discrepancy(h2, pushforward(f, ds), pushforward(f, dt), s.loss, workers);

  detail::Chain ch("R_DT[h,yT]", detail::rk(s, dt, h, y_t, dY));
  ch.node("R_DT[h,hT*]", detail::rk(s, dt, h, ht.hypothesis, dY));
  ch.node("R_DS[h,hT*]", detail::rk(s, ds, h, ht.hypothesis, dY));
  ch.node("R_DT[hT*,yT]", ht.risk.value);
  ch.node("R_DS[h,hS*]", detail::rk(s, ds, h, hs.hypothesis, dY));
  ch.node("R_DS[hS*,hT*]", detail::rk(s, ds, hs.hypothesis, ht.hypothesis, dY));
  ch.node("disc_H2(f.DS,f.DT)", disc.value);
  ch.step("mansour.triangle_target", "R_DT[h,yT]", {"R_DT[h,hT*]", "R_DT[hT*,yT]"}, K);
  ch.step("mansour.disc_transfer", "R_DT[h,hT*]", {"R_DS[h,hT*]", "disc_H2(f.DS,f.DT)"}, 1.0);
  ch.step("mansour.triangle_source", "R_DS[h,hT*]", {"R_DS[h,hS*]", "R_DS[hS*,hT*]"}, K);
  return ch.finish(setting_kind_name(s.kind), {{"R_DS[h,hS*]", {"R_DS[h,hS*]"}},
                                               {"R_DS[hS*,hT*]", {"R_DS[hS*,hT*]"}},
                                               {"R_DT[hT*,yT]", {"R_DT[hT*,yT]"}},
                                               {"disc_H2(f.DS,f.DT)", {"disc_H2(f.DS,f.DT)"}}});
}

// ---------- binary bound with lambda ----------

// R_DT[h,y] <= R_DS[h,y] + disc_H2(f.DS, f.DT) + lambda,
// lambda = min_g [ R_DT[g.f, y] + R_DS[g.f, y] ] by enumeration
inline BoundReport compute_bound_bendavid(const DASetting& s, int f_idx, int g_idx, int workers = 1) {
  if (s.kind != SettingKind::binary_da)
    throw std::invalid_argument("compute_bound_bendavid: needs a binary_da setting");
  const auto& h1 = s.cls("H1");
  const auto& h2 = s.cls("H2");
  const Hypothesis& f = h1.member(f_idx);
  const Hypothesis h = compose(f, h2.member(g_idx));
  const auto& ds = s.dist("D_S");
  const auto& dt = s.dist("D_T");
  const auto& y = s.target("y_S");

  auto check_binary = [&](const Hypothesis& c, const char* what) {
    for (const FiniteDistribution* d : {&ds, &dt})
      for (const auto& x : d->support()) {
        const Point out = evaluate(c, x);
        if (out[0] != 0.0 && out[0] != 1.0)
          throw std::domain_error(std::string("compute_bound_bendavid: non-binary outputs from ") + what);
      }
  };
  check_binary(h, "candidate");
  check_binary(y, "target");

  // exact lambda minimizer
  int best = -1;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < h2.size(); ++i) {
    const Hypothesis g = compose(f, h2.member(i));
    const double v = detail::rk(s, dt, g, y, 1) + detail::rk(s, ds, g, y, 1);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const Hypothesis h_lam = compose(f, h2.member(best));
  const DiscrepancyResult disc =
      measures::discrepancy(h2, pushforward(f, ds), pushforward(f, dt), s.loss, workers);

  detail::Chain ch("R_DT[h,y]", detail::rk(s, dt, h, y, 1));
  ch.node("R_DT[h,g*f]", detail::rk(s, dt, h, h_lam, 1));
  ch.node("R_DT[g*f,y]", detail::rk(s, dt, h_lam, y, 1));
  ch.node("R_DS[h,g*f]", detail::rk(s, ds, h, h_lam, 1));
  ch.node("R_DS[g*f,y]", detail::rk(s, ds, h_lam, y, 1));
  ch.node("R_DS[h,y]", detail::rk(s, ds, h, y, 1));
  ch.node("disc_H2(f.DS,f.DT)", disc.value);
  ch.step("bendavid.triangle_target", "R_DT[h,y]", {"R_DT[h,g*f]", "R_DT[g*f,y]"}, 1.0);
  ch.step("bendavid.disc_transfer", "R_DT[h,g*f]", {"R_DS[h,g*f]", "disc_H2(f.DS,f.DT)"}, 1.0);
  ch.step("bendavid.triangle_source", "R_DS[h,g*f]", {"R_DS[h,y]", "R_DS[g*f,y]"}, 1.0);
  return ch.finish(setting_kind_name(s.kind),
                   {{"R_DS[h,y]", {"R_DS[h,y]"}},
                    {"disc_H2(f.DS,f.DT)", {"disc_H2(f.DS,f.DT)"}},
                    {"lambda", {"R_DT[g*f,y]", "R_DS[g*f,y]"}}});
}

// ---------- output-side adaptation bound ----------

// Seven-term bound driven by a recovery member ghat: Y -> F. Proof chain uses
// the triangle constant K, the forward class constant L2 and the recovery
// class constant L2'.
inline BoundReport compute_bound_oda(const DASetting& s, int f_idx, int g_idx, int ghat_idx,
                                      int workers = 1) {
  if (s.kind != SettingKind::output_da)
    throw std::invalid_argument("compute_bound_oda: needs an output_da setting");
  const auto& h1 = s.cls("H1");
  const auto& h2 = s.cls("H2");
  const auto& h2p = s.cls("H2_prime");
  const Hypothesis& f = h1.member(f_idx);
  const Hypothesis& g = h2.member(g_idx);
  const Hypothesis& ghat = h2p.member(ghat_idx);
  const auto& ds = s.dist("D_S");
  const auto& dt = s.dist("D_T");
  const auto& y_s = s.target("y_S");
  const auto& y_t = s.target("y_T");
  const int dY = s.loss.dimension;
  const int dF = f.output_dim();
  const double K = s.loss.triangle_constant_K;
  const double L2 = std::max(1.0, h2.declared_L());
  const double L2p = std::max(1.0, h2p.declared_L());

  const Hypothesis h = compose(f, g);
  const Hypothesis id_f = Hypothesis::identity(dF);
  const Hypothesis id_y = Hypothesis::identity(dY);
  const FiniteDistribution dyt = pushforward(y_t, dt);
  const FiniteDistribution ghat_dyt = pushforward(ghat, dyt);
  const FiniteDistribution f_ds = pushforward(f, ds);
  const FiniteDistribution f_dt = pushforward(f, dt);

  const BestInClass hs = best_in_class(h2, f, ds, y_s, s.loss);
  const BestInClass ht = best_in_class(h2, f, dt, y_t, s.loss);
  const Hypothesis& g_star_t = h2.member(ht.index);
  const BestRecovery gh_t = best_ghat_T(h2p, g_star_t, ghat, f, s);
  const Hypothesis rec = compose(g_star_t, gh_t.member);  // ghat_T o g*_T : F -> F
  const DiscrepancyResult disc = measures::discrepancy(h2, f_ds, ghat_dyt, s.loss, workers);

  auto comp = [](std::vector<Hypothesis> v) { return Hypothesis::composition(std::move(v)); };

  detail::Chain ch("R_DT[h,yT]", detail::rk(s, dt, h, y_t, dY));
  ch.node("R_DyT[g.ghatT,Id]", detail::rk(s, dyt, comp({gh_t.member, g}), id_y, dY));
  ch.node("R_DT[h,g.ghatT.yT]", detail::rk(s, dt, h, comp({y_t, gh_t.member, g}), dY));
  ch.node("R_DyT[g.ghatT,g.ghat]", detail::rk(s, dyt, comp({gh_t.member, g}), comp({ghat, g}), dY));
  ch.node("R_DyT[g.ghat,Id]", detail::rk(s, dyt, comp({ghat, g}), id_y, dY));
  ch.node("R_DyT[ghatT,ghat]", detail::rk(s, dyt, gh_t.member, ghat, dF));
  ch.node("R_ghat.DyT[ghatT.g,Id]", detail::rk(s, ghat_dyt, comp({g, gh_t.member}), id_f, dF));
  ch.node("R_DyT[ghatT.g.ghat,ghatT]",
          detail::rk(s, dyt, comp({ghat, g, gh_t.member}), gh_t.member, dF));
  ch.node("R_ghat.DyT[ghatT.g,ghatT.gT*]",
          detail::rk(s, ghat_dyt, comp({g, gh_t.member}), comp({g_star_t, gh_t.member}), dF));
  ch.node("R_ghat.DyT[ghatT.gT*,Id]", detail::rk(s, ghat_dyt, rec, id_f, dF));
  ch.node("R_ghat.DyT[g,gT*]", detail::rk(s, ghat_dyt, g, g_star_t, dY));
  ch.node("R_fDS[g,gT*]", detail::rk(s, f_ds, g, g_star_t, dY));
  ch.node("R_DS[h,hS*]", detail::rk(s, ds, h, hs.hypothesis, dY));
  ch.node("R_DS[hS*,hT*]", detail::rk(s, ds, hs.hypothesis, ht.hypothesis, dY));
  ch.node("disc_H2(f.DS,ghat.DyT)", disc.value);
  ch.node("R_DT[f,ghatT.yT]", detail::rk(s, dt, f, comp({y_t, gh_t.member}), dF));
  ch.node("R_DT[ghatT.hT*,ghatT.yT]",
          detail::rk(s, dt, comp({f, g_star_t, gh_t.member}), comp({y_t, gh_t.member}), dF));
  ch.node("R_DT[ghatT.hT*,f]", detail::rk(s, dt, comp({f, g_star_t, gh_t.member}), f, dF));
  ch.node("R_DT[hT*,yT]", ht.risk.value);
  ch.node("R_fDT[ghatT.gT*,Id]", detail::rk(s, f_dt, rec, id_f, dF));

  ch.step("oda.triangle_target", "R_DT[h,yT]", {"R_DyT[g.ghatT,Id]", "R_DT[h,g.ghatT.yT]"}, K);
  ch.step("oda.triangle_recovery", "R_DyT[g.ghatT,Id]", {"R_DyT[g.ghatT,g.ghat]", "R_DyT[g.ghat,Id]"}, K);
  ch.step("oda.forward_lipschitz", "R_DyT[g.ghatT,g.ghat]", {"R_DyT[ghatT,ghat]"}, L2);
  ch.step("oda.triangle_feature", "R_DyT[ghatT,ghat]",
          {"R_ghat.DyT[ghatT.g,Id]", "R_DyT[ghatT.g.ghat,ghatT]"}, K);
  ch.step("oda.absorb_detour", "R_DyT[ghatT.g.ghat,ghatT]", {"R_DyT[g.ghat,Id]"}, L2p);
  ch.step("oda.triangle_anchor", "R_ghat.DyT[ghatT.g,Id]",
          {"R_ghat.DyT[ghatT.g,ghatT.gT*]", "R_ghat.DyT[ghatT.gT*,Id]"}, K);
  ch.step("oda.recovery_lipschitz", "R_ghat.DyT[ghatT.g,ghatT.gT*]", {"R_ghat.DyT[g,gT*]"}, L2p);
  ch.step("oda.disc_transfer", "R_ghat.DyT[g,gT*]", {"R_fDS[g,gT*]", "disc_H2(f.DS,ghat.DyT)"}, 1.0);
  ch.step("oda.triangle_source", "R_fDS[g,gT*]", {"R_DS[h,hS*]", "R_DS[hS*,hT*]"}, K);
  ch.step("oda.forward_lipschitz_tail", "R_DT[h,g.ghatT.yT]", {"R_DT[f,ghatT.yT]"}, L2);
  ch.step("oda.triangle_tail", "R_DT[f,ghatT.yT]", {"R_DT[ghatT.hT*,ghatT.yT]", "R_DT[ghatT.hT*,f]"}, K);
  ch.step("oda.recovery_lipschitz_tail", "R_DT[ghatT.hT*,ghatT.yT]", {"R_DT[hT*,yT]"}, L2p);
  ch.step("oda.pushforward_tail", "R_DT[ghatT.hT*,f]", {"R_fDT[ghatT.gT*,Id]"}, 1.0);
  return ch.finish(setting_kind_name(s.kind),
                   {{"R_DS[h,hS*]", {"R_DS[h,hS*]"}},
                    {"R_DS[hS*,hT*]", {"R_DS[hS*,hT*]"}},
                    {"R_DT[hT*,yT]", {"R_DT[hT*,yT]"}},
                    {"R_ghat.DyT[ghatT.gT*,Id]", {"R_ghat.DyT[ghatT.gT*,Id]"}},
                    {"R_fDT[ghatT.gT*,Id]", {"R_fDT[ghatT.gT*,Id]"}},
                    {"R_DyT[g.ghat,Id]", {"R_DyT[g.ghat,Id]"}},
                    {"disc_H2(f.DS,ghat.DyT)", {"disc_H2(f.DS,ghat.DyT)"}}});
}

// ---------- analogy bound ----------

// Candidate h = a^-1 o b o f with a in H3, b in H4 (both invertible by index).
// Forward composite class constants compose mechanically:
// L2 = L3inv * L4, L2inv = L4inv * L3.
inline BoundReport compute_bound_analogy(const DASetting& s, int f_idx, int a_idx, int b_idx,
                                          int workers = 1) {
  if (s.kind != SettingKind::analogy_oda)
    throw std::invalid_argument("compute_bound_analogy: needs an analogy_oda setting");
  const auto& h1 = s.cls("H1");
  const auto& h3 = s.cls("H3");
  const auto& h4 = s.cls("H4");
  if (!h3.inverse() || !h4.inverse())
    throw std::invalid_argument("compute_bound_analogy: H3 and H4 need inverse classes");
  const Hypothesis& f = h1.member(f_idx);
  const Hypothesis& a = h3.member(a_idx);
  const Hypothesis& a_inv = h3.inverse()->member(a_idx);
  const Hypothesis& b = h4.member(b_idx);
  const Hypothesis& b_inv = h4.inverse()->member(b_idx);
  const auto& ds = s.dist("D_S");
  const auto& dt = s.dist("D_T");
  const auto& y_s = s.target("y_S");
  const auto& y_t = s.target("y_T");
  const int dY = s.loss.dimension;
  const int dF = f.output_dim();
  const double K = s.loss.triangle_constant_K;
  const double L3 = h3.declared_L();
  const double L3i = h3.inverse()->declared_L();
  const double L4 = h4.declared_L();
  const double L4i = h4.inverse()->declared_L();
  const double L2 = L3i * L4;
  const double L2i = L4i * L3;

  auto comp = [](std::vector<Hypothesis> v) { return Hypothesis::composition(std::move(v)); };
  const Hypothesis h = comp({f, b, a_inv});
  const Hypothesis id_y = Hypothesis::identity(dY);

  // reference minimizers share the candidate's adapter a
  auto best_b = [&](const FiniteDistribution& d, const Hypothesis& y) {
    int best = -1;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < h4.size(); ++i) {
      const double v = detail::rk(s, d, comp({f, h4.member(i), a_inv}), y, dY);
      if (v < best_v) {
        best_v = v;
        best = i;
      }
    }
    return best;
  };
  const int bt_idx = best_b(dt, y_t);
  const int bs_idx = best_b(ds, y_s);
  const Hypothesis& bt = h4.member(bt_idx);
  const Hypothesis& bt_inv = h4.inverse()->member(bt_idx);
  const Hypothesis ht_star = comp({f, bt, a_inv});
  const Hypothesis hs_star = comp({f, h4.member(bs_idx), a_inv});
  const Hypothesis gt_star_inv = comp({a, bt_inv});  // (g*_T)^-1 : Y -> F
  const Hypothesis g_inv = comp({a, b_inv});

  const FiniteDistribution dyt = pushforward(y_t, dt);
  const FiniteDistribution dys = pushforward(y_s, ds);
  const FiniteDistribution a_dyt = pushforward(a, dyt);
  const FiniteDistribution ainv_dys = pushforward(a_inv, dys);
  const DiscrepancyResult disc =
      measures::discrepancy(*h4.inverse(), a_dyt, dys, s.loss.at_dimension(dF), workers);

  const Hypothesis g = comp({b, a_inv});
  detail::Chain ch("R_DT[h,yT]", detail::rk(s, dt, h, y_t, dY));
  ch.node("R_DyT[g.gT*inv,Id]", detail::rk(s, dyt, comp({gt_star_inv, g}), id_y, dY));
  ch.node("R_DT[h,g.gT*inv.yT]", detail::rk(s, dt, h, comp({y_t, gt_star_inv, g}), dY));
  ch.node("R_DyT[gT*inv,ginv]", detail::rk(s, dyt, gt_star_inv, g_inv, dF));
  ch.node("R_aDyT[bT*inv,binv]", detail::rk(s, a_dyt, bt_inv, b_inv, dF));
  ch.node("R_DyS[bT*inv,binv]", detail::rk(s, dys, bt_inv, b_inv, dF));
  ch.node("disc_H4inv(a.DyT,DyS)", disc.value);
  ch.node("R_ainv.DyS[gT*inv,ginv]", detail::rk(s, ainv_dys, gt_star_inv, g_inv, dF));
  ch.node("R_DS[g.gT*inv.ainv.yS,ainv.yS]",
          detail::rk(s, ds, comp({y_s, a_inv, gt_star_inv, g}), comp({y_s, a_inv}), dY));
  ch.node("R_DS[g.gT*inv.ainv.yS,h]", detail::rk(s, ds, comp({y_s, a_inv, gt_star_inv, g}), h, dY));
  ch.node("R_DS[h,ainv.yS]", detail::rk(s, ds, h, comp({y_s, a_inv}), dY));
  ch.node("R_DS[yS,a.hT*]", detail::rk(s, ds, y_s, comp({ht_star, a}), dY));
  ch.node("R_DS[a.h,yS]", detail::rk(s, ds, comp({h, a}), y_s, dY));
  ch.node("R_DS[hS*,yS]", detail::rk(s, ds, hs_star, y_s, dY));
  ch.node("R_DS[a.hT*,hS*]", detail::rk(s, ds, comp({ht_star, a}), hs_star, dY));
  ch.node("R_DT[hT*,yT]", detail::rk(s, dt, ht_star, y_t, dY));

  ch.step("analogy.triangle_target", "R_DT[h,yT]", {"R_DyT[g.gT*inv,Id]", "R_DT[h,g.gT*inv.yT]"}, K);
  ch.step("analogy.forward_lipschitz", "R_DyT[g.gT*inv,Id]", {"R_DyT[gT*inv,ginv]"}, L2);
  ch.step("analogy.adapter_pullback", "R_DyT[gT*inv,ginv]", {"R_aDyT[bT*inv,binv]"}, 1.0);
  ch.step("analogy.disc_transfer", "R_aDyT[bT*inv,binv]",
          {"R_DyS[bT*inv,binv]", "disc_H4inv(a.DyT,DyS)"}, 1.0);
  ch.step("analogy.adapter_pushback", "R_DyS[bT*inv,binv]", {"R_ainv.DyS[gT*inv,ginv]"}, 1.0);
  ch.step("analogy.inverse_lipschitz", "R_ainv.DyS[gT*inv,ginv]", {"R_DS[g.gT*inv.ainv.yS,ainv.yS]"},
          L2i);
  ch.step("analogy.triangle_source", "R_DS[g.gT*inv.ainv.yS,ainv.yS]",
          {"R_DS[g.gT*inv.ainv.yS,h]", "R_DS[h,ainv.yS]"}, K);
  ch.step("analogy.reference_lipschitz", "R_DS[g.gT*inv.ainv.yS,h]", {"R_DS[yS,a.hT*]"}, L2 * L4i);
  ch.step("analogy.adapter_lipschitz", "R_DS[h,ainv.yS]", {"R_DS[a.h,yS]"}, L3i);
  ch.step("analogy.triangle_adapted", "R_DS[yS,a.hT*]", {"R_DS[hS*,yS]", "R_DS[a.hT*,hS*]"}, K);
  ch.step("analogy.inverse_pair_lipschitz", "R_DT[h,g.gT*inv.yT]", {"R_DT[hT*,yT]"}, L2 * L2i);
  return ch.finish(setting_kind_name(s.kind),
                   {{"R_DS[a.h,yS]", {"R_DS[a.h,yS]"}},
                    {"R_DS[a.hT*,hS*]", {"R_DS[a.hT*,hS*]"}},
                    {"R_DS[hS*,yS]", {"R_DS[hS*,yS]"}},
                    {"R_DT[hT*,yT]", {"R_DT[hT*,yT]"}},
                    {"disc_H4inv(a.DyT,DyS)", {"disc_H4inv(a.DyT,DyS)"}}});
}

// ---------- domain-transfer bounds ----------

namespace detail {

// class {g o f : g in H2} over the fixed feature map
inline HypothesisClass composed_transfer_class(const Hypothesis& f, const HypothesisClass& h2) {
  std::vector<Hypothesis> members;
  members.reserve(std::size_t(h2.size()));
  for (int i = 0; i < h2.size(); ++i) members.push_back(compose(f, h2.member(i)));
  return HypothesisClass(std::move(members));
}

inline HypothesisClass composed_transfer_class(const DASetting& s) {
  return composed_transfer_class(s.target("f"), s.cls("H2"));
}

struct TransferContext {
  FiniteDistribution dy2;
  HypothesisClass big_h;
  int lambda_idx;
  double lambda_tid;   // R_Dy2[h*, Id]
  double lambda_fit;   // R_D1[h*, y]
};

inline TransferContext transfer_context(const DASetting& s) {
  const auto& d1 = s.dist("D_1");
  const auto& y = s.target("y");
  FiniteDistribution dy2 = pushforward(y, s.dist("D_2"));
  HypothesisClass big_h = composed_transfer_class(s);
  const Hypothesis id = Hypothesis::identity(d1.dim());
  int best = -1;
  double best_v = std::numeric_limits<double>::infinity();
  double best_tid = 0.0, best_fit = 0.0;
  for (int i = 0; i < big_h.size(); ++i) {
    const double tid = rk(s, dy2, big_h.member(i), id, d1.dim());
    const double fit = rk(s, d1, big_h.member(i), y, d1.dim());
    if (tid + fit < best_v) {
      best_v = tid + fit;
      best = i;
      best_tid = tid;
      best_fit = fit;
    }
  }
  return TransferContext{std::move(dy2), std::move(big_h), best, best_tid, best_fit};
}

inline BoundReport transfer_bound(const DASetting& s, int g_idx, bool reduce_h_constancy,
                                  int workers) {
  if (s.kind != SettingKind::domain_transfer)
    throw std::invalid_argument("compute_bound_dt: needs a domain_transfer setting");
  const auto& h2 = s.cls("H2");
  const Hypothesis& f = s.target("f");
  const auto& d1 = s.dist("D_1");
  const auto& y = s.target("y");
  const int dX = d1.dim();
  const int dF = f.output_dim();
  const double K = s.loss.triangle_constant_K;
  const double L2 = std::max(1.0, h2.declared_L());

  const TransferContext ctx = transfer_context(s);
  const Hypothesis h = compose(f, h2.member(g_idx));
  const Hypothesis& h_star = ctx.big_h.member(ctx.lambda_idx);
  const Hypothesis id = Hypothesis::identity(dX);
  const FiniteDistribution h_d1 = pushforward(h, d1);
  const DiscrepancyResult disc = measures::discrepancy(ctx.big_h, ctx.dy2, h_d1, s.loss, workers);
  auto comp = [](std::vector<Hypothesis> v) { return Hypothesis::composition(std::move(v)); };

  detail::Chain ch("R_D1[h,y]", rk(s, d1, h, y, dX));
  ch.node("R_D1[h.h,h]", rk(s, d1, comp({h, h}), h, dX));
  ch.node("R_D1[h.h,y]", rk(s, d1, comp({h, h}), y, dX));
  ch.node("R_hD1[h,h*]", rk(s, h_d1, h, h_star, dX));
  ch.node("R_D1[h*.h,y]", rk(s, d1, comp({h, h_star}), y, dX));
  ch.node("R_Dy2[h,h*]", rk(s, ctx.dy2, h, h_star, dX));
  ch.node("disc_H(Dy2,h.D1)", disc.value);
  ch.node("R_D1[h*.h,h*]", rk(s, d1, comp({h, h_star}), h_star, dX));
  ch.node("R_D1[h*,y]", ctx.lambda_fit);
  ch.node("R_D1[f.h,f]", rk(s, d1, comp({h, f}), f, dF));
  ch.node("R_Dy2[h,Id]", rk(s, ctx.dy2, h, id, dX));
  ch.node("R_Dy2[h*,Id]", ctx.lambda_tid);

  ch.step("dt.triangle_self", "R_D1[h,y]", {"R_D1[h.h,h]", "R_D1[h.h,y]"}, K);
  ch.step("dt.triangle_reference", "R_D1[h.h,y]", {"R_hD1[h,h*]", "R_D1[h*.h,y]"}, K);
  ch.step("dt.disc_transfer", "R_hD1[h,h*]", {"R_Dy2[h,h*]", "disc_H(Dy2,h.D1)"}, 1.0);
  ch.step("dt.triangle_pullback", "R_D1[h*.h,y]", {"R_D1[h*.h,h*]", "R_D1[h*,y]"}, K);
  ch.step("dt.reference_lipschitz", "R_D1[h*.h,h*]", {"R_D1[f.h,f]"}, L2);
  ch.step("dt.triangle_identity", "R_Dy2[h,h*]", {"R_Dy2[h,Id]", "R_Dy2[h*,Id]"}, K);
  if (reduce_h_constancy) {
    // R_D1[h.h,h] = R_D1[g.f.h, g.f] <= L2 * R_D1[f.h, f]
    ch.step("dtn.reduce_h_constancy", "R_D1[h.h,h]", {"R_D1[f.h,f]"}, L2);
    return ch.finish(setting_kind_name(s.kind),
                     {{"R_Dy2[h,Id]", {"R_Dy2[h,Id]"}},
                      {"R_D1[f.h,f]", {"R_D1[f.h,f]"}},
                      {"disc_H(Dy2,h.D1)", {"disc_H(Dy2,h.D1)"}},
                      {"lambda", {"R_Dy2[h*,Id]", "R_D1[h*,y]"}}});
  }
  return ch.finish(setting_kind_name(s.kind),
                   {{"R_Dy2[h,Id]", {"R_Dy2[h,Id]"}},
                    {"R_D1[h.h,h]", {"R_D1[h.h,h]"}},
                    {"R_D1[f.h,f]", {"R_D1[f.h,f]"}},
                    {"disc_H(Dy2,h.D1)", {"disc_H(Dy2,h.D1)"}},
                    {"lambda", {"R_Dy2[h*,Id]", "R_D1[h*,y]"}}});
}

}  // namespace detail

// five-term transfer bound: target-identity, self-constancy of h, feature
// constancy, discrepancy, and the enumerated lambda
inline BoundReport compute_bound_dt(const DASetting& s, int g_idx, int workers = 1) {
  return detail::transfer_bound(s, g_idx, false, workers);
}

// folded variant: the h-constancy term folds into feature constancy via the
// forward class constant
inline BoundReport compute_bound_dtn(const DASetting& s, int g_idx, int workers = 1) {
  return detail::transfer_bound(s, g_idx, true, workers);
}

// ---------- two-sided comparison ----------

struct TwoSidedQuad final {
  FiniteDistribution d11, d12, d21, d22;
};

// the four pushforwards compared by the two-sided inequality
inline TwoSidedQuad two_sided_quad(const DASetting& s, const Candidate& cand) {
  if (s.kind != SettingKind::two_sided)
    throw std::invalid_argument("two_sided_quad: needs a two_sided setting");
  const auto& h1 = s.cls("H1");
  const auto& h2 = s.cls("H2");
  const auto& h3 = s.cls("H3");
  const Hypothesis hyp1 = compose(h1.member(cand.at("f1")), h2.member(cand.at("g1")));
  const Hypothesis hyp2 = compose(h1.member(cand.at("f2")), h2.member(cand.at("g2")));
  const Hypothesis& a1 = h3.member(cand.at("a1"));
  const Hypothesis& a2 = h3.member(cand.at("a2"));
  const auto& d1 = s.dist("D_1");
  const auto& d2 = s.dist("D_2");
  return TwoSidedQuad{pushforward(a1, pushforward(hyp1, d1)), pushforward(a1, pushforward(s.target("y_1"), d1)),
                      pushforward(a2, pushforward(hyp2, d2)), pushforward(a2, pushforward(s.target("y_2"), d2))};
}

// pointwise steps of the reverse-triangle argument over the critic class
inline std::vector<ProofStepReport> disc_comparison_steps(const HypothesisClass& critic, const TwoSidedQuad& q,
                                                          const LossSpec& spec, int workers = 1) {
  const auto o11 = measures::detail::member_outputs(critic, q.d11);
  const auto o12 = measures::detail::member_outputs(critic, q.d12);
  const auto o21 = measures::detail::member_outputs(critic, q.d21);
  const auto o22 = measures::detail::member_outputs(critic, q.d22);
  double max_rev_gap = 0.0;   // max over pairs of ||U1|-|U2|| - |U1-U2|
  double max_abs_diff = 0.0;  // max over pairs of |U1-U2|
  double sup_u1 = 0.0, sup_u2 = 0.0;
  for (int i = 0; i < critic.size(); ++i)
    for (int j = 0; j < critic.size(); ++j) {
      const std::size_t a = std::size_t(i), b = std::size_t(j);
      const double u1 = measures::detail::pair_risk(o11[a], o11[b], q.d11.weights(), spec) -
                        measures::detail::pair_risk(o12[a], o12[b], q.d12.weights(), spec);
      const double u2 = measures::detail::pair_risk(o21[a], o21[b], q.d21.weights(), spec) -
                        measures::detail::pair_risk(o22[a], o22[b], q.d22.weights(), spec);
      max_rev_gap = std::max(max_rev_gap, std::fabs(std::fabs(u1) - std::fabs(u2)) - std::fabs(u1 - u2));
      max_abs_diff = std::max(max_abs_diff, std::fabs(u1 - u2));
      sup_u1 = std::max(sup_u1, std::fabs(u1));
      sup_u2 = std::max(sup_u2, std::fabs(u2));
    }
  const DiscrepancyResult disc1 = measures::discrepancy(critic, q.d11, q.d12, spec, workers);
  const DiscrepancyResult disc2 = measures::discrepancy(critic, q.d21, q.d22, spec, workers);
  const QuadDiscrepancyResult qd =
      measures::quad_discrepancy(critic, q.d11, q.d12, q.d21, q.d22, spec, workers);

  std::vector<ProofStepReport> steps;
  auto push = [&](const std::string& id, double lhs, double rhs, double tol) {
    steps.push_back(ProofStepReport{id, lhs, rhs, 1.0, lhs <= rhs + tol});
  };
  push("disc_comparison.pointwise_reverse_triangle", max_rev_gap, 0.0, kStepTolerance);
  push("disc_comparison.pointwise_sup", max_abs_diff, qd.value, kStepTolerance);
  push("disc_comparison.sup_is_disc_1", std::fabs(sup_u1 - disc1.value), 0.0, 1e-12);
  push("disc_comparison.sup_is_disc_2", std::fabs(sup_u2 - disc2.value), 0.0, 1e-12);
  push("disc_comparison.final", std::fabs(disc1.value - disc2.value), qd.value, kStepTolerance);
  return steps;
}

// |disc(D11,D12) - disc(D21,D22)| <= qdisc, plus the sum upper bound
inline BoundReport compute_bound_two_sided(const DASetting& s, const Candidate& cand, int workers = 1) {
  const TwoSidedQuad q = two_sided_quad(s, cand);
  const auto& critic = s.cls("H4");
  const LossSpec spec = s.loss.at_dimension(critic.output_dim());
  const DiscrepancyResult disc1 = measures::discrepancy(critic, q.d11, q.d12, spec, workers);
  const DiscrepancyResult disc2 = measures::discrepancy(critic, q.d21, q.d22, spec, workers);
  const QuadDiscrepancyResult qd =
      measures::quad_discrepancy(critic, q.d11, q.d12, q.d21, q.d22, spec, workers);

  BoundReport rep;
  rep.setting = setting_kind_name(s.kind);
  rep.lhs = std::fabs(disc1.value - disc2.value);
  rep.terms = {{"qdisc", qd.value}};
  rep.constant = 1.0;
  rep.rhs = qd.value;
  rep.slack = rep.rhs - rep.lhs;
  rep.steps = disc_comparison_steps(critic, q, spec, workers);
  rep.steps.push_back(ProofStepReport{"two_sided.sum_upper_bound", qd.value, disc1.value + disc2.value, 1.0,
                                      qd.value <= disc1.value + disc2.value + kStepTolerance});
  rep.pass = rep.lhs <= rep.rhs + kStepTolerance;
  for (const auto& st : rep.steps) rep.pass = rep.pass && st.pass;
  return rep;
}

// ---------- dispatch ----------

// bound ids applicable to a setting kind, in report order
inline std::vector<std::string> bound_ids_for(SettingKind kind) {
  switch (kind) {
    case SettingKind::standard_da: return {"mansour"};
    case SettingKind::binary_da: return {"bendavid"};
    case SettingKind::output_da: return {"oda"};
    case SettingKind::analogy_oda: return {"analogy"};
    case SettingKind::two_sided: return {"two_sided"};
    case SettingKind::domain_transfer: return {"dt", "dtn"};
  }
  throw std::logic_error("bound_ids_for: bad kind");
}

inline BoundReport compute_bound(const std::string& bound_id, const DASetting& s, const Candidate& cand,
                                 int workers = 1) {
  if (bound_id == "mansour") return compute_bound_mansour(s, cand.at("f"), cand.at("g"), workers);
  if (bound_id == "bendavid") return compute_bound_bendavid(s, cand.at("f"), cand.at("g"), workers);
  if (bound_id == "oda")
    return compute_bound_oda(s, cand.at("f"), cand.at("g"), cand.at("ghat"), workers);
  if (bound_id == "analogy")
    return compute_bound_analogy(s, cand.at("f"), cand.at("a"), cand.at("b"), workers);
  if (bound_id == "dt") return compute_bound_dt(s, cand.at("g"), workers);
  if (bound_id == "dtn") return compute_bound_dtn(s, cand.at("g"), workers);
  if (bound_id == "two_sided") return compute_bound_two_sided(s, cand, workers);
  throw std::invalid_argument("compute_bound: unknown bound id " + bound_id);
}

// step reports of a named proof script evaluated on a concrete setting/candidate
inline std::vector<ProofStepReport> verify_proof_script(const std::string& theorem_id, const DASetting& s,
                                                        const Candidate& cand, int workers = 1) {
  if (theorem_id == "disc_comparison") {
    const TwoSidedQuad q = two_sided_quad(s, cand);
    const auto& critic = s.cls("H4");
    return disc_comparison_steps(critic, q, s.loss.at_dimension(critic.output_dim()), workers);
  }
  return compute_bound(theorem_id, s, cand, workers).steps;
}

}  // namespace shiftbound::bounds
