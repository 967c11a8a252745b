#pragma once

// Exhaustive adaptation trainers over finite hypothesis classes.
//
// Each trainer consumes a *view* of the task that structurally omits the
// held-out target labeling function, enumerates every candidate in the
// relevant class product, scores a weighted training objective, and returns
// the lexicographically first strict minimizer together with a full trace of
// every candidate scored.  Target risk is evaluated afterwards against the
// complete task description, never during the search.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shiftbound/bounds.hpp"
#include "shiftbound/core.hpp"
#include "shiftbound/measures.hpp"
#include "shiftbound/scenarios.hpp"

namespace shiftbound::adapt {

using bounds::DASetting;
using bounds::SettingKind;
using scenarios::Scenario;

// Objective weights.  A weight of zero removes the term from the objective
// (its value is still reported for the chosen candidate).
struct Weights {
  double w_disc = 1.0;   // feature/output distribution mismatch
  double w_inv = 1.0;    // recovery-map inversion error (output-side setting)
  double w_tid = 1.0;    // target identity fit (domain-transfer setting)
  double w_const = 1.0;  // self-consistency penalties (domain-transfer setting)
};

struct TraceEntry {
  std::map<std::string, int> idx;
  double objective = 0.0;
};

struct TrainResult {
  std::string setting;
  std::map<std::string, int> chosen;
  std::map<std::string, double> objective_terms;
  double objective_value = 0.0;
  std::optional<double> target_risk;
  std::vector<TraceEntry> trace;
};

namespace detail {

// Running argmin with strict-< comparison: the first candidate (in trace
// order) achieving the minimum wins, which makes tie-breaking deterministic
// and lexicographic in the enumeration order.
struct Argmin {
  bool has = false;
  double best = 0.0;
  std::map<std::string, int> idx;

  bool offer(const std::map<std::string, int>& candidate, double value) {
    if (!has || value < best) {
      has = true;
      best = value;
      idx = candidate;
      return true;
    }
    return false;
  }
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("adapt: " + what);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Views: the data a trainer is allowed to see.
// ---------------------------------------------------------------------------

// Source/target feature alignment: labeled source, unlabeled target inputs.
struct StandardView {
  FiniteDistribution d_s;
  FiniteDistribution d_t;
  Hypothesis y_s;
  HypothesisClass h1;
  HypothesisClass h2;
  LossSpec loss;

  static StandardView from_setting(const DASetting& s) {
    detail::require(s.kind == SettingKind::standard_da || s.kind == SettingKind::binary_da,
                    "StandardView requires a source/target alignment task");
    return StandardView{s.dist("D_S"), s.dist("D_T"), s.target("y_S"),
                        s.cls("H1"),   s.cls("H2"),   s.loss};
  }
};

// Output-side adaptation: additionally sees the *distribution* of target
// outputs and a class of candidate recovery maps, but never the target
// labeling function itself.
struct OutputView {
  FiniteDistribution d_s;
  FiniteDistribution d_t;
  FiniteDistribution d_yt;  // distribution of target outputs
  Hypothesis y_s;
  HypothesisClass h1;
  HypothesisClass h2;
  HypothesisClass h2_prime;
  LossSpec loss;

  static OutputView from_setting(const DASetting& s) {
    detail::require(s.kind == SettingKind::output_da,
                    "OutputView requires an output-side adaptation task");
    return OutputView{s.dist("D_S"),
                      s.dist("D_T"),
                      pushforward(s.target("y_T"), s.dist("D_T")),
                      s.target("y_S"),
                      s.cls("H1"),
                      s.cls("H2"),
                      s.cls("H2_prime"),
                      s.loss};
  }
};

// Analogy-style adaptation: sees target output samples plus the adapter and
// critic classes (both invertible), never the target labeling function.
struct AnalogyView {
  FiniteDistribution d_s;
  FiniteDistribution d_t;
  FiniteDistribution d_yt;
  Hypothesis y_s;
  HypothesisClass h1;
  HypothesisClass h3;  // adapters, with inverse class attached
  HypothesisClass h4;  // references, with inverse class attached
  LossSpec loss;

  static AnalogyView from_setting(const DASetting& s) {
    detail::require(s.kind == SettingKind::analogy_oda,
                    "AnalogyView requires an analogy adaptation task");
    return AnalogyView{s.dist("D_S"),
                       s.dist("D_T"),
                       pushforward(s.target("y_T"), s.dist("D_T")),
                       s.target("y_S"),
                       s.cls("H1"),
                       s.cls("H3"),
                       s.cls("H4"),
                       s.loss};
  }
};

// Domain transfer: sees the input distribution, the *output* distribution of
// the reference labeling on the second domain, and the fixed encoder.
struct TransferView {
  FiniteDistribution d_1;
  FiniteDistribution d_y2;  // distribution of reference outputs on domain 2
  Hypothesis f;
  HypothesisClass h2;
  LossSpec loss;

  static TransferView from_setting(const DASetting& s) {
    detail::require(s.kind == SettingKind::domain_transfer,
                    "TransferView requires a domain transfer task");
    return TransferView{s.dist("D_1"), pushforward(s.target("y"), s.dist("D_2")),
                        s.target("f"), s.cls("H2"), s.loss};
  }
};

// ---------------------------------------------------------------------------
// Trainers.
// ---------------------------------------------------------------------------

// Minimizes  R_{D_S}[g.f, y_S] + w_disc * disc_{H2}(f.D_S, f.D_T)
// over (f, g) in H1 x H2.
inline TrainResult train_standard_da(const StandardView& v, const Weights& w = Weights{},
                                     int workers = 1) {
  TrainResult out;
  out.setting = "standard_da";
  out.trace.reserve(static_cast<std::size_t>(v.h1.size()) * static_cast<std::size_t>(v.h2.size()));

  detail::Argmin arg;
  std::map<std::string, double> best_terms;
  for (int fi = 0; fi < v.h1.size(); ++fi) {
    const Hypothesis& f = v.h1.member(fi);
    const FiniteDistribution f_ds = pushforward(f, v.d_s);
    const FiniteDistribution f_dt = pushforward(f, v.d_t);
    const double disc = measures::discrepancy(v.h2, f_ds, f_dt, v.loss, workers).value;
    for (int gi = 0; gi < v.h2.size(); ++gi) {
      const double src =
          measures::risk(v.d_s, compose(f, v.h2.member(gi)), v.y_s, v.loss).value;
      const double obj = src + w.w_disc * disc;
      const std::map<std::string, int> idx{{"f", fi},
                                           {"g", gi}};
      out.trace.push_back(TraceEntry{idx, obj});
      if (arg.offer(idx, obj)) best_terms = {{"source_risk", src}, {"disc", disc}};
    }
  }

  out.chosen = arg.idx;
  out.objective_terms = best_terms;
  out.objective_value = arg.best;
  return out;
}

// Minimizes  R_{D_S}[g.f, y_S] + w_disc * disc_{H2}(f.D_S, ghat.D_yT)
//          + w_inv * R_{D_yT}[g.ghat, Id]
// over (f, g, ghat) in H1 x H2 x H2'.
inline TrainResult train_output_da(const OutputView& v, const Weights& w = Weights{},
                                   int workers = 1) {
  TrainResult out;
  out.setting = "output_da";
  out.trace.reserve(static_cast<std::size_t>(v.h1.size()) * static_cast<std::size_t>(v.h2.size()) *
                    static_cast<std::size_t>(v.h2_prime.size()));

  const Hypothesis id_y = Hypothesis::identity(v.h2.output_dim());

  // Pushforwards of the target-output distribution through each recovery map.
  std::vector<FiniteDistribution> ghat_dyt;
  ghat_dyt.reserve(static_cast<std::size_t>(v.h2_prime.size()));
  for (int gh = 0; gh < v.h2_prime.size(); ++gh)
    ghat_dyt.push_back(pushforward(v.h2_prime.member(gh), v.d_yt));

  // Inversion error depends only on (g, ghat).
  std::vector<std::vector<double>> inv_err(
      static_cast<std::size_t>(v.h2.size()),
      std::vector<double>(static_cast<std::size_t>(v.h2_prime.size()), 0.0));
  for (int gi = 0; gi < v.h2.size(); ++gi)
    for (int gh = 0; gh < v.h2_prime.size(); ++gh)
      inv_err[gi][gh] =
          measures::risk(v.d_yt, compose(v.h2_prime.member(gh), v.h2.member(gi)), id_y, v.loss)
              .value;

  detail::Argmin arg;
  std::map<std::string, double> best_terms;
  for (int fi = 0; fi < v.h1.size(); ++fi) {
    const Hypothesis& f = v.h1.member(fi);
    const FiniteDistribution f_ds = pushforward(f, v.d_s);

    // Discrepancy depends only on (f, ghat).
    std::vector<double> disc(static_cast<std::size_t>(v.h2_prime.size()), 0.0);
    for (int gh = 0; gh < v.h2_prime.size(); ++gh)
      disc[gh] = measures::discrepancy(v.h2, f_ds, ghat_dyt[gh], v.loss, workers).value;

    for (int gi = 0; gi < v.h2.size(); ++gi) {
      const double src =
          measures::risk(v.d_s, compose(f, v.h2.member(gi)), v.y_s, v.loss).value;
      for (int gh = 0; gh < v.h2_prime.size(); ++gh) {
        const double obj = src + w.w_disc * disc[gh] + w.w_inv * inv_err[gi][gh];
        const std::map<std::string, int> idx{{"f", fi},
                                             {"g", gi},
                                             {"ghat", gh}};
        out.trace.push_back(TraceEntry{idx, obj});
        if (arg.offer(idx, obj))
          best_terms = {{"source_risk", src}, {"disc", disc[gh]}, {"inv", inv_err[gi][gh]}};
      }
    }
  }

  out.chosen = arg.idx;
  out.objective_terms = best_terms;
  out.objective_value = arg.best;
  return out;
}

// Minimizes  R_{D_S}[a.h, y_S] + w_disc * disc_{H4^{-1}}(a.D_yT, D_yS)
// over (f, a, b) in H1 x H3 x H4, where h = a^{-1}.b.f.
inline TrainResult train_analogy(const AnalogyView& v, const Weights& w = Weights{},
                                 int workers = 1) {
  detail::require(v.h3.inverse() != nullptr && v.h4.inverse() != nullptr,
                  "analogy training requires invertible adapter and reference classes");
  TrainResult out;
  out.setting = "analogy_oda";
  out.trace.reserve(static_cast<std::size_t>(v.h1.size()) * static_cast<std::size_t>(v.h3.size()) *
                    static_cast<std::size_t>(v.h4.size()));

  const FiniteDistribution d_ys = pushforward(v.y_s, v.d_s);
  const HypothesisClass& h4_inv = *v.h4.inverse();
  const LossSpec critic_loss = v.loss.at_dimension(h4_inv.output_dim());

  // Discrepancy depends only on the adapter.
  std::vector<double> disc_a(static_cast<std::size_t>(v.h3.size()), 0.0);
  for (int ai = 0; ai < v.h3.size(); ++ai) {
    const FiniteDistribution a_dyt = pushforward(v.h3.member(ai), v.d_yt);
    disc_a[ai] = measures::discrepancy(h4_inv, a_dyt, d_ys, critic_loss, workers).value;
  }

  detail::Argmin arg;
  std::map<std::string, double> best_terms;
  for (int fi = 0; fi < v.h1.size(); ++fi) {
    const Hypothesis& f = v.h1.member(fi);
    for (int ai = 0; ai < v.h3.size(); ++ai) {
      const Hypothesis& a = v.h3.member(ai);
      const Hypothesis& a_inv = v.h3.inverse()->member(ai);
      for (int bi = 0; bi < v.h4.size(); ++bi) {
        const Hypothesis h = Hypothesis::composition({f, v.h4.member(bi), a_inv});
        const double src =
            measures::risk(v.d_s, Hypothesis::composition({h, a}), v.y_s, v.loss).value;
        const double obj = src + w.w_disc * disc_a[ai];
        const std::map<std::string, int> idx{{"f", fi},
                                             {"a", ai},
                                             {"b", bi}};
        out.trace.push_back(TraceEntry{idx, obj});
        if (arg.offer(idx, obj)) best_terms = {{"source_risk", src}, {"disc", disc_a[ai]}};
      }
    }
  }

  out.chosen = arg.idx;
  out.objective_terms = best_terms;
  out.objective_value = arg.best;
  return out;
}

// Minimizes  w_tid * R_{D_y2}[h, Id] + w_disc * disc_{f.H2}(D_y2, h.D_1)
//          + w_const * (R_{D_1}[h.h, h] + R_{D_1}[f.h, f])
// over g in H2, where h = g.f.
inline TrainResult train_domain_transfer(const TransferView& v, const Weights& w = Weights{},
                                         int workers = 1) {
  TrainResult out;
  out.setting = "domain_transfer";
  out.trace.reserve(static_cast<std::size_t>(v.h2.size()));

  const int dX = v.loss.dimension;
  const Hypothesis id_x = Hypothesis::identity(dX);
  const HypothesisClass big_h = bounds::detail::composed_transfer_class(v.f, v.h2);
  const LossSpec feat_loss = v.loss.at_dimension(v.h2.input_dim());

  detail::Argmin arg;
  std::map<std::string, double> best_terms;
  for (int gi = 0; gi < v.h2.size(); ++gi) {
    const Hypothesis& h = big_h.member(gi);
    const double tid = measures::risk(v.d_y2, h, id_x, v.loss).value;
    const double disc =
        measures::discrepancy(big_h, v.d_y2, pushforward(h, v.d_1), v.loss, workers).value;
    const double h_const =
        measures::risk(v.d_1, Hypothesis::composition({h, h}), h, v.loss).value;
    const double f_const =
        measures::risk(v.d_1, Hypothesis::composition({h, v.f}), v.f, feat_loss).value;
    const double obj = w.w_tid * tid + w.w_disc * disc + w.w_const * (h_const + f_const);
    const std::map<std::string, int> idx{{"g", gi}};
    out.trace.push_back(TraceEntry{idx, obj});
    if (arg.offer(idx, obj))
      best_terms = {{"tid", tid}, {"disc", disc}, {"h_const", h_const}, {"f_const", f_const}};
  }

  out.chosen = arg.idx;
  out.objective_terms = best_terms;
  out.objective_value = arg.best;
  return out;
}

// ---------------------------------------------------------------------------
// Post-hoc evaluation and dispatch.
// ---------------------------------------------------------------------------

// Risk of the chosen candidate against the held-out target labeling.
inline double target_risk_of(const DASetting& s, const std::map<std::string, int>& chosen) {
  const auto idx = [&](const char* key) {
    const auto it = chosen.find(key);
    detail::require(it != chosen.end(), std::string("missing chosen index ") + key);
    return static_cast<std::size_t>(it->second);
  };
  switch (s.kind) {
    case SettingKind::standard_da:
    case SettingKind::binary_da:
    case SettingKind::output_da: {
      const Hypothesis h = compose(s.cls("H1").member(idx("f")), s.cls("H2").member(idx("g")));
      return measures::risk(s.dist("D_T"), h, s.target("y_T"), s.loss).value;
    }
    case SettingKind::analogy_oda: {
      const Hypothesis h = Hypothesis::composition({s.cls("H1").member(idx("f")),
                                                    s.cls("H4").member(idx("b")),
                                                    s.cls("H3").inverse()->member(idx("a"))});
      return measures::risk(s.dist("D_T"), h, s.target("y_T"), s.loss).value;
    }
    case SettingKind::domain_transfer: {
      const Hypothesis h = compose(s.target("f"), s.cls("H2").member(idx("g")));
      return measures::risk(s.dist("D_1"), h, s.target("y"), s.loss).value;
    }
    case SettingKind::two_sided:
      throw std::invalid_argument("adapt: the two-sided setting has no trainer");
  }
  throw std::logic_error("adapt: unreachable setting kind");
}

// Trains the appropriate objective for the scenario's setting and fills in
// the held-out target risk afterwards.
inline TrainResult train(const Scenario& sc, const Weights& w = Weights{}, int workers = 1) {
  TrainResult r;
  switch (sc.setting.kind) {
    case SettingKind::standard_da:
    case SettingKind::binary_da:
      r = train_standard_da(StandardView::from_setting(sc.setting), w, workers);
      r.setting = bounds::setting_kind_name(sc.setting.kind);
      break;
    case SettingKind::output_da:
      r = train_output_da(OutputView::from_setting(sc.setting), w, workers);
      break;
    case SettingKind::analogy_oda:
      r = train_analogy(AnalogyView::from_setting(sc.setting), w, workers);
      break;
    case SettingKind::domain_transfer:
      r = train_domain_transfer(TransferView::from_setting(sc.setting), w, workers);
      break;
    case SettingKind::two_sided:
      throw std::invalid_argument("adapt: the two-sided setting has no trainer");
  }
  r.target_risk = target_risk_of(sc.setting, r.chosen);
  return r;
}

// Source-fit-only weights: every auxiliary objective term switched off (for
// the domain-transfer setting, only the target identity term remains).
inline Weights erm_weights() {
  Weights w;
  w.w_disc = 0.0;
  w.w_inv = 0.0;
  w.w_const = 0.0;
  w.w_tid = 1.0;
  return w;
}

// Checks that the recorded trace is internally consistent with the reported
// choice: the chosen candidate is the first strict minimizer in trace order
// and its objective matches objective_value bit for bit.
inline bool audit_trace(const TrainResult& r) {
  if (r.trace.empty()) return false;
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    if (r.trace[i].objective < r.trace[best].objective) best = i;
  return r.trace[best].idx == r.chosen && r.trace[best].objective == r.objective_value;
}

}  // namespace shiftbound::adapt
