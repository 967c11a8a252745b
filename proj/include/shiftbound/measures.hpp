#pragma once

#include <array>
#include <cstdint>
#include <thread>

#include "shiftbound/core.hpp"

namespace shiftbound::measures {

// ---------- risk ----------

struct RiskValue final {
  double value = 0.0;
};

// R_D[h1, h2] = sum_i w_i * l(h1(x_i), h2(x_i)); exact weighted sum in support order
inline RiskValue risk(const FiniteDistribution& d, const Hypothesis& h1, const Hypothesis& h2,
                      const LossSpec& spec) {
  if (h1.input_dim() != d.dim() || h2.input_dim() != d.dim())
    throw std::invalid_argument("risk: hypothesis input dimension != support dimension");
  double s = 0.0;
  for (int i = 0; i < d.size(); ++i) {
    const Point& x = d.support()[std::size_t(i)];
    s += d.weights()[std::size_t(i)] * loss(spec, evaluate(h1, x), evaluate(h2, x));
  }
  return RiskValue{s};
}

// unweighted mean of l over already-evaluated pairs
inline RiskValue empirical_risk(const std::vector<std::pair<Point, Point>>& samples, const LossSpec& spec) {
  if (samples.empty()) throw std::invalid_argument("empirical_risk: no samples");
  double s = 0.0;
  for (const auto& [a, b] : samples) s += loss(spec, a, b);
  return RiskValue{s / double(samples.size())};
}

// ---------- discrepancy ----------

namespace detail {

// per-member outputs over a support, evaluated once
inline std::vector<std::vector<Point>> member_outputs(const HypothesisClass& c, const FiniteDistribution& d) {
  std::vector<std::vector<Point>> out(std::size_t(c.size()));
  for (int m = 0; m < c.size(); ++m) {
    out[std::size_t(m)].reserve(std::size_t(d.size()));
    for (const auto& x : d.support()) out[std::size_t(m)].push_back(evaluate(c.member(m), x));
  }
  return out;
}

inline double pair_risk(const std::vector<Point>& a, const std::vector<Point>& b,
                        const std::vector<double>& w, const LossSpec& spec) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * loss(spec, a[i], b[i]);
  return s;
}

struct BestPair {
  double value = -1.0;
  int c1 = 0, c2 = 0;

  // maximize value; ties pick the lexicographically smallest (c1, c2)
  void offer(double v, int i, int j) {
    if (v > value || (v == value && (i < c1 || (i == c1 && j < c2)))) {
      value = v;
      c1 = i;
      c2 = j;
    }
  }
};

// deterministic parallel max over ordered member pairs: fixed chunking by pair
// index, per-chunk best, chunks merged in order. Identical to the sequential
// scan because per-pair values do not depend on the chunking.
template <typename PairValue>
BestPair best_over_pairs(int n_members, int workers, PairValue&& pair_value) {
  const std::int64_t total = std::int64_t(n_members) * n_members;
  if (workers < 1) workers = 1;
  if (std::int64_t(workers) > total) workers = int(total);
  std::vector<BestPair> partial(static_cast<std::size_t>(workers));
  auto run = [&](int w) {
    const std::int64_t lo = total * w / workers;
    const std::int64_t hi = total * (w + 1) / workers;
    BestPair best;
    for (std::int64_t p = lo; p < hi; ++p) {
      const int i = int(p / n_members);
      const int j = int(p % n_members);
      best.offer(pair_value(i, j), i, j);
    }
    partial[std::size_t(w)] = best;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  BestPair best;
  for (const auto& b : partial) best.offer(b.value, b.c1, b.c2);
  return best;
}

}  // namespace detail

struct DiscrepancyResult final {
  double value = 0.0;
  int witness_c1 = 0;
  int witness_c2 = 0;
};

// disc_C(D1, D2) = max over ordered member pairs (c1, c2) of
// |R_D1[c1, c2] - R_D2[c1, c2]|, exact enumeration including equal pairs
inline DiscrepancyResult discrepancy(const HypothesisClass& c, const FiniteDistribution& d1,
                                     const FiniteDistribution& d2, const LossSpec& spec, int workers = 1) {
  if (d1.dim() != c.input_dim() || d2.dim() != c.input_dim())
    throw std::invalid_argument("discrepancy: support dimension != class input dimension");
  if (c.output_dim() != spec.dimension)
    throw std::invalid_argument("discrepancy: class output dimension != LossSpec dimension");
  const auto out1 = detail::member_outputs(c, d1);
  const auto out2 = detail::member_outputs(c, d2);
  const auto best = detail::best_over_pairs(c.size(), workers, [&](int i, int j) {
    const double r1 = detail::pair_risk(out1[std::size_t(i)], out1[std::size_t(j)], d1.weights(), spec);
    const double r2 = detail::pair_risk(out2[std::size_t(i)], out2[std::size_t(j)], d2.weights(), spec);
    return std::fabs(r1 - r2);
  });
  return DiscrepancyResult{best.value, best.c1, best.c2};
}

struct QuadDiscrepancyResult final {
  double value = 0.0;
  int witness_c1 = 0;
  int witness_c2 = 0;
};

// q-disc over two distribution pairs: max over ordered member pairs of
// |U_{D11,D12} - U_{D21,D22}| with U_{A,B}[c1,c2] = R_A[c1,c2] - R_B[c1,c2]
inline QuadDiscrepancyResult quad_discrepancy(const HypothesisClass& c, const FiniteDistribution& d11,
                                              const FiniteDistribution& d12, const FiniteDistribution& d21,
                                              const FiniteDistribution& d22, const LossSpec& spec,
                                              int workers = 1) {
  for (const FiniteDistribution* d : {&d11, &d12, &d21, &d22})
    if (d->dim() != c.input_dim())
      throw std::invalid_argument("quad_discrepancy: support dimension != class input dimension");
  if (c.output_dim() != spec.dimension)
    throw std::invalid_argument("quad_discrepancy: class output dimension != LossSpec dimension");
  const auto o11 = detail::member_outputs(c, d11);
  const auto o12 = detail::member_outputs(c, d12);
  const auto o21 = detail::member_outputs(c, d21);
  const auto o22 = detail::member_outputs(c, d22);
  const auto best = detail::best_over_pairs(c.size(), workers, [&](int i, int j) {
    const std::size_t a = std::size_t(i), b = std::size_t(j);
    const double u1 = detail::pair_risk(o11[a], o11[b], d11.weights(), spec) -
                      detail::pair_risk(o12[a], o12[b], d12.weights(), spec);
    const double u2 = detail::pair_risk(o21[a], o21[b], d21.weights(), spec) -
                      detail::pair_risk(o22[a], o22[b], d22.weights(), spec);
    return std::fabs(u1 - u2);
  });
  return QuadDiscrepancyResult{best.value, best.c1, best.c2};
}

// ---------- symmetric difference class ----------

// All ordered-pair disagreement indicators x -> [c_i(x) != c_j(x)], size |C|^2,
// member order (i, j) with j fastest. Probes, when given, must witness binary
// {0,1} outputs for every member.
inline HypothesisClass symmetric_difference_class(const HypothesisClass& c,
                                                  const std::vector<Point>& probes = {}) {
  for (const auto& p : probes)
    for (int m = 0; m < c.size(); ++m) {
      const Point out = evaluate(c.member(m), p);
      for (int k = 0; k < out.dim(); ++k)
        if (out[k] != 0.0 && out[k] != 1.0)
          throw std::domain_error("symmetric_difference_class: non-binary member detected on a probe");
    }
  std::vector<Hypothesis> members;
  members.reserve(std::size_t(c.size()) * std::size_t(c.size()));
  for (int i = 0; i < c.size(); ++i)
    for (int j = 0; j < c.size(); ++j)
      members.push_back(Hypothesis::disagreement(c.member(i), c.member(j)));
  return HypothesisClass(std::move(members));
}

// mean of a scalar hypothesis under d
inline double expectation(const FiniteDistribution& d, const Hypothesis& h) {
  if (h.input_dim() != d.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  if (h.output_dim() != 1) throw std::invalid_argument("expectation: scalar outputs required");
  double s = 0.0;
  for (int i = 0; i < d.size(); ++i)
    s += d.weights()[std::size_t(i)] * evaluate(h, d.support()[std::size_t(i)])[0];
  return s;
}

// max over symmetric-difference members of |E_D1[d] - E_D2[d]|; for binary
// classes under zero_one loss this equals the discrepancy
inline DiscrepancyResult symmetric_difference_gap(const HypothesisClass& c, const FiniteDistribution& d1,
                                                  const FiniteDistribution& d2) {
  std::vector<Point> probes;
  probes.reserve(std::size_t(d1.size() + d2.size()));
  for (const auto& p : d1.support()) probes.push_back(p);
  for (const auto& p : d2.support()) probes.push_back(p);
  const HypothesisClass delta = symmetric_difference_class(c, probes);
  detail::BestPair best;
  for (int i = 0; i < c.size(); ++i)
    for (int j = 0; j < c.size(); ++j) {
      const Hypothesis& d = delta.member(i * c.size() + j);
      best.offer(std::fabs(expectation(d1, d) - expectation(d2, d)), i, j);
    }
  return DiscrepancyResult{best.value, best.c1, best.c2};
}

// ---------- empirical constants ----------

// largest ratio l(y1,y3) / (l(y1,y2) + l(y2,y3)) over probe triples; a lower
// bound on the minimal valid triangle constant K. Triples with zero numerator
// and denominator carry no information and are skipped; zero denominator with
// positive numerator rules out every finite K.
inline double estimate_K(const LossSpec& spec, const std::vector<std::array<Point, 3>>& triples) {
  if (triples.empty()) throw std::invalid_argument("estimate_K: no probe triples");
  double best = 0.0;
  for (const auto& t : triples) {
    const double num = loss(spec, t[0], t[2]);
    const double den = loss(spec, t[0], t[1]) + loss(spec, t[1], t[2]);
    if (den == 0.0) {
      if (num > 0.0) throw std::domain_error("estimate_K: zero denominator with positive numerator");
      continue;
    }
    if (num / den > best) best = num / den;
  }
  return best;
}

// largest ratio l(h(a1), h(a2)) / l(a1, a2) over probe pairs; a lower bound on
// the Lipschitz constant of h. A zero-distance pair with differing images is a
// non-Lipschitz witness.
inline double estimate_L(const Hypothesis& h, const LossSpec& spec,
                         const std::vector<std::pair<Point, Point>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("estimate_L: no probe pairs");
  const LossSpec in_spec = spec.at_dimension(h.input_dim());
  const LossSpec out_spec = spec.at_dimension(h.output_dim());
  double best = 0.0;
  bool informative = false;
  for (const auto& [a1, a2] : pairs) {
    const double den = loss(in_spec, a1, a2);
    const double num = loss(out_spec, evaluate(h, a1), evaluate(h, a2));
    if (den == 0.0) {
      if (num > 0.0) throw std::domain_error("estimate_L: zero input distance with differing images");
      continue;
    }
    informative = true;
    if (num / den > best) best = num / den;
  }
  if (!informative) throw std::invalid_argument("estimate_L: no informative probe pairs");
  return best;
}

}  // namespace shiftbound::measures
