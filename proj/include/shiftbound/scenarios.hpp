#pragma once

#include "shiftbound/bounds.hpp"
#include "shiftbound/rng.hpp"

namespace shiftbound::scenarios {

using bounds::DASetting;
using bounds::SettingKind;

// ---------- configuration ----------

struct ScenarioConfig final {
  SettingKind kind = SettingKind::standard_da;
  std::uint64_t seed = 42;
  int support_size = 64;
  int input_dim = 2;
  int feature_dim = 2;
  int output_dim = 1;
  int h1_size = 8;
  int h2_size = 32;
  int h2_prime_size = 32;
  int h3_size = 8;
  int h4_size = 16;
  LossKind loss = LossKind::absolute;
  double shift = 0.5;
  bool realizable = true;
};

inline std::uint64_t default_seed_for(SettingKind kind) {
  switch (kind) {
    case SettingKind::standard_da: return 42;
    case SettingKind::binary_da: return 7;
    case SettingKind::output_da: return 1;
    case SettingKind::analogy_oda: return 3;
    case SettingKind::two_sided: return 5;
    case SettingKind::domain_transfer: return 11;
  }
  throw std::logic_error("default_seed_for: bad kind");
}

// some settings pin dimensions to each other; returns the config actually built
inline ScenarioConfig effective_config(ScenarioConfig cfg) {
  switch (cfg.kind) {
    case SettingKind::binary_da:
      cfg.output_dim = 1;
      cfg.loss = LossKind::zero_one;
      break;
    case SettingKind::output_da:
      cfg.output_dim = 1;  // the exact affine right-inverse needs scalar outputs
      break;
    case SettingKind::analogy_oda:
      cfg.feature_dim = cfg.output_dim;
      break;
    case SettingKind::domain_transfer:
      cfg.output_dim = cfg.input_dim;
      cfg.feature_dim = cfg.input_dim;
      break;
    default: break;
  }
  return cfg;
}

inline void validate_config(const ScenarioConfig& cfg) {
  auto positive = [](const char* what, int v, int hi) {
    if (v < 1 || v > hi)
      throw std::invalid_argument(std::string("scenario config: ") + what + " must be in [1, " +
                                  std::to_string(hi) + "]");
  };
  positive("support_size", cfg.support_size, 512);
  positive("input_dim", cfg.input_dim, 8);
  positive("feature_dim", cfg.feature_dim, 8);
  positive("output_dim", cfg.output_dim, 8);
  positive("h1_size", cfg.h1_size, 4096);
  positive("h2_size", cfg.h2_size, 4096);
  positive("h2_prime_size", cfg.h2_prime_size, 4096);
  positive("h3_size", cfg.h3_size, 4096);
  positive("h4_size", cfg.h4_size, 4096);
  if (!std::isfinite(cfg.shift) || cfg.shift < 0.0)
    throw std::invalid_argument("scenario config: shift must be finite and >= 0");
  const double budget = double(cfg.h2_size) * double(cfg.h2_size) * double(cfg.support_size);
  if (budget > 1e8)
    throw std::invalid_argument("scenario config: |H2|^2 * support_size exceeds the 1e8 budget");
}

// ---------- scenario ----------

struct Scenario final {
  ScenarioConfig config;  // post-coupling
  DASetting setting;
  std::map<std::string, int> planted;  // indices used to construct targets, when realizable
};

// ---------- low-level builders ----------

namespace detail {

inline double dyadic(SplitMix64& rng, int numerator_range, double denom) {
  const std::int64_t k = std::int64_t(rng.next_below(std::uint64_t(2 * numerator_range + 1))) -
                         numerator_range;
  return double(k) / denom;
}

inline std::vector<Point> halton_support(SplitMix64& rng, int n, int dim, double lo, double hi) {
  const std::uint64_t start = 1 + rng.next_below(4096);
  std::vector<Point> pts;
  pts.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> c(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a)
      c[std::size_t(a)] = lo + (hi - lo) * halton(start + std::uint64_t(i), halton_base(a));
    pts.emplace_back(std::move(c));
  }
  return pts;
}

// uniform-ish weights in [0.5, 1.5]/n; the last entry absorbs the rounding
// residual so the total is exactly 1.0
inline std::vector<double> normalized_weights(SplitMix64& rng, int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  double total = 0.0;
  for (auto& v : w) {
    v = rng.next_in(0.5, 1.5);
    total += v;
  }
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    w[i] /= total;
    partial += w[i];
  }
  w.back() = 1.0 - partial;
  if (!(w.back() > 0.0)) throw std::logic_error("normalized_weights: residual weight not positive");
  return w;
}

inline FiniteDistribution translate(const FiniteDistribution& d, const std::vector<double>& delta) {
  std::vector<Point> pts;
  pts.reserve(std::size_t(d.size()));
  for (const auto& p : d.support()) {
    std::vector<double> c(p.coords());
    for (std::size_t a = 0; a < c.size(); ++a) c[a] += delta[a];
    pts.emplace_back(std::move(c));
  }
  return FiniteDistribution(std::move(pts), d.weights());
}

inline std::vector<double> shift_vector(SplitMix64& rng, int dim, double shift) {
  std::vector<double> u(std::size_t(dim), 0.0);
  if (shift == 0.0) return u;
  double norm2 = 0.0;
  for (auto& v : u) {
    v = rng.next_in(-1.0, 1.0);
    norm2 += v * v;
  }
  if (norm2 < 1e-12) {
    u.assign(std::size_t(dim), 0.0);
    u[0] = 1.0;
    norm2 = 1.0;
  }
  const double scale = shift / std::sqrt(norm2);
  for (auto& v : u) v *= scale;
  return u;
}

inline double max_column_abs_sum(const std::vector<std::vector<double>>& w) {
  double best = 0.0;
  for (std::size_t j = 0; j < w[0].size(); ++j) {
    double s = 0.0;
    for (const auto& row : w) s += std::fabs(row[j]);
    best = std::max(best, s);
  }
  return best;
}

// dyadic entries in [-1,1] step 1/8, halved until the operator norm bound fits
inline std::vector<std::vector<double>> dyadic_matrix(SplitMix64& rng, int rows, int cols, double cap) {
  std::vector<std::vector<double>> w(static_cast<std::size_t>(rows),
                                     std::vector<double>(static_cast<std::size_t>(cols)));
  for (auto& row : w)
    for (auto& v : row) v = dyadic(rng, 8, 8.0);
  if (max_column_abs_sum(w) == 0.0) w[0][0] = 0.5;
  while (max_column_abs_sum(w) > cap)
    for (auto& row : w)
      for (auto& v : row) v *= 0.5;
  return w;
}

inline std::vector<double> dyadic_offset(SplitMix64& rng, int dim) {
  std::vector<double> b(static_cast<std::size_t>(dim));
  for (auto& v : b) v = dyadic(rng, 8, 8.0);
  return b;
}

inline Hypothesis random_affine(SplitMix64& rng, int in, int out, double cap) {
  return Hypothesis::affine(dyadic_matrix(rng, out, in, cap), dyadic_offset(rng, out));
}

inline Hypothesis random_prelu_net(SplitMix64& rng, int in, int out) {
  static constexpr double kAlphas[4] = {0.0, 0.25, 0.5, 1.0};
  const int hidden = std::max(in, out) + 1;
  PreluLayer l1{dyadic_matrix(rng, hidden, in, 2.0), kAlphas[rng.next_below(4)]};
  PreluLayer l2{dyadic_matrix(rng, out, hidden, 2.0), 1.0};
  return Hypothesis::prelu_net({std::move(l1), std::move(l2)});
}

inline double class_constant(const std::vector<Hypothesis>& members, LossKind kind) {
  double best = 0.0;
  for (const auto& m : members) best = std::max(best, lipschitz_upper_bound(m, kind));
  return best;
}

inline HypothesisClass prelu_class(SplitMix64& rng, int n, int in, int out, LossKind kind) {
  std::vector<Hypothesis> members;
  members.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) members.push_back(random_prelu_net(rng, in, out));
  const double L = class_constant(members, kind);
  return HypothesisClass(std::move(members), L);
}

inline HypothesisClass affine_class(SplitMix64& rng, int n, int in, int out, LossKind kind, double cap) {
  std::vector<Hypothesis> members;
  members.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) members.push_back(random_affine(rng, in, out, cap));
  const double L = class_constant(members, kind);
  return HypothesisClass(std::move(members), L);
}

// upper-triangular affine map with power-of-two diagonals and dyadic
// off-diagonals/offsets, plus its exact closed-form inverse
struct InvertiblePair {
  Hypothesis forward;
  Hypothesis inverse;
};

inline InvertiblePair triangular_invertible(SplitMix64& rng, int dim) {
  std::vector<std::vector<double>> w(std::size_t(dim), std::vector<double>(std::size_t(dim), 0.0));
  for (int i = 0; i < dim; ++i) {
    w[std::size_t(i)][std::size_t(i)] = std::ldexp(1.0, int(rng.next_below(3)) - 1);  // 1/2, 1, 2
    for (int j = i + 1; j < dim; ++j) w[std::size_t(i)][std::size_t(j)] = dyadic(rng, 4, 8.0);
  }
  std::vector<double> b(static_cast<std::size_t>(dim));
  for (auto& v : b) v = dyadic(rng, 8, 4.0);

  // back substitution; every entry stays a short dyadic, so it is exact
  std::vector<std::vector<double>> inv(std::size_t(dim), std::vector<double>(std::size_t(dim), 0.0));
  for (int i = dim - 1; i >= 0; --i) {
    const double di = 1.0 / w[std::size_t(i)][std::size_t(i)];
    inv[std::size_t(i)][std::size_t(i)] = di;
    for (int j = i + 1; j < dim; ++j) {
      double acc = 0.0;
      for (int k = i + 1; k <= j; ++k) acc += w[std::size_t(i)][std::size_t(k)] * inv[std::size_t(k)][std::size_t(j)];
      inv[std::size_t(i)][std::size_t(j)] = -di * acc;
    }
  }
  std::vector<double> b_inv(std::size_t(dim), 0.0);
  for (int i = 0; i < dim; ++i) {
    double acc = 0.0;
    for (int j = 0; j < dim; ++j) acc += inv[std::size_t(i)][std::size_t(j)] * b[std::size_t(j)];
    b_inv[std::size_t(i)] = -acc;
  }
  return InvertiblePair{Hypothesis::affine(std::move(w), std::move(b)),
                        Hypothesis::affine(std::move(inv), std::move(b_inv))};
}

struct InvertibleClassPair {
  HypothesisClass forward;
  std::shared_ptr<const HypothesisClass> inverse;
};

inline InvertibleClassPair triangular_class(SplitMix64& rng, int n, int dim, LossKind kind,
                                            std::optional<InvertiblePair> first = std::nullopt) {
  std::vector<Hypothesis> fwd, inv;
  fwd.reserve(std::size_t(n));
  inv.reserve(std::size_t(n));
  if (first) {
    fwd.push_back(first->forward);
    inv.push_back(first->inverse);
  }
  while (int(fwd.size()) < n) {
    InvertiblePair p = triangular_invertible(rng, dim);
    fwd.push_back(std::move(p.forward));
    inv.push_back(std::move(p.inverse));
  }
  const double l_fwd = class_constant(fwd, kind);
  const double l_inv = class_constant(inv, kind);
  auto inverse = std::make_shared<HypothesisClass>(std::move(inv), l_inv);
  return InvertibleClassPair{HypothesisClass(std::move(fwd), l_fwd, inverse), inverse};
}

// exact affine right inverse of a scalar-output affine map w.z + c:
// y -> w^T (y - c) / |w|^2, so g(ghat(y)) = y up to rounding
inline Hypothesis affine_right_inverse(const Hypothesis& g) {
  const auto& form = std::get<AffineForm>(g.form());
  if (form.weight.size() != 1) throw std::logic_error("affine_right_inverse: needs scalar output");
  const auto& w = form.weight[0];
  double norm2 = 0.0;
  for (double v : w) norm2 += v * v;
  if (norm2 < 1e-12) throw std::logic_error("affine_right_inverse: zero weight row");
  std::vector<std::vector<double>> u(w.size(), std::vector<double>(1));
  std::vector<double> v(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    u[i][0] = w[i] / norm2;
    v[i] = -form.offset[0] * w[i] / norm2;
  }
  return Hypothesis::affine(std::move(u), std::move(v));
}

// scalar-output affine maps with a weight row bounded away from zero, so the
// right inverse is well conditioned
inline Hypothesis random_scalar_affine(SplitMix64& rng, int in, double cap) {
  std::vector<std::vector<double>> w = dyadic_matrix(rng, 1, in, cap);
  if (max_column_abs_sum(w) < 0.25) w[0][0] = 0.5;
  std::vector<double> b = dyadic_offset(rng, 1);
  return Hypothesis::affine(std::move(w), std::move(b));
}

inline FiniteDistribution union_support(const std::vector<const FiniteDistribution*>& ds) {
  std::vector<Point> pts;
  std::map<Point, bool, PointLess> seen;
  std::size_t total = 0;
  for (const auto* d : ds) total += std::size_t(d->size());
  pts.reserve(total);
  for (const auto* d : ds)
    for (const auto& p : d->support())
      if (seen.emplace(p, true).second) pts.push_back(p);
  std::vector<double> w(pts.size(), 0.0);
  const double uniform = 1.0 / double(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) w[i] = uniform;
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) partial += w[i];
  w.back() = 1.0 - partial;
  return FiniteDistribution(std::move(pts), std::move(w));
}

}  // namespace detail

// ---------- per-kind generators ----------

namespace detail {

struct DomainPair {
  FiniteDistribution d_s;
  FiniteDistribution d_t;
};

inline DomainPair make_domains(SplitMix64& root, const ScenarioConfig& cfg) {
  SplitMix64 rng_support = root.fork(1);
  SplitMix64 rng_shift = root.fork(2);
  std::vector<Point> pts = halton_support(rng_support, cfg.support_size, cfg.input_dim, -1.0, 1.0);
  std::vector<double> w = normalized_weights(rng_support, cfg.support_size);
  FiniteDistribution d_s(std::move(pts), std::move(w));
  const std::vector<double> delta = shift_vector(rng_shift, cfg.input_dim, cfg.shift);
  FiniteDistribution d_t = translate(d_s, delta);
  return DomainPair{std::move(d_s), std::move(d_t)};
}

inline Scenario gen_source_target(const ScenarioConfig& cfg) {
  SplitMix64 root(cfg.seed);
  DomainPair dom = make_domains(root, cfg);
  SplitMix64 rng_h1 = root.fork(3);
  SplitMix64 rng_h2 = root.fork(4);
  SplitMix64 rng_targets = root.fork(5);

  HypothesisClass h1 = prelu_class(rng_h1, cfg.h1_size, cfg.input_dim, cfg.feature_dim, cfg.loss);
  HypothesisClass h2 =
      affine_class(rng_h2, cfg.h2_size, cfg.feature_dim, cfg.output_dim, cfg.loss, 2.0);

  Scenario sc;
  sc.config = cfg;
  sc.setting.kind = cfg.kind;
  sc.setting.loss = LossSpec::make(cfg.loss, cfg.output_dim);
  sc.setting.distributions.emplace("D_S", dom.d_s);
  sc.setting.distributions.emplace("D_T", dom.d_t);

  const int f_idx = int(rng_targets.next_below(std::uint64_t(h1.size())));
  const int gs_idx = int(rng_targets.next_below(std::uint64_t(h2.size())));
  const int gt_idx = int(rng_targets.next_below(std::uint64_t(h2.size())));
  Hypothesis y_s = cfg.realizable
                       ? compose(h1.member(f_idx), h2.member(gs_idx))
                       : compose(random_prelu_net(rng_targets, cfg.input_dim, cfg.feature_dim),
                                 random_affine(rng_targets, cfg.feature_dim, cfg.output_dim, 2.0));
  Hypothesis y_t = cfg.realizable
                       ? compose(h1.member(f_idx), h2.member(gt_idx))
                       : compose(random_prelu_net(rng_targets, cfg.input_dim, cfg.feature_dim),
                                 random_affine(rng_targets, cfg.feature_dim, cfg.output_dim, 2.0));
  sc.planted = {{"f", f_idx}, {"g_S", gs_idx}, {"g_T", gt_idx}};
  sc.setting.targets.emplace("y_S", std::move(y_s));
  sc.setting.targets.emplace("y_T", std::move(y_t));
  sc.setting.classes.emplace("H1", std::move(h1));
  sc.setting.classes.emplace("H2", std::move(h2));
  return sc;
}

inline Scenario gen_standard(const ScenarioConfig& cfg) { return gen_source_target(cfg); }

inline Scenario gen_binary(const ScenarioConfig& cfg) {
  SplitMix64 root(cfg.seed);
  DomainPair dom = make_domains(root, cfg);
  SplitMix64 rng_h1 = root.fork(3);
  SplitMix64 rng_h2 = root.fork(4);
  SplitMix64 rng_targets = root.fork(5);

  HypothesisClass h1 = prelu_class(rng_h1, cfg.h1_size, cfg.input_dim, cfg.feature_dim, cfg.loss);

  // reachable feature points: every member image of every support point
  std::vector<Point> reachable;
  std::map<Point, bool, PointLess> seen;
  for (int m = 0; m < h1.size(); ++m)
    for (const FiniteDistribution* d : {&dom.d_s, &dom.d_t})
      for (const auto& x : d->support()) {
        Point z = evaluate(h1.member(m), x);
        if (seen.emplace(z, true).second) reachable.push_back(std::move(z));
      }

  // binary predictors: affine threshold rules materialized as total tables
  auto threshold_table = [&](SplitMix64& rng) {
    std::vector<std::vector<double>> w = dyadic_matrix(rng, 1, cfg.feature_dim, 2.0);
    const double c = dyadic(rng, 8, 8.0);
    std::vector<std::pair<Point, Point>> entries;
    entries.reserve(reachable.size());
    for (const auto& z : reachable) {
      double score = c;
      for (int a = 0; a < cfg.feature_dim; ++a) score += w[0][std::size_t(a)] * z[a];
      entries.emplace_back(z, Point::scalar(score >= 0.0 ? 1.0 : 0.0));
    }
    return Hypothesis::table(cfg.feature_dim, 1, std::move(entries));
  };
  std::vector<Hypothesis> h2_members;
  h2_members.reserve(std::size_t(cfg.h2_size));
  for (int i = 0; i < cfg.h2_size; ++i) h2_members.push_back(threshold_table(rng_h2));
  const double l2 = class_constant(h2_members, cfg.loss);
  HypothesisClass h2(std::move(h2_members), l2);

  Scenario sc;
  sc.config = cfg;
  sc.setting.kind = cfg.kind;
  sc.setting.loss = LossSpec::zero_one();
  sc.setting.distributions.emplace("D_S", dom.d_s);
  sc.setting.distributions.emplace("D_T", dom.d_t);

  // shared labeling: a threshold rule on the inputs, independent of H1
  std::vector<std::vector<double>> wy = dyadic_matrix(rng_targets, 1, cfg.input_dim, 2.0);
  const double cy = dyadic(rng_targets, 8, 8.0);
  std::vector<std::pair<Point, Point>> y_entries;
  for (const FiniteDistribution* d : {&dom.d_s, &dom.d_t})
    for (const auto& x : d->support()) {
      double score = cy;
      for (int a = 0; a < cfg.input_dim; ++a) score += wy[0][std::size_t(a)] * x[a];
      Point label = Point::scalar(score >= 0.0 ? 1.0 : 0.0);
      y_entries.emplace_back(x, std::move(label));
    }
  // duplicate keys (shift 0) carry identical values; dedupe for the table
  std::map<Point, Point, PointLess> dedup;
  for (auto& [k, v] : y_entries) dedup.emplace(k, v);
  std::vector<std::pair<Point, Point>> unique_entries(dedup.begin(), dedup.end());
  Hypothesis y = Hypothesis::table(cfg.input_dim, 1, std::move(unique_entries));
  sc.setting.targets.emplace("y_S", y);
  sc.setting.targets.emplace("y_T", y);
  sc.setting.classes.emplace("H1", std::move(h1));
  sc.setting.classes.emplace("H2", std::move(h2));
  return sc;
}

inline Scenario gen_output(const ScenarioConfig& cfg) {
  SplitMix64 root(cfg.seed);
  DomainPair dom = make_domains(root, cfg);
  SplitMix64 rng_h1 = root.fork(3);
  SplitMix64 rng_h2 = root.fork(4);
  SplitMix64 rng_h2p = root.fork(5);
  SplitMix64 rng_targets = root.fork(6);

  HypothesisClass h1 = prelu_class(rng_h1, cfg.h1_size, cfg.input_dim, cfg.feature_dim, cfg.loss);
  std::vector<Hypothesis> h2_members;
  h2_members.reserve(std::size_t(cfg.h2_size));
  for (int i = 0; i < cfg.h2_size; ++i)
    h2_members.push_back(random_scalar_affine(rng_h2, cfg.feature_dim, 2.0));

  // recovery class: exact right inverses of the forward members, then filler
  std::vector<Hypothesis> h2p_members;
  h2p_members.reserve(std::size_t(cfg.h2_prime_size));
  for (int i = 0; i < cfg.h2_prime_size && i < int(h2_members.size()); ++i)
    h2p_members.push_back(affine_right_inverse(h2_members[std::size_t(i)]));
  while (int(h2p_members.size()) < cfg.h2_prime_size)
    h2p_members.push_back(random_affine(rng_h2p, cfg.output_dim, cfg.feature_dim, 2.0));

  HypothesisClass h2(h2_members, class_constant(h2_members, cfg.loss));
  HypothesisClass h2p(h2p_members, class_constant(h2p_members, cfg.loss));

  Scenario sc;
  sc.config = cfg;
  sc.setting.kind = cfg.kind;
  sc.setting.loss = LossSpec::make(cfg.loss, cfg.output_dim);
  sc.setting.distributions.emplace("D_S", dom.d_s);
  sc.setting.distributions.emplace("D_T", dom.d_t);

  const int f_idx = int(rng_targets.next_below(std::uint64_t(h1.size())));
  const int gs_idx = int(rng_targets.next_below(std::uint64_t(h2.size())));
  // output-side shift: the target labeling differs from the source labeling
  // by the output map; with shift 0 the two labelings coincide
  const int gt_idx =
      cfg.shift == 0.0 ? gs_idx : int(rng_targets.next_below(std::uint64_t(h2.size())));
  Hypothesis y_s = cfg.realizable
                       ? compose(h1.member(f_idx), h2.member(gs_idx))
                       : compose(random_prelu_net(rng_targets, cfg.input_dim, cfg.feature_dim),
                                 random_scalar_affine(rng_targets, cfg.feature_dim, 2.0));
  Hypothesis y_t = cfg.realizable
                       ? compose(h1.member(f_idx), h2.member(gt_idx))
                       : compose(random_prelu_net(rng_targets, cfg.input_dim, cfg.feature_dim),
                                 random_scalar_affine(rng_targets, cfg.feature_dim, 2.0));
  sc.planted = {{"f", f_idx}, {"g_S", gs_idx}, {"g_T", gt_idx}, {"ghat", gt_idx}};
  sc.setting.targets.emplace("y_S", std::move(y_s));
  sc.setting.targets.emplace("y_T", std::move(y_t));
  sc.setting.classes.emplace("H1", std::move(h1));
  sc.setting.classes.emplace("H2", std::move(h2));
  sc.setting.classes.emplace("H2_prime", std::move(h2p));
  return sc;
}

inline Scenario gen_analogy(const ScenarioConfig& cfg) {
  SplitMix64 root(cfg.seed);
  DomainPair dom = make_domains(root, cfg);
  SplitMix64 rng_h1 = root.fork(3);
  SplitMix64 rng_h3 = root.fork(4);
  SplitMix64 rng_h4 = root.fork(5);
  SplitMix64 rng_targets = root.fork(6);

  const int dY = cfg.output_dim;  // feature_dim == output_dim under the coupling
  HypothesisClass h1 = prelu_class(rng_h1, cfg.h1_size, cfg.input_dim, dY, cfg.loss);
  InvertibleClassPair h4 = triangular_class(rng_h4, cfg.h4_size, dY, cfg.loss);

  const int f_idx = int(rng_targets.next_below(std::uint64_t(h1.size())));
  const int b_idx = int(rng_targets.next_below(std::uint64_t(h4.forward.size())));
  const Hypothesis& f0 = h1.member(f_idx);
  Hypothesis b_true = cfg.realizable ? h4.forward.member(b_idx)
                                     : triangular_invertible(rng_targets, dY).forward;
  Hypothesis pre = compose(f0, b_true);  // labels before the analogy offset

  // size the adapter offset from the measured label range so that the source
  // and target label images are disjoint intervals
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const FiniteDistribution* d : {&dom.d_s, &dom.d_t})
    for (const auto& x : d->support()) {
      const Point v = evaluate(pre, x);
      for (int a = 0; a < dY; ++a) {
        lo = std::min(lo, v[a]);
        hi = std::max(hi, v[a]);
      }
    }
  const double offset = std::floor(hi - lo) + 2.0;

  std::vector<std::vector<double>> eye(std::size_t(dY), std::vector<double>(std::size_t(dY), 0.0));
  for (int i = 0; i < dY; ++i) eye[std::size_t(i)][std::size_t(i)] = 1.0;
  InvertiblePair a_true{Hypothesis::affine(eye, std::vector<double>(std::size_t(dY), offset)),
                        Hypothesis::affine(eye, std::vector<double>(std::size_t(dY), -offset))};
  InvertibleClassPair h3 = triangular_class(rng_h3, cfg.h3_size, dY, cfg.loss, a_true);

  Hypothesis y_t = Hypothesis::composition({pre, a_true.inverse});
  Hypothesis y_s = Hypothesis::composition({y_t, a_true.forward});  // a_true o y_T, exactly

  Scenario sc;
  sc.config = cfg;
  sc.setting.kind = cfg.kind;
  sc.setting.loss = LossSpec::make(cfg.loss, dY);
  sc.setting.distributions.emplace("D_S", dom.d_s);
  sc.setting.distributions.emplace("D_T", dom.d_t);
  sc.planted = {{"f", f_idx}, {"a", 0}, {"b", b_idx}};
  sc.setting.targets.emplace("y_S", std::move(y_s));
  sc.setting.targets.emplace("y_T", std::move(y_t));

  // the composite forward class {a^-1 o b}: materialized for validation and
  // for bounds that reference H2 directly
  std::vector<Hypothesis> h2_members;
  h2_members.reserve(std::size_t(h3.forward.size()) * std::size_t(h4.forward.size()));
  for (int a = 0; a < h3.forward.size(); ++a)
    for (int b = 0; b < h4.forward.size(); ++b)
      h2_members.push_back(
          Hypothesis::composition({h4.forward.member(b), h3.inverse->member(a)}));
  HypothesisClass h2(h2_members, class_constant(h2_members, cfg.loss));

  sc.setting.classes.emplace("H1", std::move(h1));
  sc.setting.classes.emplace("H2", std::move(h2));
  sc.setting.classes.emplace("H3", std::move(h3.forward));
  sc.setting.classes.emplace("H4", std::move(h4.forward));
  return sc;
}

inline Scenario gen_two_sided(const ScenarioConfig& cfg) {
  SplitMix64 root(cfg.seed);
  DomainPair dom = make_domains(root, cfg);
  SplitMix64 rng_h1 = root.fork(3);
  SplitMix64 rng_h2 = root.fork(4);
  SplitMix64 rng_h3 = root.fork(5);
  SplitMix64 rng_h4 = root.fork(6);
  SplitMix64 rng_targets = root.fork(7);

  HypothesisClass h1 = prelu_class(rng_h1, cfg.h1_size, cfg.input_dim, cfg.feature_dim, cfg.loss);
  HypothesisClass h2 =
      affine_class(rng_h2, cfg.h2_size, cfg.feature_dim, cfg.output_dim, cfg.loss, 2.0);
  InvertibleClassPair h3 = triangular_class(rng_h3, cfg.h3_size, cfg.output_dim, cfg.loss);
  HypothesisClass h4 =
      affine_class(rng_h4, cfg.h4_size, cfg.output_dim, cfg.output_dim, cfg.loss, 2.0);

  Scenario sc;
  sc.config = cfg;
  sc.setting.kind = cfg.kind;
  sc.setting.loss = LossSpec::make(cfg.loss, cfg.output_dim);
  sc.setting.distributions.emplace("D_1", dom.d_s);
  sc.setting.distributions.emplace("D_2", dom.d_t);

  const int f1 = int(rng_targets.next_below(std::uint64_t(h1.size())));
  const int g1 = int(rng_targets.next_below(std::uint64_t(h2.size())));
  const int f2 = int(rng_targets.next_below(std::uint64_t(h1.size())));
  const int g2 = int(rng_targets.next_below(std::uint64_t(h2.size())));
  sc.planted = {{"f1", f1}, {"g1", g1}, {"f2", f2}, {"g2", g2}};
  sc.setting.targets.emplace("y_1", compose(h1.member(f1), h2.member(g1)));
  sc.setting.targets.emplace("y_2", compose(h1.member(f2), h2.member(g2)));
  sc.setting.classes.emplace("H1", std::move(h1));
  sc.setting.classes.emplace("H2", std::move(h2));
  sc.setting.classes.emplace("H3", std::move(h3.forward));
  sc.setting.classes.emplace("H4", std::move(h4));
  return sc;
}

inline Scenario gen_transfer(const ScenarioConfig& cfg) {
  SplitMix64 root(cfg.seed);
  SplitMix64 rng_support = root.fork(1);
  SplitMix64 rng_lift = root.fork(2);
  SplitMix64 rng_h2 = root.fork(3);
  SplitMix64 rng_f = root.fork(4);

  const int dX = cfg.input_dim;
  std::vector<Point> pts = halton_support(rng_support, cfg.support_size, dX, -1.0, 1.0);
  std::vector<double> w = normalized_weights(rng_support, cfg.support_size);
  FiniteDistribution d1(std::move(pts), std::move(w));

  // realizable: f projects out the last coordinate and the planted transfer
  // map re-offsets it, so h0 = "replace the last coordinate by a constant" is
  // exact in floating point and idempotent
  const int dropped = dX - 1;
  const double c_d = 0.5 + double(rng_f.next_below(4)) * 0.25;  // dyadic in [0.5, 1.25]
  Hypothesis f = Hypothesis::identity(dX);
  Hypothesis g0 = Hypothesis::identity(dX);
  if (cfg.realizable) {
    std::vector<std::vector<double>> wp(std::size_t(dX), std::vector<double>(std::size_t(dX), 0.0));
    for (int i = 0; i < dX; ++i)
      if (i != dropped || dX == 1) wp[std::size_t(i)][std::size_t(i)] = 1.0;
    f = Hypothesis::affine(wp, std::vector<double>(std::size_t(dX), 0.0));
    std::vector<std::vector<double>> eye(std::size_t(dX), std::vector<double>(std::size_t(dX), 0.0));
    for (int i = 0; i < dX; ++i) eye[std::size_t(i)][std::size_t(i)] = 1.0;
    std::vector<double> off(std::size_t(dX), 0.0);
    if (dX > 1) off[std::size_t(dropped)] = c_d;
    g0 = Hypothesis::affine(eye, std::move(off));
  } else {
    std::vector<std::vector<double>> wd(std::size_t(dX), std::vector<double>(std::size_t(dX), 0.0));
    for (int i = 0; i < dX; ++i)
      wd[std::size_t(i)][std::size_t(i)] = std::ldexp(1.0, int(rng_f.next_below(3)) - 1);
    f = Hypothesis::affine(wd, dyadic_offset(rng_f, dX));
    g0 = random_affine(rng_h2, dX, dX, 2.0);
  }

  std::vector<Hypothesis> h2_members;
  h2_members.reserve(std::size_t(cfg.h2_size));
  h2_members.push_back(g0);
  while (int(h2_members.size()) < cfg.h2_size)
    h2_members.push_back(random_affine(rng_h2, dX, dX, 2.0));
  HypothesisClass h2(h2_members, class_constant(h2_members, cfg.loss));

  const Hypothesis h0 = compose(f, h2.member(0));

  // codebook: the planted map's images over the base support, deduplicated
  std::vector<Point> codebook;
  {
    std::map<Point, bool, PointLess> seen;
    for (const auto& x : d1.support()) {
      Point q = evaluate(h0, x);
      if (seen.emplace(q, true).second) codebook.push_back(std::move(q));
    }
  }

  // second domain: lift each base image along the dropped coordinate; half the
  // points stay exactly at codebook points so the labeled pushforward equals
  // the planted pushforward bit for bit in the realizable construction
  std::vector<Point> d2_pts;
  d2_pts.reserve(std::size_t(d1.size()));
  {
    std::map<Point, bool, PointLess> seen;
    for (int i = 0; i < d1.size(); ++i) {
      Point base = evaluate(h0, d1.support()[std::size_t(i)]);
      std::vector<double> c = base.coords();
      double delta = 0.0;
      if (dX > 1 && i >= d1.size() / 2)
        delta = (1.0 + double(rng_lift.next_below(64))) / 128.0;  // in (0, 0.5]
      c[std::size_t(dX > 1 ? dropped : 0)] += (dX > 1 ? delta : 0.0);
      Point z(std::move(c));
      while (!seen.emplace(z, true).second) {
        std::vector<double> bump = z.coords();
        bump[std::size_t(dX > 1 ? dropped : 0)] += 1.0 / 1024.0;
        z = Point(std::move(bump));
      }
      d2_pts.push_back(std::move(z));
    }
  }
  FiniteDistribution d2(std::move(d2_pts), d1.weights());

  // nearest-codebook labeling over every point it will be evaluated on;
  // codebook keys map to themselves, so y is exactly idempotent
  std::vector<std::pair<Point, Point>> y_entries;
  {
    std::map<Point, bool, PointLess> seen;
    auto add_key = [&](const Point& k) {
      if (!seen.emplace(k, true).second) return;
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < codebook.size(); ++q) {
        double dist = 0.0;
        for (int a = 0; a < dX; ++a) {
          const double diff = k[a] - codebook[q][a];
          dist += diff * diff;
        }
        if (dist < best_d) {
          best_d = dist;
          best = int(q);
        }
      }
      y_entries.emplace_back(k, codebook[std::size_t(best)]);
    };
    for (const auto& q : codebook) add_key(q);
    for (const auto& x : d1.support()) add_key(x);
    for (const auto& z : d2.support()) add_key(z);
  }
  Hypothesis y = Hypothesis::table(dX, dX, std::move(y_entries));

  Scenario sc;
  sc.config = cfg;
  sc.setting.kind = cfg.kind;
  sc.setting.loss = LossSpec::make(cfg.loss, dX);
  sc.setting.distributions.emplace("D_1", std::move(d1));
  sc.setting.distributions.emplace("D_2", std::move(d2));
  sc.planted = {{"g", 0}};
  sc.setting.targets.emplace("y", std::move(y));
  sc.setting.targets.emplace("f", std::move(f));
  sc.setting.classes.emplace("H2", std::move(h2));
  return sc;
}

}  // namespace detail

inline Scenario generate(const ScenarioConfig& raw) {
  const ScenarioConfig cfg = effective_config(raw);
  validate_config(cfg);
  Scenario sc = [&] {
    switch (cfg.kind) {
      case SettingKind::standard_da: return detail::gen_standard(cfg);
      case SettingKind::binary_da: return detail::gen_binary(cfg);
      case SettingKind::output_da: return detail::gen_output(cfg);
      case SettingKind::analogy_oda: return detail::gen_analogy(cfg);
      case SettingKind::two_sided: return detail::gen_two_sided(cfg);
      case SettingKind::domain_transfer: return detail::gen_transfer(cfg);
    }
    throw std::logic_error("generate: bad kind");
  }();
  bounds::validate_setting(sc.setting);
  return sc;
}

inline Scenario gen_standard_da(ScenarioConfig cfg) {
  cfg.kind = SettingKind::standard_da;
  return generate(cfg);
}
inline Scenario gen_binary_da(ScenarioConfig cfg) {
  cfg.kind = SettingKind::binary_da;
  return generate(cfg);
}
inline Scenario gen_output_da(ScenarioConfig cfg) {
  cfg.kind = SettingKind::output_da;
  return generate(cfg);
}
inline Scenario gen_analogy(ScenarioConfig cfg) {
  cfg.kind = SettingKind::analogy_oda;
  return generate(cfg);
}
inline Scenario gen_two_sided(ScenarioConfig cfg) {
  cfg.kind = SettingKind::two_sided;
  return generate(cfg);
}
inline Scenario gen_domain_transfer(ScenarioConfig cfg) {
  cfg.kind = SettingKind::domain_transfer;
  return generate(cfg);
}

// ---------- small instances for axiom checks ----------

struct DiscInstance final {
  HypothesisClass cls;
  FiniteDistribution d1;
  FiniteDistribution d2;
  FiniteDistribution d3;  // third distribution for triangle/quad checks
  LossSpec loss;
};

// a feature-space discrepancy instance derived from a standard scenario
inline DiscInstance gen_disc_instance(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::standard_da;
  cfg.seed = seed;
  cfg.support_size = 16;
  cfg.h1_size = 2;
  cfg.h2_size = 8;
  cfg.shift = 0.25 + double(seed % 5) * 0.25;
  cfg.loss = (seed % 3 == 0) ? LossKind::squared : LossKind::absolute;
  Scenario sc = generate(cfg);
  const Hypothesis& f = sc.setting.cls("H1").member(int(seed % 2));
  const Hypothesis& f_other = sc.setting.cls("H1").member(int((seed + 1) % 2));
  return DiscInstance{sc.setting.cls("H2"), pushforward(f, sc.setting.dist("D_S")),
                      pushforward(f, sc.setting.dist("D_T")),
                      pushforward(f_other, sc.setting.dist("D_T")), sc.setting.loss};
}

// a zero-one instance whose class has binary outputs on both supports
inline DiscInstance gen_binary_disc_instance(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::binary_da;
  cfg.seed = seed;
  cfg.support_size = 16;
  cfg.h1_size = 2;
  cfg.h2_size = 8;
  cfg.shift = 0.25 + double(seed % 5) * 0.25;
  Scenario sc = generate(cfg);
  const Hypothesis& f = sc.setting.cls("H1").member(int(seed % 2));
  const Hypothesis& f_other = sc.setting.cls("H1").member(int((seed + 1) % 2));
  return DiscInstance{sc.setting.cls("H2"), pushforward(f, sc.setting.dist("D_S")),
                      pushforward(f, sc.setting.dist("D_T")),
                      pushforward(f_other, sc.setting.dist("D_T")), sc.setting.loss};
}

}  // namespace shiftbound::scenarios
