#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace shiftbound {

// ---------- Point ----------

// Fixed-dimension coordinate vector. Coordinates are finite; -0 folds to +0 so
// exact-equality comparisons and merge-by-equality are well defined.
class Point final {
 public:
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("Point: dimension must be positive");
    for (double& c : coords_) {
      if (!std::isfinite(c)) throw std::invalid_argument("Point: coordinates must be finite");
      if (c == 0.0) c = 0.0;
    }
  }

  static Point scalar(double v) { return Point(std::vector<double>{v}); }

  const std::vector<double>& coords() const { return coords_; }
  int dim() const { return int(coords_.size()); }
  double operator[](int i) const { return coords_[std::size_t(i)]; }

  bool operator==(const Point& o) const { return coords_ == o.coords_; }
  bool operator!=(const Point& o) const { return !(*this == o); }

 private:
  std::vector<double> coords_;
};

// lexicographic order (shorter first); deterministic key order for tables/merges
struct PointLess {
  bool operator()(const Point& a, const Point& b) const {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    const auto& x = a.coords();
    const auto& y = b.coords();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < y[i]) return true;
      if (x[i] > y[i]) return false;
    }
    return false;
  }
};

// ---------- LossSpec ----------

enum class LossKind { absolute, squared, zero_one };

inline std::string loss_kind_name(LossKind k) {
  switch (k) {
    case LossKind::absolute: return "absolute";
    case LossKind::squared: return "squared";
    case LossKind::zero_one: return "zero_one";
  }
  throw std::logic_error("loss_kind_name: bad kind");
}

inline LossKind loss_kind_from_name(const std::string& s) {
  if (s == "absolute") return LossKind::absolute;
  if (s == "squared") return LossKind::squared;
  if (s == "zero_one") return LossKind::zero_one;
  throw std::invalid_argument("unknown loss kind: " + s);
}

// Loss family together with the dimension it compares and the constant K of
// the relaxed triangle inequality  l(y1,y3) <= K*(l(y1,y2) + l(y2,y3)).
// K is pinned per kind: absolute 1, squared 3, zero_one 1.
struct LossSpec final {
  LossKind kind;
  int dimension;
  double triangle_constant_K;

  static LossSpec make(LossKind k, int dim) {
    if (dim <= 0) throw std::invalid_argument("LossSpec: dimension must be positive");
    switch (k) {
      case LossKind::absolute: return LossSpec{k, dim, 1.0};
      case LossKind::squared: return LossSpec{k, dim, 3.0};
      case LossKind::zero_one:
        if (dim != 1) throw std::invalid_argument("LossSpec: zero_one loss is 1-dimensional");
        return LossSpec{k, dim, 1.0};
    }
    throw std::logic_error("LossSpec::make: bad kind");
  }

  static LossSpec absolute(int dim) { return make(LossKind::absolute, dim); }
  static LossSpec squared(int dim) { return make(LossKind::squared, dim); }
  static LossSpec zero_one() { return make(LossKind::zero_one, 1); }

  // same family at another dimension (e.g. the feature space)
  LossSpec at_dimension(int dim) const { return make(kind, dim); }
};

inline double loss(const LossSpec& spec, const Point& a, const Point& b) {
  if (a.dim() != spec.dimension || b.dim() != spec.dimension)
    throw std::invalid_argument("loss: point dimension does not match LossSpec");
  switch (spec.kind) {
    case LossKind::absolute: {
      double s = 0.0;
      for (int i = 0; i < a.dim(); ++i) s += std::fabs(a[i] - b[i]);
      return s;
    }
    case LossKind::squared: {
      double s = 0.0;
      for (int i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
      }
      return s;
    }
    case LossKind::zero_one: return a == b ? 0.0 : 1.0;
  }
  throw std::logic_error("loss: bad kind");
}

// ---------- Hypothesis ----------

class Hypothesis;

// finite exact-lookup map; must be total on every support it is evaluated over
struct TableForm final {
  int input_dim = 0;
  int output_dim = 0;
  std::map<Point, Point, PointLess> entries;

  bool operator==(const TableForm&) const = default;
};

// x -> W x + b
struct AffineForm final {
  std::vector<std::vector<double>> weight;  // rows = output_dim, cols = input_dim
  std::vector<double> offset;

  bool operator==(const AffineForm&) const = default;
};

// one PReLU layer: x -> prelu_alpha(W x), applied coordinatewise
struct PreluLayer final {
  std::vector<std::vector<double>> weight;
  double alpha = 0.0;  // slope for negative inputs, alpha >= 0

  bool operator==(const PreluLayer&) const = default;
};

struct PreluNetForm final {
  std::vector<PreluLayer> layers;

  bool operator==(const PreluNetForm&) const = default;
};

// stages applied first-to-last: evaluate([f, g], x) = g(f(x))
struct CompositionForm final {
  std::vector<Hypothesis> stages;

  bool operator==(const CompositionForm&) const = default;
};

struct IdentityForm final {
  int dim = 0;

  bool operator==(const IdentityForm&) const = default;
};

// x -> [pair[0](x) != pair[1](x)], a {0,1}-valued scalar
struct DisagreementForm final {
  std::vector<Hypothesis> pair;  // exactly two, matching dimensions

  bool operator==(const DisagreementForm&) const = default;
};

class Hypothesis final {
 public:
  using Form =
      std::variant<TableForm, AffineForm, PreluNetForm, CompositionForm, IdentityForm, DisagreementForm>;

  static Hypothesis identity(int dim) {
    if (dim <= 0) throw std::invalid_argument("identity: dimension must be positive");
    return Hypothesis(IdentityForm{dim}, dim, dim);
  }

  static Hypothesis affine(std::vector<std::vector<double>> weight, std::vector<double> offset) {
    const int out = int(weight.size());
    if (out == 0) throw std::invalid_argument("affine: weight needs at least one row");
    const int in = int(weight[0].size());
    if (in == 0) throw std::invalid_argument("affine: weight needs at least one column");
    for (const auto& row : weight) {
      if (int(row.size()) != in) throw std::invalid_argument("affine: ragged weight matrix");
      for (double v : row)
        if (!std::isfinite(v)) throw std::invalid_argument("affine: weight entries must be finite");
    }
    if (int(offset.size()) != out) throw std::invalid_argument("affine: offset size != rows");
    for (double v : offset)
      if (!std::isfinite(v)) throw std::invalid_argument("affine: offset entries must be finite");
    return Hypothesis(AffineForm{std::move(weight), std::move(offset)}, in, out);
  }

  static Hypothesis prelu_net(std::vector<PreluLayer> layers) {
    if (layers.empty()) throw std::invalid_argument("prelu_net: needs at least one layer");
    int in = -1, prev = -1;
    for (const auto& layer : layers) {
      const int rows = int(layer.weight.size());
      if (rows == 0) throw std::invalid_argument("prelu_net: empty layer");
      const int cols = int(layer.weight[0].size());
      if (cols == 0) throw std::invalid_argument("prelu_net: layer needs columns");
      for (const auto& row : layer.weight) {
        if (int(row.size()) != cols) throw std::invalid_argument("prelu_net: ragged weight matrix");
        for (double v : row)
          if (!std::isfinite(v)) throw std::invalid_argument("prelu_net: weights must be finite");
      }
      if (!(layer.alpha >= 0.0) || !std::isfinite(layer.alpha))
        throw std::invalid_argument("prelu_net: alpha must be finite and >= 0");
      if (in < 0) in = cols;
      else if (cols != prev) throw std::invalid_argument("prelu_net: layer dimensions do not chain");
      prev = rows;
    }
    return Hypothesis(PreluNetForm{std::move(layers)}, in, prev);
  }

  static Hypothesis table(int input_dim, int output_dim, std::vector<std::pair<Point, Point>> entries) {
    if (input_dim <= 0 || output_dim <= 0) throw std::invalid_argument("table: dimensions must be positive");
    TableForm t;
    t.input_dim = input_dim;
    t.output_dim = output_dim;
    for (auto& [k, v] : entries) {
      if (k.dim() != input_dim || v.dim() != output_dim)
        throw std::invalid_argument("table: entry dimensions do not match");
      auto [it, inserted] = t.entries.emplace(k, v);
      if (!inserted && !(it->second == v)) throw std::invalid_argument("table: conflicting duplicate key");
    }
    return Hypothesis(std::move(t), input_dim, output_dim);
  }

  static Hypothesis composition(std::vector<Hypothesis> stages) {
    if (stages.empty()) throw std::invalid_argument("composition: needs at least one stage");
    for (std::size_t i = 0; i + 1 < stages.size(); ++i)
      if (stages[i].output_dim() != stages[i + 1].input_dim())
        throw std::invalid_argument("composition: stage dimensions do not chain");
    const int in = stages.front().input_dim();
    const int out = stages.back().output_dim();
    return Hypothesis(CompositionForm{std::move(stages)}, in, out);
  }

  static Hypothesis disagreement(Hypothesis lhs, Hypothesis rhs) {
    if (lhs.input_dim() != rhs.input_dim() || lhs.output_dim() != rhs.output_dim())
      throw std::invalid_argument("disagreement: mismatched member dimensions");
    const int in = lhs.input_dim();
    DisagreementForm d;
    d.pair.push_back(std::move(lhs));
    d.pair.push_back(std::move(rhs));
    return Hypothesis(std::move(d), in, 1);
  }

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  const Form& form() const { return form_; }

  bool operator==(const Hypothesis& o) const {
    return input_dim_ == o.input_dim_ && output_dim_ == o.output_dim_ && form_ == o.form_;
  }

  std::string form_name() const {
    struct V {
      std::string operator()(const TableForm&) const { return "table"; }
      std::string operator()(const AffineForm&) const { return "affine"; }
      std::string operator()(const PreluNetForm&) const { return "prelu_net"; }
      std::string operator()(const CompositionForm&) const { return "composition"; }
      std::string operator()(const IdentityForm&) const { return "identity"; }
      std::string operator()(const DisagreementForm&) const { return "disagreement"; }
    };
    return std::visit(V{}, form_);
  }

 private:
  Hypothesis(Form f, int in, int out) : form_(std::move(f)), input_dim_(in), output_dim_(out) {}

  Form form_;
  int input_dim_ = 0;
  int output_dim_ = 0;
};

// apply f then g
inline Hypothesis compose(Hypothesis f, Hypothesis g) {
  std::vector<Hypothesis> stages;
  stages.push_back(std::move(f));
  stages.push_back(std::move(g));
  return Hypothesis::composition(std::move(stages));
}

inline Point evaluate(const Hypothesis& h, const Point& x) {
  if (x.dim() != h.input_dim()) throw std::invalid_argument("evaluate: input dimension mismatch");
  struct V {
    const Point& x;
    const Hypothesis& h;

    Point operator()(const IdentityForm&) const { return x; }

    Point operator()(const TableForm& t) const {
      auto it = t.entries.find(x);
      if (it == t.entries.end()) throw std::domain_error("evaluate: table miss");
      return it->second;
    }

    Point operator()(const AffineForm& a) const {
      std::vector<double> out(a.weight.size());
      for (std::size_t r = 0; r < a.weight.size(); ++r) {
        double s = a.offset[r];
        for (std::size_t c = 0; c < a.weight[r].size(); ++c) s += a.weight[r][c] * x[int(c)];
        out[r] = s;
      }
      return Point(std::move(out));
    }

    Point operator()(const PreluNetForm& n) const {
      std::vector<double> cur = x.coords();
      for (const auto& layer : n.layers) {
        std::vector<double> nxt(layer.weight.size());
        for (std::size_t r = 0; r < layer.weight.size(); ++r) {
          double s = 0.0;
          for (std::size_t c = 0; c < layer.weight[r].size(); ++c) s += layer.weight[r][c] * cur[c];
          nxt[r] = s >= 0.0 ? s : layer.alpha * s;
        }
        cur = std::move(nxt);
      }
      return Point(std::move(cur));
    }

    Point operator()(const CompositionForm& c) const {
      Point cur = x;
      for (const auto& stage : c.stages) cur = evaluate(stage, cur);
      return cur;
    }

    Point operator()(const DisagreementForm& d) const {
      return Point::scalar(evaluate(d.pair[0], x) == evaluate(d.pair[1], x) ? 0.0 : 1.0);
    }
  };
  return std::visit(V{x, h}, h.form());
}

// True when evaluation is defined on the whole input space.  Lookup-backed
// hypotheses are partial: they are only defined on their key sets, so probing
// them at arbitrary points would fault.
inline bool is_total(const Hypothesis& h) {
  return std::visit(
      [](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TableForm>) {
          return false;
        } else if constexpr (std::is_same_v<T, CompositionForm>) {
          for (const auto& stage : f.stages)
            if (!is_total(stage)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, DisagreementForm>) {
          return is_total(f.pair[0]) && is_total(f.pair[1]);
        } else {
          return true;
        }
      },
      h.form());
}

// ---------- FiniteDistribution ----------

// Weighted finite support: points pairwise distinct (exact equality), weights
// non-negative and summing to 1 within 1e-12.
class FiniteDistribution final {
 public:
  FiniteDistribution(std::vector<Point> support, std::vector<double> weights)
      : support_(std::move(support)), weights_(std::move(weights)) {
    if (support_.empty()) throw std::invalid_argument("FiniteDistribution: empty support");
    if (support_.size() != weights_.size())
      throw std::invalid_argument("FiniteDistribution: support/weight size mismatch");
    const int d = support_[0].dim();
    double total = 0.0;
    for (const auto& p : support_)
      if (p.dim() != d) throw std::invalid_argument("FiniteDistribution: mixed dimensions");
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0)
        throw std::invalid_argument("FiniteDistribution: weights must be finite and non-negative");
      total += w;
    }
    if (std::fabs(total - 1.0) > 1e-12)
      throw std::invalid_argument("FiniteDistribution: weights must sum to 1 within 1e-12");
    std::map<Point, int, PointLess> seen;
    for (const auto& p : support_)
      if (!seen.emplace(p, 0).second)
        throw std::invalid_argument("FiniteDistribution: support points must be pairwise distinct");
  }

  static FiniteDistribution point_mass(Point p) {
    std::vector<Point> s;
    s.push_back(std::move(p));
    return FiniteDistribution(std::move(s), {1.0});
  }

  const std::vector<Point>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  int size() const { return int(support_.size()); }
  int dim() const { return support_[0].dim(); }

 private:
  std::vector<Point> support_;
  std::vector<double> weights_;
};

// image distribution; colliding images merge by exact coordinate equality,
// keeping first-occurrence order
inline FiniteDistribution pushforward(const Hypothesis& h, const FiniteDistribution& d) {
  std::vector<Point> support;
  std::vector<double> weights;
  std::map<Point, std::size_t, PointLess> index;
  for (int i = 0; i < d.size(); ++i) {
    Point img = evaluate(h, d.support()[std::size_t(i)]);
    auto it = index.find(img);
    if (it == index.end()) {
      index.emplace(img, support.size());
      support.push_back(std::move(img));
      weights.push_back(d.weights()[std::size_t(i)]);
    } else {
      weights[it->second] += d.weights()[std::size_t(i)];
    }
  }
  return FiniteDistribution(std::move(support), std::move(weights));
}

// ---------- HypothesisClass ----------

// Finite ordered list of hypotheses sharing input/output dimensions. Optional
// declared Lipschitz constant L (w.r.t. the loss family in use):
// l(c(a1), c(a2)) <= L * l(a1, a2) for every member c. Optional inverse class
// pairs member i with its (right/two-sided) inverse at index i.
class HypothesisClass final {
 public:
  explicit HypothesisClass(std::vector<Hypothesis> members,
                           std::optional<double> lipschitz_L = std::nullopt,
                           std::shared_ptr<const HypothesisClass> inverse = nullptr)
      : members_(std::move(members)), lipschitz_L_(lipschitz_L), inverse_(std::move(inverse)) {
    if (members_.empty()) throw std::invalid_argument("HypothesisClass: needs at least one member");
    const int in = members_[0].input_dim();
    const int out = members_[0].output_dim();
    for (const auto& m : members_)
      if (m.input_dim() != in || m.output_dim() != out)
        throw std::invalid_argument("HypothesisClass: members must share dimensions");
    if (lipschitz_L_ && (!std::isfinite(*lipschitz_L_) || *lipschitz_L_ < 0.0))
      throw std::invalid_argument("HypothesisClass: lipschitz_L must be finite and non-negative");
    if (inverse_ && inverse_->size() != size())
      throw std::invalid_argument("HypothesisClass: inverse class must pair members by index");
  }

  const std::vector<Hypothesis>& members() const { return members_; }
  const Hypothesis& member(int i) const { return members_.at(std::size_t(i)); }
  int size() const { return int(members_.size()); }
  int input_dim() const { return members_[0].input_dim(); }
  int output_dim() const { return members_[0].output_dim(); }
  const std::optional<double>& lipschitz_L() const { return lipschitz_L_; }
  const std::shared_ptr<const HypothesisClass>& inverse() const { return inverse_; }

  double declared_L() const {
    if (!lipschitz_L_) throw std::invalid_argument("HypothesisClass: no declared Lipschitz constant");
    return *lipschitz_L_;
  }

 private:
  std::vector<Hypothesis> members_;
  std::optional<double> lipschitz_L_;
  std::shared_ptr<const HypothesisClass> inverse_;
};

// ---------- Lipschitz upper bounds from structure ----------

namespace detail {

inline double norm1_op(const std::vector<std::vector<double>>& w) {
  // max column absolute sum: |W v|_1 <= norm * |v|_1
  if (w.empty()) return 0.0;
  double best = 0.0;
  for (std::size_t c = 0; c < w[0].size(); ++c) {
    double s = 0.0;
    for (const auto& row : w) s += std::fabs(row[c]);
    if (s > best) best = s;
  }
  return best;
}

inline double norm2_upper(const std::vector<std::vector<double>>& w) {
  // valid upper bound on the spectral norm: min(frobenius, sqrt(norm1 * norminf))
  double frob = 0.0, ninf = 0.0;
  for (const auto& row : w) {
    double rs = 0.0;
    for (double v : row) {
      frob += v * v;
      rs += std::fabs(v);
    }
    if (rs > ninf) ninf = rs;
  }
  frob = std::sqrt(frob);
  const double mixed = std::sqrt(norm1_op(w) * ninf);
  return frob < mixed ? frob : mixed;
}

inline double linear_factor(const std::vector<std::vector<double>>& w, LossKind kind) {
  switch (kind) {
    case LossKind::absolute: return norm1_op(w);
    case LossKind::squared: return norm2_upper(w);
    case LossKind::zero_one: return 1.0;  // any map is 1-Lipschitz w.r.t. zero_one
  }
  throw std::logic_error("linear_factor: bad kind");
}

}  // namespace detail

// Structure-derived upper bound on the Lipschitz constant of h w.r.t. the loss
// kind (input and output compared with the same family at their own
// dimensions). Squared loss squares the linear contraction factor. Tables are
// bounded by exact enumeration of key pairs; disagreement is only bounded
// under zero_one.
inline double lipschitz_upper_bound(const Hypothesis& h, LossKind kind) {
  struct V {
    LossKind kind;
    const Hypothesis& h;

    double operator()(const IdentityForm&) const { return 1.0; }

    double operator()(const AffineForm& a) const {
      const double f = detail::linear_factor(a.weight, kind);
      return kind == LossKind::squared ? f * f : f;
    }

    double operator()(const PreluNetForm& n) const {
      // prelu with slope alpha is max(1, alpha)-Lipschitz coordinatewise
      double f = 1.0;
      for (const auto& layer : n.layers)
        f *= detail::linear_factor(layer.weight, kind) * std::max(1.0, layer.alpha);
      return kind == LossKind::squared ? f * f : f;
    }

    double operator()(const TableForm& t) const {
      if (kind == LossKind::zero_one) return 1.0;
      const LossSpec in_spec = LossSpec::make(kind, t.input_dim);
      const LossSpec out_spec = LossSpec::make(kind, t.output_dim);
      double best = 0.0;
      for (auto i = t.entries.begin(); i != t.entries.end(); ++i) {
        auto j = i;
        for (++j; j != t.entries.end(); ++j) {
          const double den = loss(in_spec, i->first, j->first);
          const double num = loss(out_spec, i->second, j->second);
          if (den > 0.0 && num / den > best) best = num / den;
        }
      }
      return best;
    }

    double operator()(const CompositionForm& c) const {
      double f = 1.0;
      for (const auto& stage : c.stages) f *= lipschitz_upper_bound(stage, kind);
      return f;
    }

    double operator()(const DisagreementForm&) const {
      if (kind == LossKind::zero_one) return 1.0;
      throw std::invalid_argument("lipschitz_upper_bound: disagreement only bounded under zero_one");
    }
  };
  return std::visit(V{kind, h}, h.form());
}

}  // namespace shiftbound
