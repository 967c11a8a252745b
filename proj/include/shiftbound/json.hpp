#pragma once

// JSON serialization for every public artifact type, plus a deterministic
// writer that prints doubles with 17 significant digits so that every value
// round-trips exactly and equal in-memory structures always produce
// byte-identical text.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "shiftbound/adapt.hpp"
#include "shiftbound/bounds.hpp"
#include "shiftbound/core.hpp"
#include "shiftbound/measures.hpp"
#include "shiftbound/scenarios.hpp"

namespace shiftbound::jsonio {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Deterministic writer.
// ---------------------------------------------------------------------------

namespace detail {

inline void write_double(std::string& out, double v) {
  if (!std::isfinite(v)) throw std::logic_error("jsonio: refusing to serialize non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline void write_string(std::string& out, const std::string& s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

inline void write_value(std::string& out, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * static_cast<std::size_t>(d), ' ');
  };
  switch (j.type()) {
    case json::value_t::null: out += "null"; return;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; return;
    case json::value_t::string: write_string(out, j.get<std::string>()); return;
    case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); return;
    case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); return;
    case json::value_t::number_float: write_double(out, j.get<double>()); return;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_value(out, item, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& item : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_string(out, item.key());
        out += indent < 0 ? ":" : ": ";
        write_value(out, item.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    default: throw std::logic_error("jsonio: unsupported JSON value type");
  }
}

}  // namespace detail

// indent >= 0 pretty-prints with that many spaces per level; indent < 0 is
// compact.  Doubles always use %.17g.
inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::write_value(out, j, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Core types.
// ---------------------------------------------------------------------------

inline json of(const Point& p) {
  json arr = json::array();
  for (int i = 0; i < p.dim(); ++i) arr.push_back(p[i]);
  return arr;
}

inline Point point_from(const json& j) { return Point(j.get<std::vector<double>>()); }

inline json of(const LossSpec& spec) {
  return json{{"kind", loss_kind_name(spec.kind)},
              {"dimension", spec.dimension},
              {"triangle_constant", spec.triangle_constant_K}};
}

inline LossSpec loss_from(const json& j) {
  return LossSpec::make(loss_kind_from_name(j.at("kind").get<std::string>()),
                        j.at("dimension").get<int>());
}

inline json of(const Hypothesis& h);

namespace detail {

struct FormWriter {
  json operator()(const IdentityForm& f) const {
    return json{{"form", "identity"}, {"dim", f.dim}};
  }
  json operator()(const AffineForm& f) const {
    return json{{"form", "affine"}, {"weight", f.weight}, {"offset", f.offset}};
  }
  json operator()(const PreluNetForm& f) const {
    json layers = json::array();
    for (const auto& layer : f.layers)
      layers.push_back(json{{"weight", layer.weight}, {"alpha", layer.alpha}});
    return json{{"form", "prelu_net"}, {"layers", std::move(layers)}};
  }
  json operator()(const TableForm& f) const {
    json entries = json::array();
    for (const auto& [key, value] : f.entries)
      entries.push_back(json{{"key", of(key)}, {"value", of(value)}});
    return json{{"form", "table"},
                {"input_dim", f.input_dim},
                {"output_dim", f.output_dim},
                {"entries", std::move(entries)}};
  }
  json operator()(const CompositionForm& f) const {
    json stages = json::array();
    for (const auto& stage : f.stages) stages.push_back(of(stage));
    return json{{"form", "composition"}, {"stages", std::move(stages)}};
  }
  json operator()(const DisagreementForm& f) const {
    return json{{"form", "disagreement"}, {"pair", json::array({of(f.pair[0]), of(f.pair[1])})}};
  }
};

}  // namespace detail

inline json of(const Hypothesis& h) { return std::visit(detail::FormWriter{}, h.form()); }

inline Hypothesis hypothesis_from(const json& j) {
  const std::string form = j.at("form").get<std::string>();
  if (form == "identity") return Hypothesis::identity(j.at("dim").get<int>());
  if (form == "affine")
    return Hypothesis::affine(j.at("weight").get<std::vector<std::vector<double>>>(),
                              j.at("offset").get<std::vector<double>>());
  if (form == "prelu_net") {
    std::vector<PreluLayer> layers;
    for (const auto& lj : j.at("layers"))
      layers.push_back(PreluLayer{lj.at("weight").get<std::vector<std::vector<double>>>(),
                                  lj.at("alpha").get<double>()});
    return Hypothesis::prelu_net(std::move(layers));
  }
  if (form == "table") {
    std::vector<std::pair<Point, Point>> entries;
    for (const auto& ej : j.at("entries"))
      entries.emplace_back(point_from(ej.at("key")), point_from(ej.at("value")));
    return Hypothesis::table(j.at("input_dim").get<int>(), j.at("output_dim").get<int>(),
                             std::move(entries));
  }
  if (form == "composition") {
    std::vector<Hypothesis> stages;
    for (const auto& sj : j.at("stages")) stages.push_back(hypothesis_from(sj));
    return Hypothesis::composition(std::move(stages));
  }
  if (form == "disagreement") {
    const auto& pair = j.at("pair");
    return Hypothesis::disagreement(hypothesis_from(pair.at(0)), hypothesis_from(pair.at(1)));
  }
  throw std::invalid_argument("jsonio: unknown hypothesis form " + form);
}

inline json of(const FiniteDistribution& d) {
  json support = json::array();
  for (const auto& p : d.support()) support.push_back(of(p));
  return json{{"support", std::move(support)}, {"weights", d.weights()}};
}

inline FiniteDistribution distribution_from(const json& j) {
  std::vector<Point> support;
  for (const auto& pj : j.at("support")) support.push_back(point_from(pj));
  return FiniteDistribution(std::move(support), j.at("weights").get<std::vector<double>>());
}

inline json of(const HypothesisClass& c) {
  json members = json::array();
  for (const auto& m : c.members()) members.push_back(of(m));
  json out{{"members", std::move(members)}};
  out["lipschitz"] = c.lipschitz_L() ? json(*c.lipschitz_L()) : json(nullptr);
  out["inverse"] = c.inverse() ? of(*c.inverse()) : json(nullptr);
  return out;
}

inline HypothesisClass class_from(const json& j) {
  std::vector<Hypothesis> members;
  for (const auto& mj : j.at("members")) members.push_back(hypothesis_from(mj));
  std::optional<double> lip;
  if (!j.at("lipschitz").is_null()) lip = j.at("lipschitz").get<double>();
  std::shared_ptr<const HypothesisClass> inv;
  if (!j.at("inverse").is_null())
    inv = std::make_shared<const HypothesisClass>(class_from(j.at("inverse")));
  return HypothesisClass(std::move(members), lip, std::move(inv));
}

inline json of(const measures::DiscrepancyResult& r) {
  return json{{"value", r.value}, {"witness", json::array({r.witness_c1, r.witness_c2})}};
}

inline measures::DiscrepancyResult discrepancy_from(const json& j) {
  return measures::DiscrepancyResult{j.at("value").get<double>(),
                                     j.at("witness").at(0).get<int>(),
                                     j.at("witness").at(1).get<int>()};
}

inline json of(const measures::QuadDiscrepancyResult& r) {
  return json{{"value", r.value}, {"witness", json::array({r.witness_c1, r.witness_c2})}};
}

inline measures::QuadDiscrepancyResult quad_discrepancy_from(const json& j) {
  return measures::QuadDiscrepancyResult{j.at("value").get<double>(),
                                         j.at("witness").at(0).get<int>(),
                                         j.at("witness").at(1).get<int>()};
}

// ---------------------------------------------------------------------------
// Task descriptions and scenario configurations.
// ---------------------------------------------------------------------------

inline json of(const bounds::DASetting& s) {
  json dists = json::object();
  for (const auto& [name, d] : s.distributions) dists[name] = of(d);
  json targets = json::object();
  for (const auto& [name, h] : s.targets) targets[name] = of(h);
  json classes = json::object();
  for (const auto& [name, c] : s.classes) classes[name] = of(c);
  return json{{"kind", bounds::setting_kind_name(s.kind)},
              {"loss", of(s.loss)},
              {"distributions", std::move(dists)},
              {"targets", std::move(targets)},
              {"classes", std::move(classes)}};
}

inline bounds::DASetting setting_from(const json& j) {
  bounds::DASetting s;
  s.kind = bounds::setting_kind_from_name(j.at("kind").get<std::string>());
  s.loss = loss_from(j.at("loss"));
  for (const auto& item : j.at("distributions").items())
    s.distributions.emplace(item.key(), distribution_from(item.value()));
  for (const auto& item : j.at("targets").items())
    s.targets.emplace(item.key(), hypothesis_from(item.value()));
  for (const auto& item : j.at("classes").items())
    s.classes.emplace(item.key(), class_from(item.value()));
  return s;
}

inline json of(const scenarios::ScenarioConfig& c) {
  return json{{"kind", bounds::setting_kind_name(c.kind)},
              {"seed", c.seed},
              {"support_size", c.support_size},
              {"input_dim", c.input_dim},
              {"feature_dim", c.feature_dim},
              {"output_dim", c.output_dim},
              {"h1_size", c.h1_size},
              {"h2_size", c.h2_size},
              {"h2_prime_size", c.h2_prime_size},
              {"h3_size", c.h3_size},
              {"h4_size", c.h4_size},
              {"loss", loss_kind_name(c.loss)},
              {"shift", c.shift},
              {"realizable", c.realizable}};
}

inline scenarios::ScenarioConfig config_from(const json& j) {
  scenarios::ScenarioConfig c;
  c.kind = bounds::setting_kind_from_name(j.at("kind").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.support_size = j.at("support_size").get<int>();
  c.input_dim = j.at("input_dim").get<int>();
  c.feature_dim = j.at("feature_dim").get<int>();
  c.output_dim = j.at("output_dim").get<int>();
  c.h1_size = j.at("h1_size").get<int>();
  c.h2_size = j.at("h2_size").get<int>();
  c.h2_prime_size = j.at("h2_prime_size").get<int>();
  c.h3_size = j.at("h3_size").get<int>();
  c.h4_size = j.at("h4_size").get<int>();
  c.loss = loss_kind_from_name(j.at("loss").get<std::string>());
  c.shift = j.at("shift").get<double>();
  c.realizable = j.at("realizable").get<bool>();
  return c;
}

// ---------------------------------------------------------------------------
// Reports and training results.
// ---------------------------------------------------------------------------

inline json of(const bounds::ProofStepReport& s) {
  return json{{"id", s.id},
              {"lhs", s.lhs},
              {"rhs", s.rhs},
              {"constant", s.constant},
              {"pass", s.pass}};
}

inline bounds::ProofStepReport step_from(const json& j) {
  bounds::ProofStepReport s;
  s.id = j.at("id").get<std::string>();
  s.lhs = j.at("lhs").get<double>();
  s.rhs = j.at("rhs").get<double>();
  s.constant = j.at("constant").get<double>();
  s.pass = j.at("pass").get<bool>();
  return s;
}

inline json of(const bounds::BoundReport& r) {
  json terms = json::object();
  for (const auto& [name, value] : r.terms) terms[name] = value;
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(of(s));
  return json{{"setting", r.setting}, {"lhs", r.lhs},     {"terms", std::move(terms)},
              {"constant", r.constant}, {"rhs", r.rhs},   {"slack", r.slack},
              {"steps", std::move(steps)}, {"pass", r.pass}};
}

inline bounds::BoundReport report_from(const json& j) {
  bounds::BoundReport r;
  r.setting = j.at("setting").get<std::string>();
  r.lhs = j.at("lhs").get<double>();
  for (const auto& item : j.at("terms").items())
    r.terms.emplace_back(item.key(), item.value().get<double>());
  r.constant = j.at("constant").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.slack = j.at("slack").get<double>();
  for (const auto& sj : j.at("steps")) r.steps.push_back(step_from(sj));
  r.pass = j.at("pass").get<bool>();
  return r;
}

// The trace is summarized by its length; a full per-candidate dump would
// dominate the artifact size without aiding inspection.
inline json of(const adapt::TrainResult& r) {
  json chosen = json::object();
  for (const auto& [key, idx] : r.chosen) chosen[key] = idx;
  json terms = json::object();
  for (const auto& [name, value] : r.objective_terms) terms[name] = value;
  return json{{"setting", r.setting},
              {"chosen", std::move(chosen)},
              {"objective_terms", std::move(terms)},
              {"objective_value", r.objective_value},
              {"target_risk", r.target_risk ? json(*r.target_risk) : json(nullptr)},
              {"trace_size", r.trace.size()}};
}

}  // namespace shiftbound::jsonio
