#include "bvolterra/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "bvolterra/errors.hpp"
#include "bvolterra/intertwiners.hpp"
#include "bvolterra/limits.hpp"
#include "bvolterra/random.hpp"

namespace bvolterra {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ParseError((path.empty() ? std::string("/") : path) + ": " + message);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

Scalar scalar_from(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Scalar(std::to_string(j.get<std::int64_t>()));
  if (!j.is_string()) fail(path, "expected a rational string");
  try {
    return parse_scalar(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

Vector vector_from(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail(path, "expected an array of rationals");
  if (j.size() != dim) fail(path, "expected " + std::to_string(dim) + " entries, found " + std::to_string(j.size()));
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = scalar_from(j[i], child(path, i));
  return v;
}

std::vector<Vector> vectors_from(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail(path, "expected an array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_from(j[i], child(path, i), dim));
  return out;
}

OrderProjection coords_from(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail(path, "expected a list of 1-based coordinates");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) fail(child(path, i), "expected an integer coordinate");
    const auto c = j[i].get<std::int64_t>();
    if (c < 1 || static_cast<std::uint64_t>(c) > dim) fail(child(path, i), "coordinate out of range");
    mask |= std::uint64_t{1} << (c - 1);
  }
  return {dim, mask};
}

std::vector<OrderProjection> prefix_from(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail(path, "expected a list of coordinate sets");
  std::vector<OrderProjection> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(coords_from(j[i], child(path, i), dim));
  return out;
}

Matrix matrix_from(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) fail(path, "expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const Vector row = vector_from(j[r], child(path, r), dim);
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = row[c];
  }
  return m;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (const auto& e : v.entries()) out.push_back(to_string(e));
  return out;
}

json to_json(const OrderProjection& p) { return p.coords(); }

json to_json(std::span<const OrderProjection> prefix) {
  json out = json::array();
  for (const auto& p : prefix) out.push_back(to_json(p));
  return out;
}

json to_json(std::span<const Vector> vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r)));
  return out;
}

json to_json(const NormValue& v) {
  if (const auto* s = std::get_if<Scalar>(&v)) return to_string(*s);
  std::ostringstream os;
  os.precision(12);
  os << std::get<double>(v);
  return os.str();
}

json expectation_json(Expectation e) {
  switch (e) {
    case Expectation::holds:
      return true;
    case Expectation::fails:
      return false;
    case Expectation::error:
      return "error";
  }
  return nullptr;
}

enum class Ref { op, algebra, filtration, martingale, op_list };

struct RefRule {
  const char* field;
  Ref ref;
  bool required;
};

const std::map<std::string, std::vector<RefRule>>& check_kinds() {
  static const std::map<std::string, std::vector<RefRule>> kinds{
      {"b-volterra", {{"operator", Ref::op, true}, {"algebra", Ref::algebra, true}}},
      {"regular-volterra", {{"operator", Ref::op, true}, {"filtration", Ref::filtration, true}}},
      {"equivalences", {{"operator", Ref::op, true}, {"algebra", Ref::algebra, true}}},
      {"lift",
       {{"operator", Ref::op, true},
        {"filtration", Ref::filtration, true},
        {"martingale", Ref::martingale, true},
        {"expected", Ref::martingale, false}}},
      {"square", {{"operator", Ref::op, true}, {"filtration", Ref::filtration, true}}},
      {"regular-norm", {{"martingale", Ref::martingale, true}}},
      {"intertwine",
       {{"operator", Ref::op, true}, {"source", Ref::filtration, true}, {"target", Ref::filtration, true}}},
      {"antichain-product",
       {{"operator", Ref::op, true},
        {"source", Ref::filtration, true},
        {"target", Ref::filtration, true},
        {"stages", Ref::op_list, true}}},
      {"germ-equal", {{"filtration", Ref::filtration, true}, {"operator", Ref::op, false}}},
      {"sectional", {{"algebra", Ref::algebra, true}, {"filtration", Ref::filtration, false}}},
      {"resolution", {{"algebra", Ref::algebra, false}}},
      {"chain-subspace", {{"filtration", Ref::filtration, true}, {"operator", Ref::op, false}}},
      {"conditional-expectation", {{"operator", Ref::op, true}}},
      {"bang",
       {{"operator", Ref::op, true}, {"filtration", Ref::filtration, true}, {"martingale", Ref::martingale, true}}},
      {"hat-L", {{"operator", Ref::op, true}, {"source", Ref::filtration, true}, {"target", Ref::filtration, true}}},
  };
  return kinds;
}

bool is_builtin_algebra(const std::string& name) { return name == "trivial" || name == "discrete"; }

bool has_algebra(const Scenario& s, const std::string& name) {
  return is_builtin_algebra(name) || s.algebras.contains(name);
}

void require_ref(const Scenario& s, const json& value, Ref ref, const std::string& path) {
  auto check_name = [&](const json& v, const std::string& p) {
    if (!v.is_string()) fail(p, "expected a name");
    const auto name = v.get<std::string>();
    bool found = false;
    const char* what = "";
    switch (ref) {
      case Ref::op:
      case Ref::op_list:
        found = s.operators.contains(name);
        what = "operator";
        break;
      case Ref::algebra:
        found = has_algebra(s, name);
        what = "algebra";
        break;
      case Ref::filtration:
        found = s.filtrations.contains(name);
        what = "filtration";
        break;
      case Ref::martingale:
        found = s.martingales.contains(name);
        what = "martingale";
        break;
    }
    if (!found) fail(p, std::string("unknown ") + what + " '" + name + "'");
  };
  if (ref == Ref::op_list) {
    if (!value.is_array() || value.empty()) fail(path, "expected a nonempty list of operator names");
    for (std::size_t i = 0; i < value.size(); ++i) check_name(value[i], child(path, i));
  } else {
    check_name(value, path);
  }
}

void validate_check(const Scenario& s, const CheckSpec& c, const std::string& path) {
  const auto& rules = check_kinds().at(c.kind);
  for (const auto& rule : rules) {
    if (!c.params.contains(rule.field)) {
      if (rule.required) fail(path, std::string("missing field '") + rule.field + "'");
      continue;
    }
    require_ref(s, c.params.at(rule.field), rule.ref, child(path, rule.field));
  }
  if (c.params.contains("map") && c.params.at("map").is_object() && c.params.at("map").contains("stages")) {
    require_ref(s, c.params.at("map").at("stages"), Ref::op_list, child(child(path, "map"), "stages"));
  }
  for (const char* g : {"a", "b"}) {
    if (c.kind == "germ-equal") {
      if (!c.params.contains(g) || !c.params.at(g).is_object()) fail(path, std::string("missing germ '") + g + "'");
      const auto& germ = c.params.at(g);
      if (!germ.contains("martingale")) fail(child(path, g), "missing field 'martingale'");
      require_ref(s, germ.at("martingale"), Ref::martingale, child(child(path, g), "martingale"));
    }
  }
}

template <typename T>
T rethrow_as_parse(const std::string& path, const std::function<T()>& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

}  // namespace

BooleanSubalgebra Scenario::algebra(const std::string& name) const {
  if (name == "trivial") return BooleanSubalgebra::trivial(dimension);
  if (name == "discrete") return BooleanSubalgebra::discrete(dimension);
  auto it = algebras.find(name);
  if (it == algebras.end()) throw PreconditionError("unknown algebra '" + name + "'");
  return it->second;
}

const PositiveOperator& Scenario::op(const std::string& name) const {
  auto it = operators.find(name);
  if (it == operators.end()) throw PreconditionError("unknown operator '" + name + "'");
  return it->second;
}

const ForwardFiltration& Scenario::filtration(const std::string& name) const {
  auto it = filtrations.find(name);
  if (it == filtrations.end()) throw PreconditionError("unknown filtration '" + name + "'");
  return it->second.filtration;
}

const Martingale& Scenario::martingale(const std::string& name) const {
  auto it = martingales.find(name);
  if (it == martingales.end()) throw PreconditionError("unknown martingale '" + name + "'");
  return it->second.martingale;
}

const Vector& Scenario::vector(const std::string& name) const {
  auto it = vectors.find(name);
  if (it == vectors.end()) throw PreconditionError("unknown vector '" + name + "'");
  return it->second;
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.is_object()) fail("", "scenario must be a JSON object");
  static const std::set<std::string> known{"dimension", "norm", "algebras", "operators", "vectors",
                                           "filtrations", "martingales", "checks"};
  for (const auto& [key, value] : root.items()) {
    if (!known.contains(key)) fail(child("", key), "unknown field");
  }

  Scenario s;
  if (!root.contains("dimension") || !root["dimension"].is_number_integer()) {
    fail("/dimension", "required positive integer");
  }
  const auto dim = root["dimension"].get<std::int64_t>();
  if (dim < 1 || dim > static_cast<std::int64_t>(OrderProjection::kMaxDim)) fail("/dimension", "must lie in 1..64");
  s.dimension = static_cast<std::size_t>(dim);
  const std::size_t n = s.dimension;

  if (root.contains("norm")) {
    const auto& v = root["norm"];
    std::optional<NormKind> p;
    if (v.is_string()) p = parse_norm_kind(v.get<std::string>());
    if (v.is_number_integer()) p = parse_norm_kind(std::to_string(v.get<std::int64_t>()));
    if (!p) fail("/norm", "expected \"1\", \"2\" or \"inf\"");
    s.norm = *p;
  }

  auto section = [&](const char* key) -> const json* {
    if (!root.contains(key)) return nullptr;
    if (!root[key].is_object()) fail(child("", key), "expected an object of named entries");
    return &root[key];
  };

  if (const json* algebras = section("algebras")) {
    for (const auto& [name, value] : algebras->items()) {
      const std::string path = child("/algebras", name);
      if (is_builtin_algebra(name)) fail(path, "name is reserved");
      if (!value.is_array()) fail(path, "expected a list of blocks");
      std::vector<std::uint64_t> atoms;
      for (std::size_t i = 0; i < value.size(); ++i) atoms.push_back(coords_from(value[i], child(path, i), n).mask());
      s.algebras.emplace(name, rethrow_as_parse<BooleanSubalgebra>(path, [&] { return BooleanSubalgebra(n, atoms); }));
    }
  }
  if (const json* ops = section("operators")) {
    for (const auto& [name, value] : ops->items()) {
      const std::string path = child("/operators", name);
      Matrix m = matrix_from(value, path, n);
      s.operators.emplace(name, rethrow_as_parse<PositiveOperator>(path, [&] { return PositiveOperator(m); }));
    }
  }
  if (const json* vs = section("vectors")) {
    for (const auto& [name, value] : vs->items()) s.vectors.emplace(name, vector_from(value, child("/vectors", name), n));
  }
  if (const json* fs = section("filtrations")) {
    for (const auto& [name, value] : fs->items()) {
      const std::string path = child("/filtrations", name);
      if (!value.is_object()) fail(path, "expected {algebra, prefix}");
      const std::string alg = value.value("algebra", std::string("discrete"));
      if (!has_algebra(s, alg)) fail(child(path, "algebra"), "unknown algebra '" + alg + "'");
      if (!value.contains("prefix")) fail(path, "missing field 'prefix'");
      auto prefix = prefix_from(value["prefix"], child(path, "prefix"), n);
      auto xi = rethrow_as_parse<ForwardFiltration>(path, [&] { return ForwardFiltration(s.algebra(alg), prefix); });
      s.filtrations.emplace(name, NamedFiltration{alg, std::move(xi)});
    }
  }
  if (const json* ms = section("martingales")) {
    for (const auto& [name, value] : ms->items()) {
      const std::string path = child("/martingales", name);
      if (!value.is_object() || !value.contains("filtration") || !value["filtration"].is_string()) {
        fail(path, "expected {filtration, prefix}");
      }
      const auto fname = value["filtration"].get<std::string>();
      if (!s.filtrations.contains(fname)) fail(child(path, "filtration"), "unknown filtration '" + fname + "'");
      if (!value.contains("prefix")) fail(path, "missing field 'prefix'");
      auto prefix = vectors_from(value["prefix"], child(path, "prefix"), n);
      const auto& xi = s.filtrations.at(fname).filtration;
      auto x = rethrow_as_parse<Martingale>(path, [&] { return Martingale(xi, prefix); });
      s.martingales.emplace(name, NamedMartingale{fname, std::move(x)});
    }
  }
  if (root.contains("checks")) {
    const auto& checks = root["checks"];
    if (!checks.is_array()) fail("/checks", "expected an array");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const std::string path = child("/checks", i);
      const auto& c = checks[i];
      if (!c.is_object()) fail(path, "expected an object");
      CheckSpec spec;
      if (!c.contains("kind") || !c["kind"].is_string()) fail(path, "missing field 'kind'");
      spec.kind = c["kind"].get<std::string>();
      if (!check_kinds().contains(spec.kind)) fail(child(path, "kind"), "unknown check kind '" + spec.kind + "'");
      if (c.contains("name")) {
        if (!c["name"].is_string()) fail(child(path, "name"), "expected a string");
        spec.name = c["name"].get<std::string>();
      } else {
        spec.name = spec.kind + "-" + std::to_string(i + 1);
      }
      if (c.contains("expect")) {
        const auto& e = c["expect"];
        if (e == true) {
          spec.expect = Expectation::holds;
        } else if (e == false) {
          spec.expect = Expectation::fails;
        } else if (e == "error") {
          spec.expect = Expectation::error;
        } else {
          fail(child(path, "expect"), "expected true, false or \"error\"");
        }
      }
      for (const auto& [key, value] : c.items()) {
        if (key != "kind" && key != "name" && key != "expect") spec.params[key] = value;
      }
      validate_check(s, spec, path);
      s.checks.push_back(std::move(spec));
    }
  }
  return s;
}

json to_json(const Scenario& s) {
  json out;
  out["dimension"] = s.dimension;
  out["norm"] = to_string(s.norm);
  if (!s.algebras.empty()) {
    json algebras = json::object();
    for (const auto& [name, a] : s.algebras) {
      json blocks = json::array();
      for (std::size_t k = 0; k < a.atom_count(); ++k) blocks.push_back(to_json(a.atom(k)));
      algebras[name] = blocks;
    }
    out["algebras"] = algebras;
  }
  if (!s.operators.empty()) {
    json ops = json::object();
    for (const auto& [name, t] : s.operators) ops[name] = to_json(t.matrix());
    out["operators"] = ops;
  }
  if (!s.vectors.empty()) {
    json vs = json::object();
    for (const auto& [name, v] : s.vectors) vs[name] = to_json(v);
    out["vectors"] = vs;
  }
  if (!s.filtrations.empty()) {
    json fs = json::object();
    for (const auto& [name, f] : s.filtrations) {
      fs[name] = {{"algebra", f.algebra}, {"prefix", to_json(f.filtration.prefix())}};
    }
    out["filtrations"] = fs;
  }
  if (!s.martingales.empty()) {
    json ms = json::object();
    for (const auto& [name, m] : s.martingales) {
      ms[name] = {{"filtration", m.filtration}, {"prefix", to_json(m.martingale.prefix())}};
    }
    out["martingales"] = ms;
  }
  json checks = json::array();
  for (const auto& c : s.checks) {
    json j = c.params;
    j["name"] = c.name;
    j["kind"] = c.kind;
    j["expect"] = expectation_json(c.expect);
    checks.push_back(j);
  }
  out["checks"] = checks;
  return out;
}

std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::error:
      return "error";
  }
  return "?";
}

namespace {

class CheckContext {
 public:
  CheckContext(const Scenario& s, const CheckSpec& c, const RunOptions& o) : s_(s), c_(c), o_(o) {}

  const json& field(const char* key) const {
    if (!c_.params.contains(key)) throw PreconditionError(std::string("missing field '") + key + "'");
    return c_.params.at(key);
  }
  bool has(const char* key) const { return c_.params.contains(key); }
  std::string name(const char* key) const {
    const json& v = field(key);
    if (!v.is_string()) throw PreconditionError(std::string("field '") + key + "' must be a name");
    return v.get<std::string>();
  }
  const PositiveOperator& op(const char* key = "operator") const { return s_.op(name(key)); }
  BooleanSubalgebra algebra(const char* key = "algebra") const { return s_.algebra(name(key)); }
  const ForwardFiltration& filtration(const char* key = "filtration") const { return s_.filtration(name(key)); }
  const Martingale& martingale(const char* key = "martingale") const { return s_.martingale(name(key)); }
  std::size_t dim() const { return s_.dimension; }
  const Scenario& scenario() const { return s_; }
  const RunOptions& options() const { return o_; }

  std::uint64_t integer(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = field(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw PreconditionError(std::string("field '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }
  Scalar scalar(const json& v, const std::string& what) const { return parse_param([&] { return scalar_from(v, what); }); }
  Vector vec(const json& v, const std::string& what) const {
    if (v.is_string()) return s_.vector(v.get<std::string>());
    return parse_param([&] { return vector_from(v, what, dim()); });
  }
  std::vector<Vector> vecs(const json& v, const std::string& what) const {
    if (!v.is_array()) throw PreconditionError(what + " must be a list of vectors");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vec(v[i], what));
    return out;
  }
  std::vector<OrderProjection> prefix(const json& v, const std::string& what) const {
    return parse_param([&] { return prefix_from(v, what, dim()); });
  }
  OrderProjection coords(const json& v, const std::string& what) const {
    return parse_param([&] { return coords_from(v, what, dim()); });
  }

 private:
  template <typename F>
  auto parse_param(F f) const -> decltype(f()) {
    try {
      return f();
    } catch (const ParseError& e) {
      throw PreconditionError(e.what());
    }
  }

  const Scenario& s_;
  const CheckSpec& c_;
  const RunOptions& o_;
};

struct Outcome {
  bool holds = true;
  json witness = json::object();
};

json witness_json(const VolterraWitness& w) {
  return {{"pi", to_json(w.pi)}, {"x", to_json(w.x)}, {"y", to_json(w.y)}};
}

json martingale_json(const Martingale& x) { return to_json(x.prefix()); }

MartingaleMap map_from(const CheckContext& ctx, const ForwardFiltration& source, const ForwardFiltration& target) {
  const json& m = ctx.field("map");
  if (m == "identity") {
    if (!(source == target)) throw PreconditionError("identity map needs equal source and target");
    return MartingaleMap::identity(source);
  }
  if (m == "shift") {
    if (!(shift_L(source) == target)) throw PreconditionError("shift map needs target L(source)");
    return MartingaleMap::shift(source);
  }
  if (m.is_object() && m.contains("stages")) {
    std::vector<Matrix> stages;
    for (const auto& name : m.at("stages")) stages.push_back(ctx.scenario().op(name.get<std::string>()).matrix());
    return CoordwiseOperator(source, target, std::move(stages)).as_map();
  }
  throw PreconditionError("map must be \"identity\", \"shift\" or {\"stages\": [...]}");
}

json defects_json(const IntertwinerCert& cert) {
  json d = json::array();
  for (const auto& [b, defect] : cert.residual) d.push_back({{"basis", b}, {"defect", martingale_json(defect)}});
  return d;
}

Outcome run_b_volterra(const CheckContext& ctx) {
  const auto v = is_b_volterra(ctx.op(), ctx.algebra());
  Outcome out{v.holds};
  if (v.witness) out.witness = witness_json(*v.witness);
  return out;
}

Outcome run_regular_volterra(const CheckContext& ctx) {
  const auto v = is_regular_volterra(ctx.op(), ctx.filtration());
  Outcome out{v.holds};
  if (v.witness) out.witness = witness_json(*v.witness);
  return out;
}

Outcome run_equivalences(const CheckContext& ctx) {
  const auto algebra = ctx.algebra();
  auto agrees = [&](const PositiveOperator& t, Equivalences& e) {
    e = volterra_equivalences(t, algebra);
    return e.agree() && e.definitional == is_b_volterra(t, algebra).holds;
  };
  Equivalences e;
  Outcome out{agrees(ctx.op(), e)};
  out.witness = {{"definitional", e.definitional},
                 {"left_absorbs", e.left_absorbs},
                 {"right_complement", e.right_complement},
                 {"band_invariant", e.band_invariant}};
  const auto samples = ctx.integer("samples", 0);
  if (samples > 0) {
    Rng rng(ctx.options().seed);
    std::size_t disagreements = 0;
    std::size_t volterra = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const auto t = random_operator(algebra, rng, 10);
      Equivalences es;
      if (!agrees(t, es)) ++disagreements;
      if (es.definitional) ++volterra;
    }
    out.holds = out.holds && disagreements == 0;
    out.witness["samples"] = samples;
    out.witness["sampled_volterra"] = volterra;
    out.witness["disagreements"] = disagreements;
  }
  return out;
}

Outcome run_lift(const CheckContext& ctx) {
  const auto& xi = ctx.filtration();
  const auto& x = ctx.martingale();
  if (!(x.filtration() == xi)) throw PreconditionError("martingale is not over the check's filtration");
  const Martingale y = lift_T_hat(ctx.op(), xi).apply(x);
  Outcome out{true, {{"image", martingale_json(y)}}};
  if (ctx.has("expected")) out.holds = y == ctx.martingale("expected");
  if (ctx.has("expected_scale")) out.holds = out.holds && y == ctx.scalar(ctx.field("expected_scale"), "expected_scale") * x;
  return out;
}

Outcome run_square(const CheckContext& ctx) {
  const auto v = check_square(ctx.op(), ctx.filtration(), ctx.integer("depth", 3));
  Outcome out{v.holds, {{"checked", v.checked}}};
  if (v.witness) {
    out.witness["stage"] = v.witness->stage;
    out.witness["square"] = to_string(v.witness->kind);
    out.witness["basis"] = v.witness->basis;
  }
  return out;
}

Outcome run_regular_norm(const CheckContext& ctx) {
  const auto& x = ctx.martingale();
  NormTag tag{ctx.scenario().norm};
  if (ctx.has("norm")) {
    auto p = parse_norm_kind(ctx.name("norm"));
    if (!p) throw PreconditionError("unknown norm");
    tag.p = *p;
  }
  std::vector<Scalar> grid;
  if (ctx.has("grid")) {
    for (const auto& v : ctx.field("grid")) grid.push_back(ctx.scalar(v, "grid"));
  } else {
    Scalar top = 0;
    for (const auto& v : x.prefix()) top = std::max(top, exact_norm(v, kNormInf));
    mpz_class ceil_top;
    mpz_cdiv_q(ceil_top.get_mpz_t(), top.get_num_mpz_t(), top.get_den_mpz_t());
    for (mpz_class k = 0; k <= ceil_top; ++k) grid.emplace_back(k);
  }
  const NormValue fast = regular_norm(x, tag);
  const auto brute = regular_norm_bruteforce(x, tag, grid);
  Outcome out{brute.value && norm_equal(fast, *brute.value)};
  out.witness = {{"fast", to_json(fast)}, {"candidates", brute.candidates}, {"admissible", brute.admissible}};
  out.witness["bruteforce"] = brute.value ? to_json(*brute.value) : json(nullptr);
  if (ctx.has("expected")) {
    const Scalar want = ctx.scalar(ctx.field("expected"), "expected");
    const bool match = tag.p == NormKind::two ? norm_equal(fast, NormValue(want.get_d())) : norm_equal(fast, NormValue(want));
    out.holds = out.holds && match;
  }
  return out;
}

Outcome run_intertwine(const CheckContext& ctx) {
  const auto& source = ctx.filtration("source");
  const auto& target = ctx.filtration("target");
  const auto cert = in_LT(map_from(ctx, source, target), ctx.op());
  return {cert.holds, {{"defects", defects_json(cert)}}};
}

Outcome run_antichain_product(const CheckContext& ctx) {
  std::vector<PositiveOperator> stages;
  for (const auto& name : ctx.field("stages")) stages.push_back(ctx.scenario().op(name.get<std::string>()));
  const auto r = antichain_conditions(stages, ctx.op(), ctx.filtration("source"), ctx.filtration("target"));
  if (r.cond_i != r.cond_ii) throw InternalError("the two antichain conditions disagree");
  Outcome out{r.product.has_value()};
  out.witness = {{"cond_i", r.cond_i}, {"cond_ii", r.cond_ii}, {"mapping_ok", r.mapping_ok}};
  return out;
}

Germ germ_from(const CheckContext& ctx, const char* key) {
  const json& g = ctx.field(key);
  const std::size_t stage = g.value("stage", std::size_t{0});
  return {stage, ctx.scenario().martingale(g.at("martingale").get<std::string>())};
}

Outcome run_germ_equal(const CheckContext& ctx) {
  const std::string system = ctx.has("system") ? ctx.name("system") : std::string("endo");
  const std::size_t horizon = ctx.integer("horizon", ctx.options().horizon);
  std::optional<DirectedSystem> sys;
  if (system == "endo") {
    sys = DirectedSystem::endo(ctx.op(), ctx.filtration(), horizon);
  } else if (system == "shift") {
    sys = DirectedSystem::shift(ctx.filtration(), horizon);
  } else {
    throw PreconditionError("system must be \"endo\" or \"shift\"");
  }
  const auto r = germ_equal(*sys, germ_from(ctx, "a"), germ_from(ctx, "b"));
  Outcome out{r.equal, json::object()};
  if (r.equal) out.witness["stage"] = r.stage;
  return out;
}

Outcome run_sectional(const CheckContext& ctx) {
  const auto algebra = ctx.algebra();
  std::optional<SectionalMap> s;
  const json& m = ctx.field("map");
  if (m == "identity") {
    s = SectionalMap::identity(algebra);
  } else {
    if (!m.is_array()) throw PreconditionError("map must be \"identity\" or a list of [from, to] pairs");
    std::map<std::uint64_t, OrderProjection> table;
    for (const auto& pair : m) {
      if (!pair.is_array() || pair.size() != 2) throw PreconditionError("map entries are [from, to] pairs");
      table[ctx.coords(pair[0], "map").mask()] = ctx.coords(pair[1], "map");
    }
    s = SectionalMap::from_function(algebra, [&](const OrderProjection& p) {
      auto it = table.find(p.mask());
      if (it == table.end()) throw PreconditionError("map does not cover every member of the algebra");
      return it->second;
    });
  }
  Outcome out;
  out.witness = {{"open", is_sectionally_open(*s)}, {"fixes_zero", fixes_zero(*s)}, {"inflationary", is_inflationary(*s)}};
  if (ctx.has("property")) {
    const std::string p = ctx.name("property");
    if (p == "open") {
      out.holds = is_sectionally_open(*s);
    } else if (p == "fixes-zero") {
      out.holds = fixes_zero(*s);
    } else if (p == "inflationary") {
      out.holds = is_inflationary(*s);
    } else {
      throw PreconditionError("property must be open, fixes-zero or inflationary");
    }
  }
  if (ctx.has("filtration")) {
    const auto image = act_sectional(*s, ctx.filtration());
    out.witness["image"] = to_json(image.prefix());
    if (ctx.has("expected")) {
      out.holds = out.holds && std::ranges::equal(image.prefix(), ctx.prefix(ctx.field("expected"), "expected"));
    }
  }
  return out;
}

Outcome run_resolution(const CheckContext& ctx) {
  std::vector<std::pair<Scalar, OrderProjection>> breakpoints;
  for (const auto& b : ctx.field("breakpoints")) {
    breakpoints.emplace_back(ctx.scalar(b.at("t"), "t"), ctx.coords(b.at("coords"), "coords"));
  }
  const ResolutionOfIdentity e(ctx.dim(), std::move(breakpoints));
  std::vector<Scalar> samples;
  for (const auto& t : ctx.field("samples")) samples.push_back(ctx.scalar(t, "samples"));
  std::optional<Scalar> s0;
  if (ctx.has("s0")) s0 = ctx.scalar(ctx.field("s0"), "s0");
  const ForwardFiltration xi = ctx.has("algebra") ? discretize_resolution(ctx.algebra(), e, samples, s0)
                                                  : discretize_resolution(e, samples, s0);
  Outcome out{true, {{"prefix", to_json(xi.prefix())}}};
  if (ctx.has("expected")) out.holds = std::ranges::equal(xi.prefix(), ctx.prefix(ctx.field("expected"), "expected"));
  return out;
}

Outcome run_chain_subspace(const CheckContext& ctx) {
  std::vector<std::size_t> chain;
  for (const auto& c : ctx.field("chain")) {
    if (c == "inf") {
      chain.push_back(kInfinity);
    } else if (c.is_number_unsigned()) {
      chain.push_back(c.get<std::size_t>());
    } else {
      throw PreconditionError("chain indices are nonnegative integers or \"inf\"");
    }
  }
  const ChainSubspace space(ctx.filtration(), chain);
  const auto tuple = ctx.vecs(ctx.field("tuple"), "tuple");
  const std::string op = ctx.has("op") ? ctx.name("op") : std::string("member");
  Outcome out;
  if (op == "member") {
    out.holds = space.member(tuple);
  } else if (op == "member-literal") {
    out.holds = space.member_literal(tuple);
  } else if (op == "apply") {
    const auto image = space.apply(ctx.op(), tuple);
    out.witness["image"] = to_json(image);
    out.holds = space.member(image);
    if (ctx.has("expected")) out.holds = out.holds && image == ctx.vecs(ctx.field("expected"), "expected");
  } else if (op == "literal-closed") {
    std::vector<Vector> image;
    for (const auto& v : tuple) image.push_back(ctx.op().apply(v));
    out.witness["image"] = to_json(image);
    out.witness["input_member"] = space.member_literal(tuple);
    out.witness["image_member"] = space.member_literal(image);
    out.holds = !space.member_literal(tuple) || space.member_literal(image);
  } else {
    throw PreconditionError("op must be member, member-literal, apply or literal-closed");
  }
  return out;
}

Outcome run_conditional_expectation(const CheckContext& ctx) {
  const auto& t = ctx.op();
  Outcome out{is_conditional_expectation(t)};
  if (ctx.has("range_chain")) {
    const auto xi = ce_filtration(t, ctx.vecs(ctx.field("range_chain"), "range_chain"));
    out.witness["prefix"] = to_json(xi.prefix());
    out.holds = out.holds && is_regular_volterra(t, xi).holds;
    if (ctx.has("expected")) {
      out.holds = out.holds && std::ranges::equal(xi.prefix(), ctx.prefix(ctx.field("expected"), "expected"));
    }
  }
  return out;
}

Outcome run_bang(const CheckContext& ctx) {
  const auto& t = ctx.op();
  const auto& xi = ctx.filtration();
  const auto& x = ctx.martingale();
  if (!(x.filtration() == xi)) throw PreconditionError("martingale is not over the check's filtration");
  const auto l = static_cast<unsigned>(ctx.integer("l", 1));
  const auto tuple = MartTuple::diagonal(x, ctx.integer("kmax", MartTuple::kDefaultKmax));
  const MartTuple direct = bang_operator(t, xi, l, tuple);
  MartTuple iterated = tuple;
  for (unsigned i = 0; i < l; ++i) iterated = bang_operator(t, xi, 1, iterated);
  return {direct == iterated, {{"y0", martingale_json(direct.entries()[0])}}};
}

Outcome run_hat_L(const CheckContext& ctx) {
  const auto& source = ctx.filtration("source");
  const auto& target = ctx.filtration("target");
  const Intertwiner s = certify(map_from(ctx, source, target), ctx.op());
  if (!s.cert) throw PreconditionError("input map is not an intertwiner");
  const Intertwiner lifted = hat_L(s);
  return {lifted.cert.holds && hat_L_relation(s, lifted), {{"defects", defects_json(lifted.cert)}}};
}

using Runner = Outcome (*)(const CheckContext&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"b-volterra", run_b_volterra},
      {"regular-volterra", run_regular_volterra},
      {"equivalences", run_equivalences},
      {"lift", run_lift},
      {"square", run_square},
      {"regular-norm", run_regular_norm},
      {"intertwine", run_intertwine},
      {"antichain-product", run_antichain_product},
      {"germ-equal", run_germ_equal},
      {"sectional", run_sectional},
      {"resolution", run_resolution},
      {"chain-subspace", run_chain_subspace},
      {"conditional-expectation", run_conditional_expectation},
      {"bang", run_bang},
      {"hat-L", run_hat_L},
  };
  return table;
}

}  // namespace

std::size_t Report::passed() const {
  return std::ranges::count_if(records, [](const CheckRecord& r) { return r.verdict == Verdict::pass; });
}
std::size_t Report::failed() const {
  return std::ranges::count_if(records, [](const CheckRecord& r) { return r.verdict == Verdict::fail; });
}
std::size_t Report::errors() const {
  return std::ranges::count_if(records, [](const CheckRecord& r) { return r.verdict == Verdict::error; });
}

int Report::exit_code() const {
  if (errors() > 0) return 2;
  if (failed() > 0) return 1;
  return 0;
}

Report run_checks(const Scenario& s, const RunOptions& options) {
  Report report;
  for (const auto& c : s.checks) {
    CheckRecord rec;
    rec.name = c.name;
    rec.kind = c.kind;
    rec.expect = c.expect;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = runners().at(c.kind)(CheckContext(s, c, options));
      rec.outcome = o.holds;
      rec.witness = o.witness;
    } catch (const Error& e) {
      rec.error = e.what();
    } catch (const json::exception& e) {
      rec.error = std::string("malformed check parameters: ") + e.what();
    }
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!rec.outcome) {
      rec.verdict = c.expect == Expectation::error ? Verdict::pass : Verdict::error;
    } else if (c.expect == Expectation::error) {
      rec.verdict = Verdict::fail;
    } else {
      rec.verdict = *rec.outcome == (c.expect == Expectation::holds) ? Verdict::pass : Verdict::fail;
    }
    report.records.push_back(std::move(rec));
  }
  return report;
}

json report_json(const Report& r, bool timing) {
  json checks = json::array();
  for (const auto& rec : r.records) {
    json j{{"name", rec.name},
           {"kind", rec.kind},
           {"expect", expectation_json(rec.expect)},
           {"verdict", to_string(rec.verdict)},
           {"outcome", rec.outcome ? json(*rec.outcome) : json(nullptr)},
           {"witness", rec.witness.is_null() ? json::object() : rec.witness}};
    if (!rec.error.empty()) j["error"] = rec.error;
    if (timing) j["elapsed_ms"] = rec.elapsed_ms;
    checks.push_back(std::move(j));
  }
  return {{"checks", checks},
          {"summary",
           {{"total", r.records.size()}, {"passed", r.passed()}, {"failed", r.failed()}, {"errors", r.errors()}}}};
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  for (const auto& rec : r.records) {
    os << (rec.verdict == Verdict::pass ? "PASS " : rec.verdict == Verdict::fail ? "FAIL " : "ERROR") << "  "
       << rec.name << " [" << rec.kind << "]";
    if (rec.outcome) os << " outcome=" << (*rec.outcome ? "true" : "false");
    if (!rec.error.empty()) os << " error: " << rec.error;
    if (rec.verdict != Verdict::pass && !rec.witness.empty()) os << " witness=" << rec.witness.dump();
    os << '\n';
  }
  os << r.records.size() << " checks, " << r.passed() << " passed, " << r.failed() << " failed, " << r.errors()
     << " errors\n";
  return os.str();
}

}  // namespace bvolterra
