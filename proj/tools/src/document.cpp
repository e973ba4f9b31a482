#include "gshift_cli/document.hpp"

#include <cstdio>

namespace gshift::cli {

namespace {

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::int64_t parse_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string parse_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

Rational parse_real_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_number_float()) {
    text = j.dump();
  } else {
    throw SchemaError(path, "expected a rational (\"p/q\", decimal string or number)");
  }
  const auto q = parse_rational(text);
  if (!q) throw SchemaError(path, "malformed rational '" + text + "'");
  return *q;
}

double parse_real_double(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  return parse_real_rational(j, path).get_d();
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

}  // namespace

Scalar parse_scalar(const Json& j, const std::string& path, ArithmeticMode mode) {
  if (j.is_object()) {
    const Json& re = require(j, "re", path);
    const Json* im = optional_field(j, "im");
    if (mode == ArithmeticMode::floating) {
      return Scalar(std::complex<double>(parse_real_double(re, path + ".re"),
                                         im ? parse_real_double(*im, path + ".im") : 0.0));
    }
    return Scalar(parse_real_rational(re, path + ".re"), im ? parse_real_rational(*im, path + ".im") : Rational(0));
  }
  if (mode == ArithmeticMode::floating) return Scalar(std::complex<double>(parse_real_double(j, path), 0.0));
  return Scalar(parse_real_rational(j, path));
}

SparseVector parse_sparse_vector(const Json& j, const std::string& path, ArithmeticMode mode) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of [coordinate, scalar] pairs");
  SparseVector v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& entry = j[i];
    if (!entry.is_array() || entry.size() != 2) throw SchemaError(idx(path, i), "expected [coordinate, scalar]");
    const Coord n = parse_integer(entry[0], idx(path, i) + "[0]");
    v.add_at(n, parse_scalar(entry[1], idx(path, i) + "[1]", mode));
  }
  return v;
}

WeightSequence parse_weights(const Json& j, const std::string& path, ArithmeticMode mode) {
  if (!j.is_object()) throw SchemaError(path, "expected an object with prefix and/or tail");
  std::vector<Scalar> prefix;
  if (const Json* p = optional_field(j, "prefix")) {
    if (!p->is_array()) throw SchemaError(path + ".prefix", "expected an array");
    for (std::size_t i = 0; i < p->size(); ++i) prefix.push_back(parse_scalar((*p)[i], idx(path + ".prefix", i), mode));
  }
  std::int64_t start = 1;
  if (const Json* s = optional_field(j, "prefix_start")) start = parse_integer(*s, path + ".prefix_start");

  std::optional<TailRule> tail;
  if (const Json* t = optional_field(j, "tail")) {
    const std::string tpath = path + ".tail";
    const std::string name = parse_string(require(*t, "rule", tpath), tpath + ".rule");
    const auto kind = parse_tail_kind(name);
    if (!kind) throw SchemaError(tpath + ".rule", "unknown tail rule '" + name + "'", ErrorCode::UnknownTailRule);
    Json params = Json::object();
    if (const Json* p = optional_field(*t, "params")) {
      if (!p->is_object()) throw SchemaError(tpath + ".params", "expected an object");
      params = *p;
    }
    const std::string ppath = tpath + ".params";
    auto param = [&](const char* key, Rational fallback) {
      const Json* v = optional_field(params, key);
      return v ? parse_real_rational(*v, ppath + "." + key) : fallback;
    };
    switch (*kind) {
      case TailRule::Kind::constant: tail = TailRule::constant(param("value", 1)); break;
      case TailRule::Kind::one_over_n: tail = TailRule::one_over_n(param("scale", 1)); break;
      case TailRule::Kind::geometric: tail = TailRule::geometric(param("ratio", Rational(1, 2)), param("scale", 1)); break;
      case TailRule::Kind::one_plus_one_over_n: tail = TailRule::one_plus_one_over_n(); break;
    }
  }
  if (prefix.empty() && !tail) throw SchemaError(path, "weights need a prefix or a tail");
  return WeightSequence(std::move(prefix), std::move(tail), start, mode);
}

OperatorExpr parse_operator(const Json& j, const std::string& path, ArithmeticMode mode) {
  const std::string type = parse_string(require(j, "type", path), path + ".type");
  if (type == "scalar_identity") {
    return scalar_identity(parse_scalar(require(j, "lambda", path), path + ".lambda", mode));
  }
  if (type == "dense_block") {
    const std::int64_t offset = j.contains("offset") ? parse_integer(j["offset"], path + ".offset") : 1;
    const Json& rows = require(j, "entries", path);
    const std::string epath = path + ".entries";
    if (!rows.is_array() || rows.empty()) throw SchemaError(epath, "expected a non-empty square matrix");
    const std::size_t n = rows.size();
    DenseMatrix m(n, n, mode);
    for (std::size_t r = 0; r < n; ++r) {
      if (!rows[r].is_array() || rows[r].size() != n) throw SchemaError(idx(epath, r), "row length must equal the row count");
      for (std::size_t c = 0; c < n; ++c) m(r, c) = parse_scalar(rows[r][c], idx(idx(epath, r), c), mode);
    }
    return dense_block(offset, std::move(m));
  }
  if (type == "weighted_shift") {
    WeightedShift s;
    const std::string dir = j.contains("direction") ? parse_string(j["direction"], path + ".direction") : "forward";
    if (dir == "forward") {
      s.direction = ShiftDirection::forward;
    } else if (dir == "bilateral") {
      s.direction = ShiftDirection::bilateral;
    } else {
      throw SchemaError(path + ".direction", "expected forward or bilateral");
    }
    s.weights = parse_weights(require(j, "weights", path), path + ".weights", mode);
    if (j.contains("stride")) s.stride = parse_integer(j["stride"], path + ".stride");
    if (j.contains("phase")) s.phase = parse_integer(j["phase"], path + ".phase");
    if (s.stride < 1) throw SchemaError(path + ".stride", "stride must be positive");
    return OperatorExpr(std::move(s));
  }
  if (type == "rank_one") {
    const SparseVector f = parse_sparse_vector(require(j, "functional", path), path + ".functional", mode);
    const SparseVector v = parse_sparse_vector(require(j, "vector", path), path + ".vector", mode);
    const Scalar scale = j.contains("scale") ? parse_scalar(j["scale"], path + ".scale", mode) : Scalar::one(mode);
    return rank_one(Functional(f), v, scale);
  }
  if (type == "sum") {
    const Json& terms = require(j, "terms", path);
    if (!terms.is_array()) throw SchemaError(path + ".terms", "expected an array");
    const Json* coeffs = optional_field(j, "coefficients");
    if (coeffs && (!coeffs->is_array() || coeffs->size() != terms.size())) {
      throw SchemaError(path + ".coefficients", "expected one coefficient per term");
    }
    std::vector<SumTerm> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      Scalar c = coeffs ? parse_scalar((*coeffs)[i], idx(path + ".coefficients", i), mode) : Scalar::one(mode);
      out.push_back({std::move(c), parse_operator(terms[i], idx(path + ".terms", i), mode)});
    }
    return sum(std::move(out));
  }
  if (type == "nilpotent") {
    const Json& blocks = require(j, "blocks", path);
    if (!blocks.is_array()) throw SchemaError(path + ".blocks", "expected an array");
    std::vector<JordanBlock> list;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string bpath = idx(path + ".blocks", i);
      const std::int64_t size = parse_integer(require(blocks[i], "size", bpath), bpath + ".size");
      const std::int64_t offset = parse_integer(require(blocks[i], "offset", bpath), bpath + ".offset");
      if (size < 1) throw SchemaError(bpath + ".size", "block size must be positive");
      list.push_back({static_cast<std::size_t>(size), offset});
    }
    return nilpotent_model(list, mode);
  }
  throw SchemaError(path + ".type", "unknown operator type '" + type + "'");
}

MixtureSpec parse_mixture(const Json& j, const std::string& path, NormMode norm, ArithmeticMode mode) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  MixtureSpec spec;
  spec.norm = norm;
  auto list = [&](const char* key, std::vector<WeightSequence>& out) {
    const Json* l = optional_field(j, key);
    if (!l) return;
    if (!l->is_array()) throw SchemaError(path + "." + key, "expected an array of weight sequences");
    for (std::size_t i = 0; i < l->size(); ++i) out.push_back(parse_weights((*l)[i], idx(path + "." + key, i), mode));
  };
  list("forward", spec.forward);
  list("bilateral", spec.bilateral);
  if (spec.chain_count() == 0) throw SchemaError(path, "a mixture needs at least one forward or bilateral chain");
  return spec;
}

OperatorDocument parse_operator_document(const Json& j, ArithmeticMode mode) {
  if (!j.is_object()) throw SchemaError("$", "expected a JSON object");
  OperatorDocument doc;
  if (const Json* space = optional_field(j, "space")) {
    if (!space->is_object()) throw SchemaError("$.space", "expected an object");
    if (const Json* n = optional_field(*space, "norm")) {
      const auto p = parse_norm_mode(parse_string(*n, "$.space.norm"));
      if (!p) throw SchemaError("$.space.norm", "expected l1, l2 or linf");
      doc.norm = *p;
    }
  }
  if (const Json* m = optional_field(j, "mixture")) doc.mixture = parse_mixture(*m, "$.mixture", doc.norm, mode);
  if (const Json* op = optional_field(j, "operator")) {
    doc.op = parse_operator(*op, "$.operator", mode);
  } else if (doc.mixture) {
    doc.op = mixture_operator(*doc.mixture);
  } else {
    throw SchemaError("$.operator", "missing required field");
  }
  if (const Json* a = optional_field(j, "adapted_set")) {
    const Json& chains = require(*a, "chains", "$.adapted_set");
    if (!chains.is_array()) throw SchemaError("$.adapted_set.chains", "expected an array of chains");
    std::vector<std::vector<SparseVector>> out;
    for (std::size_t l = 0; l < chains.size(); ++l) {
      const std::string cpath = idx("$.adapted_set.chains", l);
      if (!chains[l].is_array()) throw SchemaError(cpath, "expected an array of vectors");
      std::vector<SparseVector> chain;
      for (std::size_t k = 0; k < chains[l].size(); ++k) {
        chain.push_back(parse_sparse_vector(chains[l][k], idx(cpath, k), mode));
      }
      out.push_back(std::move(chain));
    }
    doc.adapted_chains = std::move(out);
  }
  if (const Json* o = optional_field(j, "orbit")) {
    if (!o->is_object()) throw SchemaError("$.orbit", "expected an object");
    OrbitSpec spec;
    spec.lambda = o->contains("lambda") ? parse_scalar((*o)["lambda"], "$.orbit.lambda", mode) : Scalar::one(mode);
    spec.seed = o->contains("seed") ? parse_sparse_vector((*o)["seed"], "$.orbit.seed", mode)
                                    : SparseVector::unit(1, mode);
    if (const Json* t = optional_field(*o, "targets")) {
      if (!t->is_array()) throw SchemaError("$.orbit.targets", "expected an array");
      for (std::size_t i = 0; i < t->size(); ++i) {
        const std::string tpath = idx("$.orbit.targets", i);
        OrbitTarget target;
        target.center = parse_sparse_vector(require((*t)[i], "center", tpath), tpath + ".center", mode);
        if ((*t)[i].contains("radius")) target.radius = parse_real_double((*t)[i]["radius"], tpath + ".radius");
        spec.targets.push_back(std::move(target));
      }
    }
    doc.orbit = std::move(spec);
  }
  if (const Json* k = optional_field(j, "functional_norm_bound")) {
    doc.functional_norm_bound = parse_real_rational(*k, "$.functional_norm_bound");
    if (sgn(doc.functional_norm_bound) <= 0) throw SchemaError("$.functional_norm_bound", "must be positive");
  }
  return doc;
}

OperatorDocument parse_operator_spec(const std::string& text, ArithmeticMode mode) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_operator_document(j, mode);
}

// Serialisation -------------------------------------------------------------------------

Json to_json(const Scalar& s) {
  if (s.is_exact()) {
    const auto& e = s.exact();
    if (sgn(e.im) == 0) return format_rational(e.re);
    return Json{{"re", format_rational(e.re)}, {"im", format_rational(e.im)}};
  }
  const auto z = s.to_complex();
  if (z.imag() == 0.0) return z.real();
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

Json to_json(const SparseVector& v) {
  Json out = Json::array();
  for (const auto& [n, value] : v.entries()) out.push_back(Json::array({n, to_json(value)}));
  return out;
}

Json to_json(const WeightSequence& w) {
  if (w.is_closure()) throw Error(ErrorCode::Precondition, "closure weights '" + w.label() + "' cannot be serialised");
  Json out = Json::object();
  Json prefix = Json::array();
  for (const auto& s : w.prefix()) prefix.push_back(to_json(s));
  out["prefix"] = std::move(prefix);
  if (w.prefix_start() != 1) out["prefix_start"] = w.prefix_start();
  if (const auto& t = w.tail()) {
    Json params = Json::object();
    switch (t->kind) {
      case TailRule::Kind::constant: params["value"] = format_rational(t->value); break;
      case TailRule::Kind::one_over_n: params["scale"] = format_rational(t->scale); break;
      case TailRule::Kind::geometric:
        params["ratio"] = format_rational(t->ratio);
        params["scale"] = format_rational(t->scale);
        break;
      case TailRule::Kind::one_plus_one_over_n: break;
    }
    out["tail"] = Json{{"rule", to_string(t->kind)}, {"params", std::move(params)}};
  }
  return out;
}

Json to_json(const OperatorExpr& op) {
  return std::visit(
      [](const auto& node) -> Json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, DenseBlock>) {
          Json rows = Json::array();
          for (std::size_t r = 0; r < node.entries.rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < node.entries.cols(); ++c) row.push_back(to_json(node.entries(r, c)));
            rows.push_back(std::move(row));
          }
          return Json{{"type", "dense_block"}, {"offset", node.offset}, {"entries", std::move(rows)}};
        } else if constexpr (std::is_same_v<T, WeightedShift>) {
          return Json{{"type", "weighted_shift"},
                      {"direction", node.direction == ShiftDirection::forward ? "forward" : "bilateral"},
                      {"weights", to_json(node.weights)},
                      {"stride", node.stride},
                      {"phase", node.phase}};
        } else if constexpr (std::is_same_v<T, RankOne>) {
          return Json{{"type", "rank_one"},
                      {"functional", to_json(node.functional.coefficients())},
                      {"vector", to_json(node.vector)},
                      {"scale", to_json(node.scale)}};
        } else if constexpr (std::is_same_v<T, ScalarIdentity>) {
          return Json{{"type", "scalar_identity"}, {"lambda", to_json(node.lambda)}};
        } else if constexpr (std::is_same_v<T, Sum>) {
          Json terms = Json::array();
          Json coeffs = Json::array();
          for (const auto& t : node.terms) {
            terms.push_back(to_json(t.op));
            coeffs.push_back(to_json(t.coefficient));
          }
          return Json{{"type", "sum"}, {"terms", std::move(terms)}, {"coefficients", std::move(coeffs)}};
        } else {
          throw Error(ErrorCode::Precondition, "lazy sum '" + node.label + "' cannot be serialised");
        }
      },
      op.node());
}

Json to_json(const MixtureSpec& m) {
  Json forward = Json::array();
  Json bilateral = Json::array();
  for (const auto& w : m.forward) forward.push_back(to_json(w));
  for (const auto& w : m.bilateral) bilateral.push_back(to_json(w));
  return Json{{"forward", std::move(forward)}, {"bilateral", std::move(bilateral)}};
}

Json to_json(const OperatorDocument& doc) {
  Json out{{"space", {{"norm", to_string(doc.norm)}}}, {"operator", to_json(doc.op)}};
  if (doc.mixture) out["mixture"] = to_json(*doc.mixture);
  if (doc.adapted_chains) {
    Json chains = Json::array();
    for (const auto& chain : *doc.adapted_chains) {
      Json c = Json::array();
      for (const auto& v : chain) c.push_back(to_json(v));
      chains.push_back(std::move(c));
    }
    out["adapted_set"] = Json{{"chains", std::move(chains)}};
  }
  if (doc.orbit) {
    Json targets = Json::array();
    for (const auto& t : doc.orbit->targets) targets.push_back(Json{{"center", to_json(t.center)}, {"radius", t.radius}});
    out["orbit"] = Json{{"lambda", to_json(doc.orbit->lambda)}, {"seed", to_json(doc.orbit->seed)}, {"targets", targets}};
  }
  if (doc.functional_norm_bound != 1) out["functional_norm_bound"] = format_rational(doc.functional_norm_bound);
  return out;
}

std::string content_hash(const Json& json) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : json.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

}  // namespace gshift::cli
