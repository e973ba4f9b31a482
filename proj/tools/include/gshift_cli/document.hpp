#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gshift/errors.hpp"
#include "gshift/mixture.hpp"
#include "gshift/operator.hpp"
#include "gshift/shift_theory.hpp"

namespace gshift::cli {

using Json = nlohmann::json;

/// Schema violation located by a JSON path such as $.operator.terms[1].
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& reason, ErrorCode code = ErrorCode::SchemaError)
      : Error(code, path + ": " + reason), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct OrbitSpec {
  Scalar lambda = 1;
  SparseVector seed;
  std::vector<OrbitTarget> targets;
};

struct OperatorDocument {
  NormMode norm = NormMode::l2;
  OperatorExpr op;
  std::optional<MixtureSpec> mixture;
  /// chains[l-1][k-1] = x^l_k
  std::optional<std::vector<std::vector<SparseVector>>> adapted_chains;
  std::optional<OrbitSpec> orbit;
  /// sup_n ||e*_n|| for the weights command (normalised coordinates: 1).
  Rational functional_norm_bound = 1;
};

/// Parses and validates a document. Throws SchemaError (code SchemaError or
/// UnknownTailRule) pointing at the first offending path.
OperatorDocument parse_operator_spec(const std::string& text, ArithmeticMode mode = ArithmeticMode::exact);
OperatorDocument parse_operator_document(const Json& json, ArithmeticMode mode = ArithmeticMode::exact);

Json to_json(const OperatorDocument& doc);
Json to_json(const OperatorExpr& op);
Json to_json(const Scalar& s);
Json to_json(const SparseVector& v);
Json to_json(const WeightSequence& w);
Json to_json(const MixtureSpec& m);

OperatorExpr parse_operator(const Json& json, const std::string& path, ArithmeticMode mode);
Scalar parse_scalar(const Json& json, const std::string& path, ArithmeticMode mode);
SparseVector parse_sparse_vector(const Json& json, const std::string& path, ArithmeticMode mode);
WeightSequence parse_weights(const Json& json, const std::string& path, ArithmeticMode mode);
MixtureSpec parse_mixture(const Json& json, const std::string& path, NormMode norm, ArithmeticMode mode);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string content_hash(const Json& json);

}  // namespace gshift::cli
