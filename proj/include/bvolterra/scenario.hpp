#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bvolterra/filtration.hpp"
#include "bvolterra/lattice.hpp"
#include "bvolterra/martingale.hpp"
#include "bvolterra/projection.hpp"
#include "bvolterra/volterra.hpp"

namespace bvolterra {

enum class Expectation { holds, fails, error };

struct CheckSpec {
  std::string name;
  std::string kind;
  Expectation expect = Expectation::holds;
  /// The remaining fields of the check object.
  nlohmann::json params = nlohmann::json::object();

  friend bool operator==(const CheckSpec&, const CheckSpec&) = default;
};

struct NamedFiltration {
  std::string algebra;
  ForwardFiltration filtration;
  friend bool operator==(const NamedFiltration&, const NamedFiltration&) = default;
};

struct NamedMartingale {
  std::string filtration;
  Martingale martingale;
  friend bool operator==(const NamedMartingale&, const NamedMartingale&) = default;
};

struct Scenario {
  std::size_t dimension = 0;
  NormKind norm = NormKind::inf;
  /// User-defined algebras; "trivial" and "discrete" are always available.
  std::map<std::string, BooleanSubalgebra> algebras;
  std::map<std::string, PositiveOperator> operators;
  std::map<std::string, Vector> vectors;
  std::map<std::string, NamedFiltration> filtrations;
  std::map<std::string, NamedMartingale> martingales;
  std::vector<CheckSpec> checks;

  BooleanSubalgebra algebra(const std::string& name) const;
  const PositiveOperator& op(const std::string& name) const;
  const ForwardFiltration& filtration(const std::string& name) const;
  const Martingale& martingale(const std::string& name) const;
  const Vector& vector(const std::string& name) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ParseError with a byte offset or JSON pointer in the message.
Scenario parse_scenario(std::string_view text);
nlohmann::json to_json(const Scenario& s);
std::string serialize_scenario(const Scenario& s);

struct RunOptions {
  std::size_t horizon = 64;
  std::uint64_t seed = 0;
  bool timing = false;
};

enum class Verdict { pass, fail, error };
const char* to_string(Verdict v);

struct CheckRecord {
  std::string name;
  std::string kind;
  Expectation expect = Expectation::holds;
  Verdict verdict = Verdict::pass;
  /// Empty when the check raised an error.
  std::optional<bool> outcome;
  nlohmann::json witness;
  std::string error;
  double elapsed_ms = 0;
};

struct Report {
  std::vector<CheckRecord> records;
  std::size_t passed() const;
  std::size_t failed() const;
  std::size_t errors() const;
  /// 0 all pass, 1 some failure, 2 some unexpected error.
  int exit_code() const;
};

Report run_checks(const Scenario& s, const RunOptions& options = {});
nlohmann::json report_json(const Report& r, bool timing = false);
std::string report_text(const Report& r);

}  // namespace bvolterra
