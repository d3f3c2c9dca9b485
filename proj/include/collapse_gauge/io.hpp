#pragma once

// JSON and CSV serialization shared by the command-line front end.
//
// Operator files:
//   {"kind": "effect" | "density" | "hermitian", "d": 3,
//    "entries": [[[re, im], [re, im], [re, im]], ...]}     (row-major)
// State files:
//   {"kind": "state", "d": 3, "amplitudes": [[re, im], ...]}

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "collapse_gauge/core.hpp"
#include "collapse_gauge/lambda.hpp"
#include "collapse_gauge/montecarlo.hpp"
#include "collapse_gauge/search.hpp"

namespace collapse_gauge {

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using OperatorFile = std::variant<HermitianOperator, Effect, DensityMatrix>;

nlohmann::json to_json(const HermitianOperator& h);
nlohmann::json to_json(const Effect& e);
nlohmann::json to_json(const DensityMatrix& rho);
nlohmann::json to_json(const PureState& psi);
nlohmann::json to_json(const LambdaResult& r);
nlohmann::json to_json(const EstimateWithCI& est);
nlohmann::json to_json(const SearchReport& report);

/// Schema or invariant violations throw ValidationError.
OperatorFile parse_operator_json(const nlohmann::json& j);
OperatorFile parse_operator_text(std::string_view text);
/// IoError if the file cannot be read.
OperatorFile parse_operator_file(const std::filesystem::path& path);

PureState parse_state_json(const nlohmann::json& j);
PureState parse_state_file(const std::filesystem::path& path);

/// Effects by name: "zero", "identity", "uniform-projector", "rank-k:K"
/// (projector onto the first K discrete Fourier vectors). nullopt if
/// `name` is not one of these.
std::optional<Effect> named_effect(std::string_view name, int d);

/// States by name: "uniform", "basis:K", "random:SEED".
std::optional<PureState> named_state(std::string_view name, int d);

/// Named effect, or else an operator file whose kind is "effect" or
/// "hermitian" (validated as an effect).
Effect load_effect(std::string_view spec, int d);
PureState load_state(std::string_view spec, int d);
DensityMatrix load_density(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// 17 significant digits; round-trips any double.
std::string format_csv_double(double x);

}  // namespace collapse_gauge
