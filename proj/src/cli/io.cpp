#include "collapse_gauge/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "collapse_gauge/random.hpp"

namespace collapse_gauge {

using nlohmann::json;

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json operator_json(const CMatrix& m, std::string_view kind) {
  return json{{"kind", kind}, {"d", m.rows()}, {"entries", matrix_to_json(m)}};
}

Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(where + ": complex entries must be [re, im] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

int dimension_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("operator file: top level must be an object");
  if (!j.contains("d") || !j["d"].is_number_integer()) {
    throw ValidationError("operator file: missing integer field 'd'");
  }
  const auto d = j["d"].get<std::int64_t>();
  if (d < 1 || d > 4096) throw ValidationError("operator file: 'd' out of range");
  return static_cast<int>(d);
}

std::string kind_of(const json& j) {
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("input file: missing string field 'kind'");
  }
  return j["kind"].get<std::string>();
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

// Accepts the whole string as a non-negative integer.
std::optional<std::uint64_t> parse_unsigned(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> suffix_value(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  const auto v = parse_unsigned(name.substr(prefix.size()));
  if (!v) throw ValidationError("bad numeric suffix in '" + std::string(name) + "'");
  return v;
}

CMatrix fourier_columns(int d, int k) {
  CMatrix f(d, k);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int c = 0; c < k; ++c) f(j, c) = std::polar(norm, 2.0 * std::numbers::pi * j * c / d);
  }
  return f;
}

}  // namespace

json to_json(const HermitianOperator& h) { return operator_json(h.matrix(), "hermitian"); }
json to_json(const Effect& e) { return operator_json(e.matrix(), "effect"); }
json to_json(const DensityMatrix& rho) { return operator_json(rho.matrix(), "density"); }

json to_json(const PureState& psi) {
  json amps = json::array();
  for (int k = 0; k < psi.dim(); ++k) amps.push_back(complex_to_json(psi[k]));
  return json{{"kind", "state"}, {"d", psi.dim()}, {"amplitudes", std::move(amps)}};
}

json to_json(const LambdaResult& r) {
  return json{{"lambda", r.value}, {"method", to_string(r.method)}};
}

json to_json(const EstimateWithCI& est) {
  return json{{"mean", est.mean}, {"std_error", est.std_error}, {"n", est.n}, {"seed", est.seed}};
}

json to_json(const SearchReport& report) {
  return json{{"best_lambda", report.best_lambda},
              {"p", report.p},
              {"d", report.d},
              {"evaluations", report.evaluations},
              {"strategy", to_string(report.strategy)},
              {"violated_conjecture", report.violated_conjecture},
              {"conjecture_bound", conjecture_bound(report.d)},
              {"best_effect", to_json(report.best_effect)}};
}

OperatorFile parse_operator_json(const json& j) {
  const int d = dimension_from_json(j);
  const std::string kind = kind_of(j);
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw ValidationError("operator file: missing array field 'entries'");
  }
  const json& rows = j["entries"];
  if (static_cast<int>(rows.size()) != d) {
    throw DimensionMismatch("operator file: 'entries' has " + std::to_string(rows.size()) +
                            " rows but d = " + std::to_string(d));
  }
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      throw DimensionMismatch("operator file: row " + std::to_string(r) + " does not have d entries");
    }
    for (int c = 0; c < d; ++c) {
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], "operator file");
    }
  }
  HermitianOperator h(m);
  if (kind == "hermitian") return h;
  if (kind == "effect") return Effect(std::move(h));
  if (kind == "density") return DensityMatrix(std::move(h));
  throw ValidationError("operator file: unknown kind '" + kind + "'");
}

OperatorFile parse_operator_text(std::string_view text) {
  return parse_operator_json(parse_json_text(text));
}

OperatorFile parse_operator_file(const std::filesystem::path& path) {
  return parse_operator_text(read_text_file(path));
}

PureState parse_state_json(const json& j) {
  const int d = dimension_from_json(j);
  if (kind_of(j) != "state") throw ValidationError("state file: kind must be 'state'");
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
    throw ValidationError("state file: missing array field 'amplitudes'");
  }
  const json& amps = j["amplitudes"];
  if (static_cast<int>(amps.size()) != d) {
    throw DimensionMismatch("state file: number of amplitudes differs from d");
  }
  CVector v(d);
  for (int k = 0; k < d; ++k) v[k] = complex_from_json(amps[static_cast<std::size_t>(k)], "state file");
  return PureState(std::move(v));
}

PureState parse_state_file(const std::filesystem::path& path) {
  return parse_state_json(parse_json_text(read_text_file(path)));
}

std::optional<Effect> named_effect(std::string_view name, int d) {
  if (name == "zero") return Effect::zero(d);
  if (name == "identity") return Effect::identity(d);
  if (name == "uniform-projector") return uniform_projector_effect(d);
  if (const auto k = suffix_value(name, "rank-k:")) {
    if (*k > static_cast<std::uint64_t>(d)) {
      throw ValidationError("rank-k:K needs 0 <= K <= d");
    }
    if (*k == 0) return Effect::zero(d);
    return Effect::projector(fourier_columns(d, static_cast<int>(*k)));
  }
  return std::nullopt;
}

std::optional<PureState> named_state(std::string_view name, int d) {
  if (name == "uniform") {
    return PureState::normalized(CVector::Ones(d));
  }
  if (const auto k = suffix_value(name, "basis:")) {
    if (*k >= static_cast<std::uint64_t>(d)) throw ValidationError("basis:K needs K < d");
    return PureState::basis(d, static_cast<int>(*k));
  }
  if (const auto seed = suffix_value(name, "random:")) return sample_uniform_state(d, *seed);
  return std::nullopt;
}

Effect load_effect(std::string_view spec, int d) {
  if (auto e = named_effect(spec, d)) return std::move(*e);
  OperatorFile parsed = parse_operator_file(std::filesystem::path(spec));
  if (auto* e = std::get_if<Effect>(&parsed)) return std::move(*e);
  if (auto* h = std::get_if<HermitianOperator>(&parsed)) return Effect(std::move(*h));
  throw ValidationError("'" + std::string(spec) + "' holds a density matrix, not an effect");
}

PureState load_state(std::string_view spec, int d) {
  if (auto s = named_state(spec, d)) return std::move(*s);
  return parse_state_file(std::filesystem::path(spec));
}

DensityMatrix load_density(const std::filesystem::path& path) {
  OperatorFile parsed = parse_operator_file(path);
  if (auto* rho = std::get_if<DensityMatrix>(&parsed)) return std::move(*rho);
  if (auto* h = std::get_if<HermitianOperator>(&parsed)) return DensityMatrix(std::move(*h));
  throw ValidationError(path.string() + ": expected a density matrix");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::string format_csv_double(double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace collapse_gauge
