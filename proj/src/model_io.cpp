#include "pidmd/model_io.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "pidmd/diagnostics.hpp"
#include "pidmd/matrix_io.hpp"

namespace pidmd {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json complex_to_json(const cd& z) { return json::array({z.real(), z.imag()}); }

cd complex_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw InvalidArgument("matrix payload size does not match its shape");
  Matrix m(rows, cols);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = complex_from_json(data.at(t++));
  return m;
}

json vector_to_json(const Vector& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(complex_to_json(v(i)));
  return data;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j.at(i));
  return v;
}

json real_vector_to_json(const RealVector& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
  return data;
}

RealVector real_vector_from_json(const json& j) {
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

json status_to_json(const std::vector<RowStatus>& status) {
  json out = json::array();
  for (RowStatus s : status) out.push_back(static_cast<int>(s));
  return out;
}

std::vector<RowStatus> status_from_json(const json& j) {
  std::vector<RowStatus> out;
  out.reserve(j.size());
  for (const json& v : j) out.push_back(static_cast<RowStatus>(v.get<int>()));
  return out;
}

json to_json(const ExactDmdModel& m) {
  return json{{"kind", "exact"},
              {"basis", matrix_to_json(m.basis)},
              {"op_factor", matrix_to_json(m.op_factor)},
              {"reduced_op", matrix_to_json(m.reduced_op)},
              {"eigenvalues", vector_to_json(m.eigenvalues)},
              {"reduced_modes", matrix_to_json(m.reduced_modes)},
              {"modes", matrix_to_json(m.modes)},
              {"amplitudes", vector_to_json(m.amplitudes)},
              {"dt", m.dt},
              {"pairing", m.pairing == Pairing::kDiscrete ? "discrete" : "derivative"},
              {"requested_rank", m.requested_rank},
              {"rank", m.rank},
              {"rank_truncated", m.rank_truncated}};
}

ExactDmdModel exact_from_json(const json& j) {
  ExactDmdModel m;
  m.basis = matrix_from_json(j.at("basis"));
  m.op_factor = matrix_from_json(j.at("op_factor"));
  m.reduced_op = matrix_from_json(j.at("reduced_op"));
  m.eigenvalues = vector_from_json(j.at("eigenvalues"));
  m.reduced_modes = matrix_from_json(j.at("reduced_modes"));
  m.modes = matrix_from_json(j.at("modes"));
  m.amplitudes = vector_from_json(j.at("amplitudes"));
  m.dt = j.at("dt").get<double>();
  m.pairing = j.at("pairing").get<std::string>() == "derivative" ? Pairing::kDerivative
                                                                 : Pairing::kDiscrete;
  m.requested_rank = j.at("requested_rank").get<Eigen::Index>();
  m.rank = j.at("rank").get<Eigen::Index>();
  m.rank_truncated = j.at("rank_truncated").get<bool>();
  return m;
}

std::string variant_name(CirculantVariant v) {
  switch (v) {
    case CirculantVariant::kPlain: return "plain";
    case CirculantVariant::kSymmetric: return "symmetric";
    case CirculantVariant::kSkew: return "skew";
    case CirculantVariant::kUnitary: return "unitary";
    case CirculantVariant::kLowRank: return "lowrank";
  }
  return "plain";
}

CirculantVariant variant_from_name(const std::string& s) {
  if (s == "plain") return CirculantVariant::kPlain;
  if (s == "symmetric") return CirculantVariant::kSymmetric;
  if (s == "skew") return CirculantVariant::kSkew;
  if (s == "unitary") return CirculantVariant::kUnitary;
  if (s == "lowrank") return CirculantVariant::kLowRank;
  throw InvalidArgument("unknown circulant variant: " + s);
}

json to_json(const CirculantModel& m) {
  return json{{"kind", "circulant"},
              {"eigenvalues", vector_to_json(m.eigenvalues)},
              {"variant", variant_name(m.variant)},
              {"row_status", status_to_json(m.row_status)},
              {"rank", m.rank},
              {"scores", real_vector_to_json(m.scores)}};
}

CirculantModel circulant_from_json(const json& j) {
  CirculantModel m;
  m.eigenvalues = vector_from_json(j.at("eigenvalues"));
  m.variant = variant_from_name(j.at("variant").get<std::string>());
  m.row_status = status_from_json(j.at("row_status"));
  m.rank = j.at("rank").get<Eigen::Index>();
  m.scores = real_vector_from_json(j.at("scores"));
  return m;
}

json to_json(const ToeplitzModel& m) {
  return json{{"kind", "toeplitz"},
              {"coefficients", vector_to_json(m.coefficients)},
              {"flavor", m.flavor == ToeplitzFlavor::kToeplitz ? "toeplitz" : "hankel"},
              {"condition_warning", m.condition_warning},
              {"condition_estimate", m.condition_estimate}};
}

ToeplitzModel toeplitz_from_json(const json& j) {
  ToeplitzModel m;
  m.coefficients = vector_from_json(j.at("coefficients"));
  m.flavor = j.at("flavor").get<std::string>() == "hankel" ? ToeplitzFlavor::kHankel
                                                           : ToeplitzFlavor::kToeplitz;
  m.condition_warning = j.at("condition_warning").get<bool>();
  m.condition_estimate = j.at("condition_estimate").get<double>();
  return m;
}

json to_json(const UnitaryModel& m) {
  return json{{"kind", "unitary"},
              {"op", matrix_to_json(m.op)},
              {"pod_basis", matrix_to_json(m.pod_basis)},
              {"unique", m.unique},
              {"undetermined", m.undetermined}};
}

UnitaryModel unitary_from_json(const json& j) {
  UnitaryModel m;
  m.op = matrix_from_json(j.at("op"));
  m.pod_basis = matrix_from_json(j.at("pod_basis"));
  m.unique = j.at("unique").get<bool>();
  m.undetermined = j.at("undetermined").get<bool>();
  return m;
}

json to_json(const SymmetricModel& m) {
  return json{{"kind", "symmetric"},
              {"basis", matrix_to_json(m.basis)},
              {"core", matrix_to_json(m.core)},
              {"symmetry", m.kind == SymmetryKind::kSymmetric ? "symmetric" : "skew"},
              {"rank", m.rank},
              {"rank_truncated", m.rank_truncated}};
}

SymmetricModel symmetric_from_json(const json& j) {
  SymmetricModel m;
  m.basis = matrix_from_json(j.at("basis"));
  m.core = matrix_from_json(j.at("core"));
  m.kind = j.at("symmetry").get<std::string>() == "skew" ? SymmetryKind::kSkew
                                                         : SymmetryKind::kSymmetric;
  m.rank = j.at("rank").get<Eigen::Index>();
  m.rank_truncated = j.at("rank_truncated").get<bool>();
  return m;
}

json to_json(const BandedModel& m) {
  json cols = json::array();
  for (const auto& c : m.cols) cols.push_back(c);
  json coeffs = json::array();
  for (const auto& row : m.coeffs) {
    json r = json::array();
    for (Eigen::Index t = 0; t < row.size(); ++t) r.push_back(complex_to_json(row(t)));
    coeffs.push_back(std::move(r));
  }
  return json{{"kind", "banded"},
              {"n", m.n},
              {"periodic", m.periodic},
              {"lower_widths", m.lower_widths},
              {"upper_widths", m.upper_widths},
              {"cols", std::move(cols)},
              {"coeffs", std::move(coeffs)},
              {"row_status", status_to_json(m.row_status)},
              {"condition_warning", m.condition_warning}};
}

BandedModel banded_from_json(const json& j) {
  BandedModel m;
  m.n = j.at("n").get<Eigen::Index>();
  m.periodic = j.at("periodic").get<bool>();
  m.lower_widths = j.at("lower_widths").get<std::vector<Eigen::Index>>();
  m.upper_widths = j.at("upper_widths").get<std::vector<Eigen::Index>>();
  for (const json& c : j.at("cols")) m.cols.push_back(c.get<std::vector<Eigen::Index>>());
  for (const json& r : j.at("coeffs")) {
    Eigen::RowVectorXcd row(static_cast<Eigen::Index>(r.size()));
    for (Eigen::Index t = 0; t < row.size(); ++t) row(t) = complex_from_json(r.at(t));
    m.coeffs.push_back(std::move(row));
  }
  m.row_status = status_from_json(j.at("row_status"));
  m.condition_warning = j.at("condition_warning").get<bool>();
  return m;
}

std::string method_name(TriangularMethod m) {
  switch (m) {
    case TriangularMethod::kNaive: return "naive";
    case TriangularMethod::kFastUpdate: return "fast_update";
    case TriangularMethod::kRqStable: return "rq_stable";
  }
  return "naive";
}

TriangularMethod method_from_name(const std::string& s) {
  if (s == "naive") return TriangularMethod::kNaive;
  if (s == "fast_update") return TriangularMethod::kFastUpdate;
  if (s == "rq_stable") return TriangularMethod::kRqStable;
  throw InvalidArgument("unknown triangular method: " + s);
}

json to_json(const TriangularModel& m) {
  json rows = json::array();
  for (const auto& row : m.rows) {
    json r = json::array();
    for (Eigen::Index t = 0; t < row.size(); ++t) r.push_back(complex_to_json(row(t)));
    rows.push_back(std::move(r));
  }
  return json{{"kind", "triangular"},
              {"n", m.n},
              {"rows", std::move(rows)},
              {"row_status", status_to_json(m.row_status)},
              {"method", method_name(m.method)}};
}

TriangularModel triangular_from_json(const json& j) {
  TriangularModel m;
  m.n = j.at("n").get<Eigen::Index>();
  for (const json& r : j.at("rows")) {
    Eigen::RowVectorXcd row(static_cast<Eigen::Index>(r.size()));
    for (Eigen::Index t = 0; t < row.size(); ++t) row(t) = complex_from_json(r.at(t));
    m.rows.push_back(std::move(row));
  }
  m.row_status = status_from_json(j.at("row_status"));
  m.method = method_from_name(j.at("method").get<std::string>());
  return m;
}

json to_json(const DenseModel& m) {
  return json{{"kind", "dense"}, {"op", matrix_to_json(m.op)}};
}

DenseModel dense_from_json(const json& j) { return DenseModel{matrix_from_json(j.at("op"))}; }

}  // namespace

void save_model(const PiDmdModel& model, const std::string& dir) {
  std::filesystem::create_directories(dir);
  json j = std::visit([](const auto& m) { return to_json(m); }, model);
  j["schema_version"] = kSchemaVersion;
  std::ofstream out(dir + "/model.json");
  if (!out) throw InvalidArgument("cannot write " + dir + "/model.json");
  out << j.dump(2) << "\n";
  save_matrix_file(dir + "/operator.csv", materialize(model));
}

PiDmdModel load_model(const std::string& dir) {
  std::ifstream in(dir + "/model.json");
  if (!in) throw InvalidArgument("cannot read " + dir + "/model.json");
  json j;
  in >> j;
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw InvalidArgument("unsupported model schema version");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exact") return exact_from_json(j);
  if (kind == "circulant") return circulant_from_json(j);
  if (kind == "toeplitz") return toeplitz_from_json(j);
  if (kind == "unitary") return unitary_from_json(j);
  if (kind == "symmetric") return symmetric_from_json(j);
  if (kind == "banded") return banded_from_json(j);
  if (kind == "triangular") return triangular_from_json(j);
  if (kind == "dense") return dense_from_json(j);
  throw InvalidArgument("unknown model kind: " + kind);
}

}  // namespace pidmd
