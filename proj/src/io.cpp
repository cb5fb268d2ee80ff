#include "proxsplit/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace proxsplit {

using nlohmann::json;

namespace {

json encode(double v) { return v; }
json encode(const Complex& v) { return json::array({v.real(), v.imag()}); }

template <typename Scalar>
Scalar decode(const json& j);
template <>
double decode<double>(const json& j) {
  return j.get<double>();
}
template <>
Complex decode<Complex>(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename Derived>
json encode_matrix(const Eigen::MatrixBase<Derived>& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(encode(m(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Scalar>
MatrixX<Scalar> decode_matrix(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a matrix as an array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(j[0].size());
  MatrixX<Scalar> m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(j[i].size()) != cols) throw std::invalid_argument("ragged matrix rows");
    for (Index c = 0; c < cols; ++c) m(i, c) = decode<Scalar>(j[i][c]);
  }
  return m;
}

template <typename Scalar>
json encode_vector(const VectorX<Scalar>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(encode(v(i)));
  return out;
}

template <typename Scalar>
VectorX<Scalar> decode_vector(const json& j) {
  VectorX<Scalar> v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = decode<Scalar>(j[i]);
  return v;
}

void expect_format(const json& j, const char* format) {
  if (!j.contains("format") || j.at("format").get<std::string>() != format) {
    throw std::invalid_argument(std::string("expected a document with format '") + format + "'");
  }
}

}  // namespace

json to_json(const OperatorParam& s) {
  json j;
  j["kind"] = to_string(s.kind());
  if (const auto* p = std::get_if<ScalarParam>(&s.variant())) {
    j["alpha"] = p->alpha;
  } else if (const auto* p = std::get_if<DiagonalEnergyParam>(&s.variant())) {
    j["d"] = std::vector<double>(p->d.data(), p->d.data() + p->d.size());
    j["d_max"] = p->d_max;
  } else if (const auto* p = std::get_if<SdpHadamardParam>(&s.variant())) {
    j["alpha"] = p->alpha;
    j["beta"] = p->beta;
    j["N"] = p->shape.N;
    j["K"] = p->shape.K;
  }
  return j;
}

OperatorParam param_from_json(const json& j) {
  switch (param_kind_from_string(j.at("kind").get<std::string>())) {
    case ParamKind::identity: return OperatorParam::identity();
    case ParamKind::scalar: return OperatorParam::scalar(j.at("alpha").get<double>());
    case ParamKind::diagonal_energy: {
      const auto d = j.at("d").get<std::vector<double>>();
      return OperatorParam::diagonal_energy(
          Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Index>(d.size())),
          j.value("d_max", OperatorParam::kDefaultDMax));
    }
    case ParamKind::sdp_hadamard:
      return OperatorParam::sdp_hadamard(j.at("alpha").get<double>(), j.at("beta").get<double>(),
                                         BlockShape(j.at("N").get<Index>(), j.at("K").get<Index>()));
  }
  throw std::invalid_argument("param_from_json: unhandled kind");
}

json to_json(const BqpInstance& inst) {
  json j;
  j["format"] = kInstanceFormat;
  j["app"] = "bqp";
  j["seed"] = inst.seed;
  j["N"] = inst.N();
  j["K"] = inst.K();
  j["sigma_a"] = inst.sigma_a;
  j["sigma_b"] = inst.sigma_b;
  j["A"] = encode_matrix(inst.A);
  j["b"] = encode_vector<double>(inst.b);
  return j;
}

json to_json(const SrInstance& inst) {
  json j;
  j["format"] = kInstanceFormat;
  j["app"] = "sr";
  j["seed"] = inst.seed;
  j["N"] = inst.N;
  j["K"] = inst.K;
  j["sigma"] = inst.sigma;
  j["obs_frac"] = inst.obs_frac;
  j["taus"] = inst.taus;
  j["amplitudes"] = inst.amplitudes;
  j["omega"] = inst.omega;
  j["x_star"] = encode_vector<Complex>(inst.x_star);
  return j;
}

AnyInstance instance_from_json(const json& j) {
  expect_format(j, kInstanceFormat);
  const std::string app = j.at("app").get<std::string>();
  if (app == "bqp") {
    BqpInstance inst;
    inst.A = decode_matrix<double>(j.at("A"));
    inst.b = decode_vector<double>(j.at("b"));
    const Index n = j.at("N").get<Index>();
    if (inst.A.cols() != n || inst.A.rows() != j.at("K").get<Index>()) {
      throw std::invalid_argument("instance: A does not have K rows and N columns");
    }
    inst.G = bqp_objective(inst.A, inst.b);
    inst.shape = BlockShape(n, 1);
    inst.sigma_a = j.at("sigma_a").get<double>();
    inst.sigma_b = j.at("sigma_b").get<double>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    return inst;
  }
  if (app == "sr") {
    SrInstance inst;
    inst.N = j.at("N").get<Index>();
    inst.K = j.at("K").get<Index>();
    inst.sigma = j.at("sigma").get<double>();
    inst.obs_frac = j.at("obs_frac").get<double>();
    inst.taus = j.at("taus").get<std::vector<double>>();
    inst.amplitudes = j.at("amplitudes").get<std::vector<double>>();
    inst.omega = j.at("omega").get<std::vector<Index>>();
    inst.x_star = decode_vector<Complex>(j.at("x_star"));
    inst.seed = j.at("seed").get<std::uint64_t>();
    if (inst.x_star.size() != inst.N) throw std::invalid_argument("instance: x_star length != N");
    MatrixX<Complex> g = MatrixX<Complex>::Zero(inst.N + 1, inst.N + 1);
    g.diagonal().head(inst.N).setConstant(1.0 / (2.0 * static_cast<double>(inst.N)));
    g(inst.N, inst.N) = 0.5;
    inst.G = ComplexHermitian(g);
    return inst;
  }
  throw std::invalid_argument("instance: unknown app '" + app + "'");
}

template <typename Scalar>
json to_json(const ReferenceSolution<Scalar>& ref) {
  json j;
  j["format"] = kReferenceFormat;
  j["field"] = FieldOf<Scalar>::value == Field::real ? "real" : "complex";
  j["iterations"] = ref.iterations;
  j["opt_residual"] = ref.opt_residual;
  j["converged"] = ref.converged;
  j["X"] = encode_matrix(ref.X.matrix());
  j["Lambda"] = encode_matrix(ref.Lambda.matrix());
  j["Psi"] = encode_matrix(ref.Psi.matrix());
  return j;
}

template <typename Scalar>
ReferenceSolution<Scalar> reference_from_json(const json& j) {
  expect_format(j, kReferenceFormat);
  ReferenceSolution<Scalar> ref;
  ref.iterations = j.at("iterations").get<long>();
  ref.opt_residual = j.at("opt_residual").get<double>();
  ref.converged = j.at("converged").get<bool>();
  ref.X = DenseHermitian<Scalar>(decode_matrix<Scalar>(j.at("X")));
  ref.Lambda = DenseHermitian<Scalar>(decode_matrix<Scalar>(j.at("Lambda")));
  ref.Psi = DenseHermitian<Scalar>(decode_matrix<Scalar>(j.at("Psi")));
  return ref;
}

void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace) {
  os << kTraceHeader << '\n' << "k,fp_residual_sq,opt_residual,mse,elapsed_ms\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << i << ',' << num(trace.fp_residual_sq[i]) << ',' << num(trace.opt_residual[i]) << ',';
    if (i < trace.mse.size()) os << num(trace.mse[i]);
    os << ',' << num(trace.elapsed_ms[i]) << '\n';
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

template json to_json<double>(const ReferenceSolution<double>&);
template json to_json<Complex>(const ReferenceSolution<Complex>&);
template ReferenceSolution<double> reference_from_json<double>(const json&);
template ReferenceSolution<Complex> reference_from_json<Complex>(const json&);

}  // namespace proxsplit
