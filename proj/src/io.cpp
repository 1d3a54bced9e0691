#include "logbarrier/io.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

namespace logbarrier {

static_assert(std::endian::native == std::endian::little, "instance files assume a little-endian host");

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

void write_header(std::ofstream& out, const json& header) { out << header.dump() << '\n'; }

json read_header(std::ifstream& in, const std::string& path, const std::string& format) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": missing header");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(path + ": malformed header: " + e.what());
  }
  if (h.value("format", "") != format)
    throw FormatError(path + ": expected format '" + format + "', found '" + h.value("format", "") + "'");
  if (h.value("version", 0) != kFileFormatVersion)
    throw FormatError(path + ": unsupported version " + std::to_string(h.value("version", 0)));
  return h;
}

template <typename T>
void put(std::ofstream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void get(std::ifstream& in, T* data, std::size_t count, const std::string& path) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
  if (!in) throw FormatError(path + ": truncated payload");
}

void put_matrix(std::ofstream& out, const HermitianMatrix& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const double re_im[2] = {A(i, j).real(), A(i, j).imag()};
      put(out, re_im, 2);
    }
}

HermitianMatrix get_matrix(std::ifstream& in, Eigen::Index d, const std::string& path) {
  HermitianMatrix A(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      double re_im[2];
      get(in, re_im, 2, path);
      A(i, j) = Complex(re_im[0], re_im[1]);
    }
  return A;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

json dataset_header(std::string_view setup, Eigen::Index d, std::size_t n) {
  return json{{"format", "logbarrier.dataset"}, {"version", kFileFormatVersion},
              {"setup", setup}, {"d", d}, {"n", n}};
}

struct RawDataset {
  json header;
  RealVector weights;
  std::vector<HermitianMatrix> matrices;
  std::vector<RealVector> vectors;
  std::vector<std::int64_t> counts;
  std::optional<HermitianMatrix> rho_true;
};

RawDataset read_raw_dataset(const std::string& path, std::string_view expect_setup) {
  auto in = open_in(path);
  RawDataset raw;
  raw.header = read_header(in, path, "logbarrier.dataset");
  const auto setup = raw.header.value("setup", "");
  if (setup != expect_setup)
    throw FormatError(path + ": expected setup '" + std::string(expect_setup) + "', found '" + setup + "'");
  const auto d = raw.header.at("d").get<Eigen::Index>();
  const auto n = raw.header.at("n").get<std::size_t>();
  if (d < 1 || n < 1) throw FormatError(path + ": empty dataset");
  raw.weights.resize(static_cast<Eigen::Index>(n));
  get(in, raw.weights.data(), n, path);
  for (std::size_t i = 0; i < n; ++i) {
    if (setup == "classical") {
      RealVector a(d);
      get(in, a.data(), static_cast<std::size_t>(d), path);
      raw.vectors.push_back(std::move(a));
    } else {
      raw.matrices.push_back(get_matrix(in, d, path));
    }
  }
  if (raw.header.value("counts", false)) {
    raw.counts.resize(n);
    get(in, raw.counts.data(), n, path);
  }
  if (raw.header.value("rho_true", false)) raw.rho_true = get_matrix(in, d, path);
  return raw;
}

}  // namespace

void write_dataset(const std::string& path, const ClassicalDataset& ds) {
  auto out = open_out(path);
  write_header(out, dataset_header(Classical::name, ds.dim(), ds.size()));
  put(out, ds.weights().data(), ds.size());
  for (const auto& a : ds.samples()) put(out, a.data(), static_cast<std::size_t>(a.size()));
  finish(out, path);
}

void write_dataset(const std::string& path, const QuantumDataset& ds) {
  auto out = open_out(path);
  write_header(out, dataset_header(Quantum::name, ds.dim(), ds.size()));
  put(out, ds.weights().data(), ds.size());
  for (const auto& A : ds.samples()) put_matrix(out, A);
  finish(out, path);
}

ClassicalDataset read_classical_dataset(const std::string& path) {
  auto raw = read_raw_dataset(path, Classical::name);
  return ClassicalDataset(std::move(raw.vectors), std::move(raw.weights));
}

QuantumDataset read_quantum_dataset(const std::string& path) {
  auto raw = read_raw_dataset(path, Quantum::name);
  return QuantumDataset(std::move(raw.matrices), std::move(raw.weights));
}

void write_qst_instance(const std::string& path, const QSTInstance& q) {
  if (q.ops.empty() || q.ops.size() != q.counts.size())
    throw std::invalid_argument("write_qst_instance: ops/counts mismatch");
  const auto total = static_cast<double>(q.total_shots());
  auto header = dataset_header(Quantum::name, q.dim(), q.ops.size());
  header["counts"] = true;
  header["rho_true"] = q.rho_true.has_value();
  header["shots"] = q.total_shots();
  auto out = open_out(path);
  write_header(out, header);
  for (auto c : q.counts) {
    const double w = static_cast<double>(c) / total;
    put(out, &w, 1);
  }
  for (const auto& A : q.ops) put_matrix(out, A);
  put(out, q.counts.data(), q.counts.size());
  if (q.rho_true) put_matrix(out, *q.rho_true);
  finish(out, path);
}

QSTInstance read_qst_instance(const std::string& path) {
  auto raw = read_raw_dataset(path, Quantum::name);
  if (raw.counts.empty()) throw FormatError(path + ": QST instance requires a counts block");
  QSTInstance q;
  q.ops = std::move(raw.matrices);
  q.counts = std::move(raw.counts);
  q.rho_true = std::move(raw.rho_true);
  return q;
}

void write_poisson_instance(const std::string& path, const PoissonInstance& p) {
  p.validate();
  auto out = open_out(path);
  write_header(out, json{{"format", "logbarrier.poisson"},
                         {"version", kFileFormatVersion},
                         {"d", p.dim()},
                         {"n", p.size()},
                         {"lambda_true", p.lambda_true.has_value()}});
  put(out, p.b.data(), static_cast<std::size_t>(p.b.size()));
  put(out, p.y.data(), p.y.size());
  if (p.lambda_true) put(out, p.lambda_true->data(), static_cast<std::size_t>(p.lambda_true->size()));
  finish(out, path);
}

PoissonInstance read_poisson_instance(const std::string& path) {
  auto in = open_in(path);
  const json h = read_header(in, path, "logbarrier.poisson");
  const auto d = h.at("d").get<Eigen::Index>();
  const auto n = h.at("n").get<Eigen::Index>();
  if (d < 1 || n < 1) throw FormatError(path + ": empty instance");
  PoissonInstance p;
  p.b.resize(n, d);
  get(in, p.b.data(), static_cast<std::size_t>(n * d), path);
  p.y.resize(static_cast<std::size_t>(n));
  get(in, p.y.data(), p.y.size(), path);
  if (h.value("lambda_true", false)) {
    RealVector lam(d);
    get(in, lam.data(), static_cast<std::size_t>(d), path);
    p.lambda_true = std::move(lam);
  }
  p.validate();
  return p;
}

}  // namespace logbarrier
