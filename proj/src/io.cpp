#include "wcw/io.hpp"

#include "wcw/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wcw::io {
namespace {

using nlohmann::json;

[[noreturn]] void fail_format(const std::filesystem::path& path, const std::string& what) {
  throw Error(ErrorKind::Format, what, {{"path", path.string()}});
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open input file", {{"path", path.string()}});
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open output file", {{"path", path.string()}});
  return out;
}

template <typename T>
T from_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <typename T>
T read_le(std::istream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) fail_format(path, "truncated binary file");
  return from_little_endian(v);
}

template <typename T>
void write_le(std::ostream& out, T v) {
  v = from_little_endian(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void expect_magic(std::istream& in, const char* magic, const std::filesystem::path& path) {
  char buf[4] = {};
  if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0) {
    fail_format(path, std::string("bad magic, expected ") + magic);
  }
}

json parse_json(const std::filesystem::path& path) {
  const std::string text = read_file_bytes(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail_format(path, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key, const std::filesystem::path& path) {
  if (!j.contains(key)) fail_format(path, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail_format(path, std::string("field \"") + key + "\" has the wrong type");
  }
}

Eigen::MatrixXd matrix_from_array(const json& arr, int rows, int cols, const std::filesystem::path& path) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorKind::Dimension, "weights array has the wrong length",
                {{"path", path.string()},
                 {"expected", static_cast<long long>(rows) * cols},
                 {"actual", static_cast<long long>(arr.is_array() ? arr.size() : 0)}});
  }
  Eigen::MatrixXd w(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const auto& v = arr[static_cast<std::size_t>(i) * cols + j];
      if (!v.is_number()) fail_format(path, "weights must be numbers");
      w(i, j) = v.get<double>();
    }
  }
  return w;
}

json matrix_to_array(const Eigen::MatrixXd& w) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) arr.push_back(w(i, j));
  }
  return arr;
}

UnitKind parse_kind(const std::string& s, const std::filesystem::path& path) {
  if (s == "pm1") return UnitKind::PlusMinusOne;
  if (s == "01") return UnitKind::ZeroOne;
  fail_format(path, "kind must be \"pm1\" or \"01\"");
}

std::filesystem::path resolve_weights_path(const json& weights, const std::filesystem::path& path) {
  std::filesystem::path bin = field<std::string>(weights, "path", path);
  if (bin.is_relative()) bin = path.parent_path() / bin;
  return bin;
}

}  // namespace

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Eigen::MatrixXd read_weights_binary(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "WCW1", path);
  const auto n = read_le<std::uint32_t>(in, path);
  if (n == 0) fail_format(path, "weight matrix must have n >= 1");
  Eigen::MatrixXd w(n, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) w(i, j) = read_le<double>(in, path);
  }
  return w;
}

void write_weights_binary(const std::filesystem::path& path, const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols()) throw Error(ErrorKind::Dimension, "WCW1 stores square matrices only");
  std::ofstream out = open_out(path);
  out.write("WCW1", 4);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(w.rows()));
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) write_le<double>(out, w(i, j));
  }
}

std::optional<std::filesystem::path> external_weights_path(const std::filesystem::path& path) {
  const json j = parse_json(path);
  if (!j.contains("weights") || !j.at("weights").is_object()) return std::nullopt;
  return resolve_weights_path(j.at("weights"), path);
}

SystemFile read_system_file(const std::filesystem::path& path) {
  const json j = parse_json(path);
  const int n = field<int>(j, "n", path);
  if (n < 1) throw Error(ErrorKind::Dimension, "n must be >= 1", {{"path", path.string()}, {"n", static_cast<long long>(n)}});
  const double h = field<double>(j, "h", path);
  const double t = field<double>(j, "temperature", path);
  const UnitKind kind = parse_kind(field<std::string>(j, "kind", path), path);
  if (!j.contains("weights")) fail_format(path, "missing field \"weights\"");
  const json& weights = j.at("weights");
  Eigen::MatrixXd w;
  if (weights.is_object()) {
    const std::filesystem::path bin = resolve_weights_path(weights, path);
    w = read_weights_binary(bin);
    if (w.rows() != n) {
      throw Error(ErrorKind::Dimension, "binary weight file size does not match n",
                  {{"path", bin.string()}, {"expected", static_cast<long long>(n)},
                   {"actual", static_cast<long long>(w.rows())}});
    }
  } else {
    w = matrix_from_array(weights, n, n, path);
  }
  Thermodynamics thermo(t);
  return {WeightedSystem(std::move(w), h, kind), thermo.temperature()};
}

std::string system_to_json(const WeightedSystem& system, double temperature) {
  json j;
  j["n"] = system.n();
  j["h"] = system.h();
  j["temperature"] = temperature;
  j["kind"] = to_string(system.kind());
  j["weights"] = matrix_to_array(system.w());
  return j.dump();
}

void write_system_file(const std::filesystem::path& path, const WeightedSystem& system, double temperature) {
  std::ofstream out = open_out(path);
  out << system_to_json(system, temperature) << '\n';
}

BipartiteFile read_bipartite_file(const std::filesystem::path& path) {
  const json j = parse_json(path);
  const int na = field<int>(j, "n_a", path);
  const int nb = field<int>(j, "n_b", path);
  if (na < 1 || nb < 1) {
    throw Error(ErrorKind::Dimension, "n_a and n_b must be >= 1",
                {{"path", path.string()}, {"n_a", static_cast<long long>(na)}, {"n_b", static_cast<long long>(nb)}});
  }
  const double h = j.contains("h") ? field<double>(j, "h", path) : 0.0;
  const double t = j.contains("temperature") ? field<double>(j, "temperature", path) : 1.0;
  if (!j.contains("weights")) fail_format(path, "missing field \"weights\"");
  Eigen::MatrixXd w = matrix_from_array(j.at("weights"), na, nb, path);
  Thermodynamics thermo(t);
  return {BipartiteSystem(std::move(w), h), thermo.temperature()};
}

std::string bipartite_to_json(const BipartiteSystem& system, double temperature) {
  json j;
  j["n_a"] = system.n_a();
  j["n_b"] = system.n_b();
  j["h"] = system.h;
  j["temperature"] = temperature;
  j["weights"] = matrix_to_array(system.w);
  return j.dump();
}

Eigen::MatrixXd read_weight_matrix(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  char buf[4] = {};
  in.read(buf, 4);
  if (in.gcount() == 4 && std::memcmp(buf, "WCW1", 4) == 0) return read_weights_binary(path);
  return read_system_file(path).system.w();
}

TraceSet read_traces_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) fail_format(origin, "empty trace CSV");
  int n_nodes = 0;
  {
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      if (cell != "node_" + std::to_string(n_nodes)) fail_format(origin, "trace CSV header must be node_0,node_1,...");
      ++n_nodes;
    }
  }
  if (n_nodes == 0) fail_format(origin, "trace CSV header has no columns");

  std::vector<double> values;
  int n_samples = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int j = 0; j < n_nodes; ++j) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) {
        throw Error(ErrorKind::Format, "unparseable trace value",
                    {{"path", origin}, {"row", static_cast<long long>(n_samples + 1)}, {"column", static_cast<long long>(j)}});
      }
      values.push_back(v);
      p = res.ptr;
      if (j + 1 < n_nodes) {
        if (p == end || *p != ',') {
          throw Error(ErrorKind::Format, "trace row has too few columns",
                      {{"path", origin}, {"row", static_cast<long long>(n_samples + 1)}});
        }
        ++p;
      }
    }
    if (p != end) {
      throw Error(ErrorKind::Format, "trace row has too many columns",
                  {{"path", origin}, {"row", static_cast<long long>(n_samples + 1)}});
    }
    ++n_samples;
  }
  return TraceSet(n_samples, n_nodes, std::move(values));
}

TraceSet read_traces(const std::filesystem::path& path, TraceFormat format) {
  std::ifstream in = open_in(path);
  if (format == TraceFormat::Csv) return read_traces_csv(in, path.string());

  expect_magic(in, "NTRC", path);
  const auto version = read_le<std::uint32_t>(in, path);
  if (version != 1) {
    throw Error(ErrorKind::Format, "unsupported trace version",
                {{"path", path.string()}, {"version", static_cast<long long>(version)}});
  }
  const auto n_samples = read_le<std::uint32_t>(in, path);
  const auto n_nodes = read_le<std::uint32_t>(in, path);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_samples) * n_nodes);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_samples) * n_nodes; ++i) {
    values.push_back(static_cast<double>(read_le<float>(in, path)));
  }
  return TraceSet(static_cast<int>(n_samples), static_cast<int>(n_nodes), std::move(values));
}

void write_traces_csv(std::ostream& out, const TraceSet& traces) {
  for (int j = 0; j < traces.n_nodes(); ++j) out << (j ? "," : "") << "node_" << j;
  out << '\n';
  for (int s = 0; s < traces.n_samples(); ++s) {
    const auto row = traces.row(s);
    for (int j = 0; j < traces.n_nodes(); ++j) out << (j ? "," : "") << format_double(row[j]);
    out << '\n';
  }
}

void write_traces_binary(const std::filesystem::path& path, const TraceSet& traces) {
  std::ofstream out = open_out(path);
  out.write("NTRC", 4);
  write_le<std::uint32_t>(out, 1);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(traces.n_samples()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(traces.n_nodes()));
  for (double v : traces.values()) write_le<float>(out, static_cast<float>(v));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = cell.find_last_not_of(" \t");
    const std::string trimmed = cell.substr(first, last - first + 1);
    double v = 0.0;
    const auto res = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
    if (res.ec != std::errc() || res.ptr != trimmed.data() + trimmed.size()) {
      throw Error(ErrorKind::Format, "cannot parse number in list", {{"value", trimmed}});
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace wcw::io
