#pragma once

// File formats.
//
// System file (JSON):
//   {"n": int, "h": float, "temperature": float, "kind": "pm1" | "01",
//    "weights": [n*n floats, row-major] | {"path": "<binary file>"}}
// A relative "path" resolves against the JSON file's directory. The binary
// weight file is little-endian: "WCW1", u32 n, n*n float64 row-major.
//
// Bipartite file (JSON):
//   {"n_a": int, "n_b": int, "h": float, "temperature": float,
//    "weights": [n_a*n_b floats, row-major]}
//
// Trace files: CSV with header node_0,...,node_{m-1} and one sample per row,
// or little-endian binary "NTRC", u32 version = 1, u32 n_samples,
// u32 n_nodes, float32 row-major values.

#include "wcw/model.hpp"
#include "wcw/netstats.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wcw::io {

struct SystemFile {
  WeightedSystem system;
  double temperature = 1.0;
};

struct BipartiteFile {
  BipartiteSystem system;
  double temperature = 1.0;
};

SystemFile read_system_file(const std::filesystem::path& path);
// Resolved binary weight file a system file points at, if any.
std::optional<std::filesystem::path> external_weights_path(const std::filesystem::path& path);
void write_system_file(const std::filesystem::path& path, const WeightedSystem& system, double temperature);
std::string system_to_json(const WeightedSystem& system, double temperature);

BipartiteFile read_bipartite_file(const std::filesystem::path& path);
std::string bipartite_to_json(const BipartiteSystem& system, double temperature);

Eigen::MatrixXd read_weights_binary(const std::filesystem::path& path);
void write_weights_binary(const std::filesystem::path& path, const Eigen::MatrixXd& w);

// Square weight matrix from either a WCW1 binary file or a system JSON file.
Eigen::MatrixXd read_weight_matrix(const std::filesystem::path& path);

enum class TraceFormat { Csv, Binary };

TraceSet read_traces(const std::filesystem::path& path, TraceFormat format);
TraceSet read_traces_csv(std::istream& in, const std::string& origin = "<stream>");
void write_traces_csv(std::ostream& out, const TraceSet& traces);
void write_traces_binary(const std::filesystem::path& path, const TraceSet& traces);

// Shortest round-trip decimal form of a double ("nan", "inf", "-inf" for
// non-finite values).
std::string format_double(double x);

std::vector<double> parse_double_list(const std::string& csv);

std::string read_file_bytes(const std::filesystem::path& path);

}  // namespace wcw::io
