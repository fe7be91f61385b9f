// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#include "qdeg/channel_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qdeg {

namespace {

using nlohmann::json;

json complex_to_json(const Cplx& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json_obj(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Cplx complex_from_json(const json& j) {
  if (j.is_number()) return Cplx(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw IoError("channel JSON: entry is not [re, im]");
  return Cplx(j[0].get<double>(), j[1].get<double>());
}

Mat matrix_from_json(const json& j, int rows, int cols, const char* field) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw IoError(std::string("channel JSON: ") + field + " has wrong row count");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw IoError(std::string("channel JSON: ") + field + " has wrong column count");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[c]);
  }
  return m;
}

}  // namespace

std::string matrix_to_json(const Mat& m) { return matrix_to_json_obj(m).dump(); }

std::string channel_to_json(const QuantumChannel& channel) {
  json j;
  j["dim_in"] = channel.dim_in;
  j["dim_out"] = channel.dim_out;
  json kraus = json::array();
  for (const Mat& f : channel.kraus) kraus.push_back(matrix_to_json_obj(f));
  j["kraus"] = std::move(kraus);
  return j.dump(2) + "\n";
}

QuantumChannel channel_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("channel JSON: parse error: ") + e.what());
  }
  if (!j.is_object()) throw IoError("channel JSON: top level is not an object");
  if (!j.contains("dim_in") || !j["dim_in"].is_number_integer() ||
      !j.contains("dim_out") || !j["dim_out"].is_number_integer())
    throw IoError("channel JSON: missing integer dim_in / dim_out");
  const int din = j["dim_in"].get<int>();
  const int dout = j["dim_out"].get<int>();
  if (din <= 0 || dout <= 0)
    throw IoError("channel JSON: dimensions must be positive");
  const bool has_kraus = j.contains("kraus");
  const bool has_choi = j.contains("choi");
  if (has_kraus == has_choi)
    throw IoError("channel JSON: provide exactly one of kraus / choi");
  if (has_kraus) {
    const json& list = j["kraus"];
    if (!list.is_array() || list.empty())
      throw IoError("channel JSON: kraus must be a nonempty list");
    std::vector<Mat> kraus;
    kraus.reserve(list.size());
    for (const json& item : list)
      kraus.push_back(matrix_from_json(item, dout, din, "kraus"));
    return channel_from_kraus(kraus, din, dout);
  }
  ChoiMatrix J;
  J.dim_in = din;
  J.dim_out = dout;
  J.entries = matrix_from_json(j["choi"], dout * din, dout * din, "choi");
  return channel_from_choi(J);
}

QuantumChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open channel file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return channel_from_json(ss.str());
}

void save_channel(const QuantumChannel& channel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << channel_to_json(channel);
}

}  // namespace qdeg
