#include "hermiflow/trajectory_io.hpp"

#include "hermiflow/error.hpp"

#include "json.hpp"

#include <array>
#include <charconv>
#include <sstream>

namespace hermiflow {

namespace {

using json = nlohmann::json;

struct Column {
  const char* name;
  double TrajectorySample::*field;
};

constexpr std::array<Column, 10> kDiagnostics{{
    {"|Rm|", &TrajectorySample::rm_norm},
    {"|DJ|", &TrajectorySample::dj_norm},
    {"|D2J|", &TrajectorySample::d2j_norm},
    {"norm_N", &TrajectorySample::n_norm},
    {"norm_domega", &TrajectorySample::d_omega_norm},
    {"compat_residual", &TrajectorySample::compat_residual},
    {"jsq_residual", &TrajectorySample::jsq_residual},
    {"min_eig_g", &TrajectorySample::min_eig_g},
    {"t_half_DJ", &TrajectorySample::t_half_dj},
    {"t_Rm", &TrajectorySample::t_rm},
}};

std::string index_name(const char* prefix, int i, int j, int dim) {
  std::string s = prefix;
  s += std::to_string(i + 1);
  if (dim >= 10) s += '_';
  s += std::to_string(j + 1);
  return s;
}

void put(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  out.append(buf, res.ptr);
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const json& rows, int dim) {
  Matrix m(dim, dim);
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
    throw ParseError(ErrorCode::Syntax, 0, "matrix needs " + std::to_string(dim) + " rows");
  }
  for (int r = 0; r < dim; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ParseError(ErrorCode::Syntax, 0, "matrix row needs " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

std::string write_csv(const Trajectory& traj) {
  std::string out;
  const auto cols = csv_columns(traj.dim);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  const int d = traj.dim;
  for (const auto& s : traj.samples) {
    put(out, s.t);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        out += ',';
        put(out, s.g(i, j));
      }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        out += ',';
        put(out, s.j(i, j));
      }
    for (const auto& c : kDiagnostics) {
      out += ',';
      put(out, s.*c.field);
    }
    out += '\n';
  }
  return out;
}

std::string write_json(const Trajectory& traj) {
  json doc;
  doc["label"] = traj.label;
  doc["dim"] = traj.dim;
  doc["status"] = std::string(status_name(traj.status));
  doc["detail"] = traj.detail;
  doc["steps"] = traj.steps;
  json samples = json::array();
  for (const auto& s : traj.samples) {
    json e;
    e["t"] = s.t;
    e["g"] = matrix_json(s.g);
    e["J"] = matrix_json(s.j);
    for (const auto& c : kDiagnostics) e[c.name] = s.*c.field;
    e["t_D2J"] = s.t_d2j;
    e["scaled_DkRm"] = s.scaled_d_rm;
    e["scaled_DkJ"] = s.scaled_d_j;
    if (s.status) e["status"] = std::string(status_name(*s.status));
    samples.push_back(std::move(e));
  }
  doc["samples"] = std::move(samples);
  return doc.dump(2) + "\n";
}

}  // namespace

std::optional<TrajectoryFormat> parse_format(std::string_view s) noexcept {
  if (s == "csv") return TrajectoryFormat::Csv;
  if (s == "json") return TrajectoryFormat::Json;
  return std::nullopt;
}

std::vector<std::string> csv_columns(int dim) {
  std::vector<std::string> cols{"t"};
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) cols.push_back(index_name("g_", i, j, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) cols.push_back(index_name("J_", i, j, dim));
  for (const auto& c : kDiagnostics) cols.emplace_back(c.name);
  return cols;
}

std::string write_trajectory(const Trajectory& traj, TrajectoryFormat format) {
  return format == TrajectoryFormat::Csv ? write_csv(traj) : write_json(traj);
}

Trajectory parse_trajectory_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(ErrorCode::Syntax, 0, std::string("invalid JSON: ") + e.what());
  }
  try {
    Trajectory traj;
    traj.label = doc.at("label").get<std::string>();
    traj.dim = doc.at("dim").get<int>();
    const auto st = parse_status(doc.at("status").get<std::string>());
    if (!st) throw ParseError(ErrorCode::Syntax, 0, "unknown status");
    traj.status = *st;
    traj.detail = doc.value("detail", std::string{});
    traj.steps = doc.value("steps", 0);
    for (const auto& e : doc.at("samples")) {
      TrajectorySample s;
      s.t = e.at("t").get<double>();
      s.g = matrix_from(e.at("g"), traj.dim);
      s.j = matrix_from(e.at("J"), traj.dim);
      for (const auto& c : kDiagnostics) s.*c.field = e.at(c.name).get<double>();
      s.t_d2j = e.value("t_D2J", 0.0);
      s.scaled_d_rm = e.value("scaled_DkRm", std::vector<double>{});
      s.scaled_d_j = e.value("scaled_DkJ", std::vector<double>{});
      if (e.contains("status")) {
        const auto ss = parse_status(e.at("status").get<std::string>());
        if (!ss) throw ParseError(ErrorCode::Syntax, 0, "unknown sample status");
        s.status = *ss;
      }
      traj.samples.push_back(std::move(s));
    }
    return traj;
  } catch (const json::exception& e) {
    throw ParseError(ErrorCode::Syntax, 0, std::string("malformed trajectory JSON: ") + e.what());
  }
}

Trajectory parse_trajectory_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(ErrorCode::Syntax, 1, "empty CSV");
  ++line_no;

  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  // Recover dim from the column count: 1 + d(d+1)/2 + d^2 + 10.
  int dim = 0;
  for (int d = 2; d <= 64; d += 2) {
    if (static_cast<std::size_t>(1 + d * (d + 1) / 2 + d * d + 10) == header.size()) dim = d;
  }
  if (dim == 0 || header != csv_columns(dim)) throw ParseError(ErrorCode::Syntax, 1, "unexpected CSV header");

  Trajectory traj;
  traj.dim = dim;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto comma = line.find(',', pos);
      const auto end = comma == std::string::npos ? line.size() : comma;
      double v = 0.0;
      const auto res = std::from_chars(line.data() + pos, line.data() + end, v);
      if (res.ec != std::errc() || res.ptr != line.data() + end) {
        throw ParseError(ErrorCode::Syntax, line_no, "line " + std::to_string(line_no) + ": invalid number");
      }
      vals.push_back(v);
      pos = end + 1;
    }
    if (vals.size() != header.size()) {
      throw ParseError(ErrorCode::Syntax, line_no, "line " + std::to_string(line_no) + ": wrong number of columns");
    }
    TrajectorySample s;
    std::size_t k = 0;
    s.t = vals[k++];
    s.g = Matrix(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) s.g(i, j) = s.g(j, i) = vals[k++];
    s.j = Matrix(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) s.j(i, j) = vals[k++];
    for (const auto& c : kDiagnostics) s.*c.field = vals[k++];
    traj.samples.push_back(std::move(s));
  }
  return traj;
}

}  // namespace hermiflow
