#include "hermiflow/catalog.hpp"

#include "hermiflow/error.hpp"
#include "hermiflow/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace hermiflow {

std::string_view class_name(ExpectedClass c) noexcept {
  switch (c) {
    case ExpectedClass::Kahler: return "kahler";
    case ExpectedClass::AlmostKahler: return "almost_kahler";
    case ExpectedClass::HermitianPluriclosed: return "hermitian_pluriclosed";
    case ExpectedClass::Generic: return "generic";
  }
  return "generic";
}

std::optional<ExpectedClass> parse_class(std::string_view s) noexcept {
  for (auto c : {ExpectedClass::Kahler, ExpectedClass::AlmostKahler, ExpectedClass::HermitianPluriclosed,
                 ExpectedClass::Generic}) {
    if (s == class_name(c)) return c;
  }
  return std::nullopt;
}

Scenario make_scenario(std::string label, LieAlgebraSpec algebra, const Matrix& g, const Matrix& j,
                       ExpectedClass cls) {
  if (g.rows() != algebra.dim() || j.rows() != algebra.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "g and J must match the algebra dimension");
  }
  AlmostHermitianPair pair(g, j);
  const bool need_closed = cls == ExpectedClass::Kahler || cls == ExpectedClass::AlmostKahler;
  const bool need_integrable = cls == ExpectedClass::Kahler || cls == ExpectedClass::HermitianPluriclosed;
  if (need_closed) {
    const double n = frame_norm(omega_derivatives(pair, algebra, levi_civita(algebra, pair)).d_omega, pair.metric());
    if (!(n <= kClassTol)) {
      throw Error(ErrorCode::ClassMismatch, "class " + std::string(class_name(cls)) + " needs d omega = 0, got |d omega| = " +
                                                std::to_string(n));
    }
  }
  if (need_integrable) {
    const double n = frame_norm(nijenhuis(pair, algebra).low, pair.metric());
    if (!(n <= kClassTol)) {
      throw Error(ErrorCode::ClassMismatch,
                  "class " + std::string(class_name(cls)) + " needs N = 0, got |N| = " + std::to_string(n));
    }
  }
  return Scenario{std::move(label), std::move(algebra), std::move(pair), cls};
}

std::vector<std::string> builtin_names() { return {"flat_torus_4", "kodaira_thurston", "hopf_s3s1"}; }

Scenario builtin(std::string_view name) {
  const Matrix id = Matrix::Identity(4, 4);
  if (name == "flat_torus_4") {
    return make_scenario("flat_torus_4", LieAlgebraSpec::abelian(4, "flat_torus_4"), id,
                         standard_complex_structure(4), ExpectedClass::Kahler);
  }
  if (name == "kodaira_thurston") {
    // [e1, e2] = e3; J e1 = e3, J e2 = e4
    Matrix j = Matrix::Zero(4, 4);
    j(2, 0) = 1.0;
    j(0, 2) = -1.0;
    j(3, 1) = 1.0;
    j(1, 3) = -1.0;
    return make_scenario("kodaira_thurston", LieAlgebraSpec::from_brackets("kodaira_thurston", 4, {{0, 1, 2, 1.0}}),
                         id, j, ExpectedClass::AlmostKahler);
  }
  if (name == "hopf_s3s1") {
    // su(2) + R with [e1, e2] = e3, [e2, e3] = e1, [e3, e1] = e2
    auto algebra =
        LieAlgebraSpec::from_brackets("hopf_s3s1", 4, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}});
    return make_scenario("hopf_s3s1", std::move(algebra), id, standard_complex_structure(4),
                         ExpectedClass::HermitianPluriclosed);
  }
  std::string names;
  for (const auto& n : builtin_names()) names += (names.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + std::string(name) + "'; available: " + names);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

double parse_number(std::string_view tok, int line) {
  std::string_view t = tok;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ParseError(ErrorCode::Syntax, line, "line " + std::to_string(line) + ": invalid number '" + std::string(tok) + "'");
  }
  return v;
}

int parse_index(std::string_view tok, int line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 1) {
    throw ParseError(ErrorCode::Syntax, line,
                     "line " + std::to_string(line) + ": invalid index '" + std::string(tok) + "' (1-based)");
  }
  return v;
}

[[noreturn]] void syntax(int line, const std::string& msg) {
  throw ParseError(ErrorCode::Syntax, line, (line > 0 ? "line " + std::to_string(line) + ": " : "") + msg);
}

struct RawBracket {
  int i, j, k;
  double value;
  int line;
};

struct RawRow {
  std::vector<double> values;
  int line;
};

// Numbers in shortest round-trip form.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  std::optional<int> dim;
  int dim_line = 0;
  std::optional<ExpectedClass> cls;
  std::string label;
  std::vector<RawBracket> brackets;
  std::map<int, RawRow> g_rows;
  std::map<int, RawRow> j_rows;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) syntax(line_no, "expected '<key> = <value>'");
    const auto lhs = split_ws(trim(line.substr(0, eq)));
    const auto rhs_text = trim(line.substr(eq + 1));
    const auto rhs = split_ws(rhs_text);
    if (lhs.empty()) syntax(line_no, "missing key before '='");
    const std::string_view key = lhs[0];

    if (key == "dim" || key == "class" || key == "name") {
      if (lhs.size() != 1) syntax(line_no, "'" + std::string(key) + "' takes no indices");
      if (rhs.size() != 1) syntax(line_no, "'" + std::string(key) + "' needs exactly one value");
      if (key == "dim") {
        if (dim) syntax(line_no, "duplicate 'dim'");
        dim = parse_index(rhs[0], line_no);
        dim_line = line_no;
      } else if (key == "class") {
        if (cls) syntax(line_no, "duplicate 'class'");
        cls = parse_class(rhs[0]);
        if (!cls) {
          syntax(line_no, "unknown class '" + std::string(rhs[0]) +
                              "' (kahler, almost_kahler, hermitian_pluriclosed, generic)");
        }
      } else {
        if (!label.empty()) syntax(line_no, "duplicate 'name'");
        label = std::string(rhs[0]);
      }
    } else if (key == "c") {
      if (lhs.size() != 4) syntax(line_no, "expected 'c <i> <j> <k> = <value>'");
      if (rhs.size() != 1) syntax(line_no, "structure constant needs exactly one value");
      RawBracket b{parse_index(lhs[1], line_no), parse_index(lhs[2], line_no), parse_index(lhs[3], line_no),
                   parse_number(rhs[0], line_no), line_no};
      if (b.i >= b.j) syntax(line_no, "structure constants are stored with i < j");
      for (const auto& o : brackets)
        if (o.i == b.i && o.j == b.j && o.k == b.k) syntax(line_no, "duplicate structure constant");
      brackets.push_back(b);
    } else if (key == "g" || key == "J") {
      if (lhs.size() != 2) syntax(line_no, "expected '" + std::string(key) + " <row> = <values>'");
      const int row = parse_index(lhs[1], line_no);
      auto& rows = key == "g" ? g_rows : j_rows;
      if (rows.count(row)) syntax(line_no, "duplicate row " + std::to_string(row) + " of " + std::string(key));
      RawRow r{{}, line_no};
      for (auto tok : rhs) r.values.push_back(parse_number(tok, line_no));
      rows.emplace(row, std::move(r));
    } else {
      syntax(line_no, "unknown key '" + std::string(key) + "'");
    }
  }

  if (!dim) syntax(0, "missing 'dim'");
  const int d = *dim;
  if (d < 2 || d % 2 != 0) syntax(dim_line, "dim must be even and >= 2");

  std::vector<BracketEntry> entries;
  for (const auto& b : brackets) {
    if (b.j > d || b.k > d) syntax(b.line, "index exceeds dim " + std::to_string(d));
    entries.push_back({b.i - 1, b.j - 1, b.k - 1, b.value});
  }

  auto build = [&](const std::map<int, RawRow>& rows, const char* what) {
    Matrix m(d, d);
    for (const auto& [row, r] : rows) {
      if (row > d) syntax(r.line, "row index exceeds dim " + std::to_string(d));
      if (static_cast<int>(r.values.size()) != d) {
        syntax(r.line, std::string(what) + " row needs " + std::to_string(d) + " values, got " +
                           std::to_string(r.values.size()));
      }
      for (int c = 0; c < d; ++c) m(row - 1, c) = r.values[static_cast<std::size_t>(c)];
    }
    for (int row = 1; row <= d; ++row)
      if (!rows.count(row)) syntax(0, std::string("missing ") + what + " row " + std::to_string(row));
    return m;
  };
  const Matrix g = build(g_rows, "g");
  const Matrix j = build(j_rows, "J");
  if (label.empty()) label = "unnamed";

  try {
    auto algebra = LieAlgebraSpec::from_brackets(label, d, entries);
    return make_scenario(label, std::move(algebra), g, j, cls.value_or(ExpectedClass::Generic));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.code(), 0, e.what());
  }
}

std::string write_scenario(const Scenario& s) {
  std::ostringstream os;
  const int d = s.algebra.dim();
  os << "name = " << s.label << '\n';
  os << "dim = " << d << '\n';
  os << "class = " << class_name(s.expected_class) << '\n';
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double v = s.algebra.c(k, i, j);
        if (v != 0.0) os << "c " << i + 1 << ' ' << j + 1 << ' ' << k + 1 << " = " << fmt(v) << '\n';
      }
  auto rows = [&](const char* key, const Matrix& m) {
    for (int r = 0; r < d; ++r) {
      os << key << ' ' << r + 1 << " =";
      for (int c = 0; c < d; ++c) os << ' ' << fmt(m(r, c));
      os << '\n';
    }
  };
  rows("g", s.pair.g());
  rows("J", s.pair.j());
  return os.str();
}

Scenario load_scenario(const std::string& ref) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), ref) != names.end()) return builtin(ref);
  std::ifstream in(ref);
  if (!in) {
    std::string avail;
    for (const auto& n : names) avail += (avail.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::UnknownScenario,
                "'" + ref + "' is neither a builtin scenario (" + avail + ") nor a readable file");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace hermiflow
