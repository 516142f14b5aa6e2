#include "bapsolve/mps.hpp"

#include <cctype>
#include <charconv>
#include <initializer_list>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace bapsolve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Section { none, name, objsense, rows, columns, rhs, ranges, bounds, endata };

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Fixed-format fields: columns 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
std::vector<std::string> split_fixed(const std::string& line) {
  static const int start[] = {1, 4, 14, 24, 39, 49};
  static const int width[] = {2, 8, 8, 12, 8, 12};
  std::vector<std::string> out;
  for (int k = 0; k < 6; ++k) {
    if (static_cast<int>(line.size()) <= start[k]) break;
    out.push_back(trim(line.substr(static_cast<std::size_t>(start[k]), static_cast<std::size_t>(width[k]))));
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

bool parse_number(std::string tok, double& x) {
  if (!tok.empty() && tok[0] == '+') tok.erase(0, 1);
  for (char& ch : tok) {
    if (ch == 'd' || ch == 'D') ch = 'e';
  }
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  return r.ec == std::errc() && r.ptr == tok.data() + tok.size();
}

struct Parser {
  MpsModel model;
  std::unordered_map<std::string, int> row_index;  // constraint rows
  std::unordered_map<std::string, int> n_rows;     // N rows, value unused
  std::unordered_map<std::string, int> col_index;
  std::vector<double> cost;
  std::vector<double> rhs;
  std::vector<double> range;
  std::vector<double> lower;
  std::vector<double> upper;
  std::string current_col;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line); }

  double number(const std::string& tok) const {
    double x = 0.0;
    if (!parse_number(tok, x)) fail("bad number '" + tok + "'");
    if (!std::isfinite(x) && std::abs(x) < 1e300) fail("bad number '" + tok + "'");
    return x;
  }

  void add_row(const std::string& type, const std::string& name) {
    if (type.size() != 1) fail("bad row type '" + type + "'");
    const char t = type[0];
    if (row_index.count(name) || n_rows.count(name)) fail("duplicate row '" + name + "'");
    if (t == 'N' || t == 'n') {
      if (model.objective_name.empty()) model.objective_name = name;
      n_rows[name] = 0;
      return;
    }
    char u = static_cast<char>(std::toupper(static_cast<unsigned char>(t)));
    if (u != 'E' && u != 'L' && u != 'G') fail("bad row type '" + type + "'");
    row_index[name] = static_cast<int>(model.rows.size());
    model.rows.push_back({name, u});
    rhs.push_back(0.0);
    range.push_back(std::numeric_limits<double>::quiet_NaN());
  }

  // Applies "row value" to the current column.
  void column_pair(int col, const std::string& row, const std::string& val) {
    const double x = number(val);
    if (row == model.objective_name) {
      cost[static_cast<std::size_t>(col)] += x;
      return;
    }
    if (n_rows.count(row)) return;  // extra objective rows are ignored
    auto it = row_index.find(row);
    if (it == row_index.end()) fail("column entry references unknown row '" + row + "'");
    if (x != 0.0) model.entries.push_back({it->second, col, x});
  }

  void columns_line(const std::vector<std::string>& f) {
    if (f.size() >= 3 && (f[1] == "'MARKER'" || f[1] == "MARKER")) {
      fail("integer markers are not supported");
    }
    if (f.size() != 3 && f.size() != 5) fail("COLUMNS line needs 3 or 5 fields");
    const std::string& name = f[0];
    int col;
    auto it = col_index.find(name);
    if (it == col_index.end()) {
      col = static_cast<int>(model.columns.size());
      col_index[name] = col;
      model.columns.push_back(name);
      cost.push_back(0.0);
      lower.push_back(0.0);
      upper.push_back(kInf);
    } else {
      col = it->second;
      if (name != current_col) fail("column '" + name + "' is not contiguous");
    }
    current_col = name;
    column_pair(col, f[1], f[2]);
    if (f.size() == 5) column_pair(col, f[3], f[4]);
  }

  void rhs_pair(const std::string& row, const std::string& val, bool is_range) {
    const double x = number(val);
    if (row == model.objective_name) {
      if (is_range) fail("RANGES entry on the objective row");
      model.objective_constant = -x;
      return;
    }
    if (n_rows.count(row)) return;
    auto it = row_index.find(row);
    if (it == row_index.end()) fail("reference to unknown row '" + row + "'");
    (is_range ? range : rhs)[static_cast<std::size_t>(it->second)] = x;
  }

  void rhs_line(const std::vector<std::string>& f, bool is_range) {
    std::size_t k;
    if (f.size() == 2 || f.size() == 4) {
      k = 0;
    } else if (f.size() == 3 || f.size() == 5) {
      k = 1;
    } else {
      fail(std::string(is_range ? "RANGES" : "RHS") + " line has a bad field count");
    }
    rhs_pair(f[k], f[k + 1], is_range);
    if (f.size() - k == 4) rhs_pair(f[k + 2], f[k + 3], is_range);
  }

  void bounds_line(const std::vector<std::string>& f) {
    if (f.empty()) return;
    const std::string type = f[0];
    if (type == "BV" || type == "LI" || type == "UI" || type == "SC") {
      fail("bound type " + type + " (integer or semicontinuous) is not supported");
    }
    const bool has_value = type == "UP" || type == "LO" || type == "FX";
    const bool no_value = type == "FR" || type == "MI" || type == "PL";
    if (!has_value && !no_value) fail("unknown bound type '" + type + "'");
    std::string col;
    std::string val;
    if (has_value) {
      if (f.size() == 4) {
        col = f[2];
        val = f[3];
      } else if (f.size() == 3) {
        col = f[1];
        val = f[2];
      } else {
        fail("bound " + type + " needs a value");
      }
    } else {
      if (f.size() == 3) {
        col = f[2];
      } else if (f.size() == 2) {
        col = f[1];
      } else {
        fail("bound " + type + " has a bad field count");
      }
    }
    auto it = col_index.find(col);
    if (it == col_index.end()) fail("bound references unknown column '" + col + "'");
    const auto j = static_cast<std::size_t>(it->second);
    if (type == "UP") {
      const double x = number(val);
      upper[j] = x;
      if (x < 0.0 && lower[j] == 0.0) lower[j] = -kInf;
    } else if (type == "LO") {
      lower[j] = number(val);
    } else if (type == "FX") {
      lower[j] = upper[j] = number(val);
    } else if (type == "FR") {
      lower[j] = -kInf;
      upper[j] = kInf;
    } else if (type == "MI") {
      lower[j] = -kInf;
    } else {
      upper[j] = kInf;
    }
  }

  // Free format first; fixed columns when the token count does not fit.
  // Once a line needed fixed columns, the rest of the file is read that way.
  bool fixed_mode = false;

  std::vector<std::string> fields(const std::string& raw, std::initializer_list<std::size_t> ok) {
    std::vector<std::string> f = split_ws(raw);
    bool fits = false;
    for (std::size_t k : ok) fits = fits || f.size() == k;
    if (fits && !fixed_mode) return f;
    if (raw[0] == ' ' || raw[0] == '\t') {
      fixed_mode = true;
      f = split_fixed(raw);
      if (!f.empty() && f[0].empty()) f.erase(f.begin());
    }
    return f;
  }
};

Section section_of(const std::string& word, bool& known) {
  known = true;
  if (word == "NAME") return Section::name;
  if (word == "OBJSENSE") return Section::objsense;
  if (word == "ROWS") return Section::rows;
  if (word == "COLUMNS") return Section::columns;
  if (word == "RHS") return Section::rhs;
  if (word == "RANGES") return Section::ranges;
  if (word == "BOUNDS") return Section::bounds;
  if (word == "ENDATA") return Section::endata;
  known = false;
  return Section::none;
}

}  // namespace

MpsModel parse_mps(std::istream& in) {
  Parser p;
  Section sec = Section::none;
  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '*') continue;
    if (trim(raw).empty()) continue;
    const bool header = raw[0] != ' ' && raw[0] != '\t';
    if (header) {
      std::vector<std::string> f = split_ws(raw);
      bool known = false;
      const Section next = section_of(f[0], known);
      if (!known) {
        // OBJSENSE value may sit in column 1 under some writers
        if (sec == Section::objsense && (f[0] == "MAX" || f[0] == "MAXIMIZE")) {
          p.model.maximize = true;
          continue;
        }
        if (sec == Section::objsense && (f[0] == "MIN" || f[0] == "MINIMIZE")) continue;
        p.fail("unknown section '" + f[0] + "'");
      }
      if (next != Section::name && next != Section::objsense && next <= sec &&
          !(next == sec && next == Section::endata)) {
        p.fail("section " + f[0] + " is out of order");
      }
      if (next == Section::columns && sec < Section::rows) p.fail("COLUMNS before ROWS");
      if ((next == Section::rhs || next == Section::ranges || next == Section::bounds) &&
          sec < Section::columns) {
        p.fail(f[0] + " before COLUMNS");
      }
      sec = next;
      if (sec == Section::name) {
        if (f.size() > 1) p.model.name = f[1];
      } else if (sec == Section::objsense && f.size() > 1) {
        p.model.maximize = f[1] == "MAX" || f[1] == "MAXIMIZE";
      } else if (sec == Section::endata) {
        break;
      }
      continue;
    }
    switch (sec) {
      case Section::none:
      case Section::name:
        p.fail("data line outside a section");
      case Section::objsense: {
        const std::string s = trim(raw);
        if (s == "MAX" || s == "MAXIMIZE") {
          p.model.maximize = true;
        } else if (s != "MIN" && s != "MINIMIZE") {
          p.fail("bad OBJSENSE value '" + s + "'");
        }
        break;
      }
      case Section::rows: {
        auto f = p.fields(raw, {2});
        if (f.size() != 2) p.fail("ROWS line needs a type and a name");
        p.add_row(f[0], f[1]);
        break;
      }
      case Section::columns:
        p.columns_line(p.fields(raw, {3, 5}));
        break;
      case Section::rhs:
        p.rhs_line(p.fields(raw, {2, 3, 4, 5}), false);
        break;
      case Section::ranges:
        p.rhs_line(p.fields(raw, {2, 3, 4, 5}), true);
        break;
      case Section::bounds:
        p.bounds_line(p.fields(raw, {2, 3, 4}));
        break;
      case Section::endata:
        break;
    }
    if (sec == Section::endata) break;
  }
  if (sec != Section::endata) throw ParseError("missing ENDATA", p.line);
  if (p.model.objective_name.empty()) throw ParseError("no objective (N) row", p.line);

  auto to_vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  p.model.cost = to_vec(p.cost);
  p.model.rhs = to_vec(p.rhs);
  p.model.range = to_vec(p.range);
  p.model.lower = to_vec(p.lower);
  p.model.upper = to_vec(p.upper);
  for (int j = 0; j < p.model.num_cols(); ++j) {
    if (p.model.lower[j] > p.model.upper[j]) {
      throw ParseError("column '" + p.model.columns[static_cast<std::size_t>(j)] +
                       "' has lower bound above upper bound");
    }
  }
  return std::move(p.model);
}

MpsModel parse_mps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return parse_mps(in);
}

void MpsModel::row_bounds(int i, double& lo, double& hi) const {
  const double r = rhs[i];
  const double rg = range[i];
  const char t = rows[static_cast<std::size_t>(i)].type;
  if (std::isnan(rg)) {
    lo = t == 'L' ? -kInf : r;
    hi = t == 'G' ? kInf : r;
    return;
  }
  const double a = std::abs(rg);
  if (t == 'E') {
    lo = rg >= 0.0 ? r : r - a;
    hi = rg >= 0.0 ? r + a : r;
  } else if (t == 'L') {
    lo = r - a;
    hi = r;
  } else {
    lo = r;
    hi = r + a;
  }
}

double MpsModel::objective(const Vector& x) const { return cost.dot(x) + objective_constant; }

double MpsModel::max_violation(const Vector& x) const {
  Vector act = Vector::Zero(num_rows());
  for (const auto& e : entries) act[e.row] += e.value * x[e.col];
  double worst = 0.0;
  for (int i = 0; i < num_rows(); ++i) {
    double lo, hi;
    row_bounds(i, lo, hi);
    worst = std::max({worst, lo - act[i], act[i] - hi});
  }
  for (int j = 0; j < num_cols(); ++j) worst = std::max({worst, lower[j] - x[j], x[j] - upper[j]});
  return worst;
}

Vector StandardForm::original_x(const Vector& x_std) const { return shift + map * x_std; }

Vector StandardForm::standard_x(const Vector& x_orig) const {
  if (x_orig.size() != original_a.cols()) throw InvalidArgument("point has the wrong length");
  const Vector activity = original_a * x_orig;
  Vector all(static_cast<Eigen::Index>(sources.size()));
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const ColumnSource& s = sources[k];
    double v = 0.0;
    switch (s.kind) {
      case Source::above_lower: v = x_orig[s.index] - s.value; break;
      case Source::below_upper: v = s.value - x_orig[s.index]; break;
      case Source::positive_part: v = std::max(x_orig[s.index], 0.0); break;
      case Source::negative_part: v = std::max(-x_orig[s.index], 0.0); break;
      case Source::slack_upper: v = s.value - activity[s.index]; break;
      case Source::slack_lower: v = activity[s.index] - s.value; break;
      case Source::width: v = s.value - all[s.index]; break;
    }
    all[static_cast<Eigen::Index>(k)] = v;
  }
  Vector out(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) out[static_cast<Eigen::Index>(k)] = all[kept[k]];
  return out;
}

StandardForm to_standard_form(const MpsModel& model) {
  const int m0 = model.num_rows();
  const int n0 = model.num_cols();
  StandardForm sf;
  sf.sense = model.maximize ? 1.0 : -1.0;
  sf.shift = Vector::Zero(n0);

  // Column substitution x_j = shift_j + sum_k coef * x_std_k.
  struct Piece {
    int std_col;
    double coef;
  };
  std::vector<std::vector<Piece>> pieces(static_cast<std::size_t>(n0));
  std::vector<Triplet> map_t;
  std::vector<std::pair<int, double>> upper_rows;  // (std col, width) rows x + s = width
  int ns = 0;
  for (int j = 0; j < n0; ++j) {
    const double lo = model.lower[j];
    const double hi = model.upper[j];
    auto add = [&](double coef, StandardForm::Source kind, double value) {
      pieces[static_cast<std::size_t>(j)].push_back({ns, coef});
      map_t.emplace_back(j, ns, coef);
      sf.sources.push_back({kind, j, value});
      return ns++;
    };
    if (std::isfinite(lo) && std::isfinite(hi) && lo == hi) {
      sf.shift[j] = lo;
    } else if (std::isfinite(lo)) {
      sf.shift[j] = lo;
      const int k = add(1.0, StandardForm::Source::above_lower, lo);
      if (std::isfinite(hi)) upper_rows.emplace_back(k, hi - lo);
    } else if (std::isfinite(hi)) {
      sf.shift[j] = hi;
      add(-1.0, StandardForm::Source::below_upper, hi);
    } else {
      add(1.0, StandardForm::Source::positive_part, 0.0);
      add(-1.0, StandardForm::Source::negative_part, 0.0);
    }
  }

  // Row slacks: L gets +s, G gets -s, ranged rows get -s with s <= hi - lo.
  std::vector<Triplet> a_t;
  Vector row_shift = Vector::Zero(m0);
  for (const auto& e : model.entries) {
    row_shift[e.row] += e.value * sf.shift[e.col];
    for (const Piece& pc : pieces[static_cast<std::size_t>(e.col)]) {
      a_t.emplace_back(e.row, pc.std_col, e.value * pc.coef);
    }
  }
  std::vector<double> b_std;
  for (int i = 0; i < m0; ++i) {
    double lo, hi;
    model.row_bounds(i, lo, hi);
    if (lo == hi) {
      b_std.push_back(lo - row_shift[i]);
    } else if (!std::isfinite(lo)) {
      sf.sources.push_back({StandardForm::Source::slack_upper, i, hi});
      a_t.emplace_back(i, ns++, 1.0);
      b_std.push_back(hi - row_shift[i]);
    } else if (!std::isfinite(hi)) {
      sf.sources.push_back({StandardForm::Source::slack_lower, i, lo});
      a_t.emplace_back(i, ns++, -1.0);
      b_std.push_back(lo - row_shift[i]);
    } else {
      sf.sources.push_back({StandardForm::Source::slack_lower, i, lo});
      const int s = ns++;
      a_t.emplace_back(i, s, -1.0);
      b_std.push_back(lo - row_shift[i]);
      upper_rows.emplace_back(s, hi - lo);
    }
  }
  int mrows = m0;
  for (const auto& [col, width] : upper_rows) {
    a_t.emplace_back(mrows, col, 1.0);
    sf.sources.push_back({StandardForm::Source::width, col, width});
    a_t.emplace_back(mrows, ns++, 1.0);
    b_std.push_back(width);
    ++mrows;
  }

  SparseMatrix a(mrows, ns);
  a.setFromTriplets(a_t.begin(), a_t.end());
  a.prune(0.0, 0.0);
  a.makeCompressed();
  Vector b = Eigen::Map<const Vector>(b_std.data(), static_cast<Eigen::Index>(b_std.size()));

  SparseMatrix full_map(n0, ns);
  full_map.setFromTriplets(map_t.begin(), map_t.end());
  full_map.makeCompressed();
  Vector c = sf.sense * (SparseMatrix(full_map.transpose()) * model.cost);

  // Drop empty rows (must be consistent) and empty columns (fixed at zero).
  const double scale = 1.0 + b.lpNorm<Eigen::Infinity>();
  std::vector<int> keep_rows;
  {
    Vector row_nnz = Vector::Zero(mrows);
    for (int j = 0; j < a.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(a, j); it; ++it) row_nnz[it.row()] += 1.0;
    }
    for (int i = 0; i < mrows; ++i) {
      if (row_nnz[i] > 0.0) {
        keep_rows.push_back(i);
      } else if (std::abs(b[i]) > 1e-9 * scale) {
        throw InvalidArgument("model is infeasible: empty row with nonzero right-hand side");
      }
    }
  }
  std::vector<int> keep_cols;
  for (int j = 0; j < ns; ++j) {
    if (a.col(j).nonZeros() > 0) {
      keep_cols.push_back(j);
    } else if (c[j] > 0.0) {
      throw InvalidArgument("model is unbounded: free improving column with no constraints");
    }
  }
  std::vector<int> row_pos(static_cast<std::size_t>(mrows), -1);
  for (std::size_t k = 0; k < keep_rows.size(); ++k) row_pos[static_cast<std::size_t>(keep_rows[k])] = static_cast<int>(k);
  std::vector<Triplet> kt;
  std::vector<Triplet> mt;
  for (std::size_t k = 0; k < keep_cols.size(); ++k) {
    const int j = keep_cols[k];
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      kt.emplace_back(row_pos[static_cast<std::size_t>(it.row())], static_cast<int>(k), it.value());
    }
    for (SparseMatrix::InnerIterator it(full_map, j); it; ++it) {
      mt.emplace_back(it.row(), static_cast<int>(k), it.value());
    }
  }
  const int mk = static_cast<int>(keep_rows.size());
  const int nk = static_cast<int>(keep_cols.size());
  sf.lp.a.resize(mk, nk);
  sf.lp.a.setFromTriplets(kt.begin(), kt.end());
  sf.lp.a.makeCompressed();
  sf.lp.b.resize(mk);
  for (int k = 0; k < mk; ++k) sf.lp.b[k] = b[keep_rows[static_cast<std::size_t>(k)]];
  sf.lp.c.resize(nk);
  for (int k = 0; k < nk; ++k) sf.lp.c[k] = c[keep_cols[static_cast<std::size_t>(k)]];
  sf.map.resize(n0, nk);
  sf.map.setFromTriplets(mt.begin(), mt.end());
  sf.map.makeCompressed();
  sf.offset = model.cost.dot(sf.shift) + model.objective_constant;
  sf.kept = keep_cols;
  std::vector<Triplet> ot;
  for (const auto& e : model.entries) ot.emplace_back(e.row, e.col, e.value);
  sf.original_a.resize(m0, n0);
  sf.original_a.setFromTriplets(ot.begin(), ot.end());
  return sf;
}

}  // namespace bapsolve
