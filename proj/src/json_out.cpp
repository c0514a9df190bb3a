#include "speclyap/json_out.hpp"

#include <cmath>
#include <cstdio>

namespace speclyap::out {

std::string format_double(double d) {
  if (!std::isfinite(d)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

bool is_scalar_array(const Value& a) {
  for (const auto& v : a)
    if (v.is_structured()) return false;
  return true;
}

void write_value(std::string& out, const Value& v, int indent, int depth) {
  if (v.is_number_float()) {
    out += format_double(v.get<double>());
    return;
  }
  if (v.is_primitive()) {
    out += v.dump();
    return;
  }
  if (v.empty()) {
    out += v.is_array() ? "[]" : "{}";
    return;
  }
  if (v.is_array() && is_scalar_array(v)) {
    out += '[';
    bool first = true;
    for (const auto& x : v) {
      if (!first) out += ", ";
      first = false;
      write_value(out, x, indent, depth + 1);
    }
    out += ']';
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  out += v.is_array() ? "[\n" : "{\n";
  std::size_t i = 0;
  for (auto it = v.begin(); it != v.end(); ++it, ++i) {
    out += pad;
    if (v.is_object()) out += Value(it.key()).dump() + ": ";
    write_value(out, it.value(), indent, depth + 1);
    out += i + 1 < v.size() ? ",\n" : "\n";
  }
  out += std::string(static_cast<std::size_t>(indent * depth), ' ');
  out += v.is_array() ? ']' : '}';
}

std::string cell_text(const Value& v) {
  if (v.is_string()) return v.get<std::string>();
  std::string s;
  write_value(s, v, 0, 0);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void flatten(std::string& out, const std::string& path, const Value& v) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(out, path.empty() ? k : path + "." + k, child);
    return;
  }
  if (!v.is_array()) {
    out += csv_field(path) + ",,," + csv_field(cell_text(v)) + '\n';
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& e = v[i];
    if (e.is_array() && is_scalar_array(e)) {
      for (std::size_t j = 0; j < e.size(); ++j)
        out += csv_field(path) + ',' + std::to_string(i) + ',' + std::to_string(j) + ',' + csv_field(cell_text(e[j])) +
               '\n';
    } else if (e.is_structured()) {
      flatten(out, path + "[" + std::to_string(i) + "]", e);
    } else {
      out += csv_field(path) + ',' + std::to_string(i) + ",," + csv_field(cell_text(e)) + '\n';
    }
  }
}

}  // namespace

std::string dump(const Value& v, int indent) {
  std::string out;
  write_value(out, v, indent, 0);
  out += '\n';
  return out;
}

std::string to_csv(const Value& v) {
  std::string out = "field,row,col,value\n";
  flatten(out, "", v);
  return out;
}

Value matrix(const SymMatrix& m) {
  auto rows = Value::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    auto row = Value::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Value vector(const std::vector<double>& v) {
  auto a = Value::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace speclyap::out
