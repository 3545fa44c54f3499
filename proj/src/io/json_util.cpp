#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace scdr::io {

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(path + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot write file");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
  }
  fs::rename(tmp, target);
}

namespace detail {

void fail(const std::string& where, const std::string& what) { throw DataError(where + ": " + what); }

Reader::Reader(const Json& value, std::string where) : value_(value), where_(std::move(where)) {
  if (!value_.is_object()) fail(where_, "expected an object");
}

bool Reader::has(const std::string& key) const { return value_.contains(key); }

const Json* Reader::find(const std::string& key) {
  auto it = value_.find(key);
  if (it == value_.end()) return nullptr;
  used_.insert(key);
  return &*it;
}

const Json& Reader::get(const std::string& key) {
  const Json* v = find(key);
  if (!v) fail(where_, "missing field '" + key + "'");
  return *v;
}

double Reader::number(const std::string& key) { return as_number(get(key), at(key)); }
double Reader::number(const std::string& key, double fallback) {
  const Json* v = find(key);
  return v ? as_number(*v, at(key)) : fallback;
}
int Reader::integer(const std::string& key) { return as_integer(get(key), at(key)); }
int Reader::integer(const std::string& key, int fallback) {
  const Json* v = find(key);
  return v ? as_integer(*v, at(key)) : fallback;
}
bool Reader::boolean(const std::string& key, bool fallback) {
  const Json* v = find(key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(at(key), "expected true or false");
  return v->get<bool>();
}
std::string Reader::string(const std::string& key) {
  const Json& v = get(key);
  if (!v.is_string()) fail(at(key), "expected a string");
  return v.get<std::string>();
}
std::string Reader::string(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

void Reader::finish() const {
  for (auto it = value_.begin(); it != value_.end(); ++it)
    if (!used_.count(it.key())) fail(where_, "unknown field '" + it.key() + "'");
}

double as_number(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_null()) return kInf;
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  fail(where, "expected a number or \"inf\"");
}

int as_integer(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 1e9) return static_cast<int>(d);
  }
  fail(where, "expected an integer");
}

Series table(const Json& v, int periods, const std::string& where) {
  if (!v.is_array()) return constant_series(periods, as_number(v, where));
  if (static_cast<int>(v.size()) != periods)
    fail(where, "expected " + std::to_string(periods) + " values, got " + std::to_string(v.size()));
  Series s(periods);
  for (int t = 0; t < periods; ++t) s[t] = as_number(v[t], where + "[" + std::to_string(t) + "]");
  return s;
}

IntSeries int_table(const Json& v, int periods, const std::string& where) {
  if (!v.is_array()) return IntSeries(periods, as_integer(v, where));
  if (static_cast<int>(v.size()) != periods)
    fail(where, "expected " + std::to_string(periods) + " values, got " + std::to_string(v.size()));
  IntSeries s(periods);
  for (int t = 0; t < periods; ++t) s[t] = as_integer(v[t], where + "[" + std::to_string(t) + "]");
  return s;
}

Json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json number_json(int v) { return v; }

template <typename S>
Json compact(const S& s) {
  bool constant = !s.empty() && std::all_of(s.begin(), s.end(), [&](auto x) { return x == s.front(); });
  if (constant) return number_json(s.front());
  Json a = Json::array();
  for (auto x : s) a.push_back(number_json(x));
  return a;
}

Json table_json(const Series& s) { return compact(s); }
Json table_json(const IntSeries& s) { return compact(s); }

}  // namespace detail
}  // namespace scdr::io
