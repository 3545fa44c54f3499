#pragma once

// Strict readers for the JSON documents: every location in an error names
// the document and the field path, and unknown fields are rejected.

#include <set>
#include <string>

#include "scdr/io/documents.hpp"

namespace scdr::io::detail {

class Reader {
 public:
  Reader(const Json& value, std::string where);

  const std::string& where() const { return where_; }
  std::string at(const std::string& key) const { return where_ + "." + key; }

  bool has(const std::string& key) const;
  const Json& get(const std::string& key);  // throws when absent
  const Json* find(const std::string& key);

  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);

  /// Throws on any key that was never read.
  void finish() const;

 private:
  const Json& value_;
  std::string where_;
  std::set<std::string> used_;
};

[[noreturn]] void fail(const std::string& where, const std::string& what);

double as_number(const Json& v, const std::string& where);  // accepts "inf", "-inf", null
int as_integer(const Json& v, const std::string& where);

/// A constant number, an array of `periods` entries, or "inf"/null.
Series table(const Json& v, int periods, const std::string& where);
IntSeries int_table(const Json& v, int periods, const std::string& where);

Json number_json(double v);
Json number_json(int v);
Json table_json(const Series& s);
Json table_json(const IntSeries& s);

}  // namespace scdr::io::detail
