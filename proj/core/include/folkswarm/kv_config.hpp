#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace folkswarm::kv {

/// Minimal TOML subset used by scenario files: `[table]`, `[[array.of.tables]]`,
/// `key = value` with strings, integers, reals, booleans and single-line
/// arrays of those; `#` starts a comment.
struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<bool, std::int64_t, double, std::string, Array> data;

  bool is_number() const;
  /// Integers widen to double.
  double as_real(std::string_view what) const;
  std::int64_t as_int(std::string_view what) const;
  bool as_bool(std::string_view what) const;
  const std::string& as_string(std::string_view what) const;
  const Array& as_array(std::string_view what) const;
};

class Table {
 public:
  void set(std::string key, Value v, int line);
  bool contains(std::string_view key) const { return values_.contains(std::string(key)); }
  const Value* find(std::string_view key) const;
  const std::map<std::string, Value, std::less<>>& values() const { return values_; }

  std::optional<double> real(std::string_view key) const;
  std::optional<std::int64_t> integer(std::string_view key) const;
  std::optional<bool> boolean(std::string_view key) const;
  std::optional<std::string> string(std::string_view key) const;

  /// Name used in error messages.
  std::string name;

 private:
  std::map<std::string, Value, std::less<>> values_;
};

struct Document {
  /// Keys before the first header live in the table named "".
  std::map<std::string, Table, std::less<>> tables;
  std::map<std::string, std::vector<Table>, std::less<>> arrays;

  const Table* table(std::string_view name) const;
  const std::vector<Table>* array(std::string_view name) const;
};

/// Throws InputError with the offending line number.
Document parse(std::string_view text);

}  // namespace folkswarm::kv
