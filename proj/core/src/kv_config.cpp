#include "folkswarm/kv_config.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "folkswarm/error.hpp"

namespace folkswarm::kv {

namespace {

[[noreturn]] void type_error(std::string_view what, std::string_view expected) {
  throw InputError(fmt::format("scenario: '{}' must be {}", what, expected));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

  Value parse_all() {
    Value v = parse_value();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(std::string_view msg) const {
    throw InputError(fmt::format("scenario line {}: {}", line_, msg));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Value parse_value() {
    skip_ws();
    if (pos_ >= text_.size()) fail("missing value");
    const char c = text_[pos_];
    if (c == '"') return Value{parse_string()};
    if (c == '[') return Value{parse_array()};
    return parse_scalar();
  }

  std::string parse_string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= text_.size()) break;
      switch (const char e = text_[pos_++]) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: fail(fmt::format("unsupported escape '\\{}'", e));
      }
    }
    fail("unterminated string");
  }

  Array parse_array() {
    ++pos_;
    Array out;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(parse_value());
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return out;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return out;
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value parse_scalar() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    const std::string_view tok = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (tok == "true") return Value{true};
    if (tok == "false") return Value{false};
    std::string cleaned;
    for (char c : tok) {
      if (c != '_') cleaned.push_back(c);
    }
    const char* first = cleaned.data();
    const char* last = first + cleaned.size();
    if (!cleaned.empty() && cleaned.front() == '+') ++first;
    if (cleaned.find_first_of(".eE") == std::string::npos) {
      std::int64_t i = 0;
      const auto r = std::from_chars(first, last, i);
      if (r.ec == std::errc() && r.ptr == last) return Value{i};
    } else {
      double d = 0.0;
      const auto r = std::from_chars(first, last, d);
      if (r.ec == std::errc() && r.ptr == last) return Value{d};
    }
    fail(fmt::format("cannot parse value '{}'", tok));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

bool Value::is_number() const {
  return std::holds_alternative<std::int64_t>(data) || std::holds_alternative<double>(data);
}

double Value::as_real(std::string_view what) const {
  if (const auto* i = std::get_if<std::int64_t>(&data)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&data)) return *d;
  type_error(what, "a number");
}

std::int64_t Value::as_int(std::string_view what) const {
  if (const auto* i = std::get_if<std::int64_t>(&data)) return *i;
  type_error(what, "an integer");
}

bool Value::as_bool(std::string_view what) const {
  if (const auto* b = std::get_if<bool>(&data)) return *b;
  type_error(what, "true or false");
}

const std::string& Value::as_string(std::string_view what) const {
  if (const auto* s = std::get_if<std::string>(&data)) return *s;
  type_error(what, "a string");
}

const Array& Value::as_array(std::string_view what) const {
  if (const auto* a = std::get_if<Array>(&data)) return *a;
  type_error(what, "an array");
}

void Table::set(std::string key, Value v, int line) {
  if (values_.contains(key)) {
    throw InputError(fmt::format("scenario line {}: duplicate key '{}'", line, key));
  }
  values_.emplace(std::move(key), std::move(v));
}

const Value* Table::find(std::string_view key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

namespace {

std::string qualified(const Table& t, std::string_view key) {
  return t.name.empty() ? std::string(key) : fmt::format("{}.{}", t.name, key);
}

}  // namespace

std::optional<double> Table::real(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_real(qualified(*this, key));
}

std::optional<std::int64_t> Table::integer(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_int(qualified(*this, key));
}

std::optional<bool> Table::boolean(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_bool(qualified(*this, key));
}

std::optional<std::string> Table::string(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_string(qualified(*this, key));
}

const Table* Document::table(std::string_view name) const {
  const auto it = tables.find(name);
  return it == tables.end() ? nullptr : &it->second;
}

const std::vector<Table>* Document::array(std::string_view name) const {
  const auto it = arrays.find(name);
  return it == arrays.end() ? nullptr : &it->second;
}

Document parse(std::string_view text) {
  Document doc;
  doc.tables[""].name = "";
  Table* current = &doc.tables[""];
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.starts_with("[[")) {
      if (!line.ends_with("]]")) {
        throw InputError(fmt::format("scenario line {}: malformed table-array header", line_no));
      }
      const std::string name(trim(line.substr(2, line.size() - 4)));
      if (!valid_key(name)) {
        throw InputError(fmt::format("scenario line {}: bad table name '{}'", line_no, name));
      }
      if (doc.tables.contains(name)) {
        throw InputError(fmt::format("scenario line {}: '{}' is already a table", line_no, name));
      }
      auto& arr = doc.arrays[name];
      arr.emplace_back();
      arr.back().name = fmt::format("{}[{}]", name, arr.size() - 1);
      current = &arr.back();
      continue;
    }
    if (line.starts_with('[')) {
      if (!line.ends_with(']')) {
        throw InputError(fmt::format("scenario line {}: malformed table header", line_no));
      }
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!valid_key(name)) {
        throw InputError(fmt::format("scenario line {}: bad table name '{}'", line_no, name));
      }
      if (doc.tables.contains(name) || doc.arrays.contains(name)) {
        throw InputError(fmt::format("scenario line {}: table '{}' defined twice", line_no, name));
      }
      current = &doc.tables[name];
      current->name = name;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError(fmt::format("scenario line {}: expected 'key = value'", line_no));
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) {
      throw InputError(fmt::format("scenario line {}: bad key '{}'", line_no, key));
    }
    current->set(key, ValueParser(line.substr(eq + 1), line_no).parse_all(), line_no);
  }
  return doc;
}

}  // namespace folkswarm::kv
