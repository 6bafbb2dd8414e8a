#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace expapprox::tomlmini {

// Minimal TOML subset used by the experiment configs: top-level keys,
// [section] tables, strings, numbers, booleans, arrays (possibly spanning
// lines), and inline tables. Parse failures throw std::runtime_error with a
// "config-parse-error:" message.
struct Value;
using Array = std::vector<Value>;
using Table = std::map<std::string, Value>;

struct Value {
    std::variant<std::string, double, bool, Array, Table> v;

    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_array() const { return std::holds_alternative<Array>(v); }
    bool is_table() const { return std::holds_alternative<Table>(v); }

    const std::string& as_string() const;
    double as_number() const;
    bool as_bool() const;
    const Array& as_array() const;
    const Table& as_table() const;
};

// lookup helpers; `required` variants throw config-parse-error when missing
const Value* find(const Table& t, const std::string& key);
const Value& require(const Table& t, const std::string& key);
std::string get_string(const Table& t, const std::string& key,
                       const std::string& fallback);
double get_number(const Table& t, const std::string& key, double fallback);

Table parse(const std::string& text);
Table parse_file(const std::string& path);

}  // namespace expapprox::tomlmini
