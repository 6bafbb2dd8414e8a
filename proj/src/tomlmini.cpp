#include "expapprox/tomlmini.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace expapprox::tomlmini {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("config-parse-error: " + msg);
}

struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }

    // skip whitespace, newlines and comments
    void skip_all() {
        while (!done()) {
            const char c = s[i];
            if (c == '#') {
                while (!done() && s[i] != '\n') ++i;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else {
                break;
            }
        }
    }

    // skip spaces/tabs only (stay on the line)
    void skip_inline() {
        while (!done() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
};

Value parse_value(Cursor& c);

std::string parse_bare_key(Cursor& c) {
    std::string key;
    while (!c.done()) {
        const char ch = c.peek();
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-') {
            key += ch;
            ++c.i;
        } else {
            break;
        }
    }
    if (key.empty()) fail("expected key at offset " + std::to_string(c.i));
    return key;
}

std::string parse_string(Cursor& c) {
    const char quote = c.peek();
    ++c.i;
    std::string out;
    while (!c.done() && c.peek() != quote) {
        char ch = c.peek();
        if (quote == '"' && ch == '\\') {
            ++c.i;
            if (c.done()) fail("dangling escape");
            switch (c.peek()) {
                case 'n': ch = '\n'; break;
                case 't': ch = '\t'; break;
                case '"': ch = '"'; break;
                case '\\': ch = '\\'; break;
                default: fail("unsupported escape");
            }
        }
        out += ch;
        ++c.i;
    }
    if (c.done()) fail("unterminated string");
    ++c.i;
    return out;
}

Value parse_number_or_bool(Cursor& c) {
    if (c.s.compare(c.i, 4, "true") == 0) {
        c.i += 4;
        return Value{true};
    }
    if (c.s.compare(c.i, 5, "false") == 0) {
        c.i += 5;
        return Value{false};
    }
    std::size_t j = c.i;
    while (j < c.s.size() &&
           (std::isdigit(static_cast<unsigned char>(c.s[j])) || c.s[j] == '+' ||
            c.s[j] == '-' || c.s[j] == '.' || c.s[j] == 'e' || c.s[j] == 'E' ||
            c.s[j] == '_'))
        ++j;
    std::string num = c.s.substr(c.i, j - c.i);
    std::erase(num, '_');
    if (num.empty()) fail("expected value at offset " + std::to_string(c.i));
    char* end = nullptr;
    const double x = std::strtod(num.c_str(), &end);
    if (end != num.c_str() + num.size()) fail("bad number '" + num + "'");
    c.i = j;
    return Value{x};
}

Value parse_array(Cursor& c) {
    ++c.i;  // '['
    Array arr;
    for (;;) {
        c.skip_all();
        if (c.done()) fail("unterminated array");
        if (c.peek() == ']') {
            ++c.i;
            return Value{std::move(arr)};
        }
        arr.push_back(parse_value(c));
        c.skip_all();
        if (!c.done() && c.peek() == ',') ++c.i;
    }
}

Value parse_inline_table(Cursor& c) {
    ++c.i;  // '{'
    Table t;
    for (;;) {
        c.skip_all();
        if (c.done()) fail("unterminated inline table");
        if (c.peek() == '}') {
            ++c.i;
            return Value{std::move(t)};
        }
        const std::string key = parse_bare_key(c);
        c.skip_inline();
        if (c.done() || c.peek() != '=') fail("expected '=' after key '" + key + "'");
        ++c.i;
        c.skip_inline();
        t[key] = parse_value(c);
        c.skip_all();
        if (!c.done() && c.peek() == ',') ++c.i;
    }
}

Value parse_value(Cursor& c) {
    c.skip_inline();
    if (c.done()) fail("expected value");
    const char ch = c.peek();
    if (ch == '"' || ch == '\'') return Value{parse_string(c)};
    if (ch == '[') return parse_array(c);
    if (ch == '{') return parse_inline_table(c);
    return parse_number_or_bool(c);
}

}  // namespace

const std::string& Value::as_string() const {
    if (!is_string()) fail("expected string value");
    return std::get<std::string>(v);
}

double Value::as_number() const {
    if (!is_number()) fail("expected numeric value");
    return std::get<double>(v);
}

bool Value::as_bool() const {
    if (!is_bool()) fail("expected boolean value");
    return std::get<bool>(v);
}

const Array& Value::as_array() const {
    if (!is_array()) fail("expected array value");
    return std::get<Array>(v);
}

const Table& Value::as_table() const {
    if (!is_table()) fail("expected table value");
    return std::get<Table>(v);
}

const Value* find(const Table& t, const std::string& key) {
    const auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

const Value& require(const Table& t, const std::string& key) {
    const Value* v = find(t, key);
    if (!v) fail("missing key '" + key + "'");
    return *v;
}

std::string get_string(const Table& t, const std::string& key,
                       const std::string& fallback) {
    const Value* v = find(t, key);
    return v ? v->as_string() : fallback;
}

double get_number(const Table& t, const std::string& key, double fallback) {
    const Value* v = find(t, key);
    return v ? v->as_number() : fallback;
}

Table parse(const std::string& text) {
    Table root;
    Table* current = &root;
    Cursor c{text};
    for (;;) {
        c.skip_all();
        if (c.done()) return root;
        if (c.peek() == '[') {
            ++c.i;
            const std::string name = parse_bare_key(c);
            if (c.done() || c.peek() != ']') fail("unterminated section header");
            ++c.i;
            current = &std::get<Table>((root[name] = Value{Table{}}).v);
        } else {
            const std::string key = parse_bare_key(c);
            c.skip_inline();
            if (c.done() || c.peek() != '=') fail("expected '=' after key '" + key + "'");
            ++c.i;
            (*current)[key] = parse_value(c);
        }
    }
}

Table parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace expapprox::tomlmini
