#include "odospec/toml_lite.hpp"

#include <cctype>
#include <sstream>

namespace odospec {

namespace {

struct Cursor {
    const std::string& line;
    int lineno;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, lineno, static_cast<int>(pos) + 1);
    }
    void skip_ws() {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= line.size() || line[pos] == '#';
    }
};

std::string parse_key(Cursor& c) {
    c.skip_ws();
    size_t start = c.pos;
    while (c.pos < c.line.size() &&
           (std::isalnum(static_cast<unsigned char>(c.line[c.pos])) || c.line[c.pos] == '_' ||
            c.line[c.pos] == '-' || c.line[c.pos] == '.'))
        ++c.pos;
    if (c.pos == start) c.fail("expected a key");
    return c.line.substr(start, c.pos - start);
}

TomlValue parse_scalar(Cursor& c);

TomlValue parse_value(Cursor& c) {
    c.skip_ws();
    if (c.pos >= c.line.size()) c.fail("expected a value");
    if (c.line[c.pos] == '[') {
        ++c.pos;
        TomlValue v;
        v.kind = TomlValue::Kind::Array;
        v.line = c.lineno;
        c.skip_ws();
        if (c.pos < c.line.size() && c.line[c.pos] == ']') {
            ++c.pos;
            return v;
        }
        while (true) {
            v.items.push_back(parse_scalar(c));
            c.skip_ws();
            if (c.pos < c.line.size() && c.line[c.pos] == ',') {
                ++c.pos;
                continue;
            }
            if (c.pos < c.line.size() && c.line[c.pos] == ']') {
                ++c.pos;
                return v;
            }
            c.fail("expected ',' or ']' in array");
        }
    }
    return parse_scalar(c);
}

TomlValue parse_scalar(Cursor& c) {
    c.skip_ws();
    TomlValue v;
    v.line = c.lineno;
    if (c.pos >= c.line.size()) c.fail("expected a value");
    char ch = c.line[c.pos];
    if (ch == '"') {
        ++c.pos;
        std::string out;
        while (c.pos < c.line.size() && c.line[c.pos] != '"') {
            if (c.line[c.pos] == '\\' && c.pos + 1 < c.line.size()) ++c.pos;
            out.push_back(c.line[c.pos++]);
        }
        if (c.pos >= c.line.size()) c.fail("unterminated string");
        ++c.pos;
        v.kind = TomlValue::Kind::String;
        v.str = std::move(out);
        return v;
    }
    size_t start = c.pos;
    while (c.pos < c.line.size() && c.line[c.pos] != ',' && c.line[c.pos] != ']' &&
           c.line[c.pos] != '#' && c.line[c.pos] != ' ' && c.line[c.pos] != '\t')
        ++c.pos;
    std::string token = c.line.substr(start, c.pos - start);
    if (token.empty()) c.fail("expected a value");
    if (token == "true" || token == "false") {
        v.kind = TomlValue::Kind::Boolean;
        v.boolean = (token == "true");
        return v;
    }
    // Bare tokens are integers or rational-like strings ("3/4", "-1/2").
    bool integer = true;
    for (size_t i = 0; i < token.size(); ++i) {
        char t = token[i];
        if (std::isdigit(static_cast<unsigned char>(t))) continue;
        if (i == 0 && (t == '-' || t == '+')) continue;
        integer = false;
    }
    if (integer) {
        v.kind = TomlValue::Kind::Integer;
        try {
            v.integer = std::stol(token);
        } catch (const std::exception&) {
            c.fail("integer out of range: " + token);
        }
        return v;
    }
    bool rational_like = true;
    for (size_t i = 0; i < token.size(); ++i) {
        char t = token[i];
        if (std::isdigit(static_cast<unsigned char>(t)) || t == '/' || ((t == '-' || t == '+') && i == 0))
            continue;
        rational_like = false;
    }
    if (!rational_like) c.fail("unsupported bare value '" + token + "' (quote strings)");
    v.kind = TomlValue::Kind::String;
    v.str = token;
    return v;
}

TomlTable& descend(TomlTable& root, const std::string& dotted, int lineno, bool array_entry) {
    TomlTable* node = &root;
    std::vector<std::string> parts;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) throw ParseError("empty table-name component", lineno, 1);
        parts.push_back(part);
    }
    for (size_t i = 0; i < parts.size(); ++i) {
        bool last = (i + 1 == parts.size());
        if (last && array_entry) {
            node->table_arrays[parts[i]].emplace_back();
            return node->table_arrays[parts[i]].back();
        }
        node = &node->tables[parts[i]];
    }
    return *node;
}

}  // namespace

const TomlValue& TomlTable::at(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ValidationError("missing config key '" + key + "'");
    return it->second;
}

std::string TomlTable::get_string(const std::string& key) const {
    const TomlValue& v = at(key);
    if (v.kind == TomlValue::Kind::String) return v.str;
    if (v.kind == TomlValue::Kind::Integer) return std::to_string(v.integer);
    throw ValidationError("config key '" + key + "' must be a string");
}

long TomlTable::get_integer(const std::string& key) const {
    const TomlValue& v = at(key);
    if (v.kind != TomlValue::Kind::Integer)
        throw ValidationError("config key '" + key + "' must be an integer");
    return v.integer;
}

std::string TomlTable::get_string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

long TomlTable::get_integer_or(const std::string& key, long fallback) const {
    return has(key) ? get_integer(key) : fallback;
}

TomlTable parse_toml(const std::string& text) {
    TomlTable root;
    TomlTable* current = &root;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Cursor c{line, lineno};
        if (c.done()) continue;
        if (line[c.pos] == '[') {
            bool array_entry = (c.pos + 1 < line.size() && line[c.pos + 1] == '[');
            c.pos += array_entry ? 2 : 1;
            std::string name = parse_key(c);
            c.skip_ws();
            if (array_entry) {
                if (c.pos + 1 >= line.size() || line[c.pos] != ']' || line[c.pos + 1] != ']')
                    c.fail("expected ']]'");
                c.pos += 2;
            } else {
                if (c.pos >= line.size() || line[c.pos] != ']') c.fail("expected ']'");
                ++c.pos;
            }
            if (!c.done()) c.fail("trailing characters after table header");
            current = &descend(root, name, lineno, array_entry);
            continue;
        }
        std::string key = parse_key(c);
        c.skip_ws();
        if (c.pos >= line.size() || line[c.pos] != '=') c.fail("expected '=' after key");
        ++c.pos;
        TomlValue value = parse_value(c);
        if (!c.done()) c.fail("trailing characters after value");
        // Dotted keys create intermediate tables.
        auto dot = key.rfind('.');
        if (dot == std::string::npos) {
            if (current->values.count(key)) c.fail("duplicate key '" + key + "'");
            current->values[key] = std::move(value);
        } else {
            TomlTable& target = descend(*current, key.substr(0, dot), lineno, false);
            std::string leaf = key.substr(dot + 1);
            if (target.values.count(leaf)) c.fail("duplicate key '" + key + "'");
            target.values[leaf] = std::move(value);
        }
    }
    return root;
}

}  // namespace odospec
