#pragma once

#include <map>
#include <string>
#include <vector>

#include "odospec/errors.hpp"

namespace odospec {

/// A focused TOML subset sufficient for job configs: bare keys, quoted
/// strings, integers, booleans, homogeneous arrays of strings/integers,
/// [table] and [table.sub] headers, and [[array-of-tables]].  Errors carry
/// line and column.
struct TomlValue {
    enum class Kind { String, Integer, Boolean, Array };
    Kind kind = Kind::String;
    std::string str;
    long integer = 0;
    bool boolean = false;
    std::vector<TomlValue> items;
    int line = 0;
};

struct TomlTable {
    std::map<std::string, TomlValue> values;
    std::map<std::string, TomlTable> tables;
    std::map<std::string, std::vector<TomlTable>> table_arrays;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const TomlValue& at(const std::string& key) const;
    /// Required typed accessors; throw ValidationError with the key name.
    std::string get_string(const std::string& key) const;
    long get_integer(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    long get_integer_or(const std::string& key, long fallback) const;
};

TomlTable parse_toml(const std::string& text);

}  // namespace odospec
