#ifndef TALBOT_TOML_HPP
#define TALBOT_TOML_HPP

#include <map>
#include <string>
#include <vector>

#include "talbot/errors.hpp"

// Minimal strict TOML subset used by the configuration files: [table] and
// [table.sub] headers, key = value pairs with numbers, booleans, basic
// strings and (possibly multi-line) arrays, and # comments. Unsupported
// syntax is rejected with a line number rather than silently skipped.
namespace talbot::toml {

struct Value {
    enum class Kind { number, boolean, string, array };
    Kind kind = Kind::number;
    double number = 0.0;
    bool is_integer = false;
    bool boolean = false;
    std::string str;
    std::vector<Value> array;
};

struct Table {
    std::map<std::string, Value> values;
    std::map<std::string, Table> subtables;

    bool has_value(const std::string& key) const { return values.count(key) != 0; }
    bool has_table(const std::string& key) const { return subtables.count(key) != 0; }
};

/// Parse a full TOML document. Throws ConfigError with a line reference.
Table parse(const std::string& text);

} // namespace talbot::toml

#endif
