#include "talbot/toml.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace talbot::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    std::ostringstream os;
    os << "config line " << line << ": " << msg;
    throw ConfigError(os.str());
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Strips a # comment that is not inside a basic string.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_str) {
            if (c == '\\') ++i;
            else if (c == '"') in_str = false;
        } else if (c == '"') {
            in_str = true;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

int bracket_balance(const std::string& s) {
    bool in_str = false;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_str) {
            if (c == '\\') ++i;
            else if (c == '"') in_str = false;
        } else if (c == '"') {
            in_str = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            --depth;
        }
    }
    return depth;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    return true;
}

struct ValueParser {
    const std::string& text;
    std::size_t pos = 0;
    int line;

    void skip_ws() {
        while (pos < text.size() &&
               (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    Value parse_value() {
        skip_ws();
        if (pos >= text.size()) fail(line, "missing value");
        char c = text[pos];
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        return parse_scalar();
    }

    Value parse_string() {
        Value v;
        v.kind = Value::Kind::string;
        ++pos; // opening quote
        while (pos < text.size() && text[pos] != '"') {
            char c = text[pos];
            if (c == '\\') {
                ++pos;
                if (pos >= text.size()) fail(line, "dangling escape in string");
                switch (text[pos]) {
                    case '"': v.str += '"'; break;
                    case '\\': v.str += '\\'; break;
                    case 'n': v.str += '\n'; break;
                    case 't': v.str += '\t'; break;
                    default: fail(line, "unsupported escape in string");
                }
            } else {
                v.str += c;
            }
            ++pos;
        }
        if (pos >= text.size()) fail(line, "unterminated string");
        ++pos; // closing quote
        return v;
    }

    Value parse_array() {
        Value v;
        v.kind = Value::Kind::array;
        ++pos; // '['
        skip_ws();
        if (pos < text.size() && text[pos] == ']') {
            ++pos;
            return v;
        }
        while (true) {
            v.array.push_back(parse_value());
            skip_ws();
            if (pos >= text.size()) fail(line, "unterminated array");
            if (text[pos] == ',') {
                ++pos;
                skip_ws();
                if (pos < text.size() && text[pos] == ']') { ++pos; break; } // trailing comma
                continue;
            }
            if (text[pos] == ']') { ++pos; break; }
            fail(line, "expected ',' or ']' in array");
        }
        return v;
    }

    Value parse_scalar() {
        std::size_t end = pos;
        while (end < text.size() && text[end] != ',' && text[end] != ']' &&
               text[end] != '\n' && text[end] != '\r')
            ++end;
        std::string tok = trim(text.substr(pos, end - pos));
        pos = end;
        if (tok.empty()) fail(line, "missing value");

        Value v;
        if (tok == "true" || tok == "false") {
            v.kind = Value::Kind::boolean;
            v.boolean = (tok == "true");
            return v;
        }
        // Integer first (full match), then float (full match).
        {
            long long iv = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
            if (ec == std::errc() && p == tok.data() + tok.size()) {
                v.kind = Value::Kind::number;
                v.number = static_cast<double>(iv);
                v.is_integer = true;
                return v;
            }
        }
        {
            char* endp = nullptr;
            const double dv = std::strtod(tok.c_str(), &endp);
            if (endp == tok.c_str() + tok.size()) {
                v.kind = Value::Kind::number;
                v.number = dv;
                return v;
            }
        }
        fail(line, "cannot parse value '" + tok + "'");
    }
};

Table* resolve_header(Table& root, const std::string& path, int line) {
    Table* cur = &root;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = path.find('.', start);
        std::string part = path.substr(start, dot == std::string::npos ? std::string::npos
                                                                       : dot - start);
        part = trim(part);
        if (!valid_key(part)) fail(line, "invalid table name '" + path + "'");
        if (cur->values.count(part)) fail(line, "'" + part + "' already used as a key");
        cur = &cur->subtables[part];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return cur;
}

} // namespace

Table parse(const std::string& text) {
    Table root;
    Table* current = &root;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const int first_line = line_no;
        std::string logical = strip_comment(raw);
        // Continue multi-line arrays until brackets balance.
        while (bracket_balance(logical) > 0) {
            std::string next;
            if (!std::getline(in, next)) fail(first_line, "unterminated array");
            ++line_no;
            logical += "\n" + strip_comment(next);
        }
        std::string s = trim(logical);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.size() >= 2 && s[1] == '[')
                fail(first_line, "arrays of tables '[[...]]' are not supported");
            if (s.back() != ']') fail(first_line, "malformed table header");
            std::string path = trim(s.substr(1, s.size() - 2));
            current = resolve_header(root, path, first_line);
            continue;
        }

        std::size_t eq = std::string::npos;
        {
            bool in_str = false;
            for (std::size_t i = 0; i < s.size(); ++i) {
                char c = s[i];
                if (in_str) {
                    if (c == '\\') ++i;
                    else if (c == '"') in_str = false;
                } else if (c == '"') in_str = true;
                else if (c == '=') { eq = i; break; }
            }
        }
        if (eq == std::string::npos) fail(first_line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        if (!valid_key(key)) fail(first_line, "invalid key '" + key + "'");
        if (current->values.count(key) || current->subtables.count(key))
            fail(first_line, "duplicate key '" + key + "'");

        std::string rest = s.substr(eq + 1);
        ValueParser vp{rest, 0, first_line};
        Value v = vp.parse_value();
        vp.skip_ws();
        if (vp.pos != rest.size())
            fail(first_line, "trailing characters after value");
        current->values.emplace(key, std::move(v));
    }
    return root;
}

} // namespace talbot::toml
