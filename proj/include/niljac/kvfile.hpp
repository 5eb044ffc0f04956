#pragma once

// Line-oriented "key = value" file discipline shared by map files, parameter
// files and search-space files.  Blank lines and lines starting with '#' are
// ignored.  Keys keep their first-seen order.

#include <string>
#include <vector>

#include "niljac/errors.hpp"

namespace niljac {

struct KvLine {
    std::string key;
    std::string value;
    std::size_t line_no;  // 1-based
};

inline std::string kv_trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<KvLine> read_kv_lines(const std::string& text) {
    std::vector<KvLine> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos
                                                                    : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::string t = kv_trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'key = value'");
        KvLine kv;
        kv.key = kv_trim(t.substr(0, eq));
        kv.value = kv_trim(t.substr(eq + 1));
        kv.line_no = line_no;
        if (kv.key.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty key");
        out.push_back(std::move(kv));
    }
    return out;
}

}  // namespace niljac
