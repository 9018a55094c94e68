#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace bmtree {

// Verbosity from SFC_LOG: 0 (default, warnings only), 1 info, 2 debug.
inline int log_level() {
    static int level = [] {
        const char* v = std::getenv("SFC_LOG");
        if (!v) return 0;
        std::string s(v);
        if (s == "debug" || s == "2") return 2;
        if (s == "info" || s == "1") return 1;
        return 0;
    }();
    return level;
}

inline void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[info] %s\n", msg.c_str());
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[debug] %s\n", msg.c_str());
}

inline void log_warn(const std::string& msg) {
    std::fprintf(stderr, "[warn] %s\n", msg.c_str());
}

}  // namespace bmtree
