#pragma once

#include <cstdio>
#include <string>

namespace roughpath {

/// Non-fatal diagnostics go to stderr so they never corrupt data written to stdout.
inline void emit_warning(const std::string& msg) {
    std::fprintf(stderr, "warning: %s\n", msg.c_str());
}

}  // namespace roughpath
