#ifndef PPSLAB_TEXT_HPP
#define PPSLAB_TEXT_HPP

#include <cstdio>
#include <string>

namespace ppslab {

/// Renders a double with 17 significant digits, which is enough for exact
/// decimal-to-binary round-tripping. Integral values get a trailing ".0" so
/// every emitted number is unambiguously a floating-point field.
inline std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos &&
        s.find_first_not_of("-0123456789") == std::string::npos) {
        s += ".0";
    }
    return s;
}

} // namespace ppslab

#endif // PPSLAB_TEXT_HPP
