#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace ellwk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Runtime error carrying a stable machine-readable kind string, so callers
/// (tests, CLI exit-code mapping) can match on the failure class.
class Error : public std::runtime_error {
public:
    explicit Error(std::string kind, const std::string& detail = "")
        : std::runtime_error(detail.empty() ? kind : kind + ": " + detail),
          kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string rat_str(const Rat& r) {
    const Int num = boost::multiprecision::numerator(r);
    const Int den = boost::multiprecision::denominator(r);
    return den == 1 ? num.str() : num.str() + "/" + den.str();
}

/// Parses "p" or "p/q". Throws Error("bad rational") on malformed input.
inline Rat rat_parse(const std::string& s) {
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(Int(s));
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw Error("bad rational", s);
    }
}

inline int64_t checked_mul(int64_t a, int64_t b) {
    int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw Error("integer overflow");
    return out;
}

inline int64_t checked_add(int64_t a, int64_t b) {
    int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw Error("integer overflow");
    return out;
}

}  // namespace ellwk
