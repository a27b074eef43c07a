#include "qform/rational.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace qform {

namespace {

using Int = boost::multiprecision::cpp_int;

Int pow10(long exponent) {
    Int result = 1;
    for (long i = 0; i < exponent; ++i) result *= 10;
    return result;
}

[[noreturn]] void fail(std::string_view text) {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rat parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) fail(text);

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (num.empty() || den.empty()) fail(text);
        try {
            Int n(num), d(den);
            if (d == 0) fail(text);
            return Rat(n, d);
        } catch (const std::runtime_error&) {
            fail(text);
        }
    }

    bool negative = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = s[pos] == '-';
        ++pos;
    }

    std::string digits;
    long frac_digits = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_point) ++frac_digits;
        } else if (c == '.') {
            if (seen_point) fail(text);
            seen_point = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            fail(text);
        }
    }
    if (!seen_digit) fail(text);

    long exponent = 0;
    if (pos < s.size()) {
        std::string exp = s.substr(pos + 1);
        if (exp.empty()) fail(text);
        auto [p, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), exponent);
        if (ec != std::errc() || p != exp.data() + exp.size()) fail(text);
    }

    Int mantissa(digits.empty() ? "0" : digits);
    if (negative) mantissa = -mantissa;

    long net = exponent - frac_digits;
    if (net >= 0) return Rat(mantissa * pow10(net), 1);
    return Rat(mantissa, pow10(-net));
}

double to_double(const Rat& value) {
    return value.convert_to<double>();
}

std::string fraction_string(const Rat& value) {
    std::ostringstream out;
    if (denominator(value) == 1) {
        out << numerator(value);
    } else {
        out << numerator(value) << '/' << denominator(value);
    }
    return out.str();
}

std::string decimal_string(const Rat& value) {
    std::ostringstream out;
    out.precision(17);
    out << to_double(value);
    return out.str();
}

std::vector<double> to_doubles(const RatVec& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(to_double(v));
    return out;
}

}  // namespace qform
