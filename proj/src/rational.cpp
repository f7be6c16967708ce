#include "cnet/rational.hpp"

#include "cnet/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace cnet {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_digits(std::string_view digits, std::string_view whole) {
    if (digits.empty()) throw ConfigError("malformed number '" + std::string(whole) + "'");
    cpp_int value = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ConfigError("malformed number '" + std::string(whole) + "'");
        value = value * 10 + (c - '0');
    }
    return value;
}

cpp_int pow10(unsigned exponent) {
    cpp_int result = 1;
    for (unsigned i = 0; i < exponent; ++i) result *= 10;
    return result;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view whole = text;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ConfigError("empty number");

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        cpp_int num = parse_digits(text.substr(0, slash), whole);
        cpp_int den = parse_digits(text.substr(slash + 1), whole);
        if (den == 0) throw ConfigError("zero denominator in '" + std::string(whole) + "'");
        value = Rational(num, den);
    } else {
        long exponent = 0;
        if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
            std::string exp_text(text.substr(e + 1));
            char* end = nullptr;
            exponent = std::strtol(exp_text.c_str(), &end, 10);
            if (exp_text.empty() || *end != '\0' || exponent > 400 || exponent < -400)
                throw ConfigError("malformed exponent in '" + std::string(whole) + "'");
            text = text.substr(0, e);
        }
        std::string_view int_part = text;
        std::string_view frac_part;
        if (auto dot = text.find('.'); dot != std::string_view::npos) {
            int_part = text.substr(0, dot);
            frac_part = text.substr(dot + 1);
        }
        if (int_part.empty() && frac_part.empty())
            throw ConfigError("malformed number '" + std::string(whole) + "'");
        cpp_int num = int_part.empty() ? cpp_int(0) : parse_digits(int_part, whole);
        if (!frac_part.empty()) num = num * pow10(frac_part.size()) + parse_digits(frac_part, whole);
        long scale = exponent - static_cast<long>(frac_part.size());
        if (scale >= 0)
            value = Rational(num * pow10(static_cast<unsigned>(scale)));
        else
            value = Rational(num, pow10(static_cast<unsigned>(-scale)));
    }
    return negative ? Rational(-value) : value;
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

std::string format_fixed(const Rational& value, int decimals) {
    bool negative = value < 0;
    Rational magnitude = negative ? Rational(-value) : value;
    cpp_int scale = pow10(static_cast<unsigned>(decimals));
    Rational scaled = magnitude * scale;
    cpp_int num = boost::multiprecision::numerator(scaled);
    cpp_int den = boost::multiprecision::denominator(scaled);
    cpp_int q = num / den;
    cpp_int r = num % den;
    if (2 * r >= den) ++q;

    std::string digits = q.str();
    if (decimals > 0) {
        if (digits.size() <= static_cast<std::size_t>(decimals))
            digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
        digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
    }
    if (negative && q != 0) digits.insert(0, "-");
    return digits;
}

std::string to_fraction_string(const Rational& value) {
    auto num = boost::multiprecision::numerator(value);
    auto den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace cnet
