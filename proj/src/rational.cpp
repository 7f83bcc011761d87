#include "treehedge/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "treehedge/errors.hpp"

namespace treehedge {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

[[noreturn]] void bad_number(std::string_view text) {
    fail(ErrorCode::SchemaError, "not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational rational_from_string(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) bad_number(text);

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) bad_number(text);

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad_number(text);
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) bad_number(text);
        value = Rational(n, d);
        value.canonicalize();
    } else {
        // decimal literal with optional fraction part and exponent
        std::string_view mantissa = s;
        long exponent = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            mantissa = s.substr(0, e);
            std::string exp_text(s.substr(e + 1));
            if (exp_text.empty()) bad_number(text);
            char* end = nullptr;
            exponent = std::strtol(exp_text.c_str(), &end, 10);
            if (end == nullptr || *end != '\0') bad_number(text);
        }
        std::string digits;
        long scale = 0;
        if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
            std::string_view ip = mantissa.substr(0, dot);
            std::string_view fp = mantissa.substr(dot + 1);
            if (ip.empty() && fp.empty()) bad_number(text);
            if (!ip.empty() && !all_digits(ip)) bad_number(text);
            if (!fp.empty() && !all_digits(fp)) bad_number(text);
            digits = std::string(ip) + std::string(fp);
            scale = static_cast<long>(fp.size());
        } else {
            if (!all_digits(mantissa)) bad_number(text);
            digits = std::string(mantissa);
        }
        if (digits.empty()) bad_number(text);
        mpz_class n(digits, 10);
        mpz_class den(1);
        long down = scale - exponent;
        if (down > 0) {
            mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(down));
        } else if (down < 0) {
            mpz_class up;
            mpz_ui_pow_ui(up.get_mpz_t(), 10, static_cast<unsigned long>(-down));
            n *= up;
        }
        value = Rational(n, den);
        value.canonicalize();
    }
    if (negative) value = -value;
    return value;
}

std::string rational_to_string(const Rational& value) {
    return value.get_str();
}

}  // namespace treehedge
