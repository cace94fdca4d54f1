#include "qdelta/numeric_text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "qdelta/errors.hpp"

namespace qdelta {

std::string format_real(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(Complex z) {
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    std::string out = format_real(z.real());
    if (!std::signbit(im) || std::isnan(im)) out += '+';
    out += format_real(im);
    out += 'i';
    return out;
}

double parse_real(std::string_view text) {
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
        throw DomainError("not a real number: '" + std::string(text) + "'");
    }
    return value;
}

namespace {

double parse_signed_unit(std::string_view s, std::string_view whole) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    try {
        return parse_real(s);
    } catch (const DomainError&) {
        throw DomainError("not a complex number: '" + std::string(whole) + "'");
    }
}

}  // namespace

Complex parse_complex(std::string_view text) {
    if (text.empty()) throw DomainError("empty complex literal");
    if (text.back() != 'i') return {parse_real(text), 0.0};

    const std::string_view body = text.substr(0, text.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos) return {0.0, parse_signed_unit(body, text)};
    double re = 0.0;
    try {
        re = parse_real(body.substr(0, split));
    } catch (const DomainError&) {
        throw DomainError("not a complex number: '" + std::string(text) + "'");
    }
    return {re, parse_signed_unit(body.substr(split), text)};
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
        out.push_back(parse_real(text.substr(start, end - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace qdelta
