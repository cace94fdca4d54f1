#include <doctest.h>

#include <cmath>
#include <limits>

#include "qdelta/errors.hpp"
#include "qdelta/numeric_text.hpp"
#include "qdelta/qparam.hpp"

using namespace qdelta;

TEST_CASE("QParam guards q = 1") {
    CHECK_THROWS_AS(QParam(1.0), DomainError);
    CHECK_THROWS_AS(QParam(1.0 + 1e-15), DomainError);
    CHECK_THROWS_AS(QParam(std::nan("")), DomainError);
    CHECK_THROWS_AS(QParam{INFINITY}, DomainError);
    CHECK_NOTHROW(QParam(1.0 + 1e-12));
    CHECK(QParam::limit().is_limit());
    CHECK(QParam(1.5).one_minus() == -0.5);
}

TEST_CASE("range checks") {
    CHECK_NOTHROW(require_delta_window(QParam(1.5)));
    CHECK_THROWS_AS(require_delta_window(QParam(2.0)), DomainError);
    CHECK_THROWS_AS(require_delta_window(QParam(0.9)), DomainError);
    CHECK_THROWS_AS(require_delta_window(QParam::limit()), DomainError);
    CHECK_NOTHROW(require_entropy_range(QParam(0.2)));
    CHECK_THROWS_AS(require_entropy_range(QParam(0.0)), DomainError);
}

TEST_CASE("number formatting") {
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(-0.0) == "0");
    CHECK(format_complex(Complex(2.0, 0.0)) == "2+0i");
    CHECK(format_complex(Complex(2.0, -0.0)) == "2+0i");
    CHECK(format_complex(Complex(1.0, -2.5)) == "1-2.5i");
    CHECK(format_complex(Complex(0.0, 1e-300)) == "0+1e-300i");
    for (double x : {0.1, 1.0 / 3.0, 12.566370614359172, -7.25e-301}) CHECK(parse_real(format_real(x)) == x);
}

TEST_CASE("number parsing") {
    CHECK(parse_complex("3") == Complex(3.0, 0.0));
    CHECK(parse_complex("-2.5e-3") == Complex(-2.5e-3, 0.0));
    CHECK(parse_complex("2i") == Complex(0.0, 2.0));
    CHECK(parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(parse_complex("i") == Complex(0.0, 1.0));
    CHECK(parse_complex("1+2i") == Complex(1.0, 2.0));
    CHECK(parse_complex("0.5-1e-3i") == Complex(0.5, -1e-3));
    CHECK(parse_complex("1e-3+2e+2i") == Complex(1e-3, 200.0));
    CHECK(parse_complex("-2+0.5i") == Complex(-2.0, 0.5));
    CHECK(parse_complex("+1-i") == Complex(1.0, -1.0));
    CHECK_THROWS_AS(parse_complex(""), DomainError);
    CHECK_THROWS_AS(parse_complex("abc"), DomainError);
    CHECK_THROWS_AS(parse_complex("1+2"), DomainError);
    CHECK_THROWS_AS(parse_complex("1 + 2i"), DomainError);
    CHECK_THROWS_AS(parse_real("1.0x"), DomainError);
    CHECK(parse_real_list("1e-1,3e-2,1e-2") == std::vector<double>{1e-1, 3e-2, 1e-2});
    CHECK_THROWS_AS(parse_real_list("1,,2"), DomainError);
}
