#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "archmap/common.hpp"
#include "archmap/config.hpp"

using namespace archmap;

TEST_CASE("ini parses sections, keys, comments") {
    Ini ini = Ini::parse_string("# leading comment\n"
                                "[alpha]\n"
                                "x = 10\n"
                                "name = hello world # trailing\n"
                                "list = 1, 2, 3\n"
                                "\n"
                                "[beta]\n"
                                "flag = true\n",
                                "test.ini");
    CHECK(ini.has_section("alpha"));
    CHECK(ini.get_int("alpha", "x", 0) == 10);
    CHECK(ini.get_string("alpha", "name", "") == "hello world");
    CHECK(ini.get_int_list("alpha", "list") == std::vector<long long>{1, 2, 3});
    CHECK(ini.get_bool("beta", "flag", false));
    CHECK(ini.get_int("beta", "missing", 42) == 42);
    CHECK_FALSE(ini.get("beta", "missing").has_value());
}

TEST_CASE("ini reports malformed input with line numbers") {
    CHECK_THROWS_WITH_AS(Ini::parse_string("[a]\nnovalue\n", "f.ini"), doctest::Contains("f.ini:2"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(Ini::parse_string("x = 1\n", "f.ini"), doctest::Contains("outside any [section]"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(Ini::parse_string("[a]\nx = 1\nx = 2\n", "f.ini"), doctest::Contains("duplicate key"),
                         ValidationError);
    CHECK_THROWS_AS(Ini::parse_string("[unterminated\n", "f.ini"), ValidationError);
    CHECK_THROWS_AS(Ini::parse_string("[a]\nx = abc\n", "f.ini").get_int("a", "x", 0), ValidationError);
}

TEST_CASE("scalar parsers reject junk") {
    CHECK(parse_int("-12", "t") == -12);
    CHECK(parse_double("2.5", "t") == doctest::Approx(2.5));
    CHECK(parse_bool("on", "t"));
    CHECK_FALSE(parse_bool("0", "t"));
    CHECK_THROWS_AS(parse_int("12x", "t"), ValidationError);
    CHECK_THROWS_AS(parse_double("", "t"), ValidationError);
    CHECK_THROWS_AS(parse_bool("maybe", "t"), ValidationError);
}

TEST_CASE("big integer helpers") {
    BigCount two34 = 1;
    for (int i = 0; i < 34; ++i) two34 *= 2;
    CHECK(big_to_string(two34) == "17179869184");
    BigCount three34 = 1;
    for (int i = 0; i < 34; ++i) three34 *= 3;
    CHECK(big_to_string(three34) == "16677181699666569");
    CHECK(big_to_double(three34) == doctest::Approx(1.6677181699666569e16));
    CHECK(big_to_string(0) == "0");

    BigCount huge = BigCount(1) << 127;
    CHECK_THROWS_AS(big_mul_checked(huge, 4, "test"), BudgetError);
    CHECK(big_mul_checked(0, huge, "test") == 0);
}

TEST_CASE("fnv and fixed formatting are stable") {
    CHECK(fnv1a64("abc") == fnv1a64("abc"));
    CHECK(fnv1a64("abc") != fnv1a64("abd"));
    CHECK(fnv1a64(std::vector<int>{1, 2}) != fnv1a64(std::vector<int>{2, 1}));
    CHECK(fmt_fixed(1.0 / 3.0, 4) == "0.3333");
    CHECK(fmt_fixed(25.28, 2) == "25.28");
}

TEST_CASE("parallel_for writes by index regardless of worker count") {
    std::vector<int> a(1000, 0), b(1000, 0);
    parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = static_cast<int>(i * i % 97); });
    parallel_for(b.size(), 8, [&](std::size_t i) { b[i] = static_cast<int>(i * i % 97); });
    CHECK(a == b);
}
