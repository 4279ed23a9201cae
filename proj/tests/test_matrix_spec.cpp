#include "test_specs.hpp"

#include "qtilde/spec_json.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace qtest;

TEST_CASE("validate accepts the named specs") {
    CHECK(validate(nega2()).ok);
    CHECK(validate(s3neg()).ok);
    CHECK(validate(id2()).ok);
    CHECK(validate(preamble2()).ok);
    CHECK(validate(mix123()).ok);
    CHECK(validate(zero_block()).ok);
}

TEST_CASE("validate reports p outside (-1,1)") {
    SystemSpec s;
    s.block.push_back(col({R(1, 2), R(1, 2)}, {R(-1, 2), R(3, 2)}));
    ValidationReport rep = validate(s);
    REQUIRE_FALSE(rep.ok);
    bool found = false;
    for (const auto& v : rep.violations) found = found || v.condition == "p1";
    CHECK(found);
}

TEST_CASE("validate flags condition 4 partial sums and m = 0") {
    SystemSpec s;
    s.block.push_back(col({R(1, 3), R(1, 3), R(1, 3)}, {R(-1, 10), R(1, 5), R(9, 10)}));
    ValidationReport rep = validate(s);
    REQUIRE_FALSE(rep.ok);
    CHECK(rep.only_condition4());

    // p = (0, 1) breaks both 1 (p = 1 not inside (-1,1)) and 4
    SystemSpec edge;
    edge.block.push_back(col({R(1, 2), R(1, 2)}, {R(0), R(1)}));
    ValidationReport erep = validate(edge);
    REQUIRE_FALSE(erep.ok);
    CHECK_FALSE(erep.only_condition4());

    SystemSpec tiny;
    tiny.block.push_back(col({R(1)}, {R(1)}));
    CHECK_FALSE(validate(tiny).ok);

    SystemSpec empty;
    CHECK_FALSE(validate(empty).ok);
}

TEST_CASE("column resolves preamble then cycles the block") {
    SystemSpec s = preamble2();
    CHECK(s.column(1).q[0] == R(1, 4));
    CHECK(s.column(2).alphabet_max() == 2);
    CHECK(s.column(3).q[0] == R(1, 2));
    CHECK(s.column(5).q[0] == R(1, 2));

    SystemSpec two;
    two.preamble.push_back(col({R(1, 2), R(1, 2)}, {R(1, 2), R(1, 2)}));
    two.preamble.push_back(col({R(1, 4), R(3, 4)}, {R(1, 4), R(3, 4)}));
    two.block.push_back(col({R(1, 3), R(2, 3)}, {R(1, 3), R(2, 3)}));
    two.block.push_back(col({R(1, 5), R(4, 5)}, {R(1, 5), R(4, 5)}));
    // n = L + 4 with a 2-column block lands on the second block column
    CHECK(two.column(6).q[0] == R(1, 5));
    CHECK(two.column(5).q[0] == R(1, 3));
}

TEST_CASE("tilde_values twists even columns") {
    SystemSpec s = nega2();
    TildeValues odd = tilde_values(s, 1, 1);
    CHECK(odd.q == R(1, 2));
    CHECK(odd.a == R(1, 2));
    CHECK(odd.p == R(7, 10));
    CHECK(odd.beta == R(3, 10));

    TildeValues even = tilde_values(s, 2, 0); // digit 0 reflects to 1
    CHECK(even.q == R(1, 2));
    CHECK(even.a == R(1, 2));
    CHECK(even.p == R(7, 10));
    CHECK(even.beta == R(3, 10));

    TildeValues zero = tilde_values(s, 3, 0);
    CHECK(zero.a == 0);
    CHECK(zero.beta == 0);
}

TEST_CASE("tilde twist is an involution and preserves column sums") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
        SystemSpec s = random_spec(rng);
        for (long n = 1; n <= 6; ++n) {
            int m = s.alphabet_max(n);
            Rational qs = 0, ps = 0;
            for (int i = 0; i <= m; ++i) {
                CHECK(twist_digit(s, n, twist_digit(s, n, i)) == i);
                TildeValues tv = tilde_values(s, n, i);
                qs += tv.q;
                ps += tv.p;
                // a~ + q~ <= 1, equality iff the twisted digit is m
                if (twist_digit(s, n, i) == m)
                    CHECK(tv.a + tv.q == 1);
                else
                    CHECK(tv.a + tv.q < 1);
            }
            CHECK(qs == 1);
            CHECK(ps == 1);
        }
    }
}

TEST_CASE("shifted_spec drops preamble columns and rotates the block") {
    SystemSpec s = preamble2();
    SystemSpec s1 = shifted_spec(s, 1);
    CHECK(s1.preamble_size() == 1);
    CHECK(s1.column(1).alphabet_max() == 2);
    SystemSpec s3 = shifted_spec(s, 3);
    CHECK(s3.preamble_size() == 0);
    CHECK(s3.column(1).q[0] == R(1, 2));

    SystemSpec m = mix123();
    SystemSpec m2 = shifted_spec(m, 2);
    CHECK(m2.column(1).alphabet_max() == 3);
    CHECK(m2.column(2).alphabet_max() == 1);
    for (long n = 1; n <= 9; ++n)
        CHECK(m2.column(n).alphabet_max() == m.column(n + 2).alphabet_max());
}

TEST_CASE("spec files parse with rationals as strings or integers") {
    std::istringstream in(R"({
        "preamble": [{"q": ["1/4", "3/4"], "p": ["2/5", "3/5"]}],
        "block": [{"q": ["1/3", "1/3", "1/3"], "p": ["3/5", "-1/5", "3/5"]}]
    })");
    SystemSpec s = parse_system_spec(in);
    CHECK(s.preamble_size() == 1);
    CHECK(s.block_size() == 1);
    CHECK(s.column(2).p[1] == R(-1, 5));
    CHECK(validate(s).ok);

    std::istringstream ints(R"({"block": [{"q": ["1/2","1/2"], "p": [1, 0]}]})");
    SystemSpec si = parse_system_spec(ints);
    CHECK(si.column(1).p[0] == 1);
}

TEST_CASE("spec file errors cite the field") {
    std::istringstream missing(R"({"preamble": []})");
    CHECK_THROWS_WITH(parse_system_spec(missing), Catch::Matchers::ContainsSubstring("block"));

    std::istringstream bad(R"({"block": [{"q": ["1/2", "x"], "p": ["1/2", "1/2"]}]})");
    CHECK_THROWS_WITH(parse_system_spec(bad), Catch::Matchers::ContainsSubstring("block[0].q[1]"));

    std::istringstream broken("{ not json");
    CHECK_THROWS_AS(parse_system_spec(broken), parse_error);
}
