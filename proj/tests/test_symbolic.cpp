#include <doctest.h>

#include "lyapspec/symbolic.hpp"

using namespace lyapspec;

TEST_CASE("full 2-shift words at depth 3") {
    auto words = enumerate_words(TransitionMatrix::full(2), 3);
    REQUIRE(words.size() == 8);
    CHECK(word_to_string(words.front()) == "000");
    CHECK(word_to_string(words.back()) == "111");
    // lexicographic order
    for (std::size_t i = 1; i < words.size(); ++i) CHECK(words[i - 1] < words[i]);
}

TEST_CASE("golden-mean shift: no 11 factor") {
    TransitionMatrix a({{1, 1}, {1, 0}});
    auto words = enumerate_words(a, 3);
    std::vector<std::string> got;
    for (const Word& w : words) got.push_back(word_to_string(w));
    CHECK(got == std::vector<std::string>{"000", "001", "010", "100", "101"});
}

TEST_CASE("the empty word is the unique depth-0 word") {
    auto words = enumerate_words(TransitionMatrix({{1, 1}, {1, 0}}), 0);
    REQUIRE(words.size() == 1);
    CHECK(words[0].empty());
    CHECK(count_words(TransitionMatrix::full(2), 0) == 1.0);
}

TEST_CASE("counting by transfer vector") {
    CHECK(count_words(TransitionMatrix::full(2), 10) == 1024.0);
    TransitionMatrix fib({{1, 1}, {1, 0}});
    CHECK(count_words(fib, 5) == 13.0);  // Fibonacci recurrence
    CHECK(count_words(fib, 1) == 2.0);
    // matches enumeration
    for (int n = 0; n <= 12; ++n)
        CHECK(count_words(fib, n) == static_cast<double>(enumerate_words(fib, n).size()));
}

TEST_CASE("count submultiplicativity") {
    TransitionMatrix fib({{1, 1}, {1, 0}});
    for (int n = 1; n <= 10; ++n)
        for (int m = 1; m <= 10; ++m)
            CHECK(count_words(fib, n + m) <= count_words(fib, n) * count_words(fib, m));
}

TEST_CASE("mixing validation") {
    CHECK(TransitionMatrix::full(2).positive_power_within(4));
    CHECK(TransitionMatrix({{1, 1}, {1, 0}}).positive_power_within(4));
    CHECK_THROWS_AS(TransitionMatrix({{0, 0}, {1, 1}}), SchemaError);
    CHECK_THROWS_AS(TransitionMatrix({{0, 1}, {1, 0}}), SchemaError);  // period 2
    try {
        TransitionMatrix({{0, 0}, {1, 1}});
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("mixing") != std::string::npos);
    }
}

TEST_CASE("alphabet and depth caps") {
    CHECK_THROWS_AS(Alphabet(1), SchemaError);
    CHECK(Alphabet(2).size == 2);
    CHECK(max_enumeration_depth(2) == 30);
    CHECK_THROWS_AS(enumerate_words(TransitionMatrix::full(2), 31), ResourceLimitError);
}

TEST_CASE("run-constrained enumeration") {
    // forbidding 000 leaves 13 words of length 4
    auto words = enumerate_words(TransitionMatrix::full(2), 4, 3, 0);
    CHECK(words.size() == 13);
    for (const Word& w : words)
        CHECK(word_to_string(w).find("000") == std::string::npos);
}

TEST_CASE("symbol restriction") {
    TransitionMatrix full3 = TransitionMatrix::full(3);
    TransitionMatrix sub = full3.restricted({0, 2});
    CHECK(sub.symbol_count() == 2);
    CHECK(sub.allowed(0, 1));
}
