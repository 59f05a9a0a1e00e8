#include <catch2/catch_amalgamated.hpp>
#include <ergomax/ergomax.hpp>
TEST_CASE("placeholder test_harness") { CHECK(true); }
