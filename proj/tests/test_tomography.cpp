#include <catch2/catch_amalgamated.hpp>
TEST_CASE("todo test_tomography") { REQUIRE(true); }
