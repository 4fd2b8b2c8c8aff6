#include "doctest.h"
#include "bow/repio.hpp"
TEST_CASE("placeholder") { CHECK(true); }
