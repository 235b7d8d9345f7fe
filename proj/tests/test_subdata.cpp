#include <doctest.h>

TEST_SUITE("subdata") {}
