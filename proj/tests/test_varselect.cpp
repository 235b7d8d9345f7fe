#include <doctest.h>

TEST_SUITE("varselect") {}
