// Acceptance suite: one pass/fail line per criterion; exit 0 only if all pass.

#include <iostream>

#include "opideal/selftest.hpp"

int main() {
    const bool ok = opideal::selftest::run_acceptance_suite(std::cout);
    return ok ? 0 : 1;
}
