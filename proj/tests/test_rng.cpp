#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ggr/rng.hpp"

using namespace ggr;

TEST_CASE("identical seeds produce identical streams") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i)
        CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("next_double stays in [0, 1)") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.next_double();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("next_below respects the bound and hits every residue") {
    Rng rng(99);
    std::set<uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const uint64_t v = rng.next_below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("derive_seed separates children") {
    const uint64_t parent = 42;
    std::set<uint64_t> children;
    for (uint64_t tag = 0; tag < 100; ++tag)
        children.insert(derive_seed(parent, tag));
    CHECK(children.size() == 100);
    CHECK(derive_seed(parent, 5) == derive_seed(parent, 5));
    CHECK(derive_seed(parent, {1, 2}) != derive_seed(parent, {2, 1}));
}
