#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "fiberforce/io.hpp"
#include "support.hpp"

using namespace fiberforce;
using testsup::Rng;

TEST_SUITE_BEGIN("io");

TEST_CASE("format_double round-trips exactly") {
    Rng rng(2024030);
    for (int i = 0; i < 1000; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("csv writer is deterministic") {
    Table t;
    t.meta = {"fiberforce demo", "config {\"k\":1}"};
    t.columns = {"a", "b"};
    t.add_row({1.0, 0.1});
    t.add_row({2.0, 1.0 / 3.0});

    std::ostringstream first, second;
    write_csv(first, t);
    write_csv(second, t);
    CHECK(first.str() == second.str());
    CHECK(first.str().rfind("# fiberforce demo\n", 0) == 0);
    CHECK(first.str().find("a,b\n") != std::string::npos);
}

TEST_SUITE_END();
