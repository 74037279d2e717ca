#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "xllsim/procstat.hpp"

using namespace xllsim;

namespace {

std::string fixture(const std::string& name) {
    return std::string(XLLSIM_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("parses a single cpu line with the documented field order") {
    auto snap = parse_proc_stat("cpu2 840 12 260 15000 30 0 5 0 0 0\n");
    REQUIRE(snap.per_cpu.size() == 1);
    const CpuJiffies& cpu = snap.per_cpu[0];
    CHECK(cpu.cpu_index == 2);
    CHECK(cpu.user == 840);
    CHECK(cpu.nice == 12);
    CHECK(cpu.system == 260);
    CHECK(cpu.idle == 15000);
    CHECK(cpu.remaining == std::vector<Jiffies>{30, 0, 5, 0, 0, 0});
    CHECK(!snap.aggregate.has_value());
}

TEST_CASE("zero counters and the 4-field minimum are accepted") {
    auto snap = parse_proc_stat("cpu0 0 0 0 0\n");
    REQUIRE(snap.per_cpu.size() == 1);
    CHECK(snap.per_cpu[0].cpu_index == 0);
    CHECK(snap.per_cpu[0].user == 0);
    CHECK(snap.per_cpu[0].remaining.empty());
}

TEST_CASE("non-cpu lines are ignored") {
    auto snap = parse_proc_stat("cpu0 5 0 0 9\nctxt 12345\ncpu1 7 0 0 9\n");
    REQUIRE(snap.per_cpu.size() == 2);
    CHECK(snap.per_cpu[0].user == 5);
    CHECK(snap.per_cpu[1].user == 7);
}

TEST_CASE("aggregate line is populated only when present") {
    auto with = parse_proc_stat("cpu  12 0 0 9\ncpu0 12 0 0 9\n");
    REQUIRE(with.aggregate.has_value());
    CHECK(with.aggregate->cpu_index == -1);
    CHECK(with.aggregate->user == 12);

    auto without = parse_proc_stat("cpu0 12 0 0 9\n");
    CHECK(!without.aggregate.has_value());
}

TEST_CASE("per_cpu comes out sorted even when the image is shuffled") {
    auto snap = parse_proc_stat("cpu3 3 0 0 9\ncpu1 1 0 0 9\ncpu0 0 0 0 9\ncpu2 2 0 0 9\n");
    REQUIRE(snap.per_cpu.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(snap.per_cpu[i].cpu_index == i);
        CHECK(snap.per_cpu[i].user == static_cast<Jiffies>(i));
    }
}

TEST_CASE("malformed cpu lines name the offending line") {
    CHECK_THROWS_WITH_AS(parse_proc_stat("cpu0 10 2 3 100\ncpu1 10 2 x 100\n"),
                         doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_proc_stat("cpu0 1 2 3\n"),
                         doctest::Contains("line 1"), ParseError);
    try {
        parse_proc_stat("ctxt 4\nbtime 5\ncpu0 1 2 3 4\ncpu1 -3 0 0 0\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
}

TEST_CASE("duplicate cpu indices are a structural error") {
    CHECK_THROWS_AS(parse_proc_stat("cpu0 1 2 3 4\ncpu0 1 2 3 4\n"),
                    StructuralError);
}

TEST_CASE("an image without cpu lines is rejected") {
    CHECK_THROWS_WITH_AS(parse_proc_stat("intr 0\nctxt 0\n"),
                         doctest::Contains("no cpu lines"), StructuralError);
    CHECK_THROWS_AS(parse_proc_stat(""), StructuralError);
}

TEST_CASE("extra appended columns are preserved, not rejected") {
    auto snap = parse_proc_stat("cpu0 10 2 3 100 1 0 0 0 0 0 7 8\n");
    REQUIRE(snap.per_cpu.size() == 1);
    CHECK(snap.per_cpu[0].remaining.size() == 8);
    CHECK(snap.per_cpu[0].remaining.back() == 8);
    CHECK(to_proc_stat_text(snap) == "cpu0 10 2 3 100 1 0 0 0 0 0 7 8\n");
}

TEST_CASE("user_load returns the user column only") {
    auto snap = parse_proc_stat("cpu2 840 12 260 15000 30 0 5 0 0 0\n");
    CHECK(user_load(snap, 2) == 840);

    auto zero = parse_proc_stat("cpu0 0 0 0 0\n");
    CHECK(user_load(zero, 0) == 0);

    CHECK_THROWS_AS(user_load(snap, 5), std::out_of_range);
}

TEST_CASE("user_load equals the second token of the matching cpu line") {
    for (const char* name :
         {"quadcore_desktop.stat", "tile64_idle.stat", "tile64_busy.stat"}) {
        auto snap = load_proc_stat(fixture(name));
        std::ifstream in(fixture(name));
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream fields(line);
            std::string label, second;
            fields >> label >> second;
            if (label.size() <= 3 || label.substr(0, 3) != "cpu") continue;
            int index = std::stoi(label.substr(3));
            CHECK(user_load(snap, index) == std::stoull(second));
        }
    }
}

TEST_CASE("round-trip: serialize then parse reproduces the snapshot") {
    std::mt19937_64 rng(1234);
    for (int iteration = 0; iteration < 200; ++iteration) {
        ProcStatSnapshot snap;
        snap.capture_tick = rng() % 100000;
        if (rng() % 2) {
            CpuJiffies agg;
            agg.cpu_index = -1;
            agg.user = rng() % 100000;
            agg.idle = rng() % 100000;
            snap.aggregate = agg;
        }
        int cpus = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < cpus; ++i) {
            CpuJiffies cpu;
            cpu.cpu_index = i;
            cpu.user = rng() % 100000;
            cpu.nice = rng() % 100;
            cpu.system = rng() % 10000;
            cpu.idle = rng() % 1000000;
            std::size_t extra = rng() % 7;
            for (std::size_t k = 0; k < extra; ++k) {
                cpu.remaining.push_back(rng() % 1000);
            }
            snap.per_cpu.push_back(cpu);
        }
        auto reparsed = parse_proc_stat(to_proc_stat_text(snap), snap.capture_tick);
        CHECK(reparsed == snap);
    }
}

TEST_CASE("deleting or permuting non-cpu lines never changes per_cpu") {
    std::string base =
        "intr 1 2 3\ncpu0 5 1 2 90\nctxt 77\ncpu1 6 1 2 90\nbtime 123\n";
    auto reference = parse_proc_stat(base);

    auto no_noise = parse_proc_stat("cpu0 5 1 2 90\ncpu1 6 1 2 90\n");
    CHECK(no_noise.per_cpu == reference.per_cpu);

    auto permuted = parse_proc_stat(
        "btime 123\ncpu0 5 1 2 90\nintr 1 2 3\ncpu1 6 1 2 90\nctxt 77\n");
    CHECK(permuted.per_cpu == reference.per_cpu);
}

TEST_CASE("fixture files parse and round-trip") {
    for (const char* name :
         {"sandbox_capture.stat", "quadcore_desktop.stat", "minimal.stat",
          "tile64_idle.stat", "tile64_busy.stat", "extra_columns.stat"}) {
        auto snap = load_proc_stat(fixture(name));
        CHECK(!snap.per_cpu.empty());
        auto reparsed = parse_proc_stat(to_proc_stat_text(snap));
        CHECK(reparsed == snap);
    }
}

TEST_CASE("desktop fixture fields match the hand-checked values") {
    auto snap = load_proc_stat(fixture("quadcore_desktop.stat"));
    REQUIRE(snap.per_cpu.size() == 4);
    REQUIRE(snap.aggregate.has_value());
    CHECK(snap.aggregate->user == 84650);
    CHECK(user_load(snap, 0) == 22100);
    CHECK(user_load(snap, 3) == 20700);
    CHECK(snap.per_cpu[1].system == 5210);
    CHECK(snap.per_cpu[2].idle == 228100);
}
