#include <doctest.h>

#include <set>
#include <sstream>

#include "csn/deployment.hpp"

using namespace csn;

namespace {
const FieldSpec kField{350.0, 350.0, 70.0};

std::vector<std::size_t> counts(const Topology& t)
{
    std::vector<std::size_t> c;
    for (const auto& z : t.grid.zones()) {
        c.push_back(z.members.size());
    }
    return c;
}
}  // namespace

TEST_CASE("reference field is a 5x5 zone grid")
{
    ZoneGrid g(kField);
    CHECK(g.size() == 25);
    CHECK(kField.zones_x() == 5);
    CHECK(g.zone_of({0.0, 0.0}) == 0);
    CHECK(g.zone_of({69.999, 0.0}) == 0);
    CHECK(g.zone_of({70.0, 0.0}) == 1);
    CHECK(g.zone_of({0.0, 70.0}) == 5);
    // the far edge belongs to the last zone
    CHECK(g.zone_of({350.0, 350.0}) == 24);
}

TEST_CASE("zone side must keep zone members within radio range")
{
    CHECK_NOTHROW(kField.validate(100.0));
    CHECK_THROWS_AS(kField.validate(90.0), std::invalid_argument);
    CHECK_THROWS_AS((FieldSpec{350.0, 350.0, 80.0}.validate(100.0)), std::invalid_argument);
}

TEST_CASE("uniform deployment partitions all nodes into zones")
{
    const auto t = generate_uniform(50, kField, 7);
    CHECK(t.nodes.size() == 50);
    std::size_t sum = 0;
    for (const auto c : counts(t)) {
        sum += c;
    }
    CHECK(sum == 50);
    for (const auto& n : t.nodes) {
        CHECK(t.grid.zone(n.zone).bounds.contains(n.pos));
        CHECK(t.grid.zone_of(n.pos) == n.zone);
    }
    CHECK(max_intra_zone_distance(t) <= 100.0);
}

TEST_CASE("uniform deployment is deterministic per seed")
{
    const auto a = generate_uniform(50, kField, 7);
    const auto b = generate_uniform(50, kField, 7);
    const auto c = generate_uniform(50, kField, 8);
    CHECK(a.nodes == b.nodes);
    CHECK_FALSE(a.nodes == c.nodes);
}

TEST_CASE("mean zone population matches n / zones")
{
    // 150 / 25 = 6
    double total = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        const auto t = generate_uniform(150, kField, 1000 + s);
        const auto c = counts(t);
        double m = 0.0;
        for (const auto v : c) {
            m += static_cast<double>(v);
        }
        total += m / static_cast<double>(c.size());
    }
    CHECK(total / seeds == doctest::Approx(6.0).epsilon(0.5 / 6.0));
}

TEST_CASE("zero nodes is rejected")
{
    CHECK_THROWS_AS(generate_uniform(0, kField, 1), std::invalid_argument);
}

TEST_CASE("biased deployment places exact zone counts")
{
    const std::pair<ZoneId, std::uint32_t> counts[] = {{0, 5}, {1, 4}, {2, 3}, {3, 2}};
    const auto t = generate_biased(counts, kField, 3);
    CHECK(t.nodes.size() == 14);
    CHECK(t.grid.zone(0).members.size() == 5);
    CHECK(t.grid.zone(1).members.size() == 4);
    CHECK(t.grid.zone(2).members.size() == 3);
    CHECK(t.grid.zone(3).members.size() == 2);
    for (const auto& n : t.nodes) {
        CHECK(t.grid.zone(n.zone).bounds.contains(n.pos));
    }

    const std::pair<ZoneId, std::uint32_t> single[] = {{0, 1}};
    const auto one = generate_biased(single, kField, 3);
    CHECK(one.nodes.size() == 1);
    CHECK(one.grid.zone(0).members.size() == 1);

    const std::pair<ZoneId, std::uint32_t> bad[] = {{99, 1}};
    CHECK_THROWS_AS(generate_biased(bad, kField, 3), std::invalid_argument);
}

TEST_CASE("activity assignment")
{
    auto high = [](const ZoneGrid& g) {
        std::size_t k = 0;
        for (const auto& z : g.zones()) {
            k += z.activity == Activity::High ? 1 : 0;
        }
        return k;
    };
    const ZoneGrid g(kField);
    CHECK(high(assign_activity(g, 0.0, 1)) == 0);
    CHECK(high(assign_activity(g, 1.0, 1)) == 25);
    // ceil(0.4 * 25) = 10
    for (std::uint64_t s = 1; s <= 20; ++s) {
        CHECK(high(assign_activity(g, 0.4, s)) == 10);
    }
    CHECK(high(assign_activity(g, 0.5, 1)) == 13);

    std::set<std::vector<int>> patterns;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        std::vector<int> p;
        for (const auto& z : assign_activity(g, 0.5, s).zones()) {
            p.push_back(z.activity == Activity::High);
        }
        patterns.insert(p);
    }
    CHECK(patterns.size() > 1);
}

TEST_CASE("topology dump lists every node")
{
    const auto t = generate_uniform(5, kField, 2);
    std::ostringstream os;
    write_topology(os, t);
    const auto text = os.str();
    CHECK(text.rfind("# id x y zone", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}
