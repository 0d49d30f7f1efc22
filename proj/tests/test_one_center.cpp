#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "oracle_ref.hpp"
#include "stepfit/generator.hpp"
#include "stepfit/one_center.hpp"

using namespace stepfit;

namespace {

WeightedPoint mk(double x, double y, double w, int id) { return {x, y, w, id}; }

std::vector<WeightedPoint> gen(std::size_t n, std::uint64_t seed,
                               const std::string& profile = "random",
                               const std::string& weights = "uniform") {
    GenSpec spec;
    spec.n = n;
    spec.seed = seed;
    spec.profile = profile;
    spec.weights = weights;
    spec.k = 3;
    return generate_points(spec);
}

}  // namespace

TEST_CASE("classify_pairs: two equal-weight points") {
    std::vector<WeightedPoint> pts{mk(0, 0, 1, 0), mk(1, 10, 1, 1)};
    PairClassification cl = classify_pairs(pts);
    REQUIRE(cl.pairs.size() == 1);
    CHECK(cl.u == doctest::Approx(5.0));
    CHECK(cl.l == doctest::Approx(5.0));
    CHECK(cl.kept.size() == 2);
    CHECK(cl.duplicate_drops.empty());
}

TEST_CASE("classify_pairs: rank heights over two pairs") {
    std::vector<WeightedPoint> pts{mk(0, 0, 1, 0), mk(1, 6, 1, 1), mk(2, 8, 1, 2),
                                   mk(3, 10, 1, 3)};
    PairClassification cl = classify_pairs(pts);
    REQUIRE(cl.pairs.size() == 2);
    // bisectors: 3 for the first x-pair, 9 for the second; rank ceil(2/3)=1
    CHECK(cl.u == doctest::Approx(3.0));  // smallest upper
    CHECK(cl.l == doctest::Approx(9.0));  // largest lower
    CHECK(cl.pairs[0].upper_low_third);
    CHECK(cl.pairs[1].upper_high_two_thirds);
    CHECK(cl.pairs[1].lower_high_third);
    CHECK(cl.pairs[0].lower_low_two_thirds);
}

TEST_CASE("classify_pairs: duplicate ordinates keep the heavier point") {
    std::vector<WeightedPoint> pts{mk(0, 5, 1, 0), mk(1, 5, 2, 1), mk(2, 0, 1, 2),
                                   mk(3, 9, 1, 3)};
    PairClassification cl = classify_pairs(pts);
    REQUIRE(cl.duplicate_drops.size() == 1);
    CHECK(cl.duplicate_drops[0].id == 0);
    CHECK(cl.kept.size() == 3);
    // kept stays x-sorted
    for (std::size_t i = 1; i < cl.kept.size(); ++i)
        CHECK(xy_less(cl.kept[i - 1], cl.kept[i]));
}

TEST_CASE("classify_pairs: equal weight duplicates keep the smaller id") {
    std::vector<WeightedPoint> pts{mk(0, 5, 1, 4), mk(1, 5, 1, 2), mk(2, 0, 1, 0),
                                   mk(3, 9, 1, 1)};
    PairClassification cl = classify_pairs(pts);
    REQUIRE(cl.duplicate_drops.size() == 1);
    CHECK(cl.duplicate_drops[0].id == 4);
}

TEST_CASE("classify_pairs: fewer than two survivors is an error") {
    std::vector<WeightedPoint> one{mk(0, 3, 1, 0)};
    CHECK_THROWS_AS((void)classify_pairs(one), std::invalid_argument);
    std::vector<WeightedPoint> twins{mk(0, 3, 1, 0), mk(1, 3, 1, 1)};
    CHECK_THROWS_AS((void)classify_pairs(twins), std::invalid_argument);
}

TEST_CASE("classify_pairs: rank family counts") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto pts = gen(12 + seed % 37, seed, seed % 2 ? "random" : "adversarial",
                       seed % 3 ? "uniform" : "heavy");
        PairClassification cl;
        try {
            cl = classify_pairs(pts);
        } catch (const std::invalid_argument&) {
            continue;
        }
        std::size_t np = cl.pairs.size();
        if (np == 0) continue;
        std::size_t r = (np + 2) / 3;
        std::size_t ult = 0, uht = 0, lht = 0, llt = 0;
        for (const auto& pr : cl.pairs) {
            ult += pr.upper_low_third;
            uht += pr.upper_high_two_thirds;
            lht += pr.lower_high_third;
            llt += pr.lower_low_two_thirds;
        }
        CHECK(ult >= r);
        CHECK(uht >= np - r + 1);
        CHECK(lht >= r);
        CHECK(llt >= np - r + 1);
    }
}

TEST_CASE("side_of_critical") {
    std::vector<WeightedPoint> pts{mk(0, 0, 1, 0), mk(1, 10, 3, 1)};
    // optimum at 7.5
    CHECK(side_of_critical(pts, 5.0) == SideReport::Above);
    CHECK(side_of_critical(pts, 9.0) == SideReport::Below);
    CHECK(side_of_critical(pts, 7.5) == SideReport::Both);

    // a critical point exactly on the height (zero max cost) reads Both
    std::vector<WeightedPoint> on{mk(0, 5, 1, 0), mk(1, 5, 2, 1)};
    CHECK(side_of_critical(on, 5.0) == SideReport::Both);
    // an on-height point that is not critical does not
    std::vector<WeightedPoint> off{mk(0, 5, 1, 0), mk(1, 0, 0.1, 1)};
    CHECK(side_of_critical(off, 5.0) == SideReport::Below);
}

TEST_CASE("prune_one_sixth rejects Both reports") {
    std::vector<WeightedPoint> pts{mk(0, 0, 1, 0), mk(1, 10, 1, 1)};
    PairClassification cl = classify_pairs(pts);
    CHECK_THROWS_AS(
        (void)prune_one_sixth(pts, cl, SideReport::Both, SideReport::Below),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)prune_one_sixth(pts, cl, SideReport::Above, SideReport::Both),
        std::invalid_argument);
}

TEST_CASE("prune_one_sixth: enough removed, optimum preserved") {
    int rounds_checked = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        auto pts = gen(20 + seed % 90, seed * 7 + 1,
                       seed % 2 ? "random" : "adversarial",
                       seed % 3 ? "uniform" : "heavy");
        PairClassification cl;
        try {
            cl = classify_pairs(pts);
        } catch (const std::invalid_argument&) {
            continue;
        }
        SideReport su = side_of_critical(pts, cl.u);
        SideReport sl = side_of_critical(pts, cl.l);
        if (su == SideReport::Both || sl == SideReport::Both) continue;
        auto kept = prune_one_sixth(pts, cl, su, sl);
        std::size_t removed = pts.size() - kept.size();
        CHECK(removed >= pts.size() / 6);
        REQUIRE(!kept.empty());
        double before = ref::one_center_cost(pts);
        double after = ref::one_center_cost(kept);
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
        ++rounds_checked;
    }
    CHECK(rounds_checked > 20);
}

TEST_CASE("weighted_one_center: frozen examples") {
    std::vector<WeightedPoint> pts{mk(0, 0, 1, 0), mk(1, 10, 3, 1)};
    OneCenterResult r = weighted_one_center(pts);
    CHECK(r.y == doctest::Approx(7.5));
    CHECK(r.cost == doctest::Approx(7.5));

    std::vector<WeightedPoint> single{mk(0, 4, 2, 0)};
    OneCenterResult s = weighted_one_center(single);
    CHECK(s.y == doctest::Approx(4.0));
    CHECK(s.cost == 0.0);

    std::vector<WeightedPoint> flat{mk(0, 3, 1, 0), mk(1, 3, 2, 1), mk(2, 3, 5, 2)};
    OneCenterResult fl = weighted_one_center(flat);
    CHECK(fl.y == doctest::Approx(3.0));
    CHECK(fl.cost == 0.0);

    CHECK_THROWS_AS((void)weighted_one_center({}), std::invalid_argument);
}

TEST_CASE("weighted_one_center matches brute force") {
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        std::size_t n = 1 + (seed * 13) % 120;
        const char* profiles[] = {"random", "staircase", "adversarial"};
        auto pts = gen(n, seed, profiles[seed % 3], seed % 2 ? "uniform" : "heavy");
        for (CostModel model : {CostModel::Linear, CostModel::Squared}) {
            OneCenterResult got = weighted_one_center(pts, model);
            double want = ref::one_center_cost(pts, model);
            CHECK(got.cost == doctest::Approx(want).epsilon(1e-9));
            if (n > 1 && want > 1e-9) {
                double hy = ref::one_center_height(pts, model);
                CHECK(got.y == doctest::Approx(hy).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("weighted_one_center: every logged round meets its guarantee") {
    int instances_with_rounds = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto pts = gen(40 + (seed * 31) % 400, seed, seed % 2 ? "random" : "adversarial",
                       seed % 3 ? "uniform" : "heavy");
        std::vector<PruneEvent> events;
        (void)weighted_one_center(pts, CostModel::Linear, &events);
        for (const PruneEvent& e : events) {
            CHECK(e.kind == PruneEvent::Kind::OneCenter);
            CHECK(e.guarantee == e.set_size / 6);
            CHECK(e.removed >= e.guarantee);
            CHECK(e.removed <= e.set_size);
        }
        if (!events.empty()) ++instances_with_rounds;
    }
    CHECK(instances_with_rounds >= 10);
}
