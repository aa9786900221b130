#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "archmap/evo.hpp"

using namespace archmap;

namespace {

ObjectiveVector mv(std::vector<double> v) { return ObjectiveVector::minimize(std::move(v)); }

std::vector<ObjectiveVector> random_population(Rng &rng, std::size_t n, std::size_t dim) {
    std::uniform_real_distribution<double> dist(0.0, 10.0);
    std::vector<ObjectiveVector> pop;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(dim);
        for (auto &x : v) x = std::round(dist(rng) * 4.0) / 4.0; // coarse grid forces ties
        pop.push_back(mv(std::move(v)));
    }
    return pop;
}

} // namespace

TEST_CASE("dominance on minimize pairs") {
    CHECK(dominates(mv({10, 20}), mv({12, 20})));
    CHECK_FALSE(dominates(mv({10, 20}), mv({10, 20})));
    CHECK_FALSE(dominates(mv({10, 25}), mv({12, 20})));
    CHECK_FALSE(dominates(mv({12, 20}), mv({10, 25})));
}

TEST_CASE("dominance honors maximize senses") {
    ObjectiveVector a({95.0, 10.0}, {Sense::Maximize, Sense::Minimize});
    ObjectiveVector b({90.0, 10.0}, {Sense::Maximize, Sense::Minimize});
    CHECK(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
    CHECK_THROWS_AS((void)dominates(a, mv({1, 2})), ValidationError);
    CHECK_THROWS_AS((void)ObjectiveVector::minimize({1.0, std::nan("")}), ValidationError);
}

TEST_CASE("dominance is irreflexive, antisymmetric, transitive on samples") {
    Rng rng(7);
    auto pop = random_population(rng, 60, 3);
    for (const auto &a : pop) CHECK_FALSE(dominates(a, a));
    for (std::size_t i = 0; i < pop.size(); ++i)
        for (std::size_t j = 0; j < pop.size(); ++j)
            if (dominates(pop[i], pop[j])) CHECK_FALSE(dominates(pop[j], pop[i]));
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    for (int t = 0; t < 2000; ++t) {
        const auto &a = pop[pick(rng)];
        const auto &b = pop[pick(rng)];
        const auto &c = pop[pick(rng)];
        if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
    }
}

TEST_CASE("nondominated sort on the worked example") {
    std::vector<ObjectiveVector> pop = {mv({1, 3}), mv({2, 2}), mv({3, 1}), mv({3, 3})};
    auto fronts = nondominated_sort(pop);
    REQUIRE(fronts.size() == 2);
    CHECK(fronts[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(fronts[1] == std::vector<std::size_t>{3});
}

TEST_CASE("nondominated sort degenerate shapes") {
    std::vector<ObjectiveVector> same = {mv({2, 2}), mv({2, 2}), mv({2, 2})};
    auto fronts = nondominated_sort(same);
    REQUIRE(fronts.size() == 1);
    CHECK(fronts[0].size() == 3);

    std::vector<ObjectiveVector> chain = {mv({1, 1}), mv({2, 2}), mv({3, 3})};
    fronts = nondominated_sort(chain);
    REQUIRE(fronts.size() == 3);
    for (std::size_t f = 0; f < 3; ++f) CHECK(fronts[f] == std::vector<std::size_t>{f});

    CHECK_THROWS_AS(nondominated_sort({}), ValidationError);
}

TEST_CASE("front partition and inter-front dominance properties") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto pop = random_population(rng, 40, 2 + trial % 2);
        auto fronts = nondominated_sort(pop);
        std::vector<int> seen(pop.size(), 0);
        for (const auto &front : fronts)
            for (std::size_t idx : front) ++seen[idx];
        CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            for (std::size_t idx : fronts[f]) {
                // nobody in the same front dominates a member
                for (std::size_t other : fronts[f]) {
                    bool same_front_dominated = dominates(pop[other], pop[idx]);
                    CHECK_FALSE(same_front_dominated);
                }
                if (f > 0) {
                    bool dominated_by_prev = false;
                    for (std::size_t other : fronts[f - 1])
                        dominated_by_prev |= dominates(pop[other], pop[idx]);
                    CHECK(dominated_by_prev);
                }
            }
        }
    }
}

TEST_CASE("crowding distance worked examples") {
    auto two = crowding_distance({mv({1, 2}), mv({2, 1})});
    CHECK(std::isinf(two[0]));
    CHECK(std::isinf(two[1]));

    auto three = crowding_distance({mv({1, 3}), mv({2, 2}), mv({3, 1})});
    CHECK(std::isinf(three[0]));
    CHECK(three[1] == doctest::Approx(2.0));
    CHECK(std::isinf(three[2]));

    // degenerate objective contributes nothing to interior members
    auto degen = crowding_distance({mv({1, 5}), mv({2, 5}), mv({3, 5})});
    CHECK(degen[1] == doctest::Approx(1.0)); // only the first objective contributes
    CHECK(std::isinf(crowding_distance({mv({4, 4})})[0]));
}

TEST_CASE("archive update: dominated, dominating, incomparable") {
    ParetoArchive archive;
    archive.insert(0, mv({5, 5}));
    archive.insert(1, mv({6, 6})); // dominated, rejected
    CHECK(archive.size() == 1);
    archive.insert(2, mv({6, 4})); // incomparable, grows
    CHECK(archive.size() == 2);
    archive.insert(3, mv({4, 4})); // dominates both
    CHECK(archive.size() == 1);
    CHECK(archive.members()[0].payload == 3);
}

TEST_CASE("archive keeps earliest payload on duplicate objectives") {
    ParetoArchive archive;
    archive.insert(11, mv({2, 2}));
    archive.insert(22, mv({2, 2}));
    REQUIRE(archive.size() == 1);
    CHECK(archive.members()[0].payload == 11);
}

TEST_CASE("archive is idempotent and order-insensitive at the objective level") {
    Rng rng(3);
    auto pop = random_population(rng, 30, 2);
    std::vector<ArchiveMember> cands;
    for (std::size_t i = 0; i < pop.size(); ++i) cands.push_back({i, pop[i], 0});

    ParetoArchive a;
    a.update(cands);
    auto objs_of = [](const ParetoArchive &arc) {
        std::vector<std::vector<double>> out;
        for (const auto &m : arc.members()) out.push_back(m.objectives.values);
        std::sort(out.begin(), out.end());
        return out;
    };
    auto base = objs_of(a);
    a.update(cands); // idempotent
    CHECK(objs_of(a) == base);

    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(cands.begin(), cands.end(), rng);
        ParetoArchive b;
        b.update(cands);
        CHECK(objs_of(b) == base);
    }
}

TEST_CASE("positive scaling leaves dominance, fronts and archives unchanged") {
    Rng rng(5);
    auto pop = random_population(rng, 25, 2);
    std::vector<ObjectiveVector> scaled;
    for (const auto &p : pop) scaled.push_back(mv({p.values[0] * 3.5, p.values[1] * 3.5}));
    for (std::size_t i = 0; i < pop.size(); ++i)
        for (std::size_t j = 0; j < pop.size(); ++j)
            CHECK(dominates(pop[i], pop[j]) == dominates(scaled[i], scaled[j]));
    CHECK(nondominated_sort(pop) == nondominated_sort(scaled));
}

TEST_CASE("tournament pick prefers better rank then crowding") {
    std::vector<ObjectiveVector> pop = {mv({1, 1}), mv({2, 2})};
    RankInfo info = rank_population(pop);
    CHECK(info.rank[0] == 0);
    CHECK(info.rank[1] == 1);
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        std::size_t winner = tournament_pick(rng, info, {0, 1});
        CHECK((winner == 0 || winner == 1));
        if (winner == 1) {
            // only legal when both tournament draws landed on index 1
        }
    }
    CHECK(nsga_less(info, 0, 1));
}

TEST_CASE("archive capacity keeps the most spread members") {
    ParetoArchive archive(std::size_t{3});
    archive.insert(0, mv({1, 10}));
    archive.insert(1, mv({2, 8}));
    archive.insert(2, mv({3, 6}));
    archive.insert(3, mv({4, 4}));
    archive.insert(4, mv({5, 2}));
    CHECK(archive.size() == 3);
    // boundary members survive truncation
    bool has_first = false, has_last = false;
    for (const auto &m : archive.members()) {
        has_first |= m.objectives.values[0] == 1;
        has_last |= m.objectives.values[0] == 5;
    }
    CHECK(has_first);
    CHECK(has_last);
}
