#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <fairdec/justice.hpp>
#include <fairdec/metrics.hpp>
#include <fairdec/rng.hpp>

using namespace fairdec;

namespace {

ScoredPopulation random_pop(std::mt19937_64& eng, std::size_t n, int groups) {
    ScoredPopulation pop;
    pop.n_groups = groups;
    for (std::size_t i = 0; i < n; ++i) {
        Individual ind;
        ind.id = std::int64_t(i);
        ind.p = uniform01(eng);
        ind.group = int(i) % groups;          // every group populated
        ind.y = uniform01(eng) < ind.p ? 1 : 0;
        pop.individuals.push_back(ind);
    }
    pop.validate();
    return pop;
}

DecisionVector random_decisions(std::mt19937_64& eng, std::size_t n) {
    DecisionVector d(n);
    for (auto& x : d) x = uniform01(eng) < 0.5 ? 1 : 0;
    return d;
}

std::vector<int> labels_of(const ScoredPopulation& pop) {
    std::vector<int> y;
    for (const auto& ind : pop.individuals) y.push_back(*ind.y);
    return y;
}

std::vector<int> groups_of(const ScoredPopulation& pop) {
    std::vector<int> g;
    for (const auto& ind : pop.individuals) g.push_back(ind.group);
    return g;
}

// evenly spread scores so interval rules hit predictable fractions
ScoredPopulation ladder_pop(std::size_t per_group, int groups) {
    ScoredPopulation pop;
    pop.n_groups = groups;
    std::int64_t id = 0;
    for (int g = 0; g < groups; ++g)
        for (std::size_t i = 0; i < per_group; ++i) {
            Individual ind;
            ind.id = id++;
            ind.p = (double(i) + 0.5) / double(per_group);
            ind.group = g;
            ind.y = ind.p > 0.5 ? 1 : 0;
            pop.individuals.push_back(ind);
        }
    pop.validate();
    return pop;
}

} // namespace

TEST_CASE("subject utility reduces to the familiar rates") {
    auto eng = make_engine(42);
    auto pop = random_pop(eng, 40, 2);
    auto d = random_decisions(eng, pop.size());
    auto rep = fairness_report(d, labels_of(pop), groups_of(pop), 2);

    // selected get 1, rejected 0: the group mean is the acceptance rate
    auto ar = ds_utility(pop, d, UtilityMatrix{1.0, 1.0, 0.0, 0.0}, ClaimNone{});
    for (int g = 0; g < 2; ++g) {
        REQUIRE(ar[g].has_value());
        CHECK(*ar[g] == Catch::Approx(*rep.groups[g].acceptance_rate).margin(1e-12));
    }

    // among the truly positive, w11 pays and w01 does not: the mean is the TPR
    auto tpr = ds_utility(pop, d, UtilityMatrix{1.0, 7.0, 0.0, -3.0}, ClaimOnLabel{{1}});
    for (int g = 0; g < 2; ++g) {
        REQUIRE(tpr[g].has_value());
        CHECK(*tpr[g] == Catch::Approx(*rep.groups[g].tpr).margin(1e-12));
    }
}

TEST_CASE("treatment weights price the borderline patient at the crossover") {
    // treated: harm -0.8 if unnecessary, 0 if needed; untreated: -0.4 either way
    UtilityMatrix W{0.0, -0.8, -0.4, -0.4};
    ScoredPopulation pop;
    pop.n_groups = 1;
    pop.individuals = {{0, 0.5, 0, 1}, {1, 0.5, 0, 0}};
    DecisionVector d{1, 1};
    auto u = ds_utility(pop, d, W, ClaimNone{});
    REQUIRE(u[0].has_value());
    CHECK(*u[0] == Catch::Approx(-0.4).margin(1e-12));   // treating at p=0.5 breaks even
    auto r = ds_utility(pop, DecisionVector{0, 0}, W, ClaimNone{});
    CHECK(*r[0] == Catch::Approx(-0.4).margin(1e-12));
}

TEST_CASE("egalitarian score is the largest pairwise gap") {
    CHECK(egalitarian_score(std::vector<double>{0.4, 0.4}) == 0.0);
    CHECK(egalitarian_score(std::vector<double>{0.3, 0.5}) == Catch::Approx(0.2).margin(1e-15));
    CHECK(egalitarian_score(std::vector<double>{0.1, 0.9, 0.5}) ==
          Catch::Approx(0.8).margin(1e-15));
    std::vector<std::optional<double>> with_hole{0.3, std::nullopt};
    CHECK_FALSE(egalitarian_score(with_hole).has_value());
    CHECK_THROWS_AS(egalitarian_score(std::vector<double>{0.3}), std::invalid_argument);
}

TEST_CASE("weight patterns turn the gap into a parity measure") {
    auto eng = make_engine(7);
    int checked_sp = 0, checked_tpr = 0, checked_ppv = 0;
    for (int rep = 0; rep < 100; ++rep) {
        auto pop = random_pop(eng, 20 + std::size_t(uniform01(eng) * 40), 2);
        auto d = random_decisions(eng, pop.size());
        auto report = fairness_report(d, labels_of(pop), groups_of(pop), 2);

        // equal pay within each decision arm: gap = |AR0-AR1| * |w_1 - w_0|
        double a = uniform01(eng) * 4 - 2, b = uniform01(eng) * 4 - 2;
        if (a == b) b += 1.0;
        auto u_sp = ds_utility(pop, d, UtilityMatrix{a, a, b, b}, ClaimNone{});
        auto sp_gap = report.gap(&GroupRates::acceptance_rate);
        REQUIRE(sp_gap.has_value());
        CHECK(std::abs(*egalitarian_score(u_sp) - *sp_gap * std::abs(a - b)) < 1e-12);
        ++checked_sp;

        // claims restricted to true positives: gap = TPR gap * |w11-w01|
        double w11 = uniform01(eng) * 4 - 2, w01 = uniform01(eng) * 4 - 2;
        if (w11 == w01) w01 -= 1.0;
        auto u_tpr = ds_utility(pop, d, UtilityMatrix{w11, uniform01(eng), w01, uniform01(eng)},
                                ClaimOnLabel{{1}});
        auto tpr_gap = report.gap(&GroupRates::tpr);
        auto tpr_score = egalitarian_score(u_tpr);
        if (tpr_gap && tpr_score) {
            CHECK(std::abs(*tpr_score - *tpr_gap * std::abs(w11 - w01)) < 1e-12);
            ++checked_tpr;
        }

        // claims restricted to the selected: gap = PPV gap * |w11-w10|
        double w10 = uniform01(eng) * 4 - 2;
        if (w11 == w10) w10 -= 1.0;
        auto u_ppv = ds_utility(pop, d, UtilityMatrix{w11, w10, uniform01(eng), uniform01(eng)},
                                ClaimOnDecision{{1}});
        auto ppv_gap = report.gap(&GroupRates::ppv);
        auto ppv_score = egalitarian_score(u_ppv);
        if (ppv_gap && ppv_score) {
            CHECK(std::abs(*ppv_score - *ppv_gap * std::abs(w11 - w10)) < 1e-12);
            ++checked_ppv;
        }
    }
    CHECK(checked_sp == 100);
    CHECK(checked_tpr > 80);
    CHECK(checked_ppv > 80);
}

TEST_CASE("affine weight changes scale the score and keep zero membership") {
    auto eng = make_engine(19);
    for (int rep = 0; rep < 30; ++rep) {
        auto pop = random_pop(eng, 30, 2);
        auto d = random_decisions(eng, pop.size());
        UtilityMatrix W{uniform01(eng) * 2 - 1, uniform01(eng) * 2 - 1, uniform01(eng) * 2 - 1,
                        uniform01(eng) * 2 - 1};
        double c = 0.5 + 2.0 * uniform01(eng), k = uniform01(eng) * 10 - 5;
        UtilityMatrix W2{c * W.w11 + k, c * W.w10 + k, c * W.w01 + k, c * W.w00 + k};
        auto s1 = egalitarian_score(ds_utility(pop, d, W, ClaimNone{}));
        auto s2 = egalitarian_score(ds_utility(pop, d, W2, ClaimNone{}));
        REQUIRE(s1.has_value());
        REQUIRE(s2.has_value());
        CHECK(std::abs(*s2 - c * *s1) < 1e-9);
        CHECK((*s1 < 1e-12) == (*s2 < c * 1e-12 + 1e-15));
    }
}

TEST_CASE("patterns rank rules over the supplied space") {
    auto pop = ladder_pop(10, 2);
    UtilityMatrix W{1.0, 1.0, 0.0, 0.0};   // group utility = acceptance rate

    // acceptance rates: A=(0.2, 1.0), B=(0.5, 0.4), C=(0.6, 0.5)
    std::vector<DecisionRule> space{
        GroupIntervals{{Interval{0.8, 1.0}, Interval{0.0, 1.0}}},
        GroupIntervals{{Interval{0.5, 1.0}, Interval{0.6, 1.0}}},
        GroupIntervals{{Interval{0.4, 1.0}, Interval{0.5, 1.0}}},
    };

    auto maximin = pattern_satisfied(Maximin{}, space, pop, W, ClaimNone{});
    REQUIRE(maximin.size() == 3);
    CHECK(*maximin[0].score == Catch::Approx(0.2).margin(1e-12));
    CHECK(*maximin[1].score == Catch::Approx(0.4).margin(1e-12));
    CHECK(*maximin[2].score == Catch::Approx(0.5).margin(1e-12));
    CHECK_FALSE(maximin[0].satisfied);
    CHECK_FALSE(maximin[1].satisfied);
    CHECK(maximin[2].satisfied);

    // heavy priority on the worst-off agrees with maximin's winner
    auto prio = pattern_satisfied(Prioritarian{1e6}, space, pop, W, ClaimNone{});
    CHECK(prio[2].satisfied);
    CHECK_FALSE(prio[0].satisfied);
    CHECK_FALSE(prio[1].satisfied);
    // mild priority prefers the high-total rule instead: A totals 1.2
    auto mild = pattern_satisfied(Prioritarian{1.01}, space, pop, W, ClaimNone{});
    CHECK(mild[0].satisfied);
    CHECK_FALSE(mild[2].satisfied);

    auto floor_all = pattern_satisfied(Sufficientarian{0.05}, space, pop, W, ClaimNone{});
    CHECK(floor_all[0].satisfied);
    CHECK(floor_all[1].satisfied);
    CHECK(floor_all[2].satisfied);
    auto floor_some = pattern_satisfied(Sufficientarian{0.45}, space, pop, W, ClaimNone{});
    CHECK_FALSE(floor_some[0].satisfied);
    CHECK_FALSE(floor_some[1].satisfied);
    CHECK(floor_some[2].satisfied);

    auto egal = pattern_satisfied(Egalitarian{0.15}, space, pop, W, ClaimNone{});
    CHECK_FALSE(egal[0].satisfied);   // gap 0.8
    CHECK(egal[1].satisfied);         // gap 0.1
    CHECK(egal[2].satisfied);         // gap 0.1

    auto single = pattern_satisfied(Maximin{}, {space[0]}, pop, W, ClaimNone{});
    CHECK(single[0].satisfied);
}

TEST_CASE("rules with undefined group utility are excluded") {
    auto pop = ladder_pop(5, 2);
    UtilityMatrix W{1.0, 0.0, 0.0, 0.0};
    std::vector<DecisionRule> space{
        GroupIntervals{{Interval{1.0, 0.0}, Interval{1.0, 0.0}}},   // selects nobody
        GroupIntervals{{Interval{0.0, 1.0}, Interval{0.0, 1.0}}},
    };
    auto res = pattern_satisfied(Maximin{}, space, pop, W, ClaimOnDecision{{1}});
    CHECK_FALSE(res[0].defined);
    CHECK_FALSE(res[0].satisfied);
    CHECK(res[1].defined);
    CHECK(res[1].satisfied);

    CHECK_THROWS_AS(pattern_satisfied(Maximin{}, {}, pop, W, ClaimNone{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ds_utility(pop, DecisionVector(pop.size(), 1), W, ClaimOnLabel{{}}),
                    std::invalid_argument);
}

TEST_CASE("the rule grid enumerates both one-sided forms") {
    auto grid = pareto_rule_grid(100);
    CHECK(grid.size() == 202);
    CHECK(grid.size() * grid.size() == 40804);
    CHECK(grid.front().lo == 0.0);
    CHECK(grid.front().hi == 1.0);
    CHECK(grid[100].lo == 1.0);          // lower bound at 1: only perfect scores
    CHECK(grid[101].hi == 0.0);          // upper bound at 0: only zero scores
    CHECK(grid.back().hi == 1.0);
    CHECK_THROWS_AS(pareto_rule_grid(1), std::invalid_argument);
}

TEST_CASE("the trade-off front is mutually non-dominated") {
    auto eng = make_engine(23);
    auto pop = random_pop(eng, 60, 2);
    UtilityParams u_dm{1.0, -0.6};
    UtilityMatrix W{1.0, 1.0, 0.0, 0.0};
    auto front = pareto_front(pop, u_dm, W, ClaimNone{}, Egalitarian{}, 20);
    REQUIRE(!front.empty());

    for (std::size_t i = 0; i < front.size(); ++i)
        for (std::size_t j = 0; j < front.size(); ++j) {
            if (i == j) continue;
            bool weak = front[i].dm_utility >= front[j].dm_utility &&
                        front[i].fairness_score >= front[j].fairness_score;
            bool strict = front[i].dm_utility > front[j].dm_utility ||
                          front[i].fairness_score > front[j].fairness_score;
            CHECK_FALSE((weak && strict));
        }
    for (std::size_t i = 1; i < front.size(); ++i) {
        CHECK(front[i].fairness_score > front[i - 1].fairness_score);
        CHECK(front[i].dm_utility < front[i - 1].dm_utility);
    }

    // the utility-best grid rule always survives filtering
    double best = -1e300;
    auto grid = pareto_rule_grid(20);
    for (const auto& r0 : grid)
        for (const auto& r1 : grid) {
            auto d = apply_rule(pop, DecisionRule{GroupIntervals{{r0, r1}}}, std::uint64_t(0));
            best = std::max(best, expected_utility(pop, d, u_dm));
        }
    CHECK(front.back().dm_utility <= best + 1e-12);
    CHECK(front.front().dm_utility == Catch::Approx(best).margin(1e-12));
}

TEST_CASE("a constant fairness axis collapses the front to one point") {
    auto eng = make_engine(29);
    auto pop = random_pop(eng, 40, 2);
    UtilityParams u_dm{1.0, -0.5};
    UtilityMatrix W{0.7, 0.7, 0.7, 0.7};   // every subject utility identical
    auto front = pareto_front(pop, u_dm, W, ClaimNone{}, Sufficientarian{0.0}, 8);
    REQUIRE(front.size() == 1);
    CHECK(front[0].fairness_score == Catch::Approx(0.7).margin(1e-12));

    auto pop3 = random_pop(eng, 30, 3);
    CHECK_THROWS_AS(pareto_front(pop3, u_dm, W, ClaimNone{}, Maximin{}, 8),
                    std::invalid_argument);
}
