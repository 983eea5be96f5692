#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "copa/io.hpp"
#include "copa/pareto.hpp"
#include "copa/select.hpp"
#include "support.hpp"

using namespace copa;
using copa::testing::make_population;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SelectionSpec rank_spec(double p, std::vector<double> w) {
    return SelectionSpec::from_method(
        "rank", CriterionConfig::make(std::isinf(p) ? Exponent::infinity() : Exponent(p), std::move(w)));
}

// Argmin of copa_norm over rank vectors with the documented tie order,
// computed without the Evaluator.
std::size_t brute_argmin(const Population& p, const CriterionConfig& c, const std::vector<bool>& allowed) {
    const auto u = rank_transform(p).values;
    auto p8 = c;
    p8.p = Exponent(8);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!allowed[i]) continue;
        if (!best) {
            best = i;
            continue;
        }
        const double a = copa_norm(u.row(i), c);
        const double b = copa_norm(u.row(*best), c);
        const double scale = std::max(std::abs(a), std::abs(b));
        if (std::abs(a - b) > 1e-12 * scale) {
            if (a < b) best = i;
        } else if (copa_norm(u.row(i), p8) < copa_norm(u.row(*best), p8)) {
            best = i;
        }
    }
    return *best;
}

}  // namespace

TEST_CASE("single-model population") {
    const auto p = make_population({{0.7, 3.0}});
    for (double exp : {1.0, 2.0, kInf}) {
        const auto r = select_best(p, rank_spec(exp, {0.3, 0.7}));
        CHECK(r.model_index == 0);
        CHECK(r.model_id == "m0");
        CHECK(r.criterion_value == 0.0);
        CHECK(r.is_pareto_optimal);
    }
}

TEST_CASE("a dominating model is selected") {
    const auto p = make_population({{2, 5}, {1, 4}});
    for (double exp : {1.0, 2.0, 8.0, 100.0}) {
        for (double a : {0.1, 0.5, 0.9}) CHECK(select_best(p, rank_spec(exp, {a, 1 - a})).model_index == 1);
    }
}

TEST_CASE("selection results carry their vectors") {
    const auto p = make_population({{0.3, 0.1}, {0.1, 0.3}, {0.2, 0.2}});
    const auto r = select_best(p, rank_spec(kInf, {0.5, 0.5}));
    CHECK(r.model_index == 2);
    CHECK(r.raw_vector == std::vector<double>{0.2, 0.2});
    CHECK(r.normalized_vector == std::vector<double>{1.0 / 3, 1.0 / 3});
    CHECK(r.criterion_value == doctest::Approx(1.0 / 6));
    CHECK(r.is_pareto_optimal);
}

TEST_CASE("constraints filter on raw values without touching normalization") {
    const auto p = make_population({{0.1, 0.9}, {0.5, 0.4}, {0.9, 0.1}});
    const auto spec = rank_spec(kInf, {0.5, 0.5});
    const Evaluator ev(p, spec);
    const auto free = select_best(p, spec);
    const auto constraint = ConstraintRule::parse("f1<=0.3");
    CHECK_FALSE(constraint.holds(p.scores()(free.model_index, 0)));

    const auto bound = select_best(p, spec, {ConstraintRule::parse("f1>0.2")});
    CHECK(bound.model_index != 0);
    CHECK(Evaluator(p, spec).normalized().values == ev.normalized().values);
    const auto mask = ev.feasible({ConstraintRule::parse("f1>0.2")});
    CHECK(bound.model_index == brute_argmin(p, spec.criterion, mask));
    CHECK(bound.normalized_vector == std::vector<double>(ev.normalized().values.row(bound.model_index).begin(),
                                                         ev.normalized().values.row(bound.model_index).end()));

    try {
        select_best(p, spec, {ConstraintRule::parse("f1<0.05"), ConstraintRule::parse("f2<=1")});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::infeasible);
        CHECK(e.key() == "no_feasible_model");
        CHECK(std::string(e.what()).find("f1<0.05") != std::string::npos);
    }
    CHECK_THROWS_AS(select_best(p, spec, {ConstraintRule::parse("co2<=1")}), Error);
}

TEST_CASE("selection agrees with a brute-force argmin") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial) % 30;
        const std::size_t k = 1 + static_cast<std::size_t>(trial) % 4;
        const auto p = trial % 3 == 0 ? copa::testing::random_tied_population(rng, n, k, 4)
                                      : copa::testing::random_population(rng, n, k, true);
        const auto w = copa::testing::random_weights(rng, k, false);
        for (double exp : {1.0, 2.0, kInf}) {
            const auto spec = rank_spec(exp, w);
            const std::vector<bool> all(n, true);
            CHECK(select_best(p, spec).model_index == brute_argmin(p, spec.criterion, all));
        }
    }
}

TEST_CASE("selections are Pareto-optimal for finite p and positive weights") {
    std::mt19937_64 rng(67);
    std::size_t violations = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial) % 50;
        const std::size_t k = 1 + static_cast<std::size_t>(trial) % 4;
        const auto p = trial % 2 == 0 ? copa::testing::random_tied_population(rng, n, k, 5)
                                      : copa::testing::random_population(rng, n, k, true);
        const auto w = copa::testing::random_weights(rng, k, true);
        for (double exp : {1.0, 2.0, 8.0}) {
            const auto r = select_best(p, rank_spec(exp, w));
            for (std::size_t j = 0; j < n; ++j)
                if (dominates(p.row(j), p.row(r.model_index), p.objectives())) ++violations;
            CHECK(r.is_pareto_optimal);
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("p = inf reaches every front model on a fine weight grid") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial) % 11;
        const auto p = copa::testing::random_population(rng, n, 2);
        const Evaluator ev(p, rank_spec(kInf, {0.5, 0.5}));
        std::set<std::size_t> reached;
        for (int g = 0; g <= 1000; ++g) {
            const double a = g / 1000.0;
            const auto config = CriterionConfig::make(Exponent::infinity(), {a, 1.0 - a});
            reached.insert(ev.select(config, {}).model_index);
        }
        for (auto i : pareto_front(p)) CHECK(reached.count(i) == 1);
    }
}

TEST_CASE("selection is invariant to strictly increasing transforms") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = copa::testing::random_population(rng, 5 + static_cast<std::size_t>(trial) % 20, 3);
        std::vector<std::vector<double>> moved(p.size(), std::vector<double>(3));
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t k = 0; k < 3; ++k) moved[i][k] = std::log1p(p.scores()(i, k)) * 4.0 + 1.0;
        const auto w = copa::testing::random_weights(rng, 3, true);
        for (double exp : {1.0, 4.0, kInf})
            CHECK(select_best(make_population(moved), rank_spec(exp, w)).model_index ==
                  select_best(p, rank_spec(exp, w)).model_index);
    }
}

TEST_CASE("method names map onto normalization and aggregator") {
    const auto c = CriterionConfig::uniform(Exponent(2), 2);
    CHECK(SelectionSpec::from_method("minmax", c).normalization == NormalizationMethod::minmax);
    CHECK(SelectionSpec::from_method("saw", c).aggregator == Aggregator::saw);
    CHECK(SelectionSpec::from_method("ahp", c).aggregator == Aggregator::ahp);
    CHECK(SelectionSpec::from_method("mew", c).aggregator == Aggregator::mew);
    CHECK(SelectionSpec::from_method("rank", c).method_name() == "rank");
    CHECK_THROWS_AS(SelectionSpec::from_method("ccdf", c), Error);
    CHECK_THROWS_AS(SelectionSpec::from_method("bogus", c), Error);
}

TEST_CASE("decision-making baselines select their argmin") {
    const auto p = make_population({{10, 1}, {5, 3}}, {Direction::maximize, Direction::maximize});
    const auto c = CriterionConfig::uniform(Exponent(1), 2);
    CHECK(select_best(p, SelectionSpec::from_method("saw", c)).model_index == 1);
    CHECK(select_best(p, SelectionSpec::from_method("mew", c)).model_index == 1);

    const auto one = make_population({{1.0}, {2.0}});
    const auto ahp = select_best(one, SelectionSpec::from_method("ahp", CriterionConfig::uniform(Exponent(1), 1)));
    CHECK(ahp.model_index == 0);
    CHECK(ahp.normalized_vector[0] == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("alpha mapping") {
    const AlphaMapping focus_first{0};
    CHECK(focus_first.weights(0.7, 3) == std::vector<double>{0.7, 0.15000000000000002, 0.15000000000000002});
    CHECK(focus_first.weights(0.3, 1) == std::vector<double>{1.0});
    const AlphaMapping focus_second{1};
    CHECK(focus_second.weights(0.0, 2) == std::vector<double>{1.0, 0.0});
    CHECK_THROWS_AS(focus_first.weights(1.5, 2), Error);
}

TEST_CASE("sweep grouping") {
    std::mt19937_64 rng(79);
    const auto p = copa::testing::random_population(rng, 40, 2);
    const auto spec = rank_spec(kInf, {0.5, 0.5});
    const auto s = sweep_alpha(p, spec, 50, AlphaMapping{0});
    CHECK(s.grid_size == 50);
    CHECK(s.alphas.front() == 0.0);
    CHECK(s.alphas.back() == 1.0);
    CHECK(s.entries.front().lo == 0.0);
    CHECK(s.entries.back().hi == 1.0);
    std::size_t covered = 0;
    for (std::size_t e = 0; e < s.entries.size(); ++e) {
        const auto& entry = s.entries[e];
        covered += entry.grid_points;
        CHECK(entry.representative_alpha == doctest::Approx((entry.lo + entry.hi) / 2));
        if (e > 0) {
            CHECK(entry.lo == s.entries[e - 1].hi);
            CHECK(entry.selection.model_index != s.entries[e - 1].selection.model_index);
        }
    }
    CHECK(covered == 50);

    const auto one_hot = select_best(p, SelectionSpec::from_method("rank", CriterionConfig::make(Exponent::infinity(), {0.0, 1.0})));
    CHECK(s.grid_selection.front() == one_hot.model_index);
    const auto second = p.column(1);
    CHECK(p.scores()(one_hot.model_index, 1) == *std::min_element(second.begin(), second.end()));

    CHECK(sweep_alpha(p, spec, 2, AlphaMapping{0}).entries.size() <= 2);
    CHECK_THROWS_AS(sweep_alpha(p, spec, 1, AlphaMapping{0}), Error);
}

TEST_CASE("sweeps are deterministic") {
    std::mt19937_64 rng(83);
    const auto p = copa::testing::random_population(rng, 80, 3, true);
    const auto spec = rank_spec(2, {0.2, 0.3, 0.5});
    const auto a = sweep_alpha(p, spec, 37, AlphaMapping{2});
    const auto b = sweep_alpha(p, spec, 37, AlphaMapping{2});
    CHECK(a.grid_selection == b.grid_selection);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t e = 0; e < a.entries.size(); ++e) {
        CHECK(a.entries[e].lo == b.entries[e].lo);
        CHECK(a.entries[e].hi == b.entries[e].hi);
        CHECK(a.entries[e].selection.criterion_value == b.entries[e].selection.criterion_value);
    }
}

TEST_CASE("rank table breaks ties with p = 8 then row index") {
    const auto p = build_population({"A", "B", "C"},
                                    {{"f1", Direction::minimize, {}}, {"f2", Direction::minimize, {}}},
                                    std::vector<std::vector<double>>{{1, 3}, {2, 2}, {3, 1}});
    const auto t = rank_methods(p, {"copa:p=1"});
    CHECK(t.values[0][0] == doctest::Approx(t.values[1][0]));
    CHECK(t.values[1][0] == doctest::Approx(t.values[2][0]));
    CHECK(t.ranks[1][0] == 1);
    CHECK(t.ranks[0][0] == 2);
    CHECK(t.ranks[2][0] == 3);
}

TEST_CASE("rank table basics") {
    const auto unanimous = make_population({{1, 1}, {2, 2}});
    const auto t = rank_methods(unanimous, {"copa:p=1", "copa:p=inf", "pnorm:p=2", "delta-mean", "raw:f1", "saw", "ahp", "mew"});
    for (std::size_t c = 0; c < t.criteria.size(); ++c) {
        CHECK(t.ranks[0][c] == 1);
        CHECK(t.ranks[1][c] == 2);
    }

    const auto single = rank_methods(make_population({{5.0}}), {"copa:p=2"});
    CHECK(single.ranks == std::vector<std::vector<int>>{{1}});

    std::mt19937_64 rng(89);
    const auto many = copa::testing::random_tied_population(rng, 25, 3, 3);
    const auto tied = rank_methods(many, {"copa:p=1", "pnorm:p=2", "raw:f2"});
    for (std::size_t c = 0; c < 3; ++c) {
        std::set<int> seen;
        for (const auto& row : tied.ranks) seen.insert(row[c]);
        CHECK(seen.size() == 25);
        CHECK(*seen.begin() == 1);
        CHECK(*seen.rbegin() == 25);
    }

    CHECK_THROWS_AS(rank_methods(unanimous, {"copa:p=abc"}), Error);
    CHECK_THROWS_AS(rank_methods(unanimous, {"raw:zzz"}), Error);
    CHECK_THROWS_AS(rank_methods(unanimous, {}), Error);
    try {
        rank_methods(make_population({{0.0, 1.0}, {1.0, 2.0}}), {"delta-mean"});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("criterion column 'delta-mean'") != std::string::npos);
    }
}

TEST_CASE("raw-scale Tchebycheff ignores the first objective on the synthetic front") {
    const auto p = generate_synthetic_front(240, 42);
    const auto y1 = p.column(0);
    const auto y1_max = *std::max_element(y1.begin(), y1.end());
    const auto raw = SelectionSpec::from_method("raw", CriterionConfig::uniform(Exponent::infinity(), 2));
    const auto s = sweep_alpha(p, raw, 50, AlphaMapping{0});
    for (std::size_t g = 0; g < s.alphas.size() && s.alphas[g] < 0.75; ++g)
        CHECK(p.scores()(s.grid_selection[g], 0) == y1_max);

    // Delta normalization leans the other way: by alpha = 0.7 it already
    // picks low-y1 models.
    const auto delta = SelectionSpec::from_method("delta", CriterionConfig::make(Exponent::infinity(), {0.7, 0.3}));
    CHECK(select_best(p, delta).raw_vector[0] < 0.1);
}
