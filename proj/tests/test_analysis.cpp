#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "compactvis/analysis.hpp"
#include "compactvis/errors.hpp"
#include "oracles.hpp"

using namespace compactvis;

namespace {

TimeSeries ts(std::vector<double> v) { return TimeSeries(std::move(v)); }

GridLayout random_grid(std::mt19937_64& gen, int side, int len, std::optional<int> qs = std::nullopt) {
  std::vector<TimeSeries> cells;
  for (int i = 0; i < side * side; ++i) cells.emplace_back(oracle::random_values(gen, len));
  return GridLayout::square(side, std::move(cells), qs);
}

TrialSpec trial(TaskId task, Answer key, TaskParams params = {}) {
  TrialSpec t;
  t.trial_id = "t";
  t.task = task;
  t.answer_type = answer_type_of(task);
  t.key = std::move(key);
  t.params = std::move(params);
  return t;
}

}  // namespace

TEST_CASE("summary statistics") {
  SUBCASE("three values") {
    const auto st = summary_stats(ts({10, 20, 30}), 3);
    REQUIRE(st.size() == 1);
    CHECK(st[0].min == 10);
    CHECK(st[0].q1 == 15);
    CHECK(st[0].median == 20);
    CHECK(st[0].q3 == 25);
    CHECK(st[0].max == 30);
  }
  SUBCASE("constant series") {
    for (const auto& s : summary_stats(ts(std::vector<double>(10, 7.0)), 3)) {
      CHECK(s.min == 7.0);
      CHECK(s.q1 == 7.0);
      CHECK(s.median == 7.0);
      CHECK(s.q3 == 7.0);
      CHECK(s.max == 7.0);
    }
  }
  SUBCASE("interval count and short tail") {
    CHECK(summary_stats(ts(std::vector<double>(72, 1.0)), 3).size() == 24);
    const auto st = summary_stats(ts({1, 2, 3, 4, 5, 6, 7}), 3);
    REQUIRE(st.size() == 3);
    CHECK(st[2].start_step == 6);
    CHECK(st[2].end_step == 6);
    CHECK(st[2].median == 7);
  }
  SUBCASE("bad interval") { CHECK_THROWS_AS(summary_stats(ts({1, 2}), 0), RangeError); }
  SUBCASE("oracle on random series") {
    std::mt19937_64 gen(1);
    for (int rep = 0; rep < 200; ++rep) {
      const int len = 2 + static_cast<int>(gen() % 40);
      const int k = 1 + static_cast<int>(gen() % 7);
      const auto v = oracle::random_values(gen, len);
      const auto st = summary_stats(ts(v), k);
      REQUIRE(st.size() == static_cast<std::size_t>((len + k - 1) / k));
      for (const auto& s : st) {
        const std::vector<double> part(v.begin() + s.start_step, v.begin() + s.end_step + 1);
        CHECK(s.min == doctest::Approx(oracle::quantile(part, 0.0)).epsilon(1e-12));
        CHECK(s.q1 == doctest::Approx(oracle::quantile(part, 0.25)).epsilon(1e-12));
        CHECK(s.median == doctest::Approx(oracle::quantile(part, 0.5)).epsilon(1e-12));
        CHECK(s.q3 == doctest::Approx(oracle::quantile(part, 0.75)).epsilon(1e-12));
        CHECK(s.max == doctest::Approx(oracle::quantile(part, 1.0)).epsilon(1e-12));
        CHECK((s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max));
      }
    }
  }
}

TEST_CASE("slope and maximum") {
  CHECK(slope(ts({20, 90, 70})) == 50);
  CHECK(slope(ts({80, 0, 30})) == -50);
  CHECK(slope(ts({4, 4, 4})) == 0);
  CHECK(global_max_time(ts({1, 2, 3, 4})) == 3);
  CHECK(global_max_time(ts({5, 9, 9, 3})) == 1);

  std::mt19937_64 gen(2);
  for (int rep = 0; rep < 200; ++rep) {
    auto v = oracle::random_values(gen, 30);
    v[gen() % 30] = 100;
    v[gen() % 30] = 100;
    int first = 0;
    for (int i = 1; i < 30; ++i)
      if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(first)]) first = i;
    CHECK(global_max_time(ts(v)) == first);
  }
}

TEST_CASE("threshold and range predicates") {
  const auto s = ts({50, 60, 70, 65, 50});
  CHECK_FALSE(exceeds_threshold(s, {0, 4}, 70));
  CHECK(exceeds_threshold(s, {0, 4}, 69.9));
  CHECK_FALSE(exceeds_threshold(s, {3, 4}, 69.9));
  CHECK(exceeds_threshold(ts({0, 70.1, 0}), {1, 2}, 70));

  CHECK(within_range(ts({3, 3, 3}), 0.5));
  CHECK_FALSE(within_range(ts({50, 66, 50}), 15));
  CHECK(within_range(ts({50, 65, 35}), 15));
  CHECK_THROWS_AS(within_range(ts({1, 2}), 0), RangeError);
}

TEST_CASE("quadrant average slope") {
  std::mt19937_64 gen(3);
  const auto g = random_grid(gen, 9, 12, 3);
  const TimeInterval full{0, 11};
  const TimeInterval part{2, 7};
  for (auto q : g.quadrants()) {
    double a = 0, b = 0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const auto& s = g.at(q.row * 3 + r, q.col * 3 + c);
        a += slope(s);
        b += s[7] - s[2];
      }
    CHECK(quadrant_avg_slope(g, q, full) == doctest::Approx(a / 9).epsilon(1e-12));
    CHECK(quadrant_avg_slope(g, q, part) == doctest::Approx(b / 9).epsilon(1e-12));
  }
  CHECK_THROWS_AS(quadrant_avg_slope(g, {3, 0}, full), RangeError);

  std::vector<TimeSeries> flat(81, ts(std::vector<double>(12, 40.0)));
  CHECK(quadrant_avg_slope(GridLayout::square(9, flat, 3), {1, 1}, part) == 0.0);
}

TEST_CASE("dynamic time warping") {
  CHECK(dtw_cost(std::vector<double>{0}, std::vector<double>{5}).cost == 5);
  CHECK(dtw_cost(ts({1, 2, 3}), ts({1, 2, 3})).cost == 0);
  // stretching is free when values repeat
  CHECK(dtw_cost(ts({1, 2, 3}), ts({1, 1, 2, 2, 3})).cost == 0);

  std::mt19937_64 gen(4);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 6), m = 1 + static_cast<int>(gen() % 6);
    const auto a = oracle::random_values(gen, n), b = oracle::random_values(gen, m);
    const double cost = dtw_cost(a, b).cost;
    CHECK(cost == oracle::dtw_bruteforce(a, b));
    CHECK(cost == dtw_cost(b, a).cost);
    CHECK(cost >= 0.0);
  }
}

TEST_CASE("quadrant homogeneity") {
  std::mt19937_64 gen(5);
  const auto g = random_grid(gen, 9, 10, 3);
  CHECK(quadrant_pairs(g, {1, 2}).size() == 36);

  std::vector<TimeSeries> same(81, ts({1, 5, 2, 8}));
  CHECK(quadrant_homogeneity(GridLayout::square(9, same, 3), {0, 0}) == 0.0);

  double manual = 0;
  const auto members = quadrant_members(g, {2, 0});
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const auto a = g.cells[static_cast<std::size_t>(members[i])].values();
      const auto b = g.cells[static_cast<std::size_t>(members[j])].values();
      manual += dtw_cost(a, b).cost;
    }
  CHECK(quadrant_homogeneity(g, {2, 0}) == doctest::Approx(manual).epsilon(1e-12));

  // shifting every value by a constant leaves all pair costs unchanged
  std::vector<TimeSeries> shifted;
  for (const auto& s : g.cells) {
    std::vector<double> v(s.begin(), s.end());
    for (auto& x : v) x += 17.5;
    shifted.emplace_back(v);
  }
  const auto h = GridLayout::square(9, shifted, 3);
  for (auto q : g.quadrants())
    CHECK(quadrant_homogeneity(h, q) == doctest::Approx(quadrant_homogeneity(g, q)).epsilon(1e-9));
}

TEST_CASE("task predicates produce keys") {
  const TimeDomain td(4);
  SUBCASE("T01 unique maximum at the marker") {
    std::vector<TimeSeries> cells(9, ts({10, 10, 10, 10}));
    cells[4] = ts({10, 10, 90, 10});
    TaskParams p;
    p.marker_steps = {2};
    auto check = evaluate_task(TaskId::T01, GridLayout::square(3, cells), p, td);
    REQUIRE(check.ok());
    CHECK(std::get<SingleGraphAnswer>(*check.key).index == 4);
    cells[5] = ts({10, 10, 90, 10});
    CHECK_FALSE(evaluate_task(TaskId::T01, GridLayout::square(3, cells), p, td).ok());
  }
  SUBCASE("T02 needs a rising series") {
    std::vector<TimeSeries> cells(9, ts({50, 50, 50, 40}));
    auto check = evaluate_task(TaskId::T02, GridLayout::square(3, cells), {}, td);
    CHECK_FALSE(check.ok());
    CHECK(check.failure.find("increasing") != std::string::npos);
    cells[7] = ts({10, 50, 50, 40});
    check = evaluate_task(TaskId::T02, GridLayout::square(3, cells), {}, td);
    REQUIRE(check.ok());
    CHECK(std::get<SingleGraphAnswer>(*check.key).index == 7);
  }
  SUBCASE("T05 key is the absolute difference") {
    TaskParams p;
    p.marker_steps = {0, 3};
    auto check = evaluate_task(TaskId::T05, GridLayout(1, 2, {ts({20, 0, 0, 0}), ts({0, 0, 0, 65})}), p, td);
    REQUIRE(check.ok());
    CHECK(std::get<ValueAnswer>(*check.key).value == 45);
  }
  SUBCASE("T07 qualifying count bounds") {
    std::vector<TimeSeries> cells(25, ts({10, 10, 10, 10}));
    TaskParams p;
    p.threshold = 70;
    p.interval = TimeInterval{1, 2};
    for (int i = 0; i < 4; ++i) cells[static_cast<std::size_t>(i)] = ts({10, 71, 10, 10});
    CHECK_FALSE(evaluate_task(TaskId::T07, GridLayout::square(5, cells), p, td).ok());
    cells[10] = ts({10, 10, 80, 10});
    cells[11] = ts({99, 10, 10, 99});  // outside the interval
    auto check = evaluate_task(TaskId::T07, GridLayout::square(5, cells), p, td);
    REQUIRE(check.ok());
    CHECK(std::get<MultiGraphAnswer>(*check.key).indices == std::vector<int>{0, 1, 2, 3, 10});
  }
}

TEST_CASE("trial scoring") {
  const TimeDomain td(4);
  SUBCASE("T07 accumulates misses and false alarms") {
    std::vector<TimeSeries> cells(25, ts({0, 0, 0, 0}));
    const auto t = trial(TaskId::T07, MultiGraphAnswer{{0, 1, 2}});
    const auto s = score_trial(t, GridLayout::square(5, cells), Answer{MultiGraphAnswer{{0, 1, 3}}}, td);
    CHECK(s.error == 2);
    CHECK(score_trial(t, GridLayout::square(5, cells), Answer{MultiGraphAnswer{{2, 1, 0}}}, td).error == 0);
    CHECK(score_trial(t, GridLayout::square(5, cells), Answer{MultiGraphAnswer{}}, td).error == 3);
  }
  SUBCASE("T02 error is the slope difference") {
    std::vector<TimeSeries> cells(9, ts({50, 50, 50, 50}));
    cells[0] = ts({20, 0, 0, 70});
    cells[1] = ts({30, 0, 0, 58.72});
    const auto t = trial(TaskId::T02, SingleGraphAnswer{0});
    const auto s = score_trial(t, GridLayout::square(3, cells), Answer{SingleGraphAnswer{1}}, td);
    CHECK(s.error == doctest::Approx(21.28).epsilon(1e-12));
  }
  SUBCASE("binary tasks") {
    std::vector<TimeSeries> cells(25, ts({0, 0, 0, 0}));
    const auto t9 = trial(TaskId::T09, YesNoAnswer{true});
    CHECK(score_trial(t9, GridLayout::square(5, cells), Answer{YesNoAnswer{false}}, td).error == 1);
    CHECK(score_trial(t9, GridLayout::square(5, cells), Answer{YesNoAnswer{true}}, td).error == 0);
    const auto t4 = trial(TaskId::T04, SingleGraphAnswer{1});
    const GridLayout pair(1, 2, {ts({0, 0, 0, 0}), ts({0, 0, 0, 0})});
    CHECK(score_trial(t4, pair, Answer{SingleGraphAnswer{0}}, td).error == 1);
  }
  SUBCASE("T06 error in display hours") {
    std::vector<TimeSeries> cells(9, ts({0, 0, 0, 0}));
    const TimeDomain day(72);
    std::vector<TimeSeries> long_cells(9, ts(std::vector<double>(72, 0.0)));
    const auto t = trial(TaskId::T06, TimeSliderAnswer{10});
    const auto s = score_trial(t, GridLayout::square(3, long_cells), Answer{TimeSliderAnswer{13}}, day);
    CHECK(s.error == doctest::Approx(3 * 24.0 / 71.0).epsilon(1e-12));
    CHECK_THROWS_AS(score_trial(t, GridLayout::square(3, long_cells), Answer{TimeSliderAnswer{72}}, day),
                    ValidationError);
  }
  SUBCASE("T10 records both measures") {
    std::mt19937_64 gen(6);
    const auto g = random_grid(gen, 9, 6, 3);
    const auto check = evaluate_task(TaskId::T10, g, {}, TimeDomain(6));
    REQUIRE(check.ok());
    const auto key = std::get<QuadrantAnswer>(*check.key).quadrant;
    auto t = trial(TaskId::T10, *check.key);
    const QuadrantId other{key.row == 0 ? 1 : 0, key.col};
    const auto s = score_trial(t, g, Answer{QuadrantAnswer{other}}, TimeDomain(6));
    CHECK(s.error == 1);
    REQUIRE(s.dtw_cost_gap.has_value());
    CHECK(*s.dtw_cost_gap == doctest::Approx(quadrant_homogeneity(g, other) - quadrant_homogeneity(g, key)));
    CHECK(*s.dtw_cost_gap > 0);
  }
  SUBCASE("skips and mismatches") {
    std::vector<TimeSeries> cells(9, ts({0, 0, 0, 0}));
    const auto t = trial(TaskId::T01, SingleGraphAnswer{0}, TaskParams{{1}});
    CHECK(score_trial(t, GridLayout::square(3, cells), std::nullopt, td).skipped);
    CHECK_THROWS_AS(score_trial(t, GridLayout::square(3, cells), Answer{YesNoAnswer{true}}, td), ValidationError);
    CHECK_THROWS_AS(score_trial(t, GridLayout::square(3, cells), Answer{SingleGraphAnswer{9}}, td), ValidationError);
  }
}
