#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "firmscale/growth.hpp"
#include "firmscale/synth.hpp"

using namespace firmscale;

namespace {

FirmRecord rec(const char* id, int year, std::optional<double> sales) {
  return {id, year, ClassificationCode("3520"), sales, {}, {}};
}

FirmPanel make_panel(std::vector<FirmRecord> records) {
  return FirmPanel(std::move(records), "test");
}

}  // namespace

TEST_CASE("one observation per consecutive pair") {
  const auto panel = make_panel({rec("A", 1990, 100.0), rec("A", 1991, 200.0)});
  const auto obs = extract_growth_observations(panel, Measure::kSales);
  REQUIRE(obs.observations.size() == 1);
  const auto& o = obs.observations[0];
  CHECK(o.year0 == 1990);
  CHECK(o.s0 == 100.0);
  CHECK(o.s1 == 200.0);
  CHECK(o.ratio == 2.0);
  CHECK(o.log_growth == doctest::Approx(0.6931471805599453).epsilon(1e-12));
  CHECK(o.classification.digits() == "3520");
  CHECK(obs.filter_log.total() == 0);
}

TEST_CASE("a gap year produces nothing and is logged as missing") {
  const auto panel = make_panel({rec("A", 1990, 100.0), rec("A", 1992, 150.0)});
  const auto obs = extract_growth_observations(panel, Measure::kSales);
  CHECK(obs.observations.empty());
  CHECK(obs.filter_log.missing() == 1);
  CHECK(obs.candidates_examined() == 1);
}

TEST_CASE("zero initial size is excluded as nonpositive") {
  const auto panel = make_panel({rec("A", 1990, 0.0), rec("A", 1991, 5.0)});
  const auto obs = extract_growth_observations(panel, Measure::kSales);
  CHECK(obs.observations.empty());
  CHECK(obs.filter_log.nonpositive() == 1);
}

TEST_CASE("missing measure value at either end counts as missing") {
  const auto panel = make_panel({rec("A", 1990, std::nullopt),
                                 rec("A", 1991, 5.0), rec("A", 1992, 6.0)});
  const auto obs = extract_growth_observations(panel, Measure::kSales);
  CHECK(obs.observations.size() == 1);  // 1991->1992
  CHECK(obs.filter_log.missing() == 1); // 1990->1991
}

TEST_CASE("candidate accounting identity on a mixed panel") {
  const auto panel = make_panel({
      rec("A", 1990, 100.0), rec("A", 1991, 200.0), rec("A", 1993, 50.0),
      rec("B", 1990, 0.0), rec("B", 1991, 10.0), rec("B", 1992, 10.0),
      rec("C", 1990, 1.0),  // single record, no candidate
  });
  const auto obs = extract_growth_observations(panel, Measure::kSales);
  // candidates: A 1990 (obs), A 1991 (gap), B 1990 (nonpositive), B 1991 (obs)
  CHECK(obs.observations.size() == 2);
  CHECK(obs.filter_log.missing() == 1);
  CHECK(obs.filter_log.nonpositive() == 1);
  CHECK(obs.candidates_examined() == 4);
}

TEST_CASE("unknown measure name") {
  CHECK_THROWS_AS(measure_from_string("revenue"), std::invalid_argument);
  CHECK(measure_from_string("employees") == Measure::kEmployees);
}

TEST_CASE("outlier rule: strict one-sided percentage threshold") {
  const auto panel = make_panel({
      rec("A", 1990, 100.0), rec("A", 1991, 1500.0),  // ratio 15 -> 1400%
      rec("B", 1990, 100.0), rec("B", 1991, 1100.0),  // ratio 11 -> 1000%
      rec("C", 1990, 100.0), rec("C", 1991, 1.0),     // ratio 0.01, shrink
  });
  const auto raw = extract_growth_observations(panel, Measure::kSales);
  const auto filtered = filter_outliers(raw);
  REQUIRE(filtered.observations.size() == 2);
  CHECK(filtered.observations[0].firm_id == "B");  // ratio 11 kept, boundary
  CHECK(filtered.observations[1].firm_id == "C");  // shrinkers never removed
  CHECK(filtered.filter_log.outlier() == 1);
  CHECK(filtered.candidates_examined() == raw.candidates_examined());

  CHECK_THROWS_AS(filter_outliers(raw, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(filter_outliers(raw, -10.0), std::invalid_argument);
}

TEST_CASE("infinite threshold leaves the set identical to extraction") {
  SynthConfig cfg;
  cfg.n_firms = 50;
  cfg.n_years = 4;
  cfg.seed = 3;
  const auto panel = gen_power_law_laplace(cfg, 0.25, 1.0);
  const auto raw = extract_growth_observations(panel, Measure::kSales);
  const auto filtered =
      filter_outliers(raw, std::numeric_limits<double>::infinity());
  REQUIRE(filtered.observations.size() == raw.observations.size());
  for (std::size_t i = 0; i < raw.observations.size(); ++i) {
    CHECK(filtered.observations[i].ratio == raw.observations[i].ratio);
  }
  CHECK(filtered.filter_log == raw.filter_log);
}

TEST_CASE("exp(log_growth) equals ratio within 1e-12 relative error") {
  SynthConfig cfg;
  cfg.n_firms = 200;
  cfg.n_years = 3;
  cfg.seed = 7;
  const auto panel = gen_power_law_laplace(cfg, 0.25, 1.0);
  const auto obs = extract_growth_observations(panel, Measure::kSales);
  REQUIRE(!obs.observations.empty());
  for (const auto& o : obs.observations) {
    CHECK(std::fabs(std::exp(o.log_growth) - o.ratio) <= 1e-12 * o.ratio);
    CHECK(o.ratio == o.s1 / o.s0);
  }
}

TEST_CASE("pool keeps year0 inside the window") {
  const auto panel = make_panel({
      rec("A", 1980, 1.0), rec("A", 1981, 2.0), rec("A", 1982, 3.0),
      rec("A", 1983, 4.0), rec("A", 1984, 5.0), rec("A", 1985, 6.0),
      rec("A", 1986, 7.0),
  });
  const auto obs = extract_growth_observations(panel, Measure::kSales);
  REQUIRE(obs.observations.size() == 6);  // year0 1980..1985

  const auto window = pool(obs, 1981, 1985);
  CHECK(window.observations.size() == 5);
  CHECK(window.observations.front().year0 == 1981);
  CHECK(window.observations.back().year0 == 1985);  // uses s1 from 1986

  CHECK(pool(obs, 1980, 1980).observations.size() == 1);  // degenerate window
  CHECK(pool(obs, 1990, 1995).observations.empty());      // disjoint
  CHECK_THROWS_AS(pool(obs, 1985, 1981), std::invalid_argument);
}

TEST_CASE("pooling adjacent windows partitions the pooled superset") {
  SynthConfig cfg;
  cfg.n_firms = 40;
  cfg.n_years = 9;
  cfg.seed = 11;
  const auto panel = gen_gibrat(cfg, 0.3);
  const auto obs = extract_growth_observations(panel, Measure::kSales);

  const auto left = pool(obs, 1980, 1983);
  const auto right = pool(obs, 1984, 1987);
  const auto whole = pool(obs, 1980, 1987);
  CHECK(left.observations.size() + right.observations.size() ==
        whole.observations.size());
  CHECK(left.filter_log.total() + right.filter_log.total() ==
        whole.filter_log.total());

  std::size_t j = 0;
  for (const auto& o : left.observations) {
    (void)o;
    ++j;
  }
  // concatenation order: every left observation appears before any of the
  // same firm's right observations in whole
  std::ostringstream a, b;
  write_observations(a, whole);
  ObservationSet concat;
  concat.measure = obs.measure;
  concat.observations = left.observations;
  concat.observations.insert(concat.observations.end(),
                             right.observations.begin(),
                             right.observations.end());
  // same multiset; sort both serializations line-wise for comparison
  auto lines = [](std::string text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    std::sort(out.begin(), out.end());
    return out;
  };
  write_observations(b, concat);
  CHECK(lines(a.str()) == lines(b.str()));
}

TEST_CASE("observation serialization columns") {
  const auto panel = make_panel({rec("A", 1990, 100.0), rec("A", 1991, 50.0)});
  const auto obs = extract_growth_observations(panel, Measure::kSales);
  std::ostringstream out;
  write_observations(out, obs);
  CHECK(out.str() ==
        "firm_id\tyear0\ts0\ts1\tratio\tlog_growth\tclassification\n"
        "A\t1990\t100\t50\t0.5\t" +
            std::string("-0.6931471805599453") + "\t3520\n");
}
