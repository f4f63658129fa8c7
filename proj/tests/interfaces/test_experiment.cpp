#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stlwb/interfaces/experiment.hpp"

using namespace stlwb;
using namespace stlwb::interfaces;

namespace {
const std::string kData = STLWB_DATA_DIR;

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}
}  // namespace

TEST_CASE("paraphrase corpus has at least 20 paraphrases per suite sentence") {
  auto suite = load_suite(kData + "/suite.json");
  auto para = load_paraphrases(kData + "/paraphrases.json");
  CHECK(suite.size() == 10);
  for (const auto& row : suite) {
    auto it = para.find(row.nl);
    REQUIRE_MESSAGE(it != para.end(), row.nl);
    CHECK(it->second.size() >= 20);
    CHECK(it->second.front() == row.nl);
  }
}

TEST_CASE("paraphrase suite reaches the target success rates") {
  auto bundle = dialogue::NlBundle::load(kData);
  auto res = run_experiment_suite(load_suite(kData + "/suite.json"), load_paraphrases(kData + "/paraphrases.json"),
                                  bundle.resources(world::default_grid()), kData);
  REQUIRE(res.size() == 10);
  for (const auto& r : res) {
    for (const auto& f : r.failures) MESSAGE("miss [" << r.row.nl << "]: " << f);
    CHECK_MESSAGE(std::abs(r.mean_uis - r.row.reference_uis) <= 1.0, r.row.nl);
    CHECK(r.n_demos == r.row.demos.size());
    if (r.row.reference_sr >= 1.0) CHECK_MESSAGE(r.success_rate == 1.0, r.row.nl);
  }
  CHECK(overall_success(res) >= 0.70);

  std::ostringstream csv;
  write_csv(csv, res);
  auto ls = lines(csv.str());
  REQUIRE(ls.size() == 11);
  CHECK(ls[0] == "type,nl,nDemos,enumeratedFormulas,userInteractions,successRate,runtimeSeconds,mostFrequentPrediction");
  CHECK(ls[1].rfind("C,", 0) == 0);
  CHECK(ls[10].rfind("M,", 0) == 0);
}

TEST_CASE("empty suite writes only the header") {
  std::ostringstream csv;
  write_csv(csv, {});
  CHECK(lines(csv.str()).size() == 1);
  CHECK(overall_success({}) == 0.0);
}

TEST_CASE("missing fixture is an error") {
  auto bundle = dialogue::NlBundle::load(kData);
  SuiteRow row{"S", "pick up the purple cube", "F[0,15](itemOnRobot(purpleCube))", {"no_such_fixture"}, 1, 1};
  CHECK_THROWS_AS(run_experiment_suite({row}, {}, bundle.resources(world::default_grid()), kData), ExperimentError);
}

TEST_CASE("rows without paraphrases use their own sentence") {
  auto bundle = dialogue::NlBundle::load(kData);
  SuiteRow row{"S", "pick up the purple cube", "F[0,15](itemOnRobot(purpleCube))", {"pick_purple"}, 1, 1};
  auto res = run_experiment_suite({row}, {}, bundle.resources(world::default_grid()), kData);
  REQUIRE(res.size() == 1);
  CHECK(res[0].paraphrase_count == 1);
  CHECK(res[0].success_rate == 1.0);
  CHECK(res[0].most_frequent_prediction == "F[0,15](itemOnRobot(purpleCube))");
}
