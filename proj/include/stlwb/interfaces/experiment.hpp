#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "stlwb/dialogue/oracle.hpp"

namespace stlwb::interfaces {

struct SuiteRow {
  std::string type;  // C, S, Q or M
  std::string nl;
  std::string ground_truth;
  std::vector<std::string> demos;  // fixture names
  double reference_uis = 0;
  double reference_sr = 0;
};

struct ExperimentResult {
  SuiteRow row;
  std::size_t paraphrase_count = 0;
  std::size_t n_demos = 0;
  double mean_efs = 0;
  double mean_uis = 0;
  double success_rate = 0;
  double mean_runtime = 0;
  std::string most_frequent_prediction;
  std::vector<std::string> failures;  // paraphrases without an exact match
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<SuiteRow> load_suite(const std::string& path);
/// Sentence -> paraphrases (the first one is the sentence itself).
std::map<std::string, std::vector<std::string>> load_paraphrases(const std::string& path);

/// Runs every paraphrase of every row with the oracle. Rows without
/// paraphrases use their sentence alone. Fixtures are read from
/// `<data_dir>/fixtures/<name>.json`; a missing one throws ExperimentError.
std::vector<ExperimentResult> run_experiment_suite(const std::vector<SuiteRow>& suite,
                                                   const std::map<std::string, std::vector<std::string>>& paraphrases,
                                                   const dialogue::Resources& r, const std::string& data_dir,
                                                   const dialogue::PipelineConfig& c = {});

/// type,nl,nDemos,enumeratedFormulas,userInteractions,successRate,runtimeSeconds,mostFrequentPrediction
void write_csv(std::ostream& out, const std::vector<ExperimentResult>& results);

double overall_success(const std::vector<ExperimentResult>& results);

}  // namespace stlwb::interfaces
