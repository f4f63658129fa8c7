#include "stlwb/interfaces/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "stlwb/stl/parser.hpp"

namespace stlwb::interfaces {

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ExperimentError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ExperimentError(path + ": " + e.what());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<SuiteRow> load_suite(const std::string& path) {
  auto j = read_json(path);
  std::vector<SuiteRow> rows;
  try {
    for (const auto& r : j.at("rows")) {
      SuiteRow row;
      row.type = r.at("type");
      row.nl = r.at("nl");
      row.ground_truth = r.at("groundTruth");
      row.demos = r.at("demos").get<std::vector<std::string>>();
      if (r.contains("reference")) {
        row.reference_uis = r["reference"].value("uis", 0.0);
        row.reference_sr = r["reference"].value("sr", 0.0);
      }
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ExperimentError(path + ": " + e.what());
  }
  return rows;
}

std::map<std::string, std::vector<std::string>> load_paraphrases(const std::string& path) {
  auto j = read_json(path);
  try {
    return j.at("sentences").get<std::map<std::string, std::vector<std::string>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ExperimentError(path + ": " + e.what());
  }
}

std::vector<ExperimentResult> run_experiment_suite(const std::vector<SuiteRow>& suite,
                                                   const std::map<std::string, std::vector<std::string>>& paraphrases,
                                                   const dialogue::Resources& r, const std::string& data_dir,
                                                   const dialogue::PipelineConfig& c) {
  std::vector<ExperimentResult> out;
  for (const auto& row : suite) {
    std::vector<world::LabeledDemo> demos;
    for (const auto& name : row.demos) {
      const std::string path = data_dir + "/fixtures/" + name + ".json";
      if (!std::filesystem::exists(path)) throw ExperimentError("missing fixture '" + name + "' for \"" + row.nl + "\"");
      demos.push_back(world::load_fixture(path, *r.grid));
    }
    stl::Formula truth = stl::parse_formula(row.ground_truth, world::world_signature());
    std::vector<std::string> texts{row.nl};
    if (auto it = paraphrases.find(row.nl); it != paraphrases.end() && !it->second.empty()) texts = it->second;

    ExperimentResult res;
    res.row = row;
    res.paraphrase_count = texts.size();
    res.n_demos = demos.size();
    std::map<std::string, std::size_t> predictions;
    std::size_t hits = 0;
    for (const auto& text : texts) {
      dialogue::OracleUser oracle(truth, *r.lexicon, *r.grid, c.probe_horizon);
      auto o = dialogue::run_pipeline(text, demos, oracle, r, c, truth);
      auto m = o.session.metrics();
      res.mean_efs += static_cast<double>(m.enumerated_formulas);
      res.mean_uis += static_cast<double>(m.user_interactions);
      res.mean_runtime += m.runtime_seconds;
      if (m.success.value_or(false)) ++hits;
      else res.failures.push_back(text);
      ++predictions[o.formula ? stl::format_formula(dialogue::normalize(*o.formula)) : "none"];
    }
    const double n = static_cast<double>(texts.size());
    res.mean_efs /= n;
    res.mean_uis /= n;
    res.mean_runtime /= n;
    res.success_rate = static_cast<double>(hits) / n;
    std::size_t best = 0;
    for (const auto& [f, count] : predictions)
      if (count > best) {
        best = count;
        res.most_frequent_prediction = f;
      }
    out.push_back(std::move(res));
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << "type,nl,nDemos,enumeratedFormulas,userInteractions,successRate,runtimeSeconds,mostFrequentPrediction\n";
  for (const auto& r : results) {
    std::ostringstream line;
    line << std::fixed << r.row.type << ',' << csv_field(r.row.nl) << ',' << r.n_demos << ',' << std::setprecision(1)
         << r.mean_efs << ',' << r.mean_uis << ',' << std::setprecision(2) << r.success_rate << ','
         << std::setprecision(4) << r.mean_runtime << ',' << csv_field(r.most_frequent_prediction);
    out << line.str() << '\n';
  }
}

double overall_success(const std::vector<ExperimentResult>& results) {
  double hits = 0, total = 0;
  for (const auto& r : results) {
    hits += r.success_rate * static_cast<double>(r.paraphrase_count);
    total += static_cast<double>(r.paraphrase_count);
  }
  return total == 0 ? 0 : hits / total;
}

}  // namespace stlwb::interfaces
