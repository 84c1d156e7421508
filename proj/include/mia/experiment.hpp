//
// Copyright 2026 The mia-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Experiment orchestration: load samples, optionally enrich them, score every
// sample under every (attack, k, w) cell of a sweep, evaluate each cell and
// pick the best cell per attack.

#ifndef MIA_EXPERIMENT_HPP_
#define MIA_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "mia/attacks.hpp"
#include "mia/enrich.hpp"
#include "mia/jsonl.hpp"
#include "mia/metrics.hpp"
#include "mia/parallel.hpp"
#include "mia/sample.hpp"
#include "mia/status.hpp"
#include "mia/synthetic.hpp"

namespace mia {

inline const std::vector<double> kDefaultKGrid = {0.05, 0.1, 0.2, 0.3, 0.4,
                                                  0.5,  0.6, 0.7, 0.8, 0.9};
inline const std::vector<int> kDefaultWGrid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

struct SweepGrid {
  std::vector<double> k_grid = kDefaultKGrid;
  std::vector<int> w_grid = kDefaultWGrid;
};

struct MetricsConfig {
  std::vector<double> fpr_caps = {0.01};
  std::vector<double> tpr_floors = {0.99};
};

struct ExperimentInput {
  // Exactly one of the two is set.
  std::optional<std::string> jsonl_path;
  std::optional<SynthConfig> synthetic;
  // When set, samples missing aux data needed by an attack are enriched
  // through this endpoint before scoring.
  std::optional<ScoringEndpoint> endpoint;
};

struct OutputConfig {
  std::optional<std::string> json_path;
  std::optional<std::string> csv_path;
};

struct ExperimentConfig {
  ExperimentInput input;
  std::vector<AttackConfig> attacks;
  std::optional<SweepGrid> sweep;
  MetricsConfig metrics;
  OutputConfig output;
  int parallelism = 1;
  uint64_t seed = 0;
};

struct SweepCell {
  AttackConfig attack;
  bool k_applicable = false;
  bool w_applicable = false;
  MetricReport metrics;

  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

struct BestCell {
  AttackKind attack = AttackKind::kLoss;
  size_t cell = 0;

  friend bool operator==(const BestCell&, const BestCell&) = default;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  std::vector<BestCell> best;
  uint64_t scoring_calls = 0;
  std::vector<double> fpr_caps;
  std::vector<double> tpr_floors;

  friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

namespace internal {

inline absl::Status ConfigError(absl::string_view message) {
  return MakeError(ErrorKind::kInvalidConfig, message);
}

template <typename T>
bool SortedAscending(const std::vector<T>& values) {
  return std::is_sorted(values.begin(), values.end());
}

}  // namespace internal

// Checks everything scoring and evaluation depend on; the input section is
// left to ValidateExperimentConfig.
inline absl::Status ValidateScoringConfig(const ExperimentConfig& cfg) {
  using internal::ConfigError;
  if (cfg.attacks.empty()) return ConfigError("no attacks configured");
  for (const AttackConfig& attack : cfg.attacks) {
    absl::Status status = attack.Validate();
    if (!status.ok()) {
      return ConfigError(absl::StrCat("attack ", AttackName(attack.attack),
                                      ": ", status.message()));
    }
  }
  if (cfg.sweep.has_value()) {
    const SweepGrid& grid = *cfg.sweep;
    if (grid.k_grid.empty() || grid.w_grid.empty()) {
      return ConfigError("sweep grids must be non-empty");
    }
    if (!internal::SortedAscending(grid.k_grid) ||
        !internal::SortedAscending(grid.w_grid)) {
      return ConfigError("sweep grids must be sorted ascending");
    }
    for (double k : grid.k_grid) {
      if (!(k > 0.0 && k <= 1.0)) {
        return ConfigError(absl::StrCat("k_grid value ", k,
                                        " is outside (0, 1]"));
      }
    }
    for (int w : grid.w_grid) {
      if (w < 1) {
        return ConfigError(absl::StrCat("w_grid value ", w, " is below 1"));
      }
    }
  }
  for (double v : cfg.metrics.fpr_caps) MIA_RETURN_IF_ERROR(ValidateRate(v, "fpr_cap"));
  for (double v : cfg.metrics.tpr_floors) MIA_RETURN_IF_ERROR(ValidateRate(v, "tpr_floor"));
  if (cfg.parallelism < 1) return ConfigError("parallelism must be >= 1");
  return absl::OkStatus();
}

inline absl::Status ValidateExperimentConfig(const ExperimentConfig& cfg) {
  using internal::ConfigError;
  if (cfg.input.jsonl_path.has_value() == cfg.input.synthetic.has_value()) {
    return ConfigError("input needs exactly one of 'jsonl' or 'synthetic'");
  }
  if (cfg.input.synthetic.has_value()) {
    MIA_RETURN_IF_ERROR(cfg.input.synthetic->Validate());
  }
  if (cfg.input.endpoint.has_value()) {
    MIA_RETURN_IF_ERROR(cfg.input.endpoint->Validate());
    MIA_RETURN_IF_ERROR(
        internal::SplitBaseUrl(cfg.input.endpoint->base_url).status());
  }
  return ValidateScoringConfig(cfg);
}

// Cells in configuration order. With a sweep, min_k expands over k_grid and
// win_k over w_grid x k_grid (w outer); other attacks have one cell.
inline std::vector<SweepCell> ExpandCells(const ExperimentConfig& cfg) {
  std::vector<SweepCell> cells;
  for (const AttackConfig& attack : cfg.attacks) {
    const bool k_applicable = UsesK(attack.attack);
    const bool w_applicable = UsesWindow(attack.attack);
    if (!cfg.sweep.has_value() || !k_applicable) {
      cells.push_back(SweepCell{.attack = attack,
                                .k_applicable = k_applicable,
                                .w_applicable = w_applicable,
                                .metrics = {}});
      continue;
    }
    const std::vector<int> ws =
        w_applicable ? cfg.sweep->w_grid : std::vector<int>{attack.w};
    for (int w : ws) {
      for (double k : cfg.sweep->k_grid) {
        AttackConfig cell = attack;
        cell.k = k;
        cell.w = w;
        cells.push_back(SweepCell{.attack = cell,
                                  .k_applicable = true,
                                  .w_applicable = w_applicable,
                                .metrics = {}});
      }
    }
  }
  return cells;
}

// Best cell per attack kind, by AUROC; ties go to the smaller w, then the
// smaller k.
inline std::vector<BestCell> SelectBestCells(
    const std::vector<SweepCell>& cells) {
  std::vector<BestCell> best;
  for (size_t i = 0; i < cells.size(); ++i) {
    const SweepCell& cell = cells[i];
    auto it = std::find_if(best.begin(), best.end(), [&](const BestCell& b) {
      return b.attack == cell.attack.attack;
    });
    if (it == best.end()) {
      best.push_back(BestCell{.attack = cell.attack.attack, .cell = i});
      continue;
    }
    const SweepCell& incumbent = cells[it->cell];
    const double a = cell.metrics.auroc;
    const double b = incumbent.metrics.auroc;
    const bool better =
        a > b ||
        (a == b && (cell.attack.w < incumbent.attack.w ||
                    (cell.attack.w == incumbent.attack.w &&
                     cell.attack.k < incumbent.attack.k)));
    if (better) it->cell = i;
  }
  return best;
}

inline EnrichNeeds NeedsFor(const std::vector<AttackConfig>& attacks,
                            int* n_neighbors) {
  EnrichNeeds needs;
  *n_neighbors = 0;
  for (const AttackConfig& attack : attacks) {
    if (attack.attack == AttackKind::kLowercase) needs.lowercase = true;
    if (attack.attack == AttackKind::kNeighborhood) {
      needs.neighbors = true;
      *n_neighbors = std::max(*n_neighbors, attack.n_neighbors);
    }
  }
  return needs;
}

inline absl::StatusOr<std::vector<ScoredSample>> LoadSamples(
    const ExperimentInput& input) {
  if (input.synthetic.has_value()) return GenerateSynthetic(*input.synthetic);
  if (input.jsonl_path.has_value()) return ReadJsonlFile(*input.jsonl_path);
  return internal::ConfigError("input has neither 'jsonl' nor 'synthetic'");
}

// Scores and evaluates already-loaded samples. Output order follows the
// configuration, never thread scheduling.
inline absl::StatusOr<SweepReport> RunExperimentOnSamples(
    const ExperimentConfig& cfg, const std::vector<ScoredSample>& samples) {
  MIA_RETURN_IF_ERROR(ValidateScoringConfig(cfg));
  for (const ScoredSample& sample : samples) {
    if (sample.label() == Label::kUnknown) {
      return MakeError(ErrorKind::kSchemaError,
                       absl::StrCat("sample '", sample.id(),
                                    "' has label 'unknown'; evaluation needs "
                                    "member/nonmember labels"));
    }
  }

  std::vector<SweepCell> cells = ExpandCells(cfg);
  const size_t n = samples.size();
  std::vector<MembershipScore> scores(cells.size() * n);
  std::atomic<uint64_t> calls{0};
  MIA_RETURN_IF_ERROR(ParallelFor(
      scores.size(), cfg.parallelism, [&](size_t index) -> absl::Status {
        const SweepCell& cell = cells[index / n];
        const ScoredSample& sample = samples[index % n];
        calls.fetch_add(1, std::memory_order_relaxed);
        absl::StatusOr<MembershipScore> score = Score(sample, cell.attack);
        if (!score.ok()) {
          return MakeError(
              ErrorKindOf(score.status()).value_or(ErrorKind::kSchemaError),
              absl::StrCat("sample '", sample.id(), "' under ",
                           AttackName(cell.attack.attack), ": ",
                           score.status().message()));
        }
        scores[index] = *std::move(score);
        return absl::OkStatus();
      }));

  std::vector<Label> labels;
  labels.reserve(n);
  for (const ScoredSample& sample : samples) labels.push_back(sample.label());
  for (size_t c = 0; c < cells.size(); ++c) {
    std::vector<MembershipScore> cell_scores(scores.begin() + c * n,
                                             scores.begin() + (c + 1) * n);
    MIA_ASSIGN_OR_RETURN(const LabeledScoreSet set,
                         LabeledScoreSet::FromScores(cell_scores, labels));
    MIA_ASSIGN_OR_RETURN(cells[c].metrics,
                         Evaluate(set, cfg.metrics.fpr_caps,
                                  cfg.metrics.tpr_floors));
  }

  SweepReport report;
  report.best = SelectBestCells(cells);
  report.cells = std::move(cells);
  report.scoring_calls = calls.load();
  report.fpr_caps = cfg.metrics.fpr_caps;
  report.tpr_floors = cfg.metrics.tpr_floors;
  return report;
}

inline absl::StatusOr<SweepReport> RunExperiment(const ExperimentConfig& cfg) {
  MIA_RETURN_IF_ERROR(ValidateExperimentConfig(cfg));
  MIA_ASSIGN_OR_RETURN(std::vector<ScoredSample> samples,
                       LoadSamples(cfg.input));
  if (cfg.input.endpoint.has_value()) {
    int n_neighbors = 0;
    const EnrichNeeds needs = NeedsFor(cfg.attacks, &n_neighbors);
    if (needs.any()) {
      MIA_ASSIGN_OR_RETURN(samples,
                           EnrichAll(samples, *cfg.input.endpoint, needs,
                                     n_neighbors, cfg.seed));
    }
  }
  return RunExperimentOnSamples(cfg, samples);
}

// ---------------------------------------------------------------------------
// Configuration files

namespace internal {

inline absl::StatusOr<AttackConfig> AttackFromJson(const nlohmann::json& json) {
  AttackConfig attack;
  std::string name;
  if (json.is_string()) {
    name = json.get<std::string>();
  } else if (json.is_object() && json.contains("attack") &&
             json["attack"].is_string()) {
    name = json["attack"].get<std::string>();
    attack.k = json.value("k", attack.k);
    attack.w = json.value("w", attack.w);
    attack.n_neighbors = json.value("n_neighbors", attack.n_neighbors);
  } else {
    return ConfigError("each attack must be a name or an object with 'attack'");
  }
  std::optional<AttackKind> kind = ParseAttackName(name);
  if (!kind.has_value()) {
    return ConfigError(absl::StrCat("unknown attack '", name, "'"));
  }
  attack.attack = *kind;
  return attack;
}

inline absl::StatusOr<ScoringEndpoint> EndpointFromJson(
    const nlohmann::json& json) {
  ScoringEndpoint endpoint;
  if (json.is_string()) {
    endpoint.base_url = json.get<std::string>();
    return endpoint;
  }
  if (!json.is_object() || !json.contains("url")) {
    return ConfigError("endpoint must be a URL string or an object with 'url'");
  }
  endpoint.base_url = json["url"].get<std::string>();
  endpoint.timeout = std::chrono::milliseconds(
      json.value("timeout_ms", static_cast<int64_t>(endpoint.timeout.count())));
  endpoint.max_parallel = json.value("max_parallel", endpoint.max_parallel);
  endpoint.retry.max_attempts =
      json.value("max_attempts", endpoint.retry.max_attempts);
  endpoint.retry.backoff_base = std::chrono::milliseconds(json.value(
      "backoff_ms", static_cast<int64_t>(endpoint.retry.backoff_base.count())));
  return endpoint;
}

inline std::string ResolvePath(const std::string& path,
                               const std::filesystem::path& base_dir) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (base_dir / p).string();
}

}  // namespace internal

// Parses an experiment config. Relative paths are resolved against
// `base_dir` (the config file's directory when loaded from disk).
inline absl::StatusOr<ExperimentConfig> ExperimentConfigFromJson(
    const nlohmann::json& json, const std::filesystem::path& base_dir = {}) {
  using internal::ConfigError;
  if (!json.is_object()) return ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    auto input = json.find("input");
    if (input == json.end() || !input->is_object()) {
      return ConfigError("config needs an 'input' object");
    }
    if (input->contains("jsonl")) {
      cfg.input.jsonl_path = internal::ResolvePath(
          (*input)["jsonl"].get<std::string>(), base_dir);
    }
    if (input->contains("synthetic")) {
      MIA_ASSIGN_OR_RETURN(cfg.input.synthetic,
                           SynthConfigFromJson((*input)["synthetic"]));
    }
    if (input->contains("endpoint")) {
      MIA_ASSIGN_OR_RETURN(cfg.input.endpoint,
                           internal::EndpointFromJson((*input)["endpoint"]));
    }

    auto attacks = json.find("attacks");
    if (attacks == json.end() || !attacks->is_array()) {
      return ConfigError("config needs an 'attacks' array");
    }
    for (const nlohmann::json& item : *attacks) {
      MIA_ASSIGN_OR_RETURN(AttackConfig attack, internal::AttackFromJson(item));
      cfg.attacks.push_back(attack);
    }

    if (auto sweep = json.find("sweep"); sweep != json.end() &&
                                         !sweep->is_null()) {
      SweepGrid grid;
      if (sweep->contains("k_grid")) {
        grid.k_grid = (*sweep)["k_grid"].get<std::vector<double>>();
      }
      if (sweep->contains("w_grid")) {
        grid.w_grid = (*sweep)["w_grid"].get<std::vector<int>>();
      }
      cfg.sweep = std::move(grid);
    }
    if (auto metrics = json.find("metrics"); metrics != json.end()) {
      if (metrics->contains("fpr_caps")) {
        cfg.metrics.fpr_caps =
            (*metrics)["fpr_caps"].get<std::vector<double>>();
      }
      if (metrics->contains("tpr_floors")) {
        cfg.metrics.tpr_floors =
            (*metrics)["tpr_floors"].get<std::vector<double>>();
      }
    }
    if (auto output = json.find("output"); output != json.end()) {
      if (output->contains("json")) {
        cfg.output.json_path = internal::ResolvePath(
            (*output)["json"].get<std::string>(), base_dir);
      }
      if (output->contains("csv")) {
        cfg.output.csv_path = internal::ResolvePath(
            (*output)["csv"].get<std::string>(), base_dir);
      }
    }
    cfg.parallelism = json.value("parallelism", cfg.parallelism);
    cfg.seed = json.value("seed", cfg.seed);
  } catch (const nlohmann::json::exception& e) {
    return ConfigError(e.what());
  }
  MIA_RETURN_IF_ERROR(ValidateExperimentConfig(cfg));
  return cfg;
}

// ---------------------------------------------------------------------------
// Reports

namespace internal {

// Shortest round-trip decimal for a double, as JSON would write it.
inline std::string ShortestDecimal(double value) {
  return nlohmann::json(value).dump();
}

inline std::string FixedDecimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

inline nlohmann::ordered_json RateMapToJson(
    const std::map<double, double>& rates, const std::vector<double>& keys) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (double key : keys) out[ShortestDecimal(key)] = rates.at(key);
  return out;
}

}  // namespace internal

inline nlohmann::ordered_json ReportToJson(const SweepReport& report) {
  using nlohmann::ordered_json;
  ordered_json json;
  json["metrics"] = {{"fpr_caps", report.fpr_caps},
                     {"tpr_floors", report.tpr_floors}};
  ordered_json cells = ordered_json::array();
  for (const SweepCell& cell : report.cells) {
    ordered_json c;
    c["attack"] = std::string(AttackName(cell.attack.attack));
    c["k"] = cell.k_applicable ? ordered_json(cell.attack.k) : ordered_json();
    c["w"] = cell.w_applicable ? ordered_json(cell.attack.w) : ordered_json();
    c["auroc"] = cell.metrics.auroc;
    c["tpr_at_fpr"] =
        internal::RateMapToJson(cell.metrics.tpr_at_fpr, report.fpr_caps);
    c["fpr_at_tpr"] =
        internal::RateMapToJson(cell.metrics.fpr_at_tpr, report.tpr_floors);
    c["n_members"] = cell.metrics.n_members;
    c["n_nonmembers"] = cell.metrics.n_nonmembers;
    cells.push_back(std::move(c));
  }
  json["cells"] = std::move(cells);
  ordered_json best = ordered_json::array();
  for (const BestCell& b : report.best) {
    best.push_back({{"attack", std::string(AttackName(b.attack))},
                    {"cell", b.cell}});
  }
  json["best"] = std::move(best);
  json["scoring_calls"] = report.scoring_calls;
  return json;
}

inline absl::Status ReportJson(const SweepReport& report, std::ostream& out) {
  out << ReportToJson(report).dump(2) << '\n';
  out.flush();
  if (!out) return MakeError(ErrorKind::kIoError, "write failure on report");
  return absl::OkStatus();
}

inline absl::StatusOr<SweepReport> ReportFromJson(const nlohmann::json& json) {
  auto fail = [](absl::string_view what) {
    return MakeError(ErrorKind::kSchemaError,
                     absl::StrCat("report JSON: ", what));
  };
  SweepReport report;
  try {
    report.fpr_caps = json.at("metrics").at("fpr_caps").get<std::vector<double>>();
    report.tpr_floors =
        json.at("metrics").at("tpr_floors").get<std::vector<double>>();
    for (const nlohmann::json& c : json.at("cells")) {
      SweepCell cell;
      std::optional<AttackKind> kind =
          ParseAttackName(c.at("attack").get<std::string>());
      if (!kind.has_value()) return fail("unknown attack name");
      cell.attack.attack = *kind;
      cell.k_applicable = !c.at("k").is_null();
      cell.w_applicable = !c.at("w").is_null();
      if (cell.k_applicable) cell.attack.k = c["k"].get<double>();
      if (cell.w_applicable) cell.attack.w = c["w"].get<int>();
      cell.metrics.auroc = c.at("auroc").get<double>();
      for (double cap : report.fpr_caps) {
        cell.metrics.tpr_at_fpr[cap] =
            c.at("tpr_at_fpr").at(internal::ShortestDecimal(cap)).get<double>();
      }
      for (double floor : report.tpr_floors) {
        cell.metrics.fpr_at_tpr[floor] =
            c.at("fpr_at_tpr").at(internal::ShortestDecimal(floor)).get<double>();
      }
      cell.metrics.n_members = c.at("n_members").get<size_t>();
      cell.metrics.n_nonmembers = c.at("n_nonmembers").get<size_t>();
      report.cells.push_back(std::move(cell));
    }
    for (const nlohmann::json& b : json.at("best")) {
      std::optional<AttackKind> kind =
          ParseAttackName(b.at("attack").get<std::string>());
      if (!kind.has_value()) return fail("unknown attack name in 'best'");
      const size_t index = b.at("cell").get<size_t>();
      if (index >= report.cells.size()) return fail("best cell out of range");
      report.best.push_back(BestCell{.attack = *kind, .cell = index});
    }
    report.scoring_calls = json.at("scoring_calls").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    return fail(e.what());
  }
  return report;
}

inline absl::StatusOr<SweepReport> ParseReportJson(std::istream& in) {
  nlohmann::json json = nlohmann::json::parse(in, nullptr, false);
  if (json.is_discarded()) {
    return MakeError(ErrorKind::kParseError, "report is not valid JSON");
  }
  return ReportFromJson(json);
}

// One row per cell. Real-valued columns use 4 decimal places; k and w are
// left empty where the attack has no such hyperparameter.
inline absl::Status ReportCsv(const SweepReport& report, std::ostream& out) {
  using internal::FixedDecimal;
  using internal::ShortestDecimal;
  out << "attack,k,w,auroc";
  for (double cap : report.fpr_caps) {
    out << ",tpr_at_fpr_" << ShortestDecimal(cap);
  }
  for (double floor : report.tpr_floors) {
    out << ",fpr_at_tpr_" << ShortestDecimal(floor);
  }
  out << ",n_members,n_nonmembers\n";
  for (const SweepCell& cell : report.cells) {
    out << AttackName(cell.attack.attack) << ','
        << (cell.k_applicable ? FixedDecimal(cell.attack.k) : "") << ','
        << (cell.w_applicable ? std::to_string(cell.attack.w) : "") << ','
        << FixedDecimal(cell.metrics.auroc);
    for (double cap : report.fpr_caps) {
      out << ',' << FixedDecimal(cell.metrics.tpr_at_fpr.at(cap));
    }
    for (double floor : report.tpr_floors) {
      out << ',' << FixedDecimal(cell.metrics.fpr_at_tpr.at(floor));
    }
    out << ',' << cell.metrics.n_members << ',' << cell.metrics.n_nonmembers
        << '\n';
  }
  out.flush();
  if (!out) return MakeError(ErrorKind::kIoError, "write failure on CSV sink");
  return absl::OkStatus();
}

// Fixed-width table; rates as percentages, best cell per attack starred.
inline absl::Status ReportTable(const SweepReport& report, std::ostream& out) {
  auto pct = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * v);
    return std::string(buf);
  };
  out << std::left << std::setw(14) << "attack" << std::setw(7) << "k"
      << std::setw(4) << "w" << std::right << std::setw(9) << "AUROC";
  for (double cap : report.fpr_caps) {
    out << std::setw(14) << absl::StrCat("TPR@", pct(cap), "FPR");
  }
  for (double floor : report.tpr_floors) {
    out << std::setw(15) << absl::StrCat("FPR@", pct(floor), "TPR");
  }
  out << "\n";
  for (size_t i = 0; i < report.cells.size(); ++i) {
    const SweepCell& cell = report.cells[i];
    const bool best =
        std::any_of(report.best.begin(), report.best.end(),
                    [&](const BestCell& b) { return b.cell == i; });
    out << std::left << std::setw(14)
        << absl::StrCat(AttackName(cell.attack.attack), best ? " *" : "")
        << std::setw(7)
        << (cell.k_applicable ? absl::StrCat(cell.attack.k) : "-")
        << std::setw(4)
        << (cell.w_applicable ? absl::StrCat(cell.attack.w) : "-")
        << std::right << std::setw(9) << pct(cell.metrics.auroc);
    for (double cap : report.fpr_caps) {
      out << std::setw(14) << pct(cell.metrics.tpr_at_fpr.at(cap));
    }
    for (double floor : report.tpr_floors) {
      out << std::setw(15) << pct(cell.metrics.fpr_at_tpr.at(floor));
    }
    out << "\n";
  }
  out.flush();
  if (!out) return MakeError(ErrorKind::kIoError, "write failure on table");
  return absl::OkStatus();
}

}  // namespace mia

#endif  // MIA_EXPERIMENT_HPP_
