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

// Command-line front end:
//
//   mia_audit score  --attack NAME [--k F] [--w N] [--input PATH] [--endpoint URL]
//   mia_audit sweep  --config PATH [--output PATH] [--parallel N] [--seed N]
//   mia_audit synth  [--config PATH] [--seed N] [--output PATH]
//   mia_audit enrich --endpoint URL [--input PATH] [--output PATH]
//   mia_audit report --input REPORT.json [--format csv|table|json]
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 transport or endpoint error. Diagnostics go to the error stream only.

#ifndef MIA_CLI_HPP_
#define MIA_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "mia/attacks.hpp"
#include "mia/enrich.hpp"
#include "mia/experiment.hpp"
#include "mia/jsonl.hpp"
#include "mia/status.hpp"
#include "mia/synthetic.hpp"

namespace mia {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitTransport = 3,
};

inline int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  switch (ErrorKindOf(status).value_or(ErrorKind::kSchemaError)) {
    case ErrorKind::kInvalidConfig:
      return kExitUsage;
    case ErrorKind::kTransportError:
    case ErrorKind::kProtocolError:
      return kExitTransport;
    default:
      return kExitData;
  }
}

namespace internal {

struct CliStreams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

inline int Fail(const CliStreams& io, const absl::Status& status) {
  io.err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

inline int UsageFail(const CliStreams& io, absl::string_view message) {
  io.err << "error: " << message << "\n";
  return kExitUsage;
}

inline absl::StatusOr<std::vector<ScoredSample>> ReadSamples(
    const CliStreams& io, const std::string& path) {
  if (path.empty() || path == "-") return ParseJsonl(io.in);
  return ReadJsonlFile(path);
}

// Writes to `path`, or to the output stream when path is empty or "-".
template <typename WriteFn>
absl::Status WriteTo(const CliStreams& io, const std::string& path,
                     WriteFn&& write) {
  if (path.empty() || path == "-") return write(io.out);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return MakeError(ErrorKind::kIoError,
                     absl::StrCat("cannot open '", path, "' for writing"));
  }
  return write(file);
}

inline absl::StatusOr<nlohmann::json> ReadConfigFile(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("cannot read config file '", path, "'"));
  }
  nlohmann::json json = nlohmann::json::parse(file, nullptr, false);
  if (json.is_discarded()) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("config file '", path,
                                  "' is not valid JSON"));
  }
  return json;
}

struct CommonFlags {
  std::string config;
  std::string input;
  std::string output;
  std::string attack;
  double k = 0.3;
  int w = 3;
  int n_neighbors = 100;
  std::string endpoint;
  std::optional<uint64_t> seed;
  std::optional<int> parallel;
  std::string format = "csv";
  std::string need = "lowercase,neighbors";
};

inline ScoringEndpoint EndpointFromFlags(const CommonFlags& flags) {
  ScoringEndpoint endpoint;
  endpoint.base_url = flags.endpoint;
  if (flags.parallel.has_value()) endpoint.max_parallel = *flags.parallel;
  return endpoint;
}

inline int RunScore(const CliStreams& io, const CommonFlags& flags) {
  std::optional<AttackKind> kind = ParseAttackName(flags.attack);
  if (!kind.has_value()) {
    return UsageFail(io, absl::StrCat("unknown attack '", flags.attack, "'"));
  }
  const AttackConfig attack{.attack = *kind,
                            .k = flags.k,
                            .w = flags.w,
                            .n_neighbors = flags.n_neighbors};
  if (absl::Status status = attack.Validate(); !status.ok()) {
    return UsageFail(io, status.message());
  }
  absl::StatusOr<std::vector<ScoredSample>> samples =
      ReadSamples(io, flags.input);
  if (!samples.ok()) return Fail(io, samples.status());

  if (!flags.endpoint.empty()) {
    int n_neighbors = 0;
    const EnrichNeeds needs = NeedsFor({attack}, &n_neighbors);
    if (needs.any()) {
      samples = EnrichAll(*samples, EndpointFromFlags(flags), needs,
                          n_neighbors, flags.seed.value_or(0));
      if (!samples.ok()) return Fail(io, samples.status());
    }
  }

  std::vector<MembershipScore> scores;
  scores.reserve(samples->size());
  for (const ScoredSample& sample : *samples) {
    absl::StatusOr<MembershipScore> score = Score(sample, attack);
    if (!score.ok()) {
      return Fail(io, MakeError(ErrorKindOf(score.status())
                                    .value_or(ErrorKind::kSchemaError),
                                absl::StrCat("sample '", sample.id(), "': ",
                                             score.status().message())));
    }
    scores.push_back(*std::move(score));
  }
  absl::Status written = WriteTo(io, flags.output, [&](std::ostream& os) {
    for (const MembershipScore& score : scores) {
      nlohmann::ordered_json line;
      line["id"] = score.sample_id;
      line["attack"] = std::string(AttackName(score.attack));
      line["raw"] = score.raw;
      line["value"] = score.value;
      os << line.dump() << '\n';
    }
    os.flush();
    return os ? absl::OkStatus()
              : MakeError(ErrorKind::kIoError, "write failure");
  });
  return written.ok() ? kExitOk : Fail(io, written);
}

inline int RunSweep(const CliStreams& io, const CommonFlags& flags) {
  absl::StatusOr<nlohmann::json> json = ReadConfigFile(flags.config);
  if (!json.ok()) return Fail(io, json.status());
  absl::StatusOr<ExperimentConfig> cfg = ExperimentConfigFromJson(
      *json, std::filesystem::path(flags.config).parent_path());
  if (!cfg.ok()) return Fail(io, cfg.status());
  if (flags.parallel.has_value()) cfg->parallelism = *flags.parallel;
  if (flags.seed.has_value()) {
    cfg->seed = *flags.seed;
    if (cfg->input.synthetic.has_value()) cfg->input.synthetic->seed = *flags.seed;
  }
  if (!flags.endpoint.empty()) {
    ScoringEndpoint endpoint = cfg->input.endpoint.value_or(ScoringEndpoint{});
    endpoint.base_url = flags.endpoint;
    cfg->input.endpoint = endpoint;
  }
  if (!flags.output.empty()) cfg->output.json_path = flags.output;

  absl::StatusOr<SweepReport> report = RunExperiment(*cfg);
  if (!report.ok()) return Fail(io, report.status());

  const bool any_file =
      cfg->output.json_path.has_value() || cfg->output.csv_path.has_value();
  if (cfg->output.json_path.has_value()) {
    absl::Status s = WriteTo(io, *cfg->output.json_path, [&](std::ostream& os) {
      return ReportJson(*report, os);
    });
    if (!s.ok()) return Fail(io, s);
  }
  if (cfg->output.csv_path.has_value() || !any_file) {
    absl::Status s = WriteTo(io, cfg->output.csv_path.value_or(""),
                             [&](std::ostream& os) {
                               return ReportCsv(*report, os);
                             });
    if (!s.ok()) return Fail(io, s);
  }
  return kExitOk;
}

inline int RunSynth(const CliStreams& io, const CommonFlags& flags) {
  SynthConfig cfg;
  if (!flags.config.empty()) {
    absl::StatusOr<nlohmann::json> json = ReadConfigFile(flags.config);
    if (!json.ok()) return Fail(io, json.status());
    absl::StatusOr<SynthConfig> parsed = SynthConfigFromJson(*json);
    if (!parsed.ok()) return Fail(io, parsed.status());
    cfg = *parsed;
  }
  if (flags.seed.has_value()) cfg.seed = *flags.seed;
  absl::StatusOr<std::vector<ScoredSample>> samples = GenerateSynthetic(cfg);
  if (!samples.ok()) return Fail(io, samples.status());
  absl::Status s = WriteTo(io, flags.output, [&](std::ostream& os) {
    return EmitJsonl(*samples, os);
  });
  return s.ok() ? kExitOk : Fail(io, s);
}

inline int RunEnrich(const CliStreams& io, const CommonFlags& flags) {
  if (flags.endpoint.empty()) return UsageFail(io, "enrich needs --endpoint");
  EnrichNeeds needs;
  std::stringstream list(flags.need);
  for (std::string item; std::getline(list, item, ',');) {
    if (item == "lowercase") {
      needs.lowercase = true;
    } else if (item == "neighbors") {
      needs.neighbors = true;
    } else if (!item.empty()) {
      return UsageFail(io, absl::StrCat("unknown --need entry '", item, "'"));
    }
  }
  absl::StatusOr<std::vector<ScoredSample>> samples =
      ReadSamples(io, flags.input);
  if (!samples.ok()) return Fail(io, samples.status());
  absl::StatusOr<std::vector<ScoredSample>> enriched =
      EnrichAll(*samples, EndpointFromFlags(flags), needs, flags.n_neighbors,
                flags.seed.value_or(0));
  if (!enriched.ok()) return Fail(io, enriched.status());
  absl::Status s = WriteTo(io, flags.output, [&](std::ostream& os) {
    return EmitJsonl(*enriched, os);
  });
  return s.ok() ? kExitOk : Fail(io, s);
}

inline int RunReport(const CliStreams& io, const CommonFlags& flags) {
  std::ifstream file(flags.input);
  if (!file) {
    return Fail(io, MakeError(ErrorKind::kIoError,
                              absl::StrCat("cannot open report '",
                                           flags.input, "'")));
  }
  absl::StatusOr<SweepReport> report = ParseReportJson(file);
  if (!report.ok()) return Fail(io, report.status());
  absl::Status s = WriteTo(io, flags.output, [&](std::ostream& os) {
    if (flags.format == "table") return ReportTable(*report, os);
    if (flags.format == "json") return ReportJson(*report, os);
    return ReportCsv(*report, os);
  });
  return s.ok() ? kExitOk : Fail(io, s);
}

}  // namespace internal

inline int CliMain(int argc, const char* const* argv, std::istream& in,
                   std::ostream& out, std::ostream& err) {
  const internal::CliStreams io{in, out, err};
  internal::CommonFlags flags;

  CLI::App app{"Membership-inference auditing for language models",
               "mia_audit"};
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* cmd, const std::string& help) {
    return cmd->add_option("--input", flags.input, help);
  };
  auto add_output = [&](CLI::App* cmd, const std::string& help) {
    cmd->add_option("--output", flags.output, help);
  };

  CLI::App* score = app.add_subcommand("score", "Score one attack over a dump");
  add_input(score, "Input .mia.jsonl (default: standard input)");
  add_output(score, "Output JSONL of scores (default: standard output)");
  score->add_option("--attack", flags.attack,
                    "loss|lowercase|zlib|neighborhood|min_k|win_k")
      ->required();
  score->add_option("--k", flags.k, "Fraction for min_k / win_k");
  score->add_option("--w", flags.w, "Window size for win_k");
  score->add_option("--n-neighbors", flags.n_neighbors,
                    "Neighbors to generate when enriching");
  score->add_option("--endpoint", flags.endpoint,
                    "Scoring endpoint used to fill missing aux data");
  score->add_option("--seed", flags.seed, "Perturbation seed");
  score->add_option("--parallel", flags.parallel, "Requests in flight");

  CLI::App* sweep = app.add_subcommand("sweep", "Run an experiment config");
  sweep->add_option("--config", flags.config, "Experiment JSON config")
      ->required();
  add_output(sweep, "Report JSON path (overrides the config)");
  sweep->add_option("--endpoint", flags.endpoint, "Scoring endpoint URL");
  sweep->add_option("--seed", flags.seed, "Run seed");
  sweep->add_option("--parallel", flags.parallel, "Worker threads");

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dump");
  synth->add_option("--config", flags.config, "Synthetic config JSON");
  synth->add_option("--seed", flags.seed, "Generator seed");
  add_output(synth, "Output .mia.jsonl (default: standard output)");

  CLI::App* enrich =
      app.add_subcommand("enrich", "Fill aux log-probs via an endpoint");
  add_input(enrich, "Input .mia.jsonl (default: standard input)");
  add_output(enrich, "Output .mia.jsonl (default: standard output)");
  enrich->add_option("--endpoint", flags.endpoint, "Scoring endpoint URL");
  enrich->add_option("--need", flags.need,
                     "Comma list of lowercase,neighbors");
  enrich->add_option("--n-neighbors", flags.n_neighbors, "Neighbors per sample");
  enrich->add_option("--seed", flags.seed, "Perturbation seed");
  enrich->add_option("--parallel", flags.parallel, "Requests in flight");

  CLI::App* report = app.add_subcommand("report", "Re-render a JSON report");
  add_input(report, "Report JSON written by sweep")->required();
  add_output(report, "Output path (default: standard output)");
  report->add_option("--format", flags.format, "csv|table|json")
      ->check(CLI::IsMember({"csv", "table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (flags.parallel.has_value() && *flags.parallel < 1) {
    return internal::UsageFail(io, "--parallel must be >= 1");
  }
  if (score->parsed()) return internal::RunScore(io, flags);
  if (sweep->parsed()) return internal::RunSweep(io, flags);
  if (synth->parsed()) return internal::RunSynth(io, flags);
  if (enrich->parsed()) return internal::RunEnrich(io, flags);
  return internal::RunReport(io, flags);
}

}  // namespace mia

#endif  // MIA_CLI_HPP_
