// Copyright 2026 The pesqkit Authors. All Rights Reserved.
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

#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "pesq/compare.hpp"
#include "pesq/error.hpp"
#include "pesq/mos_mapping.hpp"
#include "pesq/multichannel.hpp"
#include "pesq/pesq.hpp"
#include "pesq/signal_io.hpp"

namespace pesq::cli {

namespace {

using json = nlohmann::ordered_json;

// Thrown after a diagnostic is printed for a bad flag combination.
struct UsageError {
  std::string message;
};

const std::map<std::string, Mode> kModes = {
    {"nb-raw", Mode::kNbRaw}, {"nb-lqo", Mode::kNbLqo}, {"wb", Mode::kWb}, {"wb-c2", Mode::kWbC2}};
const std::map<std::string, StereoStrategy> kStrategies = {
    {"dmx", StereoStrategy::kMonoDownmix},
    {"avg", StereoStrategy::kAverageScores},
    {"per-channel", StereoStrategy::kPerChannel},
    {"interleave", StereoStrategy::kInterleave}};
const std::map<std::string, MappingKind> kKinds = {{"nb", MappingKind::kNarrowband},
                                                   {"wb", MappingKind::kWideband}};

struct ScoreFlags {
  std::string ref, deg, format = "text";
  int rate = 0;
  Mode mode = Mode::kNbRaw;
  StereoStrategy stereo = kDefaultStrategy;
};

struct BatchFlags {
  std::string manifest, out;
  int rate = 0;
  Mode mode = Mode::kNbRaw;
  StereoStrategy stereo = kDefaultStrategy;
};

struct CompareFlags {
  std::string a, b, scatter, report;
};

struct CurveFlags {
  MappingKind kind = MappingKind::kNarrowband;
  std::string out;
  int points = static_cast<int>(kDefaultCurvePoints);
};

PesqConfig checked_config(Mode mode, int rate) {
  const PesqConfig cfg = config_for(mode, rate);
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw UsageError{e.what()};
  }
  return cfg;
}

std::string fixed3(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
  return f;
}

void add_mode_flags(CLI::App* cmd, int* rate, Mode* mode, StereoStrategy* stereo) {
  cmd->add_option("--rate", *rate, "Sample rate of both files")
      ->required()
      ->check(CLI::IsMember({8000, 16000}));
  cmd->add_option("--mode", *mode, "nb-raw | nb-lqo | wb | wb-c2")
      ->required()
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  cmd->add_option("--stereo", *stereo, "dmx | avg | per-channel | interleave (default dmx)")
      ->transform(CLI::CheckedTransformer(kStrategies, CLI::ignore_case));
}

void notice(StereoStrategy s, std::ostream& err) {
  if (s == StereoStrategy::kInterleave) err << kInterleaveNotice << '\n';
}

int run_score(const ScoreFlags& f, std::ostream& out, std::ostream& err) {
  const PesqConfig cfg = checked_config(f.mode, f.rate);
  notice(f.stereo, err);
  const AudioSignal ref = read_wav(f.ref);
  const AudioSignal deg = read_wav(f.deg);
  for (const AudioSignal* s : {&ref, &deg}) {
    if (s->rate() != f.rate) {
      throw Error(ErrorCode::kRateMismatch,
                  (s == &ref ? f.ref : f.deg) + " is " + std::to_string(s->rate()) +
                      " Hz but --rate is " + std::to_string(f.rate));
    }
  }

  std::optional<double> raw, mos;
  MultichannelScore ms;
  if (ref.channels() == 1 && deg.channels() == 1 && f.stereo != StereoStrategy::kInterleave) {
    const PesqResult r = compute_pesq(ref, deg, cfg);
    raw = r.raw;
    mos = r.mos_lqo;
    ms.score = headline_score(r, cfg);
    if (f.stereo == StereoStrategy::kAverageScores || f.stereo == StereoStrategy::kPerChannel) {
      ms.per_channel = {ms.score};
    }
  } else {
    ms = score_multichannel(ref, deg, cfg, f.stereo);
  }

  if (f.format == "json") {
    json j;
    j["mode"] = mode_name(f.mode);
    j["provenance"] = mode_provenance(f.mode);
    j["strategy"] = strategy_name(f.stereo);
    j["rate"] = f.rate;
    j["ref"] = f.ref;
    j["deg"] = f.deg;
    j["score"] = ms.score;
    if (raw) j["raw"] = *raw;
    if (mos) j["mos_lqo"] = *mos;
    if (!ms.per_channel.empty()) j["per_channel"] = ms.per_channel;
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  out << fixed3(ms.score) << ' ' << mode_name(f.mode);
  if (f.mode == Mode::kNbLqo && raw) out << " raw " << fixed3(*raw);
  out << '\n';
  for (std::size_t c = 0; c < ms.per_channel.size(); ++c) {
    out << "channel " << c << ": " << fixed3(ms.per_channel[c]) << '\n';
  }
  return kExitOk;
}

int run_batch(const BatchFlags& f, std::ostream& out, std::ostream& err) {
  const PesqConfig cfg = checked_config(f.mode, f.rate);
  notice(f.stereo, err);
  const auto manifest = read_manifest(f.manifest);
  const BatchResult result = batch_score(manifest, cfg, f.stereo);
  {
    std::ofstream file = open_out(f.out);
    write_batch_csv(file, result);
  }
  for (const auto& item : result.items) {
    if (!item.score) err << item.entry.ref.string() << ": " << item.error << '\n';
  }
  const auto failed = result.failures();
  const auto total = static_cast<Eigen::Index>(result.items.size());
  out << "scored " << total - failed << " of " << total << " pairs, " << failed
      << " failed, mode " << mode_name(f.mode) << '\n';
  return total > 0 && failed < total ? kExitOk : kExitFailure;
}

ScoreTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return read_score_table(in);
}

int run_compare(const CompareFlags& f, std::ostream& out) {
  std::vector<ScatterRow> rows;
  const ComparisonStats stats = compare_tables(load_table(f.a), load_table(f.b), &rows);
  const std::string report = stats_json(stats);
  out << report << '\n';
  if (!f.report.empty()) open_out(f.report) << report << '\n';
  if (!f.scatter.empty()) {
    std::ofstream file = open_out(f.scatter);
    write_scatter_csv(file, rows);
  }
  return kExitOk;
}

int run_curve(const CurveFlags& f, std::ostream& out) {
  const MappingCurve curve = mapping_curve(f.kind, default_curve_grid(f.points));
  if (f.out.empty()) {
    write_curve_csv(out, curve);
  } else {
    std::ofstream file = open_out(f.out);
    write_curve_csv(file, curve);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Objective speech quality scoring (PESQ family)", "pesq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  ScoreFlags score;
  CLI::App* score_cmd = app.add_subcommand("score", "Score one reference/degraded pair");
  score_cmd->add_option("--ref", score.ref, "Reference WAV")->required();
  score_cmd->add_option("--deg", score.deg, "Degraded WAV")->required();
  add_mode_flags(score_cmd, &score.rate, &score.mode, &score.stereo);
  score_cmd->add_option("--format", score.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  BatchFlags batch;
  CLI::App* batch_cmd = app.add_subcommand("batch", "Score every pair of a manifest");
  batch_cmd->add_option("--manifest", batch.manifest, "CSV with header ref,deg")->required();
  batch_cmd->add_option("--out", batch.out, "Per-item scores CSV")->required();
  add_mode_flags(batch_cmd, &batch.rate, &batch.mode, &batch.stereo);

  CompareFlags cmp;
  CLI::App* compare_cmd = app.add_subcommand("compare", "Compare two batch score files");
  compare_cmd->add_option("--a", cmp.a, "First scores CSV")->required();
  compare_cmd->add_option("--b", cmp.b, "Second scores CSV")->required();
  compare_cmd->add_option("--scatter", cmp.scatter, "Write label,a,b,diff CSV");
  compare_cmd->add_option("--report", cmp.report, "Write the statistics JSON");

  CurveFlags curve;
  CLI::App* curve_cmd = app.add_subcommand("curve", "Emit the raw to MOS-LQO mapping curve");
  curve_cmd->add_option("--kind", curve.kind, "nb | wb")
      ->required()
      ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  curve_cmd->add_option("--out", curve.out, "Output CSV (default stdout)");
  curve_cmd->add_option("--points", curve.points, "Grid size over [-0.5, 4.5]")
      ->check(CLI::Range(1, 1000000));

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(std::move(rest));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  try {
    if (score_cmd->parsed()) return run_score(score, out, err);
    if (batch_cmd->parsed()) return run_batch(batch, out, err);
    if (compare_cmd->parsed()) return run_compare(cmp, out);
    return run_curve(curve, out);
  } catch (const UsageError& e) {
    err << "error: " << e.message << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace pesq::cli
