/**
 * Copyright 2026 The LumaForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lumaforge/coco.hpp"
#include "lumaforge/errors.hpp"
#include "lumaforge/lca/selftest.hpp"
#include "lumaforge/lightops.hpp"
#include "lumaforge/metrics.hpp"
#include "lumaforge/pairgen.hpp"
#include "lumaforge/serialization.hpp"
#include "lumaforge/severity_config.hpp"

namespace lumaforge::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  bool json_output = false;
  bool config_dump = false;
  std::string severity_config;
};

struct AugmentArgs {
  std::string seed;
  std::string annotations;
  std::string images;
  std::string out;
  std::string severity = "uniform";
  int variants = 1;
  int workers = 0;
  bool reference_clean = false;
};

struct PreviewArgs {
  std::string image;
  std::string op;
  std::vector<std::string> sets;
  int severity = 0;
  std::string suffix;
};

struct ValidateArgs {
  std::string manifest;
  std::string out;
  std::string report;
};

struct ReportArgs {
  std::string manifest;
  std::string out;
  std::string masks;
  std::string json_path;
  std::string csv_path;
};

SeverityConfig effective_config(const Globals& g) {
  SeverityConfig c = g.severity_config.empty() ? SeverityConfig::defaults() : load_severity_config(g.severity_config);
  require_valid(c);
  return c;
}

std::string format_interval(const Interval& iv) {
  std::ostringstream s;
  s << '[' << iv.lo << ", " << iv.hi << ']';
  return s.str();
}

std::string severity_table(const SeverityConfig& c) {
  std::ostringstream s;
  s << "Severity ranges in effect (edit with --severity-config, inspect with --config-dump):\n";
  for (Severity sev : {Severity::Mild, Severity::Moderate, Severity::Severe}) {
    s << "  tier " << tier(sev) << " (max ops " << c.max_ops(sev) << ")\n";
    for (const auto& [kind, ranges] : c.at(sev).ops) {
      s << "    " << std::left << std::setw(11) << to_string(kind);
      bool first = true;
      for (const auto& [name, iv] : ranges) {
        s << (first ? "" : ", ") << name << ' ' << format_interval(iv);
        first = false;
      }
      s << '\n';
    }
  }
  s << "  conflict groups:";
  for (const auto& group : c.conflict_groups) {
    s << " {";
    for (std::size_t i = 0; i < group.size(); ++i) s << (i ? "," : "") << to_string(group[i]);
    s << '}';
  }
  s << '\n';
  return s.str();
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || text.front() == '-') {
    throw ParameterError("--seed must be a non-negative integer, got '" + text + "'");
  }
  return v;
}

int resolve_workers(int flag) {
  if (flag > 0) return flag;
  if (flag < 0) throw ParameterError("--workers must be >= 1");
  if (const char* env = std::getenv("LUMAFORGE_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ParameterError(std::string("LUMAFORGE_WORKERS must be >= 1, got '") + env + "'");
    return static_cast<int>(v);
  }
  return 1;
}

int cmd_augment(const Globals& g, const AugmentArgs& a, std::ostream& out, std::ostream& err) {
  const SeverityConfig config = effective_config(g);
  PairOptions opt;
  opt.global_seed = parse_seed(a.seed);
  opt.policy = SeverityPolicy::parse(a.severity);
  if (a.variants < 1) throw ParameterError("--variants-per-image must be >= 1");
  opt.variants_per_image = a.variants;
  opt.workers = resolve_workers(a.workers);
  opt.reference_clean = a.reference_clean;
  if (!fs::exists(a.annotations)) throw IoError("annotation file not found: " + a.annotations);

  const CocoDataset data = ingest_coco(a.annotations, a.images);
  const PairManifest m = generate_pairs(data, config, opt, a.out);
  const fs::path manifest_path = fs::path(a.out) / "manifest.json";
  for (const auto& s : m.skipped) err << "skipped image " << s.image_id << ": " << s.reason << '\n';
  if (g.json_output) {
    json j = {{"manifest", manifest_path.string()},
              {"pairs", m.pairs.size()},
              {"skipped", json::array()},
              {"workers", opt.workers},
              {"severity_policy", m.severity_policy},
              {"global_seed", m.global_seed}};
    for (const auto& s : m.skipped) j["skipped"].push_back({{"image_id", s.image_id}, {"reason", s.reason}});
    out << j.dump(2) << '\n';
  } else {
    std::array<std::size_t, 3> per_tier{};
    for (const auto& p : m.pairs) ++per_tier[static_cast<std::size_t>(tier(p.severity) - 1)];
    out << "manifest: " << manifest_path.string() << '\n'
        << "pairs: " << m.pairs.size() << " (tier 1: " << per_tier[0] << ", tier 2: " << per_tier[1]
        << ", tier 3: " << per_tier[2] << ")\n"
        << "skipped: " << m.skipped.size() << '\n';
  }
  return m.has_skips() ? kExitPartial : kExitOk;
}

json parse_assignment_value(const std::string& text) {
  std::size_t used = 0;
  try {
    if (text.find_first_not_of("0123456789") == std::string::npos && !text.empty()) {
      return json(std::stoull(text, &used));
    }
    const double v = std::stod(text, &used);
    if (used == text.size()) return json(v);
  } catch (const std::exception&) {
  }
  throw ParameterError("not a number: '" + text + "'");
}

int cmd_preview(const Globals& g, const PreviewArgs& a, std::ostream& out) {
  const auto kind = parse_op_kind(a.op);
  if (!kind) throw ParameterError("unknown op '" + a.op + "'");
  json j = op_to_json(identity_params(*kind));
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ParameterError("--set expects key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    if (key == "op" || !j.contains(key)) {
      std::string known;
      for (const auto& [k, v] : j.items()) {
        if (k != "op") known += (known.empty() ? "" : ", ") + k;
      }
      throw ParameterError("op " + a.op + " has no parameter '" + key + "' (known: " + known + ")");
    }
    j[key] = key == "haze_color" ? json::parse(s.substr(eq + 1)) : parse_assignment_value(s.substr(eq + 1));
  }
  const OpParams params = op_from_json(j);
  if (const auto problem = check_params(params)) throw ParameterError(*problem);

  if (a.severity != 0) {
    const SeverityConfig config = effective_config(g);
    const Severity sev = severity_from_tier(a.severity);
    const auto& ops = config.at(sev).ops;
    const auto it = ops.find(*kind);
    if (it == ops.end()) {
      throw ParameterError("op " + a.op + " is not available at severity " + std::to_string(a.severity));
    }
    for (const auto& [name, value] : named_values(params)) {
      const auto r = it->second.find(name);
      if (r != it->second.end() && !r->second.contains(value)) {
        std::ostringstream msg;
        msg << a.op << '.' << name << " = " << value << " outside severity " << a.severity << " range "
            << format_interval(r->second);
        throw ParameterError(msg.str());
      }
    }
  }

  const fs::path in(a.image);
  const RasterImage src = load_image(in);
  const RasterImage dst = apply_op(src, params);
  const std::string suffix = a.suffix.empty() ? "_" + a.op : a.suffix;
  const fs::path target = in.parent_path() / (in.stem().string() + suffix + ".png");
  save_image(dst, target);
  if (g.json_output) {
    out << json{{"input", in.string()}, {"output", target.string()}, {"params", op_to_json(params)}}.dump(2) << '\n';
  } else {
    out << "wrote " << target.string() << '\n' << "params: " << op_to_json(params).dump() << '\n';
  }
  return kExitOk;
}

fs::path out_root_for(const std::string& out, const std::string& manifest) {
  return out.empty() ? fs::path(manifest).parent_path() : fs::path(out);
}

int cmd_validate(const Globals& g, const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const PairManifest m = load_manifest(a.manifest);
  const VerifyReport r = verify_pairs(m, out_root_for(a.out, a.manifest));
  const json j = r.to_json();
  if (!a.report.empty()) {
    std::ofstream f(a.report);
    if (!f) throw IoError("cannot write " + a.report);
    f << j.dump(2) << '\n';
  }
  if (g.json_output) {
    out << j.dump(2) << '\n';
  } else {
    out << "pairs checked: " << r.pairs_checked << '\n'
        << "digest mismatches: " << r.mismatches.size() << '\n'
        << "missing files: " << r.missing_files.size() << '\n'
        << "annotation drift: " << r.annotation_drift.size() << '\n';
  }
  for (const auto* list : {&r.mismatches, &r.missing_files, &r.annotation_drift}) {
    for (const auto& issue : *list) err << issue.image_id << " v" << issue.variant_index << ": " << issue.detail << '\n';
  }
  return r.ok() ? kExitOk : kExitFatal;
}

int cmd_report(const Globals& g, const ReportArgs& a, std::ostream& out) {
  const PairManifest m = load_manifest(a.manifest);
  const fs::path root = out_root_for(a.out, a.manifest);
  std::optional<std::vector<InstanceIou>> instances;
  if (!a.masks.empty()) instances = load_instance_ious(a.masks);
  const SeverityReport r = severity_report(m, root, SsimParams{}, instances);
  const fs::path json_path = a.json_path.empty() ? root / "report.json" : fs::path(a.json_path);
  const fs::path csv_path = a.csv_path.empty() ? root / "report.csv" : fs::path(a.csv_path);
  const json j = r.to_json();
  {
    std::ofstream f(json_path);
    if (!f) throw IoError("cannot write " + json_path.string());
    f << j.dump(2) << '\n';
  }
  {
    std::ofstream f(csv_path);
    if (!f) throw IoError("cannot write " + csv_path.string());
    f << r.to_csv();
  }
  if (g.json_output) {
    out << j.dump(2) << '\n';
  } else {
    out << "tier  pairs  ssim_mean  ssim_std\n";
    for (const auto& t : r.tiers) {
      out << std::setw(4) << t.severity << std::setw(7) << t.pairs << "  " << std::fixed << std::setprecision(5)
          << t.ssim_mean << "  " << t.ssim_std << '\n';
    }
    out << "report: " << json_path.string() << "\ncsv: " << csv_path.string() << '\n';
  }
  return kExitOk;
}

int cmd_lca_selftest(const Globals& g, std::ostream& out) {
  const auto r = lca::run_selftest();
  if (g.json_output) {
    out << r.to_json().dump(2) << '\n';
  } else {
    for (const auto& c : r.checks) out << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
  }
  return r.ok() ? kExitOk : kExitFatal;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pairwise lighting augmentation and adapter reference tools", "lumaforge"};
  app.set_version_flag("--version", std::string(kPipelineVersion));
  Globals g;
  app.add_flag("--json", g.json_output, "Print structured JSON to stdout");
  app.add_flag("--config-dump", g.config_dump, "Print the effective severity configuration as JSON and exit");
  app.add_option("--severity-config", g.severity_config, "Severity configuration file (JSON) replacing the defaults")
      ->check(CLI::ExistingFile);
  app.footer(severity_table(SeverityConfig::defaults()));

  AugmentArgs aug;
  auto* augment = app.add_subcommand("augment", "Generate clean/variant pairs from a COCO dataset");
  augment->add_option("--seed", aug.seed, "Global seed (required; no clock default)")->required();
  augment->add_option("--annotations", aug.annotations, "COCO annotation JSON")->required();
  augment->add_option("--images", aug.images, "Directory holding the image files")->required();
  augment->add_option("--out", aug.out, "Output root")->required();
  augment->add_option("--severity", aug.severity, "Tier policy: 1, 2, 3, uniform, or weighted:w1,w2,w3")
      ->capture_default_str();
  augment->add_option("--variants-per-image", aug.variants, "Variants generated per clean image")
      ->capture_default_str();
  augment->add_option("--workers", aug.workers, "Worker threads (default: $LUMAFORGE_WORKERS, else 1)");
  augment->add_flag("--reference-clean", aug.reference_clean, "Record clean image paths instead of copying");
  augment->footer(severity_table(SeverityConfig::defaults()));

  PreviewArgs pre;
  auto* preview = app.add_subcommand("preview", "Apply one op with explicit parameters to one image");
  preview->add_option("image", pre.image, "Input image (PNG or JPEG)")->required()->check(CLI::ExistingFile);
  preview->add_option("--op", pre.op, "Op name: exposure, brightness, contrast, gamma, warm, cool, vignette, "
                                      "shadow, grain, haze, colorcast, flare")
      ->required();
  preview->add_option("--set", pre.sets, "Parameter assignment key=value (repeatable); unset keys stay at identity");
  preview->add_option("--severity", pre.severity, "Also require parameters to lie in this tier's ranges")
      ->check(CLI::Range(1, 3));
  preview->add_option("--suffix", pre.suffix, "Output name suffix (default: _<op>)");

  ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "Replay every recipe and compare digests");
  validate->add_option("--manifest", val.manifest, "manifest.json")->required()->check(CLI::ExistingFile);
  validate->add_option("--out", val.out, "Output root (default: manifest directory)");
  validate->add_option("--report", val.report, "Write the verification report JSON here");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Per-tier SSIM statistics and optional mask IoU comparison");
  report->add_option("--manifest", rep.manifest, "manifest.json")->required()->check(CLI::ExistingFile);
  report->add_option("--out", rep.out, "Output root (default: manifest directory)");
  report->add_option("--masks", rep.masks, "Instance mask listing JSON for the IoU comparison")
      ->check(CLI::ExistingFile);
  report->add_option("--report-json", rep.json_path, "Report JSON path (default: <out>/report.json)");
  report->add_option("--report-csv", rep.csv_path, "Per-pair CSV path (default: <out>/report.csv)");

  auto* selftest = app.add_subcommand("lca-selftest", "Run the adapter invariant and gradient suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (g.config_dump) {
      out << config_to_json(effective_config(g)).dump(2) << '\n';
      return kExitOk;
    }
    if (augment->parsed()) return cmd_augment(g, aug, out, err);
    if (preview->parsed()) return cmd_preview(g, pre, out);
    if (validate->parsed()) return cmd_validate(g, val, out, err);
    if (report->parsed()) return cmd_report(g, rep, out);
    if (selftest->parsed()) return cmd_lca_selftest(g, out);
    err << app.help();
    return kExitFatal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}

}  // namespace lumaforge::cli
