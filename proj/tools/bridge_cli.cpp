// Command-line driver: reconstruct, synth, evaluate, calibrate, lint.

#include "bridge/config.hpp"
#include "bridge/error.hpp"
#include "bridge/geometry.hpp"
#include "bridge/ingest.hpp"
#include "bridge/pipeline.hpp"
#include "bridge/scene.hpp"
#include "bridge/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace bridge;

namespace {

constexpr int kExitStage = 1;
constexpr int kExitUsage = 2;

// Raised for problems the user can fix by changing arguments or inputs.
struct UsageError {
  std::string stage;
  ErrorCode code;
  std::string message;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

int report(const std::string& stage, ErrorCode code, const std::string& msg) {
  const bool usage = code == ErrorCode::InvalidConfig || code == ErrorCode::Io ||
                     code == ErrorCode::InvalidScript || code == ErrorCode::DocumentMismatch;
  std::cerr << "error: stage=" << stage << " code=" << to_string(code) << " msg=" << one_line(msg)
            << "\n";
  return usage ? kExitUsage : kExitStage;
}

void require_file(const std::string& path, const std::string& stage) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw UsageError{stage, ErrorCode::Io, "cannot read '" + path + "'"};
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

std::string scripts_dir() {
  if (const char* env = std::getenv("BRIDGE_SCRIPTS_DIR")) return env;
  return BRIDGE_DEFAULT_SCRIPTS_DIR;
}

std::vector<std::string> available_scripts() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(scripts_dir(), ec)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

synth::PlayScript resolve_script(const std::string& name_or_path) {
  std::error_code ec;
  if (fs::is_regular_file(name_or_path, ec)) return synth::load_script_file(name_or_path);
  const fs::path candidate = fs::path(scripts_dir()) / (name_or_path + ".json");
  if (fs::is_regular_file(candidate, ec)) return synth::load_script_file(candidate.string());
  std::string list;
  for (const auto& n : available_scripts()) list += (list.empty() ? "" : ", ") + n;
  throw UsageError{"synth", ErrorCode::InvalidScript,
                   "unknown script '" + name_or_path + "'; available: " + (list.empty() ? "(none)" : list)};
}

// ---------------------------------------------------------------------------

struct ReconstructArgs {
  std::string input;
  std::string output;
  std::string config;
  std::optional<double> overlap_threshold;
  std::optional<int> confirm_frames;
  std::optional<int> release_frames;
  std::optional<int> max_gap_frames;
  std::optional<std::string> court_template;
  bool parallel = false;
  bool quiet = false;
};

PipelineConfig effective_config(const ReconstructArgs& a) {
  std::string path = a.config;
  if (path.empty()) {
    if (const char* env = std::getenv("BRIDGE_CONFIG")) path = env;
  }
  PipelineConfig cfg;
  if (!path.empty()) {
    require_file(path, "config");
    cfg = load_config(path);
  }
  if (a.overlap_threshold) cfg.possession.overlap_threshold = *a.overlap_threshold;
  if (a.confirm_frames) cfg.possession.confirm_frames = *a.confirm_frames;
  if (a.release_frames) cfg.possession.release_frames = *a.release_frames;
  if (a.max_gap_frames) cfg.max_gap_frames = *a.max_gap_frames;
  if (a.court_template) cfg.court_template = a.court_template;
  if (a.parallel) cfg.parallel = true;
  if (!a.output.empty()) cfg.output_path = a.output;
  cfg.validate();
  return cfg;
}

int cmd_reconstruct(const ReconstructArgs& a) {
  PipelineConfig cfg;
  try {
    cfg = effective_config(a);
  } catch (const Error& e) {
    return report("config", e.code(), e.what());
  }
  if (!cfg.output_path) {
    return report("config", ErrorCode::InvalidConfig, "no output path: pass --output or set output.path");
  }
  require_file(a.input, "ingest");

  ingest::Sequence seq;
  std::vector<std::string> parse_notes;
  try {
    seq = ingest::parse_sequence_file(a.input, &parse_notes);
  } catch (const Error& e) {
    return report("ingest", e.code(), a.input + ": " + e.what());
  }

  Reconstruction r;
  try {
    r = reconstruct(seq, cfg);
  } catch (const StageError& e) {
    return report(e.stage(), e.code(), e.what());
  }
  try {
    scene::write_scene_file(r.document, *cfg.output_path);
  } catch (const Error& e) {
    return report("export", e.code(), e.what());
  }

  if (a.quiet) return 0;
  std::map<std::string, int> counts{{"pass", 0}, {"shot", 0}, {"dribble", 0}};
  for (const auto& e : r.document.events) ++counts[possession::to_string(e.event.kind)];
  std::cout << "frames: " << r.document.frames.size() << "\n";
  std::cout << "tracks: " << r.document.roster.size() << "\n";
  std::cout << "interpolated records: " << r.interpolated_records << "\n";
  std::cout << "events: " << r.document.events.size() << " (pass " << counts["pass"] << ", shot "
            << counts["shot"] << ", dribble " << counts["dribble"] << ")\n";
  for (const auto& e : r.document.events) {
    std::cout << "  " << possession::to_string(e.event.kind) << " actor=" << e.event.actor;
    if (e.event.receiver) std::cout << " receiver=" << *e.event.receiver;
    std::cout << " frames=" << e.event.transit_start_frame << ".." << e.event.transit_end_frame << "\n";
  }
  std::cout << "lint warnings: " << r.lint.size() << "\n";
  for (const auto& w : r.lint) std::cout << "  [" << scene::to_string(w.kind) << "] " << w.message << "\n";
  for (const auto& note : parse_notes) std::cout << "note: " << note << "\n";
  for (const auto& note : r.notes) std::cout << "note: " << note << "\n";
  std::cout << "stage timings:\n";
  const double frames = static_cast<double>(r.document.frames.size());
  for (const auto& t : r.timings) {
    std::cout << "  " << std::left << std::setw(11) << t.stage << std::right << std::fixed
              << std::setprecision(3) << t.seconds * 1e3 << " ms";
    if (t.seconds > 0.0) std::cout << "  (" << std::setprecision(0) << frames / t.seconds << " frames/s)";
    std::cout << "\n";
  }
  std::cout << "wrote " << *cfg.output_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string script;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> pixel_sigma;
  std::optional<double> dropout;
};

int cmd_synth(const SynthArgs& a) {
  synth::PlayScript script;
  try {
    script = resolve_script(a.script);
    if (a.seed) script.noise.seed = *a.seed;
    if (a.pixel_sigma) script.noise.pixel_sigma = *a.pixel_sigma;
    if (a.dropout) script.noise.dropout_prob = *a.dropout;
    script.validate();
  } catch (const Error& e) {
    return report("synth", e.code(), e.what());
  }
  try {
    const auto play = synth::generate_play(script);
    fs::create_directories(a.out_dir);
    const fs::path trk = fs::path(a.out_dir) / (script.name + ".trk");
    const fs::path truth = fs::path(a.out_dir) / (script.name + ".truth.scn");
    write_text(trk.string(), ingest::serialize_sequence(play.sequence));
    scene::write_scene_file(play.truth, truth.string());
    std::cout << "script: " << script.name << " (" << script.frame_count() << " frames, seed "
              << script.noise.seed << ", pixel_sigma " << script.noise.pixel_sigma << ", dropout "
              << script.noise.dropout_prob << ")\n";
    std::cout << "events: " << play.truth.events.size() << "\n";
    std::cout << "wrote " << trk.string() << "\n";
    std::cout << "wrote " << truth.string() << "\n";
  } catch (const fs::filesystem_error& e) {
    return report("synth", ErrorCode::Io, e.what());
  } catch (const Error& e) {
    return report("synth", e.code(), e.what());
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_evaluate(const std::string& truth_path, const std::string& recon_path, const std::string& out) {
  require_file(truth_path, "evaluate");
  require_file(recon_path, "evaluate");
  try {
    const auto truth = scene::parse_scene_file(truth_path);
    const auto recon = scene::parse_scene_file(recon_path);
    const std::string text = synth::report_to_json(synth::evaluate(truth, recon));
    if (!out.empty()) write_text(out, text);
    std::cout << text;
  } catch (const Error& e) {
    return report("evaluate", e.code(), e.what());
  }
  return 0;
}

// ---------------------------------------------------------------------------

// Correspondence file: {"court_template": "NBA", "correspondences": [...]}.
// Each entry has u, v and either a landmark name or explicit x, y.
int cmd_calibrate(const std::string& path, const std::string& tmpl, const geometry::RansacParams& ransac) {
  require_file(path, "calibrate");
  std::vector<geometry::Correspondence> corr;
  try {
    std::ifstream in(path, std::ios::binary);
    const auto j = nlohmann::json::parse(in);
    const auto court = geometry::find_template(
        tmpl.empty() ? j.value("court_template", std::string("NBA")) : tmpl);
    for (const auto& c : j.at("correspondences")) {
      geometry::Correspondence k;
      k.image = {c.at("u").get<double>(), c.at("v").get<double>()};
      if (c.contains("landmark")) {
        k.landmark = c["landmark"].get<std::string>();
        k.court = court.landmark(*k.landmark);
      } else {
        k.court = {c.at("x").get<double>(), c.at("y").get<double>()};
      }
      corr.push_back(k);
    }
  } catch (const nlohmann::json::exception& e) {
    return report("calibrate", ErrorCode::MalformedRecord, path + ": " + e.what());
  } catch (const Error& e) {
    return report("calibrate", e.code(), e.what());
  }

  try {
    geometry::Homography h;
    std::size_t inliers = corr.size();
    if (corr.size() > 4) {
      const auto fit = geometry::estimate_homography_robust(corr, ransac);
      h = fit.homography;
      inliers = fit.inlier_count();
    } else {
      h = geometry::estimate_homography(corr);
    }
    const auto err = geometry::reprojection_error(h, corr);
    const auto m = h.row_major();
    std::cout << std::setprecision(10);
    std::cout << "homography (image -> court):\n";
    for (int r = 0; r < 3; ++r) {
      std::cout << "  " << m[3 * r] << " " << m[3 * r + 1] << " " << m[3 * r + 2] << "\n";
    }
    std::cout << std::setprecision(4) << std::fixed;
    std::cout << "correspondences: " << corr.size() << " (inliers " << inliers << ")\n";
    std::cout << "reprojection rms_px: " << err.rms_px << "\n";
    std::cout << "reprojection max_px: " << err.max_px << "\n";
  } catch (const Error& e) {
    return report("calibrate", e.code(), e.what());
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_lint(const std::string& path, const scene::LintOptions& opts) {
  require_file(path, "lint");
  try {
    const auto doc = scene::parse_scene_file(path);
    const auto warnings = scene::lint_scene(doc, opts);
    for (const auto& w : warnings) std::cout << "[" << scene::to_string(w.kind) << "] " << w.message << "\n";
    std::cout << warnings.size() << " warning(s)\n";
  } catch (const Error& e) {
    return report("lint", e.code(), e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wheelchair basketball scene reconstruction from tracked broadcast detections"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bridge 0.1.0");

  ReconstructArgs ra;
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a scene document from a trk file");
  rec->add_option("input", ra.input, "Input .trk file")->required();
  rec->add_option("-o,--output", ra.output, "Output .scn path (overrides output.path)");
  rec->add_option("-c,--config", ra.config, "Config JSON (default: $BRIDGE_CONFIG)");
  rec->add_option("--overlap-threshold", ra.overlap_threshold, "possession.overlap_threshold");
  rec->add_option("--confirm-frames", ra.confirm_frames, "possession.confirm_frames");
  rec->add_option("--release-frames", ra.release_frames, "possession.release_frames");
  rec->add_option("--max-gap", ra.max_gap_frames, "ingest.max_gap_frames");
  rec->add_option("--court-template", ra.court_template, "geometry.court_template");
  rec->add_flag("--parallel", ra.parallel, "Smooth tracks on several threads (output unchanged)");
  rec->add_flag("-q,--quiet", ra.quiet, "Suppress the summary");

  SynthArgs sa;
  auto* syn = app.add_subcommand("synth", "Generate a noisy trk file and its ground-truth scene");
  syn->add_option("-s,--script", sa.script, "Shipped script name or path to a script JSON")->required();
  syn->add_option("-o,--out-dir", sa.out_dir, "Output directory")->capture_default_str();
  syn->add_option("--seed", sa.seed, "Noise seed");
  syn->add_option("--pixel-sigma", sa.pixel_sigma, "Gaussian pixel noise on box centers");
  syn->add_option("--dropout", sa.dropout, "Per-detection drop probability");

  std::string truth_path, recon_path, eval_out;
  auto* ev = app.add_subcommand("evaluate", "Compare a reconstruction with ground truth");
  ev->add_option("truth", truth_path, "Ground-truth .scn")->required();
  ev->add_option("reconstruction", recon_path, "Reconstructed .scn")->required();
  ev->add_option("-o,--output", eval_out, "Also write the report to this path");

  std::string corr_path, corr_template;
  geometry::RansacParams ransac;
  auto* cal = app.add_subcommand("calibrate", "Fit a homography from a correspondence file");
  cal->add_option("correspondences", corr_path, "Correspondence JSON")->required();
  cal->add_option("--court-template", corr_template, "Template for landmark names");
  cal->add_option("--iterations", ransac.iterations, "RANSAC iterations")->capture_default_str();
  cal->add_option("--threshold", ransac.inlier_threshold_px, "Inlier threshold in pixels")->capture_default_str();
  cal->add_option("--seed", ransac.seed, "RANSAC seed")->capture_default_str();

  std::string lint_path;
  scene::LintOptions lint_opts;
  auto* lint = app.add_subcommand("lint", "Check a scene document for rule violations");
  lint->add_option("scene", lint_path, "Scene .scn file")->required();
  lint->add_option("--cap", lint_opts.team_point_cap, "Team classification cap")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: stage=usage code=Usage msg=" << one_line(e.what()) << "\n";
    std::cerr << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*rec) return cmd_reconstruct(ra);
    if (*syn) return cmd_synth(sa);
    if (*ev) return cmd_evaluate(truth_path, recon_path, eval_out);
    if (*cal) return cmd_calibrate(corr_path, corr_template, ransac);
    if (*lint) return cmd_lint(lint_path, lint_opts);
  } catch (const UsageError& e) {
    return report(e.stage, e.code, e.message);
  } catch (const Error& e) {
    return report("unknown", e.code(), e.what());
  }
  return kExitUsage;
}
