#include "bridge/pipeline.hpp"

#include "bridge/embodiment.hpp"
#include "bridge/possession.hpp"
#include "bridge/smoothing.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <thread>

namespace bridge {

namespace {

using Clock = std::chrono::steady_clock;
using ingest::TrackId;

template <typename F>
auto run_stage(Reconstruction& r, const char* name, F&& body) {
  const auto t0 = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      r.timings.push_back({name, std::chrono::duration<double>(Clock::now() - t0).count()});
    } else {
      auto out = body();
      r.timings.push_back({name, std::chrono::duration<double>(Clock::now() - t0).count()});
      return out;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

std::vector<geometry::Correspondence> frame_correspondences(const ingest::FrameRecord& f,
                                                            const geometry::CourtTemplate& court) {
  std::vector<geometry::Correspondence> out;
  if (!f.court_keypoints) return out;
  for (const auto& k : *f.court_keypoints) out.push_back({k.image, court.landmark(k.landmark), k.landmark});
  return out;
}

geometry::Homography fit(std::span<const geometry::Correspondence> corr, const geometry::RansacParams& p) {
  if (corr.size() <= 4) return geometry::estimate_homography(corr);
  return geometry::estimate_homography_robust(corr, p).homography;
}

// Meters per pixel around `p`, the geometric mean of the two axis scales.
double meters_per_pixel(const geometry::Homography& h, const geometry::ImagePoint& p) {
  const auto c = geometry::project_to_court(h, p);
  const auto cu = geometry::project_to_court(h, {p.u + 1.0, p.v});
  const auto cv = geometry::project_to_court(h, {p.u, p.v + 1.0});
  const double det = (cu.x - c.x) * (cv.y - c.y) - (cu.y - c.y) * (cv.x - c.x);
  return std::sqrt(std::abs(det));
}

struct TrackInput {
  std::vector<smoothing::TrackPoint> points;
  std::vector<embodiment::RawYaws> yaws;
};

struct TrackOutput {
  smoothing::SmoothedTrack track;
  std::vector<embodiment::OrientationTriple> orientations;
};

TrackOutput process_track(const TrackInput& in, double fps, const PipelineConfig& cfg,
                          const embodiment::ClassificationProfile& profile) {
  TrackOutput out;
  out.track = smoothing::heading_from_track(smoothing::smooth_trajectory(in.points, fps, cfg.smoothing),
                                            cfg.smoothing);
  out.orientations = embodiment::map_player_sequence(out.track, in.yaws, profile);
  return out;
}

}  // namespace

Reconstruction reconstruct(const ingest::Sequence& input, const PipelineConfig& cfg) {
  Reconstruction r;

  const ingest::Sequence seq = run_stage(r, "ingest", [&] {
    ingest::validate_sequence(input);
    auto filled = ingest::interpolate_gaps(input, cfg.max_gap_frames);
    for (const auto& f : filled.frames)
      for (const auto& d : f.players) r.interpolated_records += d.synthetic ? 1 : 0;
    return filled;
  });
  const std::size_t n = seq.frames.size();

  geometry::CourtTemplate court;
  const std::vector<geometry::Homography> homographies = run_stage(r, "calibrate", [&] {
    court = geometry::find_template(cfg.court_template.value_or(seq.court_template), cfg.extra_templates);
    std::vector<geometry::Homography> hs;
    if (!seq.correspondences.empty()) {
      hs.push_back(fit(seq.correspondences, cfg.ransac));
      return hs;
    }
    // Per-frame keypoints; frames without a usable fit reuse the nearest
    // earlier one, and leading frames borrow the first.
    std::vector<std::optional<geometry::Homography>> per(n);
    std::optional<Error> last_error;
    for (std::size_t p = 0; p < n; ++p) {
      const auto corr = frame_correspondences(seq.frames[p], court);
      if (corr.size() < 4) continue;
      try {
        per[p] = fit(corr, cfg.ransac);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::UnknownLandmark) throw;
        last_error = e;
      }
    }
    std::optional<geometry::Homography> current;
    for (const auto& h : per) {
      if (h) {
        current = h;
        break;
      }
    }
    if (!current) {
      if (last_error) throw *last_error;
      throw Error(ErrorCode::TooFewCorrespondences,
                  "no header correspondences and no frame with 4 or more court keypoints");
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (per[p]) current = per[p];
      hs.push_back(*current);
    }
    return hs;
  });
  r.homography = homographies.front();
  auto homography_at = [&](std::size_t p) -> const geometry::Homography& {
    return homographies.size() == 1 ? homographies[0] : homographies[p];
  };

  std::map<TrackId, TrackInput> inputs = run_stage(r, "project", [&] {
    std::map<TrackId, TrackInput> out;
    const bool adaptive = cfg.adaptive_measurement_noise && seq.pixel_sigma.has_value();
    for (std::size_t p = 0; p < n; ++p) {
      const auto& frame = seq.frames[p];
      for (const auto& d : frame.players) {
        const auto center = d.bbox.center();
        smoothing::TrackPoint tp;
        tp.frame_index = frame.frame_index;
        tp.position = geometry::project_to_court(homography_at(p), center);
        tp.synthetic = d.synthetic;
        if (adaptive) {
          tp.measurement_sigma_m = std::max(cfg.measurement_floor_m,
                                            *seq.pixel_sigma * meters_per_pixel(homography_at(p), center));
        }
        auto& in = out[d.track_id];
        in.points.push_back(tp);
        in.yaws.push_back({d.trunk_yaw_raw, d.head_yaw_raw});
      }
    }
    return out;
  });

  std::vector<possession::PossessionInterval> intervals;
  std::vector<possession::GameEvent> events;
  run_stage(r, "possession", [&] {
    intervals = possession::detect_possession(seq, cfg.possession);
    events = possession::classify_events(intervals, seq, cfg.possession);
  });

  const auto profiles = run_stage(r, "embodiment", [&] { return scene::resolve_profiles(seq, cfg.roster); });

  std::map<TrackId, smoothing::SmoothedTrack> tracks;
  std::map<TrackId, std::vector<embodiment::OrientationTriple>> orientations;
  run_stage(r, "smoothing", [&] {
    std::vector<TrackId> ids;
    for (const auto& [id, in] : inputs) ids.push_back(id);
    std::vector<TrackOutput> results(ids.size());
    std::vector<std::optional<Error>> errors(ids.size());
    auto work = [&](std::size_t k) {
      try {
        results[k] = process_track(inputs.at(ids[k]), seq.fps, cfg, profiles.at(ids[k]));
      } catch (const Error& e) {
        errors[k] = e;
      }
    };
    if (cfg.parallel && ids.size() > 1) {
      const std::size_t workers =
          std::min<std::size_t>(ids.size(), std::max(1u, std::thread::hardware_concurrency()));
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t k = w; k < ids.size(); k += workers) work(k);
        });
      }
      for (auto& t : pool) t.join();
    } else {
      for (std::size_t k = 0; k < ids.size(); ++k) work(k);
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (errors[k]) throw Error(errors[k]->code(), "track " + std::to_string(ids[k]) + ": " + errors[k]->what());
      tracks.emplace(ids[k], std::move(results[k].track));
      orientations.emplace(ids[k], std::move(results[k].orientations));
    }
  });

  r.document = run_stage(r, "scene", [&] {
    scene::SceneInputs in;
    in.sequence = &seq;
    in.court = &court;
    in.homographies = homographies;
    in.tracks = &tracks;
    in.orientations = &orientations;
    in.intervals = intervals;
    in.events = events;
    in.roster = &cfg.roster;
    in.warnings = &r.notes;
    return scene::build_scene(in);
  });

  r.lint = run_stage(r, "lint", [&] { return scene::lint_scene(r.document); });
  return r;
}

}  // namespace bridge
