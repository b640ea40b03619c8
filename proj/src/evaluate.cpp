#include "bridge/error.hpp"
#include "bridge/synth.hpp"

#include <json.hpp>

#include <cmath>
#include <map>

namespace bridge::synth {

EvalReport evaluate(const scene::SceneDocument& truth, const scene::SceneDocument& recon) {
  if (std::abs(truth.fps - recon.fps) > 1e-9) {
    throw Error(ErrorCode::DocumentMismatch, "fps differs: truth " + std::to_string(truth.fps) +
                                                 ", reconstruction " + std::to_string(recon.fps));
  }
  if (truth.frames.size() != recon.frames.size()) {
    throw Error(ErrorCode::DocumentMismatch,
                "frame count differs: truth " + std::to_string(truth.frames.size()) +
                    ", reconstruction " + std::to_string(recon.frames.size()));
  }

  EvalReport r;
  double sq = 0.0;
  for (std::size_t f = 0; f < truth.frames.size(); ++f) {
    std::map<TrackId, const scene::ScenePlayerFrame*> expected;
    for (const auto& p : truth.frames[f].players) expected[p.track_id] = &p;
    for (const auto& p : recon.frames[f].players) {
      const auto it = expected.find(p.track_id);
      if (it != expected.end()) {
        const double d = geometry::distance(p.position, it->second->position);
        sq += d * d;
        ++r.position_samples;
      }
      const auto* entry = recon.find_player(p.track_id);
      if (entry && !embodiment::satisfies_profile({p.theta_base, p.theta_trunk, p.theta_head},
                                                  entry->profile, 1e-6)) {
        ++r.orientation_violation_count;
      }
    }
  }
  r.position_rmse_m = r.position_samples ? std::sqrt(sq / static_cast<double>(r.position_samples)) : 0.0;

  r.truth_events = truth.events.size();
  r.reconstructed_events = recon.events.size();
  std::vector<bool> used(recon.events.size(), false);
  for (const auto& te : truth.events) {
    const auto& t = te.event;
    std::size_t best = recon.events.size();
    std::int64_t best_off = 0;
    for (std::size_t k = 0; k < recon.events.size(); ++k) {
      const auto& c = recon.events[k].event;
      if (used[k] || c.kind != t.kind || c.actor != t.actor || c.receiver != t.receiver) continue;
      const std::int64_t off = c.transit_start_frame - t.transit_start_frame;
      if (std::llabs(off) > kEventToleranceFrames) continue;
      if (best == recon.events.size() || std::llabs(off) < std::llabs(best_off)) {
        best = k;
        best_off = off;
      }
    }
    if (best < recon.events.size()) {
      used[best] = true;
      ++r.matched_events;
      r.event_offsets.push_back({t, best_off});
    }
  }
  if (r.reconstructed_events > 0) {
    r.event_precision = static_cast<double>(r.matched_events) / static_cast<double>(r.reconstructed_events);
  }
  if (r.truth_events > 0) {
    r.event_recall = static_cast<double>(r.matched_events) / static_cast<double>(r.truth_events);
  }
  return r;
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["position_rmse_m"] = scene::quantize(r.position_rmse_m);
  j["position_samples"] = r.position_samples;
  j["event_precision"] = scene::quantize(r.event_precision);
  j["event_recall"] = scene::quantize(r.event_recall);
  j["truth_events"] = r.truth_events;
  j["reconstructed_events"] = r.reconstructed_events;
  j["matched_events"] = r.matched_events;
  j["orientation_violation_count"] = r.orientation_violation_count;
  auto offsets = nlohmann::ordered_json::array();
  for (const auto& o : r.event_offsets) {
    nlohmann::ordered_json e;
    e["kind"] = possession::to_string(o.truth.kind);
    e["actor"] = o.truth.actor;
    e["receiver"] = o.truth.receiver ? nlohmann::ordered_json(*o.truth.receiver) : nullptr;
    e["transit_start_frame"] = o.truth.transit_start_frame;
    e["offset_frames"] = o.offset_frames;
    offsets.push_back(std::move(e));
  }
  j["event_offsets"] = std::move(offsets);
  return j.dump(1) + "\n";
}

}  // namespace bridge::synth
