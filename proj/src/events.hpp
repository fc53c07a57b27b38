#pragma once
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "lattice.hpp"

namespace sic {

// Rate table. Site marks: deaths at rate 1, sterile arrivals at rate alpha,
// sterile removals at rate theta*alpha. Birth arrows at rate lambda per
// directed in-box edge.
struct ModelParams {
  double lambda = 1.0;
  double theta = 1.0;
  double alpha = 0.0;
  int dim = 2;

  double removal_rate() const { return theta * alpha; }
  void validate() const;
};

// Tie-break order for equal timestamps (probability zero in exact arithmetic;
// fixed so floating-point collisions stay deterministic).
enum class EventType : uint8_t { Death = 0, Arrow = 1, SterileArrival = 2, SterileRemoval = 3 };

struct Event {
  double t = 0.0;
  int32_t site = -1; // affected site (arrow target) as a linear box index
  int32_t src = -1;  // arrow source index; -1 for site marks
  EventType type = EventType::Death;
};

// The realized graphical representation on box x [0, horizon): one Poisson
// stream per directed edge and three per site, merged into a single
// time-sorted event list. Regenerating with the same (seed, box, params,
// horizon) is bit-identical, and streams are keyed per edge/site so coupled
// processes share them untouched.
struct EventStream {
  Box box;
  ModelParams params;
  double horizon = 0.0;
  uint64_t seed = 0;
  std::vector<Event> events;

  int64_t n_directed_edges() const;
};

EventStream build_stream(const ModelParams& params, const Box& box, double horizon,
                         uint64_t seed);

// events with t in the half-open window [t0, t1); all events satisfy t < horizon
std::span<const Event> events_in_window(const EventStream& s, double t0, double t1);

// Arrow-thinning coupling: keep each arrow independently with probability
// keep_prob using per-arrow uniforms keyed to (seed, edge, arrow index).
// The survivors of a rate-lambda stream form a rate-keep_prob*lambda stream,
// and the kept sets are nested across keep_prob values (same uniforms).
EventStream thinned_arrows(const EventStream& s, double keep_prob);

// debug dump, newline-delimited `time,type,location` records
void dump_stream(const EventStream& s, std::ostream& os);

// per-stream accessors (filters over the merged list; used by tests/tools)
std::vector<double> mark_times(const EventStream& s, EventType type, const Site& site);
std::vector<double> arrow_times(const EventStream& s, const Site& from, const Site& to);

} // namespace sic
