#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "events.hpp"
#include "lattice.hpp"
#include "stats.hpp"

namespace sic {

// Sterile:     arrows 1->neighbor births; deaths 1->0; arrivals 0->-1; removals -1->0.
// Remenik:     as Sterile but arrivals send {0,1}->-1 regardless of current state.
// Contact:     arrows and deaths only (state -1 never appears).
// TwoStateEnv: the autonomous 0<->-1 environment (arrivals/removals only).
enum class Variant { Sterile, Remenik, Contact, TwoStateEnv };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name); // throws UsageError

// state array over {-1, 0, +1}, one entry per box site (linear index order)
struct LatticeConfig {
  Box box;
  std::vector<int8_t> s;

  std::array<int64_t, 3> counts() const; // (#+1, #0, #-1)
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::array<int64_t, 3>> counts;   // per sample time
  std::vector<std::vector<int8_t>> configs;     // kept only when requested
};

// CSV export: t,count_plus1,count_zero,count_minus1
std::string trajectory_csv(const Trajectory& t);

struct InitialSpec {
  enum class Kind { AllOne, SingleOneAtOrigin, Product, NuC, MuRho, Fixed };
  Kind kind = Kind::AllOne;
  double p1 = 0.0, p0 = 0.0, pm1 = 0.0; // Product weights for states +1/0/-1
  std::vector<Site> C;                  // NuC target set
  double theta = 1.0;                   // NuC / MuRho: rho = 1/(1+theta)
  std::vector<int8_t> fixed;            // Fixed state array
};

// Independent-across-sites draw, deterministic in (seed, site). NuC first draws
// mu_rho (-1 with prob rho = 1/(1+theta), else 0), then puts a 1 on every site
// of C not in state -1.
LatticeConfig sample_initial(const InitialSpec& spec, const Box& box, uint64_t seed);

struct Change {
  int32_t site = -1; // -1: event was a no-op
  int8_t from = 0;
  int8_t to = 0;
};

// Incremental event applier: apply() pushes one stream event through the
// variant's transition rule and keeps running counts. Used directly by the
// monitors (block windows, edge tracking, audits) that need per-event hooks.
class Simulator {
public:
  Simulator(Variant v, LatticeConfig init);

  Change apply(const Event& e);
  const std::vector<int8_t>& state() const { return cfg_.s; }
  int8_t state_at(int32_t idx) const { return cfg_.s[idx]; }
  const LatticeConfig& config() const { return cfg_; }
  int64_t count_plus() const { return n1_; }
  std::array<int64_t, 3> counts() const;
  Variant variant() const { return variant_; }

private:
  Variant variant_;
  LatticeConfig cfg_;
  int64_t n1_ = 0, nm1_ = 0;
};

// Apply the stream in time order, sampling the (right-continuous) state at the
// given nondecreasing sample times.
Trajectory evolve(Variant v, const LatticeConfig& init, const EventStream& stream,
                  const std::vector<double>& sample_times, bool keep_configs = false);

struct CoupledResult {
  std::vector<Trajectory> trajectories;
  // ordered[p][k]: config(pair[p].first) <= config(pair[p].second) pointwise at sample k
  std::vector<std::vector<uint8_t>> ordered;
  long long violations = 0;
};

CoupledResult coupled_evolve(const std::vector<std::pair<Variant, LatticeConfig>>& runs,
                             const EventStream& stream,
                             const std::vector<double>& sample_times,
                             const std::vector<std::pair<int, int>>& pairs,
                             bool keep_configs = false);

// Single-site 3-state comparison chain: 0->1 at constant rate 2*dim*lambda,
// 1->0 at rate 1, 0->-1 at rate alpha, -1->0 at rate theta*alpha. Long-run
// occupation fractions with batch-means standard errors.
struct ChainFreqs {
  EstimateCI plus, zero, minus;
};
ChainFreqs comparison_chain_freqs(double lambda, double theta, double alpha, int dim,
                                  double t_total, int n_batches, uint64_t seed);

} // namespace sic
