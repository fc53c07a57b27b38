#pragma once
// Block-construction toolkit: good-block indicators for the one- and
// two-dimensional extinction constructions, renormalized-site openness from
// four persistent crossings, oriented-percolation wet sets, the dead-zone
// audit, and the finite space-time condition estimates.

#include <cstdint>
#include <vector>

#include "events.hpp"
#include "lattice.hpp"
#include "process.hpp"
#include "stats.hpp"

namespace sic {

// ---------------------------------------------------------------- good blocks

struct BlockResult {
  EstimateCI p_good;
  double T = 0;              // block time unit
  int64_t K = 0;             // inner window halfwidth actually used
  int64_t early_extinct = 0; // replicas whose 1's all died before the window opened
};

// d=1 block event: start all 1's on [-2K,2K]; good iff no site of [-K,K] is in
// state 1 at any time in [T,3T], with T=(t0+beta)/alpha_T. The time scale
// alpha_T is passed separately from model.alpha so the window stays finite
// even when the dynamics run without sterile input. Births are confined to
// the block's own box, so the indicator depends only on the stream inside it.
// Goodness is monitored at every event time; no sampling grid.
BlockResult block_good_d1(int64_t K, double t0, double beta, double alpha_T,
                          const ModelParams& model, int64_t reps, uint64_t seed,
                          int jobs = 1);

// d=2 analogue: all 1's on [-2K,2K]^2, window [-K,K]^2 over [T,3T] with
// T=c_T/model.alpha. K<=0 derives K=round(T/c_K). Aspect ratios with
// 2*c_K > c0/lambda are rejected (c0 from solve_c0()).
BlockResult block_good_d2(int64_t K, double c_T, double c_K, const ModelParams& model,
                          int64_t reps, uint64_t seed, int jobs = 1);

struct BlockPairResult {
  EstimateCI lo, hi;            // P(good) at lambda_lo / lambda_hi
  int64_t order_violations = 0; // replicas good at lambda_hi but not at lambda_lo
};

// The same block event at two birth rates on a shared arrow-thinned stream.
// More arrows can only add 1's, so the good indicator is antitone in lambda
// pathwise and violations should be exactly zero.
BlockPairResult block_good_d1_pair(int64_t K, double t0, double beta, double alpha_T,
                                   ModelParams model, double lambda_lo, double lambda_hi,
                                   int64_t reps, uint64_t seed, int jobs = 1);
BlockPairResult block_good_d2_pair(int64_t K, double c_T, double c_K, ModelParams model,
                                   double lambda_lo, double lambda_hi, int64_t reps,
                                   uint64_t seed, int jobs = 1);

// ------------------------------------- renormalized-site openness (crossings)

struct NEOpenResult {
  EstimateCI p_open;         // all four strips cross within the never-(-1) sites
  EstimateCI open_site_frac; // mean fraction of sites never -1 during [0,2T]
  double T = 0;
  double p0_hat = 0;         // mean initial fraction of non-(-1) sites
  double theta_frac = 0;     // theta/(1+theta)
  double margin_rhs = 0;     // 1 - exp(-2*eps0)
  double p_c_ref = 0;        // crossing-threshold reference for the adjacency
  bool margin_ok = true;     // theta_frac > p_c and p0_hat - p_c > margin_rhs
};

// Runs the sterile process from draws of `init` on [-N,N]^2; a site is open
// when it is never in state -1 during [0,2T], T=eps0/alpha. Returns the
// probability that all four crossing strips at scale N (fringe exponent eta)
// cross inside the open set, on the matching lattice as in
// four_crossings_prob. alpha=0 freezes the -1 set, so openness reduces to the
// initial -1's. A failed margin only flags the result, it does not error.
NEOpenResult ne_site_open(int64_t N, double eta, double eps0, const ModelParams& model,
                          const InitialSpec& init, int64_t reps, uint64_t seed,
                          int jobs = 1);

// ------------------------------- oriented percolation on renormalized lattices

// Diag1D: sites {(m,n): m+n even}, edges (m,n)->(m+-1,n+1).
// NE3D:   sites {(m,n,m+n): m,n>=0}, edges to (m+1,n,..) and (m,n+1,..);
//         levels are indexed by k=m+n and positions by m.
enum class OPLattice { Diag1D, NE3D };

struct OPLevel {
  int64_t count = 0;
  int64_t l = 0, r = 0; // min/max wet position at this level (valid when count>0)
};

struct OPRun {
  std::vector<OPLevel> levels;          // [0..last computed level]
  std::vector<std::vector<int64_t>> sets; // wet positions per level when kept
  bool survived = false;
  int64_t extinct_level = -1;           // first empty level; -1 if survived
  double v_hat = 0;                     // r_n / n at the final level
};

// Site openness is i.i.d.(p) keyed by (seed, site coordinates), so runs with
// different initial wet sets share their indicators. The seed site(s) at level
// 0 are wet by fiat; openness gates only the levels above. init_halfwidth > 0
// additionally wets every level-0 site with |m| <= init_halfwidth (Diag1D).
OPRun op_run(double p, int64_t n_levels, OPLattice lattice, uint64_t seed,
             int64_t init_halfwidth = 0, bool keep_sets = false);

struct OPSurvival {
  EstimateCI survival;
  double v_hat_mean = 0; // mean r_n/n over surviving runs
  int64_t surviving = 0;
};
OPSurvival op_survival(double p, int64_t n_levels, OPLattice lattice, int64_t reps,
                       uint64_t seed, int jobs = 1);

// --------------------------- block grids, wet recursion, the dead-zone audit

// Indicator grid over the renormalized lattice light cone: open[j] holds the
// offsets m = -j, -j+2, ..., j at slot (m+j)/2.
struct BlockGrid {
  int64_t n_levels = 0;
  std::vector<std::vector<uint8_t>> open;
};

struct WetRun {
  std::vector<std::vector<int64_t>> wet; // ascending wet offsets per level
  std::vector<int64_t> l, r;             // extremes per level (valid while wet)
  bool survived = false;
  int64_t extinct_level = -1;
};

// Strict recursion: level 0 is wet only if its block is open (no fiat here,
// since the audit's wall rectangles rely on every path block being good).
WetRun wet_from_grid(const BlockGrid& grid);

struct DeadZoneResult {
  int64_t violations = 0;     // 1-intervals seen strictly between the walls
  int64_t one_intervals = 0;  // 1-intervals checked
  int64_t levels = 0;         // wall levels available (wet depth)
  int64_t zone_layers = 0;    // time layers with a nonempty zone interior
  bool wet_survived = false;
  BlockGrid grid;
  WetRun wet;
};

// Full per-seed audit. One stream feeds everything: every block indicator is
// computed from the stream restricted to its own box (all 1's on
// mK+[-2K,2K] at time jT, no 1's in mK+[-K,K] during [jT+T, jT+3T]); the wet
// recursion picks the leftmost/rightmost wall paths; the full-box trajectory
// (all 1's on [-2K,2K], 0 elsewhere) is then replayed and every maximal
// 1-interval is tested against the zone strictly between the walls, layer by
// layer in exact event time. The construction predicts zero violations.
DeadZoneResult dead_zone_audit(int64_t K, double t0, double beta, const ModelParams& model,
                               int64_t n_levels, uint64_t seed);

// ------------------------------------------------------ generic wet property

// The default happy property H for 1-d renormalized sites: at least
// `threshold` sites in state 1 in center+[-L,L] (clamped to the box).
bool wet_property_h(const LatticeConfig& c, int32_t center, int32_t L, int64_t threshold);

// ------------------------------------------------ finite space-time condition

struct STCResult {
  EstimateCI p1; // some window x+[-n,n]^d, x in [0,L)^d, fully 1 at time T+1
  EstimateCI p2; // some face window at x in {L+n} x [0,L)^{d-1} fully 1
                 // at some time in [1, T+1] (monitored at every event)
  double T = 0;
  int64_t box_halfwidth = 0;
};

// Truncated process on the closed box [-(L+2n), L+2n]^d (no births across its
// boundary) started from 1 on [-n,n]^d and -1 elsewhere.
STCResult space_time_condition(int64_t n, int64_t L, double T, const ModelParams& model,
                               int64_t reps, uint64_t seed, int jobs = 1);

struct STCPairResult {
  EstimateCI p1_lo, p1_hi;
  int64_t order_violations = 0; // p1 hit at lambda_lo but not lambda_hi
  int64_t p2_violations = 0;    // same for p2
};

// Both window events under shared thinned streams at two birth rates; the
// events are monotone nondecreasing in lambda pathwise.
STCPairResult space_time_condition_pair(int64_t n, int64_t L, double T, ModelParams model,
                                        double lambda_lo, double lambda_hi, int64_t reps,
                                        uint64_t seed, int jobs = 1);

} // namespace sic
