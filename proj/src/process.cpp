#include "process.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "rng.hpp"

namespace sic {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Sterile: return "sterile";
    case Variant::Remenik: return "remenik";
    case Variant::Contact: return "contact";
    case Variant::TwoStateEnv: return "two-state-env";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  if (name == "sterile") return Variant::Sterile;
  if (name == "remenik") return Variant::Remenik;
  if (name == "contact") return Variant::Contact;
  if (name == "two-state-env") return Variant::TwoStateEnv;
  throw UsageError("unknown variant '" + name + "'");
}

std::array<int64_t, 3> LatticeConfig::counts() const {
  std::array<int64_t, 3> c{0, 0, 0};
  for (int8_t v : s) c[v == 1 ? 0 : (v == 0 ? 1 : 2)]++;
  return c;
}

void LatticeConfig::validate() const {
  box.validate();
  if ((int64_t)s.size() != box.n_sites())
    throw DomainError("config: state size != site count");
  for (int8_t v : s)
    if (v < -1 || v > 1) throw DomainError("config: states must be in {-1,0,1}");
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "t,count_plus1,count_zero,count_minus1\n";
  char buf[128];
  for (size_t i = 0; i < t.times.size(); i++) {
    std::snprintf(buf, sizeof buf, "%.17g,%lld,%lld,%lld\n", t.times[i],
                  (long long)t.counts[i][0], (long long)t.counts[i][1],
                  (long long)t.counts[i][2]);
    out += buf;
  }
  return out;
}

namespace {
constexpr uint64_t kInitSalt = 0x696e69745f73616cULL;
}

LatticeConfig sample_initial(const InitialSpec& spec, const Box& box, uint64_t seed) {
  box.validate();
  LatticeConfig cfg;
  cfg.box = box;
  const int64_t n = box.n_sites();
  cfg.s.assign((size_t)n, 0);

  switch (spec.kind) {
    case InitialSpec::Kind::AllOne:
      for (auto& v : cfg.s) v = 1;
      break;
    case InitialSpec::Kind::SingleOneAtOrigin: {
      Site origin{0, 0};
      if (!box.contains(origin))
        throw DomainError("sample_initial: origin outside box");
      cfg.s[box.index(origin)] = 1;
      break;
    }
    case InitialSpec::Kind::Product: {
      const double sum = spec.p1 + spec.p0 + spec.pm1;
      if (spec.p1 < 0 || spec.p0 < 0 || spec.pm1 < 0 || std::abs(sum - 1.0) > 1e-12)
        throw DomainError("sample_initial: product weights must be >= 0 and sum to 1");
      for (int64_t i = 0; i < n; i++) {
        CounterRng rng(seed, kInitSalt + (uint64_t)i);
        const double u = rng.next_u01();
        cfg.s[i] = u < spec.p1 ? 1 : (u < spec.p1 + spec.p0 ? 0 : -1);
      }
      break;
    }
    case InitialSpec::Kind::MuRho:
    case InitialSpec::Kind::NuC: {
      if (!(spec.theta > 0)) throw DomainError("sample_initial: theta > 0 required");
      const double rho = 1.0 / (1.0 + spec.theta);
      for (int64_t i = 0; i < n; i++) {
        CounterRng rng(seed, kInitSalt + (uint64_t)i);
        cfg.s[i] = rng.next_u01() < rho ? -1 : 0;
      }
      if (spec.kind == InitialSpec::Kind::NuC)
        for (const Site& c : spec.C) {
          if (!box.contains(c)) throw DomainError("sample_initial: C site outside box");
          auto& v = cfg.s[box.index(c)];
          if (v != -1) v = 1;
        }
      break;
    }
    case InitialSpec::Kind::Fixed:
      cfg.s = spec.fixed;
      cfg.validate();
      break;
  }
  return cfg;
}

Simulator::Simulator(Variant v, LatticeConfig init) : variant_(v), cfg_(std::move(init)) {
  cfg_.validate();
  for (int8_t s : cfg_.s) {
    if (s == 1) n1_++;
    if (s == -1) nm1_++;
  }
  if (v == Variant::Contact && nm1_ > 0)
    throw DomainError("contact process: state -1 not allowed in initial config");
  if (v == Variant::TwoStateEnv && n1_ > 0)
    throw DomainError("two-state environment: state +1 not allowed in initial config");
}

std::array<int64_t, 3> Simulator::counts() const {
  return {n1_, (int64_t)cfg_.s.size() - n1_ - nm1_, nm1_};
}

Change Simulator::apply(const Event& e) {
  auto& s = cfg_.s;
  Change ch;
  switch (e.type) {
    case EventType::Arrow:
      if (s[e.src] == 1 && s[e.site] == 0) ch = {e.site, 0, 1};
      break;
    case EventType::Death:
      if (s[e.site] == 1) ch = {e.site, 1, 0};
      break;
    case EventType::SterileArrival:
      if (variant_ == Variant::Contact) break;
      if (s[e.site] == 0) ch = {e.site, 0, -1};
      else if (s[e.site] == 1 && variant_ == Variant::Remenik) ch = {e.site, 1, -1};
      break;
    case EventType::SterileRemoval:
      if (variant_ == Variant::Contact) break;
      if (s[e.site] == -1) ch = {e.site, -1, 0};
      break;
  }
  if (ch.site >= 0) {
    s[ch.site] = ch.to;
    if (ch.from == 1) n1_--;
    if (ch.to == 1) n1_++;
    if (ch.from == -1) nm1_--;
    if (ch.to == -1) nm1_++;
  }
  return ch;
}

namespace {
void check_run_inputs(const LatticeConfig& init, const EventStream& stream,
                      const std::vector<double>& sample_times) {
  init.validate();
  if (init.box.dim != stream.box.dim || init.box.lo[0] != stream.box.lo[0] ||
      init.box.hi[0] != stream.box.hi[0] || init.box.lo[1] != stream.box.lo[1] ||
      init.box.hi[1] != stream.box.hi[1] || init.box.boundary != stream.box.boundary)
    throw DomainError("evolve: init box != stream box");
  double prev = 0.0;
  for (double t : sample_times) {
    if (t < prev || t > stream.horizon)
      throw DomainError("evolve: sample times must be nondecreasing within [0,horizon]");
    prev = t;
  }
}
} // namespace

Trajectory evolve(Variant v, const LatticeConfig& init, const EventStream& stream,
                  const std::vector<double>& sample_times, bool keep_configs) {
  check_run_inputs(init, stream, sample_times);
  Simulator sim(v, init);
  Trajectory traj;
  traj.times = sample_times;
  traj.counts.reserve(sample_times.size());
  size_t ev = 0;
  for (double t : sample_times) {
    while (ev < stream.events.size() && stream.events[ev].t <= t)
      sim.apply(stream.events[ev++]);
    traj.counts.push_back(sim.counts());
    if (keep_configs) traj.configs.push_back(sim.state());
  }
  return traj;
}

CoupledResult coupled_evolve(const std::vector<std::pair<Variant, LatticeConfig>>& runs,
                             const EventStream& stream,
                             const std::vector<double>& sample_times,
                             const std::vector<std::pair<int, int>>& pairs,
                             bool keep_configs) {
  if (runs.empty()) throw DomainError("coupled_evolve: no runs");
  for (auto& r : runs) check_run_inputs(r.second, stream, sample_times);
  for (auto& p : pairs)
    if (p.first < 0 || p.second < 0 || p.first >= (int)runs.size() ||
        p.second >= (int)runs.size())
      throw DomainError("coupled_evolve: pair index out of range");

  std::vector<Simulator> sims;
  sims.reserve(runs.size());
  for (auto& r : runs) sims.emplace_back(r.first, r.second);

  CoupledResult res;
  res.trajectories.resize(runs.size());
  for (auto& t : res.trajectories) t.times = sample_times;
  res.ordered.assign(pairs.size(), {});

  size_t ev = 0;
  for (double t : sample_times) {
    while (ev < stream.events.size() && stream.events[ev].t <= t) {
      for (auto& sim : sims) sim.apply(stream.events[ev]);
      ev++;
    }
    for (size_t i = 0; i < sims.size(); i++) {
      res.trajectories[i].counts.push_back(sims[i].counts());
      if (keep_configs) res.trajectories[i].configs.push_back(sims[i].state());
    }
    for (size_t p = 0; p < pairs.size(); p++) {
      const auto& a = sims[pairs[p].first].state();
      const auto& b = sims[pairs[p].second].state();
      uint8_t ok = 1;
      for (size_t i = 0; i < a.size(); i++)
        if (a[i] > b[i]) { ok = 0; break; }
      res.ordered[p].push_back(ok);
      if (!ok) res.violations++;
    }
  }
  return res;
}

ChainFreqs comparison_chain_freqs(double lambda, double theta, double alpha, int dim,
                                  double t_total, int n_batches, uint64_t seed) {
  if (!(lambda >= 0) || !(theta > 0) || !(alpha >= 0) || (dim != 1 && dim != 2))
    throw DomainError("comparison_chain: bad rates");
  if (!(t_total > 0) || n_batches < 2)
    throw DomainError("comparison_chain: t_total > 0 and n_batches >= 2 required");

  const double birth = 2.0 * dim * lambda;
  CounterRng rng(seed, 0xc0c1);
  const double batch_len = t_total / n_batches;
  std::vector<std::array<double, 3>> occ((size_t)n_batches, {0, 0, 0});

  int state = 0; // start at 0; burn-in is negligible over desk-scale horizons
  double t = 0.0;
  while (t < t_total) {
    double rate;
    if (state == 1) rate = 1.0;
    else if (state == 0) rate = birth + alpha;
    else rate = theta * alpha;
    double hold, next_t;
    if (rate <= 0.0) { // absorbing under these rates; occupy to the end
      hold = t_total - t;
      next_t = t_total;
    } else {
      hold = rng.next_exp(rate);
      next_t = t + hold;
      if (next_t > t_total) next_t = t_total;
    }
    // spread the sojourn over the batches it covers
    double a = t, b = next_t;
    int ia = (int)(a / batch_len), ib = (int)(b / batch_len);
    if (ia >= n_batches) ia = n_batches - 1;
    if (ib >= n_batches) ib = n_batches - 1;
    const int si = state == 1 ? 0 : (state == 0 ? 1 : 2);
    for (int k = ia; k <= ib; k++) {
      const double s0 = std::max(a, k * batch_len);
      const double s1 = std::min(b, (k + 1) * batch_len);
      if (s1 > s0) occ[k][si] += s1 - s0;
    }
    t = next_t;
    if (t >= t_total) break;
    // transition
    if (state == 1) state = 0;
    else if (state == -1) state = 0;
    else state = rng.next_u01() < birth / (birth + alpha) ? 1 : -1;
  }

  ChainFreqs out;
  EstimateCI* slots[3] = {&out.plus, &out.zero, &out.minus};
  for (int si = 0; si < 3; si++) {
    std::vector<double> fr((size_t)n_batches);
    for (int k = 0; k < n_batches; k++) fr[k] = occ[k][si] / batch_len;
    *slots[si] = mean_ci(fr, seed);
  }
  return out;
}

} // namespace sic
