#pragma once

#include <cstdint>
#include <vector>

namespace hai {

struct SimulationRun {
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;  // events
  std::size_t initial = 0;
  std::vector<double> occupancy;  // time spent per state after burn-in
  std::uint64_t event_count = 0;
  double total_time = 0.0;        // simulated time after burn-in
  std::vector<double> empirical;  // normalized occupancy

  double tv_distance(const std::vector<double>& pi) const;
};

// Event-driven simulation of a birth-death chain with upward rates
// up_rates[k] (k = 0..N-2) and downward rate mu. The first 10% of simulated
// time is discarded.
SimulationRun simulate(const std::vector<double>& up_rates, double mu, std::uint64_t horizon_events,
                       std::uint64_t seed, std::size_t initial = 0);

// Seed for replica `index` derived from a base seed by splitmix64.
std::uint64_t replica_seed(std::uint64_t base, std::uint64_t index);

// Independent replicas, one RNG stream each, run on `workers` threads.
std::vector<SimulationRun> simulate_replicas(const std::vector<double>& up_rates, double mu,
                                             std::uint64_t horizon_events, std::uint64_t base_seed,
                                             std::size_t replicas, unsigned workers = 1);

}  // namespace hai
