#include "hai/mcsim.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "hai/errors.hpp"
#include "hai/numeric.hpp"

namespace hai {

double SimulationRun::tv_distance(const std::vector<double>& pi) const {
  return numeric::total_variation(empirical, pi);
}

namespace {

// 53-bit uniform in [0, 1); fixed conversion so runs match across standard libraries.
double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace

SimulationRun simulate(const std::vector<double>& up_rates, double mu, std::uint64_t horizon_events,
                       std::uint64_t seed, std::size_t initial) {
  const std::size_t n = up_rates.size() + 1;
  if (horizon_events < 10000) throw DomainError("simulate: horizon must be >= 1e4 events");
  if (initial >= n) throw DomainError("simulate: initial state out of range");
  for (double r : up_rates) {
    if (!(r > 0) || !std::isfinite(r)) throw ModelError("simulate: upward rates must be positive");
  }
  if (!(mu > 0)) throw ModelError("simulate: mu must be positive");

  // Trajectory first; the burn-in cut needs the total time.
  std::vector<std::uint32_t> states;
  std::vector<double> holds;
  states.reserve(horizon_events);
  holds.reserve(horizon_events);
  std::mt19937_64 gen(seed);
  std::size_t k = initial;
  double total = 0.0;
  for (std::uint64_t ev = 0; ev < horizon_events; ++ev) {
    const double up = k + 1 < n ? up_rates[k] : 0.0;
    const double down = k > 0 ? mu : 0.0;
    const double rate = up + down;
    if (!(rate > 0)) throw ModelError("simulate: zero total rate");
    const double hold = -std::log1p(-uniform01(gen)) / rate;
    states.push_back(static_cast<std::uint32_t>(k));
    holds.push_back(hold);
    total += hold;
    k = uniform01(gen) * rate < up ? k + 1 : k - 1;
  }

  SimulationRun run;
  run.seed = seed;
  run.horizon = horizon_events;
  run.initial = initial;
  run.event_count = horizon_events;
  run.occupancy.assign(n, 0.0);
  const double cut = 0.1 * total;
  double t = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double start = t, end = t + holds[i];
    t = end;
    if (end <= cut) continue;
    run.occupancy[states[i]] += end - std::max(start, cut);
  }
  for (double o : run.occupancy) run.total_time += o;
  run.empirical.resize(n);
  for (std::size_t j = 0; j < n; ++j) run.empirical[j] = run.occupancy[j] / run.total_time;
  return run;
}

std::uint64_t replica_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<SimulationRun> simulate_replicas(const std::vector<double>& up_rates, double mu,
                                             std::uint64_t horizon_events, std::uint64_t base_seed,
                                             std::size_t replicas, unsigned workers) {
  std::vector<SimulationRun> out(replicas);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, replicas)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i; (i = next++) < replicas;) {
      try {
        out[i] = simulate(up_rates, mu, horizon_events, replica_seed(base_seed, i));
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace hai
