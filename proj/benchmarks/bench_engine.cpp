// Compares the serial reference path of the engine against the
// OpenMP-parallel path on identical configs and checks that the
// trajectories agree bit for bit.
#include <chrono>
#include <cstdio>

#include <omp.h>

#include "specgame/engine.hpp"

using namespace specgame;

namespace {

double run_timed(const GameConfig& config, bool parallel, TrialResult& out) {
    const auto start = std::chrono::steady_clock::now();
    out = run_trial(config, parallel);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main() {
    GameConfig config;
    config.steps = 20000;
    config.seed = 7;

    std::printf("threads: %d\n", omp_get_max_threads());
    TrialResult serial, parallel;
    const double t_serial = run_timed(config, false, serial);
    const double t_parallel = run_timed(config, true, parallel);

    bool identical = serial.prices == parallel.prices &&
                     serial.records.size() == parallel.records.size();
    for (std::size_t i = 0; identical && i < serial.records.size(); ++i)
        identical = serial.records[i].excess_demand ==
                    parallel.records[i].excess_demand;

    std::printf("serial reference: %.3f s\n", t_serial);
    std::printf("openmp parallel:  %.3f s (speedup %.2fx)\n", t_parallel,
                t_serial / t_parallel);
    std::printf("trajectories identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
