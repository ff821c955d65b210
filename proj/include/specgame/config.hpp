#pragma once

#include <cstdint>
#include <stdexcept>

namespace specgame {

// Model parameters of one simulated market plus run length and seed.
struct GameConfig {
    int n_players = 1000;            // N, market depth
    int memory = 5;                  // M, history window length
    int n_strategies = 2;            // S, strategy tables per player
    int board_lot = 9;               // B, wealth per unit of order volume
    double cognitive_threshold = 3;  // C, |dp| above which a move is "large"
    double initial_price = 100.0;    // p(0)
    int steps = 50000;               // T
    std::uint64_t seed = 1;

    void validate() const {
        if (n_players < 1) throw std::invalid_argument("n_players must be >= 1");
        if (memory < 1) throw std::invalid_argument("memory must be >= 1");
        if (n_strategies < 1) throw std::invalid_argument("n_strategies must be >= 1");
        if (board_lot < 1) throw std::invalid_argument("board_lot must be >= 1");
        if (!(cognitive_threshold > 0))
            throw std::invalid_argument("cognitive_threshold must be > 0");
        if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    }
};

}  // namespace specgame
