#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specgame/config.hpp"
#include "specgame/rng.hpp"

namespace specgame {

// Recommended/effective actions: buy = +1, sell = -1, hold/idle = 0.
using Action = int;

// Quantized price moves (history digits) live in {-2,...,2}.
using HistoryDigit = std::int8_t;

// Dense lookup table: recommended action for each of the 5^M possible
// history windows.
struct StrategyTable {
    std::vector<std::int8_t> entries;
};

// One open round-trip trade. Virtual positions always carry quantity 1.
struct Position {
    int direction = 0;                      // opening action, -1 or +1
    int open_step = 0;
    long long open_cognitive_price = 0;     // P at the opening step
    long long quantity = 1;
};

struct PlayerState {
    long long wealth = 0;
    std::vector<StrategyTable> strategies;
    std::vector<long long> gains;           // accumulated per-strategy gain
    int in_use = 0;
    std::optional<Position> real_position;
    std::vector<std::optional<Position>> virtual_positions;
};

struct MarketState {
    int step = 0;
    double market_price = 0.0;
    long long cognitive_price = 0;
    std::vector<HistoryDigit> history;      // oldest first, length M
};

// Per-step aggregates emitted by the engine.
struct StepRecord {
    long long excess_demand = 0;
    double price_change = 0.0;
    int quantized_move = 0;
    long long buy_volume = 0;
    long long sell_volume = 0;
    int n_buyers = 0;
    int n_sellers = 0;
    int n_replaced = 0;
};

enum class Transition { open, hold, close, idle };

struct ActionDecision {
    Action action;
    Transition transition;
};

// Base-5 positional encoding of a history window; the most recent digit is
// the least significant one.
std::size_t encode_history(const std::vector<HistoryDigit>& history);

StrategyTable generate_strategy(Rng& rng, int memory);

// Round-trip constraint: a repeat recommendation while a position is open
// maps to hold; the opposite recommendation closes.
ActionDecision decide_action(Action recommendation,
                             const std::optional<Position>& real_position);

long long order_quantity(long long wealth, int board_lot);

// Five-branch quantization of a price change against the threshold C.
int quantize_move(double price_change, double cognitive_threshold);

// Gain of a closed round trip evaluated on the cognitive price.
long long settle_round_trip(const Position& position, long long cognitive_price);

PlayerState make_player(Rng& rng, const GameConfig& config);

// Argmax over accumulated gains; ties favor the current strategy, then the
// lowest index.
int select_strategy(const std::vector<long long>& gains, int in_use);

struct TrialResult {
    std::vector<double> prices;             // p(0..T)
    std::vector<StepRecord> records;        // one per step, t = 1..T
};

class Engine {
public:
    // Seeded construction: random initial history and players.
    Engine(const GameConfig& config, Rng rng);

    // Explicit construction for tests and hand-built scenarios.
    Engine(const GameConfig& config, Rng rng, std::vector<PlayerState> players,
           std::vector<HistoryDigit> initial_history);

    StepRecord step();

    const MarketState& market() const { return market_; }
    const std::vector<PlayerState>& players() const { return players_; }

    // When false, every loop runs on the calling thread. The serial and
    // parallel paths produce bit-identical trajectories; tests compare them.
    void set_parallel(bool on) { parallel_ = on; }

private:
    GameConfig config_;
    Rng rng_;
    std::vector<PlayerState> players_;
    MarketState market_;
    bool parallel_ = true;

    // per-step scratch, reused across steps
    struct PlayerScratch {
        Action action;
        Transition transition;
        long long quantity;
        bool real_closed;
        long long close_gain;
        long long close_quantity;
    };
    std::vector<PlayerScratch> scratch_;

    void review_strategies(PlayerState& player);
};

TrialResult run_trial(const GameConfig& config, Rng rng, bool parallel = true);

// Single-trial entry point seeded directly from the config.
TrialResult run_trial(const GameConfig& config, bool parallel = true);

}  // namespace specgame
