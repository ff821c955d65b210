#include "specgame/engine.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace specgame {

std::size_t encode_history(const std::vector<HistoryDigit>& history) {
    std::size_t index = 0;
    for (HistoryDigit digit : history) {
        if (digit < -2 || digit > 2)
            throw std::invalid_argument("history digit out of range [-2, 2]");
        index = index * 5 + static_cast<std::size_t>(digit + 2);
    }
    return index;
}

StrategyTable generate_strategy(Rng& rng, int memory) {
    std::size_t size = 1;
    for (int m = 0; m < memory; ++m) size *= 5;
    StrategyTable table;
    table.entries.resize(size);
    for (auto& entry : table.entries)
        entry = static_cast<std::int8_t>(static_cast<int>(rng.uniform_int(3)) - 1);
    return table;
}

ActionDecision decide_action(Action recommendation,
                             const std::optional<Position>& real_position) {
    if (!real_position) {
        if (recommendation == 0) return {0, Transition::idle};
        return {recommendation, Transition::open};
    }
    if (recommendation == -real_position->direction)
        return {recommendation, Transition::close};
    return {0, Transition::hold};
}

long long order_quantity(long long wealth, int board_lot) {
    return wealth / board_lot;
}

int quantize_move(double price_change, double cognitive_threshold) {
    if (price_change > cognitive_threshold) return 2;
    if (price_change > 0) return 1;
    if (price_change == 0) return 0;
    if (price_change >= -cognitive_threshold) return -1;
    return -2;
}

long long settle_round_trip(const Position& position, long long cognitive_price) {
    return position.direction * (cognitive_price - position.open_cognitive_price);
}

PlayerState make_player(Rng& rng, const GameConfig& config) {
    PlayerState player;
    player.wealth = config.board_lot + static_cast<long long>(rng.uniform_int(100));
    player.strategies.reserve(config.n_strategies);
    for (int j = 0; j < config.n_strategies; ++j)
        player.strategies.push_back(generate_strategy(rng, config.memory));
    player.gains.assign(config.n_strategies, 0);
    player.in_use = 0;
    player.virtual_positions.assign(config.n_strategies, std::nullopt);
    return player;
}

Engine::Engine(const GameConfig& config, Rng rng)
    : config_(config), rng_(rng) {
    config_.validate();
    market_.market_price = config_.initial_price;
    market_.history.resize(config_.memory);
    for (auto& digit : market_.history)
        digit = static_cast<HistoryDigit>(static_cast<int>(rng_.uniform_int(5)) - 2);
    players_.reserve(config_.n_players);
    for (int i = 0; i < config_.n_players; ++i)
        players_.push_back(make_player(rng_, config_));
    scratch_.resize(players_.size());
}

Engine::Engine(const GameConfig& config, Rng rng, std::vector<PlayerState> players,
               std::vector<HistoryDigit> initial_history)
    : config_(config), rng_(rng), players_(std::move(players)) {
    config_.validate();
    if (initial_history.size() != static_cast<std::size_t>(config_.memory))
        throw std::invalid_argument("initial history length must equal memory");
    market_.market_price = config_.initial_price;
    market_.history = std::move(initial_history);
    scratch_.resize(players_.size());
}

int select_strategy(const std::vector<long long>& gains, int in_use) {
    int best = in_use;
    for (int j = 0; j < static_cast<int>(gains.size()); ++j)
        if (gains[j] > gains[best]) best = j;
    return best;
}

void Engine::review_strategies(PlayerState& player) {
    const int best = select_strategy(player.gains, player.in_use);
    if (best != player.in_use) {
        // The adopted strategy's ongoing virtual trade is aborted; its
        // accumulated gain is not updated.
        player.virtual_positions[best].reset();
        player.in_use = best;
    }
}

StepRecord Engine::step() {
    const int n = static_cast<int>(players_.size());
    const int t = market_.step + 1;
    const std::size_t history_index = encode_history(market_.history);

    // 1-2: recommendations and effective actions. Pure per player.
    long long excess_demand = 0, buy_volume = 0, sell_volume = 0;
    int n_buyers = 0, n_sellers = 0;
#pragma omp parallel for if (parallel_) schedule(static) \
    reduction(+ : excess_demand, buy_volume, sell_volume, n_buyers, n_sellers)
    for (int i = 0; i < n; ++i) {
        const PlayerState& player = players_[i];
        const Action rec = player.strategies[player.in_use].entries[history_index];
        const ActionDecision decision = decide_action(rec, player.real_position);
        long long quantity = 0;
        if (decision.transition == Transition::open)
            quantity = order_quantity(player.wealth, config_.board_lot);
        else if (decision.transition == Transition::close)
            quantity = player.real_position->quantity;
        scratch_[i] = {decision.action, decision.transition, quantity,
                       false, 0, 0};
        if (decision.action == 1) {
            buy_volume += quantity;
            ++n_buyers;
        } else if (decision.action == -1) {
            sell_volume += quantity;
            ++n_sellers;
        }
        excess_demand += decision.action * quantity;
    }

    // 3-4: clearing and cognition update.
    const double price_change =
        static_cast<double>(excess_demand) / config_.n_players;
    market_.market_price += price_change;
    const int move = quantize_move(price_change, config_.cognitive_threshold);
    market_.cognitive_price += move;
    for (std::size_t k = 1; k < market_.history.size(); ++k)
        market_.history[k - 1] = market_.history[k];
    market_.history.back() = static_cast<HistoryDigit>(move);
    market_.step = t;
    const long long cognitive_price = market_.cognitive_price;

    // 5: virtual round trips for every strategy, plus the real position
    // lifecycle of the in-use strategy. Open positions record the
    // post-update cognitive price.
#pragma omp parallel for if (parallel_) schedule(static)
    for (int i = 0; i < n; ++i) {
        PlayerState& player = players_[i];
        PlayerScratch& sc = scratch_[i];
        const int n_strategies = static_cast<int>(player.strategies.size());
        for (int j = 0; j < n_strategies; ++j) {
            const Action rec = player.strategies[j].entries[history_index];
            const ActionDecision decision =
                decide_action(rec, player.virtual_positions[j]);
            if (decision.transition == Transition::open) {
                player.virtual_positions[j] = Position{rec, t, cognitive_price, 1};
            } else if (decision.transition == Transition::close) {
                player.gains[j] +=
                    settle_round_trip(*player.virtual_positions[j], cognitive_price);
                player.virtual_positions[j].reset();
            }
        }
        if (sc.transition == Transition::open) {
            player.real_position =
                Position{sc.action, t, cognitive_price, sc.quantity};
        } else if (sc.transition == Transition::close) {
            sc.real_closed = true;
            sc.close_gain = settle_round_trip(*player.real_position, cognitive_price);
            sc.close_quantity = player.real_position->quantity;
            player.real_position.reset();
        }
    }

    // 6: wealth settlement, withdrawal and strategy review. Serial because
    // replacement consumes the shared random stream.
    int n_replaced = 0;
    for (int i = 0; i < n; ++i) {
        const PlayerScratch& sc = scratch_[i];
        if (!sc.real_closed) continue;
        PlayerState& player = players_[i];
        player.wealth += sc.close_gain * sc.close_quantity;
        if (player.wealth < config_.board_lot) {
            players_[i] = make_player(rng_, config_);
            ++n_replaced;
        } else {
            review_strategies(player);
        }
    }

    StepRecord record;
    record.excess_demand = excess_demand;
    record.price_change = price_change;
    record.quantized_move = move;
    record.buy_volume = buy_volume;
    record.sell_volume = sell_volume;
    record.n_buyers = n_buyers;
    record.n_sellers = n_sellers;
    record.n_replaced = n_replaced;
    return record;
}

TrialResult run_trial(const GameConfig& config, bool parallel) {
    return run_trial(config, Rng(config.seed), parallel);
}

TrialResult run_trial(const GameConfig& config, Rng rng, bool parallel) {
    Engine engine(config, rng);
    engine.set_parallel(parallel);
    TrialResult result;
    result.prices.reserve(config.steps + 1);
    result.records.reserve(config.steps);
    result.prices.push_back(engine.market().market_price);
    for (int t = 0; t < config.steps; ++t) {
        result.records.push_back(engine.step());
        result.prices.push_back(engine.market().market_price);
    }
    return result;
}

}  // namespace specgame
