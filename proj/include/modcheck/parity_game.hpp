#pragma once

// Two-player max-parity games. Automaton wins a play iff the highest colour
// occurring infinitely often is even.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace modcheck
{

enum class Player : std::uint8_t
{
    Automaton,
    Pathfinder
};

[[nodiscard]] inline Player opponent( Player p ) { return p == Player::Automaton ? Player::Pathfinder : Player::Automaton; }
[[nodiscard]] inline Player parity_winner( int color ) { return color % 2 == 0 ? Player::Automaton : Player::Pathfinder; }

struct ParityGame
{
    std::vector< Player > owner;
    std::vector< int > color;
    std::vector< std::vector< int > > succ;
    std::vector< std::string > name; // optional, for dumps
    int initial = 0;

    [[nodiscard]] std::size_t size() const { return owner.size(); }
    int add_position( Player p, int c, std::string label = {} );
    void add_edge( int from, int to ) { succ[ from ].push_back( to ); }
    // Throws std::logic_error when a position has no successor.
    void validate() const;
};

struct GameSolution
{
    std::vector< Player > winner;
    // For each position won by its owner: one successor certifying the win;
    // -1 elsewhere.
    std::vector< int > strategy;
};

// Recursive attractor-based (Zielonka) solver.
[[nodiscard]] GameSolution solve( const ParityGame& g );

// Exhaustive enumeration of positional strategy pairs. Throws
// ResourceError("game", cap) above the position cap.
[[nodiscard]] std::vector< Player > brute_solve( const ParityGame& g, std::size_t cap = 12 );

[[nodiscard]] std::string to_text( const ParityGame& g, const GameSolution* sol = nullptr );
[[nodiscard]] std::string to_dot( const ParityGame& g, const GameSolution* sol = nullptr );

} // namespace modcheck
