#pragma once

// Seeded generators and brute-force references shared by the unit tests and
// the acceptance binary.

#include "modcheck/cgs.hpp"
#include "modcheck/formula.hpp"
#include "modcheck/parity_game.hpp"
#include "modcheck/word_automata.hpp"

#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace modcheck::testing
{

using Rng = std::mt19937_64;

inline const Signature kSysEnv{ { "sys", "env" }, { "p", "q" } };

struct RandomCgsParams
{
    std::size_t max_states = 5;
    std::size_t max_actions = 2;
    double undefined_rate = 0.2;
    // Probability that a state is environment-controlled; 0 gives env-free
    // (closed in effect) structures.
    double env_rate = 0.5;
};

// Open CGS over agents sys, env and props p, q. State s0 is initial.
[[nodiscard]] Cgs random_open_cgs( Rng& rng, const RandomCgsParams& params = {} );

// ATL state formula over kSysEnv with at most max_size surface symbols
// (F and G count once) and at least one quantifier.
[[nodiscard]] Formula random_atl_formula( Rng& rng, std::size_t max_size );

// `count` distinct formulas from a fixed seed.
[[nodiscard]] std::vector< Formula > atl_formula_suite( std::uint64_t seed, std::size_t count, std::size_t max_size );

// Fixed LTL suite over props 0 and 1.
[[nodiscard]] std::vector< Formula > ltl_suite();

// Direct evaluation of an LTL formula on stem . loop^omega.
[[nodiscard]] bool ltl_holds_on_lasso( const Formula& ltl, const std::vector< Letter >& stem,
                                       const std::vector< Letter >& loop );

// Calls f(stem, loop) for every lasso with |stem| + |loop| <= max_len over the
// letters 0 .. num_letters-1.
template < typename F >
void for_each_lasso( std::size_t max_len, Letter num_letters, F&& f )
{
    for ( std::size_t len = 1; len <= max_len; ++len )
    {
        std::vector< Letter > word( len, 0 );
        for ( ;; )
        {
            for ( std::size_t split = 0; split < len; ++split )
                f( std::vector< Letter >( word.begin(), word.begin() + static_cast< long >( split ) ),
                   std::vector< Letter >( word.begin() + static_cast< long >( split ), word.end() ) );
            std::size_t i = 0;
            for ( ; i < len; ++i )
            {
                if ( ++word[ i ] < num_letters )
                    break;
                word[ i ] = 0;
            }
            if ( i == len )
                break;
        }
    }
}

[[nodiscard]] ParityGame random_game( Rng& rng, std::size_t max_positions, int num_colors );

// Tree-shaped closed CGS (agents a1, a2; two actions) of the given depth
// whose leaves loop on themselves. Node 0 is the root; children have larger
// indices.
[[nodiscard]] Cgs random_tree_cgs( Rng& rng, std::size_t depth, std::size_t max_branching = 2 );

// Truth of every basic subformula of phi at every state of a tree CGS from
// random_tree_cgs, by enumerating coalition strategies and all outcome plays.
// bits[s] has bit i set iff basics[i] holds at s.
[[nodiscard]] std::vector< Letter > tree_basic_truth( const Cgs& tree, const BasicSubformulaTable& table );

// Propositional evaluation of an LTL formula without temporal operators.
[[nodiscard]] bool eval_propositional( const Formula& f, Letter letter );

[[nodiscard]] std::string read_file( const std::string& path );

} // namespace modcheck::testing
