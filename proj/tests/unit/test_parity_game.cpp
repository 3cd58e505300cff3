#include "doctest.h"
#include "modcheck/error.hpp"
#include "modcheck/parity_game.hpp"
#include "support.hpp"

#include <algorithm>

using namespace modcheck;

namespace
{

ParityGame single( int color )
{
    ParityGame g;
    g.add_position( Player::Automaton, color );
    g.add_edge( 0, 0 );
    return g;
}

// Top colour of the loop reached when the winner follows its strategy and the
// opponent plays a random positional strategy.
int play_out( const ParityGame& g, const GameSolution& sol, int start, testing::Rng& rng )
{
    std::vector< int > choice( g.size() );
    for ( std::size_t v = 0; v < g.size(); ++v )
        choice[ v ] = g.succ[ v ][ std::uniform_int_distribution< std::size_t >{ 0, g.succ[ v ].size() - 1 }( rng ) ];
    auto winner = sol.winner[ start ];
    std::vector< int > seen( g.size(), -1 );
    std::vector< int > trace;
    int v = start;
    while ( seen[ v ] < 0 )
    {
        seen[ v ] = static_cast< int >( trace.size() );
        trace.push_back( v );
        v = g.owner[ v ] == winner ? sol.strategy[ v ] : choice[ v ];
    }
    int top = -1;
    for ( auto i = static_cast< std::size_t >( seen[ v ] ); i < trace.size(); ++i )
        top = std::max( top, g.color[ trace[ i ] ] );
    return top;
}

} // namespace

TEST_SUITE( "parity-games" )
{
    TEST_CASE( "single positions" )
    {
        CHECK( solve( single( 0 ) ).winner[ 0 ] == Player::Automaton );
        CHECK( solve( single( 1 ) ).winner[ 0 ] == Player::Pathfinder );
        CHECK( brute_solve( single( 1 ) )[ 0 ] == Player::Pathfinder );
    }

    TEST_CASE( "all colours even" )
    {
        testing::Rng rng{ 4 };
        auto g = testing::random_game( rng, 8, 1 );
        for ( auto& c : g.color )
            c = 2;
        auto sol = solve( g );
        for ( auto w : sol.winner )
            CHECK( w == Player::Automaton );
        CHECK( brute_solve( g ) == sol.winner );
    }

    TEST_CASE( "alternating chain" )
    {
        // 0 (A) -> 1 (P) -> 2 (A) -> 3 (P) -> 0, plus escapes to sinks.
        ParityGame g;
        for ( int i = 0; i < 4; ++i )
            g.add_position( i % 2 ? Player::Pathfinder : Player::Automaton, i == 3 ? 2 : 0 );
        auto good = g.add_position( Player::Automaton, 2 );
        auto bad = g.add_position( Player::Automaton, 1 );
        g.add_edge( good, good );
        g.add_edge( bad, bad );
        for ( int i = 0; i < 4; ++i )
            g.add_edge( i, ( i + 1 ) % 4 );
        g.add_edge( 1, bad ); // Pathfinder can escape to a losing sink for Automaton
        g.add_edge( 2, good );
        auto sol = solve( g );
        CHECK( sol.winner[ 0 ] == Player::Pathfinder );
        CHECK( sol.winner[ 2 ] == Player::Automaton );
        CHECK( sol.winner[ 3 ] == Player::Pathfinder );
        CHECK( sol.strategy[ 1 ] == bad );
        CHECK( brute_solve( g ) == sol.winner );
    }

    TEST_CASE( "solve agrees with brute force on small random games" )
    {
        testing::Rng rng{ 8 };
        for ( int i = 0; i < 2000; ++i )
        {
            auto g = testing::random_game( rng, 5, 2 );
            CHECK( solve( g ).winner == brute_solve( g ) );
        }
    }

    TEST_CASE( "strategies are sound against random opponents" )
    {
        testing::Rng rng{ 12 };
        for ( int i = 0; i < 300; ++i )
        {
            auto g = testing::random_game( rng, 8, 4 );
            auto sol = solve( g );
            for ( int v = 0; v < static_cast< int >( g.size() ); ++v )
            {
                if ( g.owner[ v ] == sol.winner[ v ] )
                {
                    REQUIRE( sol.strategy[ v ] >= 0 );
                    CHECK( sol.winner[ sol.strategy[ v ] ] == sol.winner[ v ] );
                }
                for ( int k = 0; k < 100; ++k )
                    CHECK( parity_winner( play_out( g, sol, v, rng ) ) == sol.winner[ v ] );
            }
        }
    }

    TEST_CASE( "brute force cap" )
    {
        ParityGame g;
        for ( int i = 0; i < 13; ++i )
        {
            g.add_position( Player::Automaton, 0 );
            g.add_edge( i, i );
        }
        CHECK_THROWS_WITH_AS( (void)brute_solve( g ), doctest::Contains( "'game'" ), ResourceError );
    }

    TEST_CASE( "dumps" )
    {
        auto g = single( 2 );
        auto sol = solve( g );
        CHECK( to_text( g, &sol ).find( "color" ) != std::string::npos );
        CHECK( to_dot( g, &sol ).find( "digraph" ) != std::string::npos );
    }
}
