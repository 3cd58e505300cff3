#include "doctest.h"
#include "modcheck/error.hpp"
#include "modcheck/word_automata.hpp"
#include "support.hpp"

using namespace modcheck;

namespace
{

const Formula p = f_prop( 0 );
const Formula q = f_prop( 1 );

// Global letters over props 0 and 1.
constexpr Letter kLetters = 4;

Nbw random_nbw( testing::Rng& rng, std::size_t max_states )
{
    std::uniform_int_distribution< std::size_t > pick_n{ 1, max_states };
    Nbw n;
    n.atoms = { 0 };
    n.num_states = pick_n( rng );
    std::uniform_int_distribution< int > st{ 0, static_cast< int >( n.num_states ) - 1 };
    n.initial = { 0 };
    n.delta.assign( n.num_states, std::vector< std::vector< int > >( 2 ) );
    n.accepting.assign( n.num_states, false );
    std::bernoulli_distribution coin{ 0.4 };
    for ( std::size_t s = 0; s < n.num_states; ++s )
    {
        n.accepting[ s ] = coin( rng );
        for ( auto& succ : n.delta[ s ] )
        {
            for ( int t = 0; t < static_cast< int >( n.num_states ); ++t )
                if ( coin( rng ) )
                    succ.push_back( t );
        }
    }
    return n;
}

} // namespace

TEST_SUITE( "word-automata" )
{
    TEST_CASE( "true is a single accepting state" )
    {
        auto n = ltl_to_nbw( f_true() );
        CHECK( n.num_states == 1 );
        CHECK( n.accepting[ 0 ] );
        CHECK( lasso_accepts( n, {}, { 0 } ) );
    }

    TEST_CASE( "contradiction is empty" )
    {
        CHECK( nbw_is_empty( ltl_to_nbw( f_and( f_always( p ), f_eventually( f_not( p ) ) ) ) ) );
        CHECK_FALSE( nbw_is_empty( ltl_to_nbw( f_eventually( p ) ) ) );
    }

    TEST_CASE( "F p" )
    {
        auto n = ltl_to_nbw( f_eventually( p ) );
        CHECK( lasso_accepts( n, { 0 }, { 1 } ) );
        CHECK_FALSE( lasso_accepts( n, {}, { 0 } ) );
        auto d = nbw_to_dpw( n );
        auto c = dpw_complement( d );
        testing::for_each_lasso( 6, 2, [ & ]( const auto& stem, const auto& loop ) {
            bool expected = testing::ltl_holds_on_lasso( f_eventually( p ), stem, loop );
            CHECK( lasso_accepts( n, stem, loop ) == expected );
            CHECK( lasso_accepts( d, stem, loop ) == expected );
            CHECK( lasso_accepts( c, stem, loop ) == !expected );
            CHECK( lasso_accepts( c, stem, loop ) == testing::ltl_holds_on_lasso( f_always( f_not( p ) ), stem, loop ) );
        } );
    }

    TEST_CASE( "deterministic input needs two colours" )
    {
        Nbw n;
        n.atoms = { 0 };
        n.num_states = 2;
        n.initial = { 0 };
        n.delta = { { { 0 }, { 1 } }, { { 0 }, { 1 } } };
        n.accepting = { false, true };
        REQUIRE( n.is_deterministic() );
        auto d = nbw_to_dpw( n );
        CHECK( d.min_color() == 1 );
        CHECK( d.max_color() == 2 );
        testing::for_each_lasso( 6, 2, [ & ]( const auto& stem, const auto& loop ) {
            CHECK( lasso_accepts( d, stem, loop ) == lasso_accepts( n, stem, loop ) );
        } );
    }

    TEST_CASE( "infinitely many p: nondeterministic shape, sampled lassos" )
    {
        // Guess a p-position, return to the waiting state afterwards.
        Nbw n;
        n.atoms = { 0 };
        n.num_states = 2;
        n.initial = { 0 };
        n.delta = { { { 0 }, { 0, 1 } }, { { 0 }, { 0, 1 } } };
        n.accepting = { false, true };
        auto d = nbw_to_dpw( n );
        testing::Rng rng{ 2024 };
        std::uniform_int_distribution< std::size_t > len{ 0, 8 };
        std::uniform_int_distribution< Letter > letter{ 0, 1 };
        for ( int i = 0; i < 10000; ++i )
        {
            std::vector< Letter > stem( len( rng ) );
            std::vector< Letter > loop( 1 + len( rng ) );
            for ( auto& l : stem )
                l = letter( rng );
            for ( auto& l : loop )
                l = letter( rng );
            bool expected = testing::ltl_holds_on_lasso( f_always( f_eventually( p ) ), stem, loop );
            CHECK( lasso_accepts( n, stem, loop ) == expected );
            CHECK( lasso_accepts( d, stem, loop ) == expected );
        }
    }

    TEST_CASE( "determinization of random nondeterministic automata" )
    {
        testing::Rng rng{ 99 };
        for ( int round = 0; round < 300; ++round )
        {
            auto n = random_nbw( rng, 4 );
            auto d = nbw_to_dpw( n );
            auto m = dpw_minimize( d );
            testing::for_each_lasso( 6, 2, [ & ]( const auto& stem, const auto& loop ) {
                bool expected = lasso_accepts( n, stem, loop );
                CHECK( lasso_accepts( d, stem, loop ) == expected );
                CHECK( lasso_accepts( m, stem, loop ) == expected );
            } );
        }
    }

    TEST_CASE( "LTL suite against direct lasso evaluation" )
    {
        for ( auto& f : testing::ltl_suite() )
        {
            auto n = ltl_to_nbw( f );
            auto d = nbw_to_dpw( n );
            auto c = dpw_complement( d );
            auto cc = dpw_complement( c );
            testing::for_each_lasso( 5, kLetters, [ & ]( const auto& stem, const auto& loop ) {
                bool expected = testing::ltl_holds_on_lasso( f, stem, loop );
                CHECK( lasso_accepts( n, stem, loop ) == expected );
                CHECK( lasso_accepts( d, stem, loop ) == expected );
                CHECK( lasso_accepts( c, stem, loop ) == !expected );
                CHECK( lasso_accepts( cc, stem, loop ) == expected );
            } );
        }
    }

    TEST_CASE( "rejecting sink" )
    {
        auto d = ltl_to_dpw( f_always( p ) );
        // After a !p letter the automaton is stuck rejecting.
        CHECK_FALSE( lasso_accepts( d, { 0 }, { 1 } ) );
        CHECK_FALSE( lasso_accepts( d, {}, { 0 } ) );
    }

    TEST_CASE( "colour compaction keeps the parity pattern" )
    {
        Dpw d;
        d.atoms = { 0 };
        d.initial = 0;
        d.delta = { { 1, 1 }, { 2, 0 }, { 2, 2 } };
        d.color = { 3, 7, 4 };
        auto c = compact_colors( d );
        CHECK( c.color == std::vector< int >{ 1, 3, 2 } );
        testing::for_each_lasso( 5, 2, [ & ]( const auto& stem, const auto& loop ) {
            CHECK( lasso_accepts( c, stem, loop ) == lasso_accepts( d, stem, loop ) );
        } );
    }

    TEST_CASE( "state caps" )
    {
        auto f = f_and( f_always( f_eventually( p ) ), f_always( f_eventually( q ) ) );
        CHECK_THROWS_AS( (void)ltl_to_nbw( f, 1 ), ResourceError );
        CHECK_THROWS_WITH( (void)nbw_to_dpw( ltl_to_nbw( f ), 1 ), doctest::Contains( "'dpw'" ) );
    }
}
