#include "corpus.hpp"
#include "doctest.h"
#include "modcheck/cgs.hpp"
#include "modcheck/error.hpp"

#include <set>

using namespace modcheck;

TEST_SUITE( "cgs" )
{
    TEST_CASE( "single self-loop" )
    {
        auto g = parse_cgs( "agents: sys env\nactions: a\nprops: p\ninit: s\nstate s {p}\n (sys=a, env=a) -> s\n" );
        CHECK( g.num_states() == 1 );
        CHECK( g.successors( 0 ) == std::vector< StateId >{ 0 } );
        CHECK( g.label( 0 ) == 1 );
        CHECK( g.owner( 0 ) == Owner::System );
    }

    TEST_CASE( "G_vend" )
    {
        auto g = corpus_model( "g_vend.cgs" );
        CHECK( g.num_states() == 3 );
        auto s0 = *g.find_state( "s0" );
        auto sp = *g.find_state( "sp" );
        auto sq = *g.find_state( "sq" );
        CHECK( g.is_env_state( s0 ) );
        CHECK_FALSE( g.is_env_state( sp ) );
        CHECK( g.successors( s0 ) == std::vector< StateId >{ sp, sq } );
        AgentSet env = 1U << g.env_agent();
        CHECK( g.available_decisions( s0, env ).size() == 2 );
        CHECK( g.available_decisions( s0, 0 ).size() == 1 );
        CHECK( g.available_decisions( s0, g.all_agents() ).size() == 2 );
    }

    TEST_CASE( "available decisions agree with brute force over the action product" )
    {
        testing::Rng rng{ 7 };
        for ( int round = 0; round < 100; ++round )
        {
            auto g = testing::random_open_cgs( rng );
            for ( StateId s = 0; s < static_cast< StateId >( g.num_states() ); ++s )
                for ( AgentSet a = 0; a < 4; ++a )
                {
                    std::set< std::vector< int > > expected;
                    for ( std::size_t f = 0; f < g.num_full_decisions(); ++f )
                    {
                        if ( g.target( s, f ) == kUndefined )
                            continue;
                        auto d = g.full_decision( f ).actions;
                        for ( int ag = 0; ag < 2; ++ag )
                            if ( !( ( a >> ag ) & 1U ) )
                                d[ ag ] = -1;
                        expected.insert( d );
                    }
                    std::set< std::vector< int > > got;
                    for ( auto& d : g.available_decisions( s, a ) )
                        got.insert( d.actions );
                    CHECK( got == expected );
                    if ( a == 0 )
                        CHECK( got.size() == 1 );
                }
        }
    }

    TEST_CASE( "blocked state" )
    {
        CHECK_THROWS_WITH_AS( (void)parse_cgs( "agents: sys env\nactions: a\nprops: p\ninit: s\nstate s {}\n" ),
                              doctest::Contains( "blocked state" ), ModelError );
    }

    TEST_CASE( "unclassifiable state" )
    {
        auto text = "agents: sys env\nactions: a b\nprops: p\ninit: s\nstate s {}\n"
                    " (sys=a, env=a) -> s\n (sys=b, env=b) -> s\n";
        CHECK_THROWS_WITH_AS( (void)parse_cgs( text ), doctest::Contains( "neither environment-controlled" ),
                              ModelError );
    }

    TEST_CASE( "duplicate transition row" )
    {
        auto text = "agents: sys env\nactions: a\nprops: p\ninit: s\nstate s {}\n (sys=a, env=a) -> s\n"
                    " (sys=a, env=a) -> s\n";
        CHECK_THROWS_AS( (void)parse_cgs( text ), ModelError );
    }

    TEST_CASE( "declared owner is checked" )
    {
        auto text = "agents: sys env\nactions: a b\nprops: p\ninit: s\nstate s {} owner=sys\n"
                    " (sys=a, env=a) -> s\n (sys=a, env=b) -> s\n";
        CHECK_THROWS_AS( (void)parse_cgs( text ), ModelError );
    }

    TEST_CASE( "syntax errors carry a position" )
    {
        CHECK_THROWS_WITH_AS( (void)parse_cgs( "agents: sys env\nactions: a\nprops p\n" ), doctest::Contains( "3:" ),
                              ParseError );
    }

    TEST_CASE( "render round trip" )
    {
        testing::Rng rng{ 11 };
        for ( int round = 0; round < 100; ++round )
        {
            auto g = testing::random_open_cgs( rng );
            auto text = render_cgs( g );
            auto h = parse_cgs( text );
            CHECK( render_cgs( h ) == text );
            REQUIRE( h.num_states() == g.num_states() );
            for ( StateId s = 0; s < static_cast< StateId >( g.num_states() ); ++s )
            {
                CHECK( h.label( s ) == g.label( s ) );
                for ( std::size_t f = 0; f < g.num_full_decisions(); ++f )
                    CHECK( h.target( s, f ) == g.target( s, f ) );
            }
        }
    }

    TEST_CASE( "pruning" )
    {
        auto g = corpus_model( "g_vend.cgs" );
        auto s0 = *g.find_state( "s0" );
        auto sp = *g.find_state( "sp" );
        auto sq = *g.find_state( "sq" );

        auto full = apply_pruning( g, Pruning{ { { s0, { sp, sq } } } } );
        for ( StateId s = 0; s < 3; ++s )
            for ( std::size_t f = 0; f < g.num_full_decisions(); ++f )
                CHECK( full.target( s, f ) == g.target( s, f ) );

        auto only_q = apply_pruning( g, Pruning{ { { s0, { sq } } } } );
        CHECK( only_q.successors( s0 ) == std::vector< StateId >{ sq } );
        auto tree = unwind_bounded( only_q, 5 );
        for ( auto& n : tree.nodes )
            CHECK( n.track.back() != sp );

        CHECK_THROWS_AS( (void)apply_pruning( g, Pruning{ { { s0, {} } } } ), ModelError );
        CHECK_THROWS_AS( (void)apply_pruning( g, Pruning{ { { sp, { sp } } } } ), ModelError );
    }

    TEST_CASE( "pruning preserves classification and availability is monotone" )
    {
        testing::Rng rng{ 5 };
        for ( int round = 0; round < 50; ++round )
        {
            auto g = testing::random_open_cgs( rng );
            Pruning p;
            for ( StateId s = 0; s < static_cast< StateId >( g.num_states() ); ++s )
                if ( g.is_env_state( s ) )
                    p.enabled[ s ] = { g.successors( s ).front() };
            auto h = apply_pruning( g, p );
            for ( StateId s = 0; s < static_cast< StateId >( g.num_states() ); ++s )
            {
                if ( !g.is_env_state( s ) )
                    CHECK_FALSE( h.is_env_state( s ) );
                if ( h.is_env_state( s ) )
                    CHECK( h.available_decisions( s, 1U ).size() == 1 );
                for ( AgentSet a = 0; a < 4; ++a )
                    CHECK( h.available_decisions( s, a ).size() <= g.available_decisions( s, a ).size() );
            }
        }
    }

    TEST_CASE( "unwinding" )
    {
        auto loop = corpus_model( "loop.cgs" );
        CHECK( unwind_bounded( loop, 0 ).nodes.size() == 1 );
        CHECK( unwind_bounded( loop, 2 ).nodes.size() == 3 );
        auto g = corpus_model( "g_vend.cgs" );
        auto t = unwind_bounded( g, 1 );
        CHECK( t.nodes.size() == 3 );
        CHECK( t.nodes[ 0 ].children.size() == 2 );
    }

    TEST_CASE( "decision union" )
    {
        Decision a{ 1, { 0, -1 } };
        Decision b{ 2, { -1, 1 } };
        auto u = a.unite( b );
        CHECK( u.coalition == 3 );
        CHECK( u.actions == std::vector< int >{ 0, 1 } );
    }
}
