#include "doctest.h"
#include "modcheck/error.hpp"
#include "modcheck/formula.hpp"
#include "modcheck/oracle.hpp"
#include "support.hpp"

using namespace modcheck;
using testing::kSysEnv;

namespace
{

Formula parse( const std::string& s ) { return parse_formula( s, kSysEnv ); }

const Formula p = f_prop( 0 );
const Formula q = f_prop( 1 );
constexpr AgentSet kSys = 1;
constexpr AgentSet kEnv = 2;

} // namespace

TEST_SUITE( "formula" )
{
    TEST_CASE( "parse desugars F and G" )
    {
        CHECK( formula_equal( parse( "<<sys>> F p" ), f_exists( kSys, f_until( f_true(), p ) ) ) );
        auto g = parse( "[[env]] G p" );
        CHECK( g->op == Op::Forall );
        CHECK( formula_equal( g, f_forall( kEnv, f_release( f_false(), p ) ) ) );
    }

    TEST_CASE( "parse errors" )
    {
        CHECK_THROWS_WITH_AS( (void)parse( "X p" ), doctest::Contains( "temporal operator outside quantifier" ),
                              ParseError );
        CHECK_THROWS_WITH_AS( (void)parse( "p U q" ), doctest::Contains( "temporal operator outside quantifier" ),
                              ParseError );
        CHECK_THROWS_AS( (void)parse( "<<nobody>> X p" ), ParseError );
        CHECK_THROWS_AS( (void)parse( "<<sys>> X r" ), ParseError );
        CHECK_THROWS_AS( (void)parse( "<<sys>> (X p" ), ParseError );
        CHECK_THROWS_AS( (void)parse( "" ), ParseError );
    }

    TEST_CASE( "precedence and associativity" )
    {
        CHECK( formula_equal( parse( "p -> q -> p" ), f_implies( p, f_implies( q, p ) ) ) );
        CHECK( formula_equal( parse( "p | q & p" ), f_or( p, f_and( q, p ) ) ) );
        CHECK( formula_equal( parse( "<<>> (p U q U p)" ), f_exists( 0, f_until( p, f_until( q, p ) ) ) ) );
        CHECK( formula_equal( parse( "<<>> p U q & p" ), f_and( f_exists( 0, f_until( p, q ) ), p ) ) );
        CHECK( formula_equal( parse( "<<sys, env>> X !p" ), f_exists( 3, f_next( f_not( p ) ) ) ) );
    }

    TEST_CASE( "print/parse round trip" )
    {
        for ( auto& f : testing::atl_formula_suite( 3, 200, 8 ) )
        {
            auto text = to_string( f, kSysEnv );
            CHECK_MESSAGE( formula_equal( parse( text ), f ), text );
        }
    }

    TEST_CASE( "classify" )
    {
        CHECK( classify( parse( "<<sys>> X p" ) ) == FormulaClass::Atl );
        CHECK( classify( parse( "<<sys>> (F p & G q)" ) ) == FormulaClass::AtlStar );
        CHECK( classify( parse( "<<sys>> G <<env>> F p" ) ) == FormulaClass::Atl );
        CHECK( classify( parse( "<<sys>> F G p" ) ) == FormulaClass::AtlStar );
        CHECK( classify( parse( "p & !q" ) ) == FormulaClass::Atl );
    }

    TEST_CASE( "negation normal form" )
    {
        CHECK( formula_equal( to_nnf( parse( "!<<sys>> X p" ) ), f_forall( kSys, f_next( f_not( p ) ) ) ) );
        CHECK( formula_equal( to_nnf( parse( "!!p" ) ), p ) );
        CHECK( formula_equal( to_nnf( parse( "!<<sys>> (p U q)" ) ),
                              f_forall( kSys, f_release( f_not( p ), f_not( q ) ) ) ) );
    }

    TEST_CASE( "nnf is idempotent and equivalent" )
    {
        testing::Rng rng{ 21 };
        auto formulas = testing::atl_formula_suite( 17, 150, 7 );
        std::vector< Cgs > models;
        for ( int i = 0; i < 20; ++i )
            models.push_back( testing::random_open_cgs( rng ) );
        for ( auto& f : formulas )
        {
            auto n = to_nnf( f );
            CHECK( formula_equal( to_nnf( n ), n ) );
            auto neg = to_nnf( f_not( f ) );
            for ( auto& g : models )
            {
                CHECK( fixpoint_model_check( g, f ) == fixpoint_model_check( g, n ) );
                auto all = fixpoint_model_check( g, f ) | fixpoint_model_check( g, neg );
                CHECK( all.count() == g.num_states() );
                CHECK_FALSE( fixpoint_model_check( g, f ).intersects( fixpoint_model_check( g, neg ) ) );
            }
        }
    }

    TEST_CASE( "basic subformulas" )
    {
        CHECK( basic_subformulas( p, 2 ).size() == 0 );

        auto phi = parse( "<<sys>> F <<env>> G p" );
        auto t = basic_subformulas( phi, 2 );
        REQUIRE( t.size() == 2 );
        CHECK( formula_equal( t.basics[ 0 ], parse( "<<env>> G p" ) ) );
        CHECK( formula_equal( t.basics[ 1 ], phi ) );
        CHECK( t.first_level[ 1 ] == std::vector< int >{ 0 } );
        CHECK( t.first_level[ 0 ].empty() );
        CHECK( t.root_first_level == std::vector< int >{ 1 } );

        auto shared = basic_subformulas( parse( "<<sys>> X p & <<sys>> X p" ), 2 );
        CHECK( shared.size() == 1 );

        auto dual = basic_subformulas( parse( "[[env]] G p" ), 2 );
        REQUIRE( dual.size() == 1 );
        CHECK( formula_equal( dual.basics[ 0 ], f_exists( kEnv, f_not( f_release( f_false(), p ) ) ) ) );
    }

    TEST_CASE( "ltl projection" )
    {
        auto phi = parse( "<<sys>> F <<env>> G p" );
        auto t = basic_subformulas( phi, 2 );
        CHECK( formula_equal( ltl_projection( parse( "<<sys>> F p" )->lhs, t ), f_eventually( p ) ) );
        auto b = f_prop( t.atom_of( 0 ) );
        CHECK( formula_equal( ltl_projection( phi->lhs, t ), f_eventually( b ) ) );
        CHECK( formula_equal( ltl_projection( t.basics[ 0 ], t ), b ) );
        CHECK( is_ltl( ltl_projection( phi->lhs, t ) ) );
        CHECK( formula_equal( ltl_unprojection( ltl_projection( phi->lhs, t ), t ), phi->lhs ) );
    }

    TEST_CASE( "projection round trip on random formulas" )
    {
        for ( auto& f : testing::atl_formula_suite( 9, 100, 8 ) )
        {
            auto t = basic_subformulas( f, 2 );
            for ( std::size_t i = 0; i < t.size(); ++i )
            {
                auto path = t.basics[ i ]->lhs;
                auto ltl = ltl_projection( path, t );
                CHECK( is_ltl( ltl ) );
                CHECK( formula_equal( ltl_unprojection( ltl, t ), path ) );
            }
        }
    }

    TEST_CASE( "sizes" )
    {
        CHECK( formula_size( p ) == 1 );
        CHECK( formula_size( parse( "<<sys>> X p" ) ) == 3 );
        CHECK( formula_size( parse( "<<sys>> (p U q)" ) ) == 4 );
    }
}
