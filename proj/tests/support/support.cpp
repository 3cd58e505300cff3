#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace modcheck::testing
{

namespace
{

std::size_t pick( Rng& rng, std::size_t n ) { return std::uniform_int_distribution< std::size_t >{ 0, n - 1 }( rng ); }

bool coin( Rng& rng, double p ) { return std::bernoulli_distribution{ p }( rng ); }

} // namespace

Cgs random_open_cgs( Rng& rng, const RandomCgsParams& params )
{
    auto n = 1 + pick( rng, params.max_states );
    auto na = 1 + pick( rng, params.max_actions );
    std::vector< std::string > actions;
    for ( std::size_t a = 0; a < na; ++a )
        actions.push_back( std::string( 1, static_cast< char >( 'a' + a ) ) );
    CgsBuilder b{ { "sys", "env" }, actions, { "p", "q" } };
    for ( std::size_t s = 0; s < n; ++s )
        b.add_state( "s" + std::to_string( s ), pick( rng, 4 ) );
    b.set_initial( 0 );
    for ( std::size_t s = 0; s < n; ++s )
    {
        bool env = coin( rng, params.env_rate );
        std::vector< int > defined;
        for ( std::size_t a = 0; a < na; ++a )
            if ( !coin( rng, params.undefined_rate ) )
                defined.push_back( static_cast< int >( a ) );
        if ( defined.empty() )
            defined.push_back( static_cast< int >( pick( rng, na ) ) );
        for ( auto a : defined )
        {
            auto target = static_cast< StateId >( pick( rng, n ) );
            if ( env )
                b.set_transition( static_cast< StateId >( s ), { 0, a }, target );
            else
                b.set_transition( static_cast< StateId >( s ), { a, 0 }, target );
        }
    }
    return std::move( b ).build();
}

namespace
{

Formula random_state( Rng& rng, std::size_t budget );

Formula random_path( Rng& rng, std::size_t budget )
{
    // budget counts the temporal operator and its operands.
    std::vector< int > kinds{ 0, 1, 2 }; // X F G
    if ( budget >= 3 )
    {
        kinds.push_back( 3 ); // U
        kinds.push_back( 4 ); // R
    }
    auto kind = kinds[ pick( rng, kinds.size() ) ];
    switch ( kind )
    {
    case 0: return f_next( random_state( rng, budget - 1 ) );
    case 1: return f_eventually( random_state( rng, budget - 1 ) );
    case 2: return f_always( random_state( rng, budget - 1 ) );
    default:
    {
        auto left = 1 + pick( rng, budget - 2 );
        auto l = random_state( rng, left );
        auto r = random_state( rng, budget - 1 - left );
        return kind == 3 ? f_until( l, r ) : f_release( l, r );
    }
    }
}

Formula random_state( Rng& rng, std::size_t budget )
{
    if ( budget <= 1 )
    {
        switch ( pick( rng, 3 ) )
        {
        case 0: return f_true();
        case 1: return f_prop( 0 );
        default: return f_prop( 1 );
        }
    }
    auto kind = budget >= 3 ? pick( rng, 4 ) : 0;
    if ( kind == 0 )
        return f_not( random_state( rng, budget - 1 ) );
    if ( kind == 1 )
    {
        auto coalition = static_cast< AgentSet >( pick( rng, 4 ) );
        auto path = random_path( rng, budget - 1 );
        return coin( rng, 0.5 ) ? f_exists( coalition, path ) : f_forall( coalition, path );
    }
    auto left = 1 + pick( rng, budget - 2 );
    auto l = random_state( rng, left );
    auto r = random_state( rng, budget - 1 - left );
    return kind == 2 ? f_and( l, r ) : f_or( l, r );
}

bool has_quantifier( const Formula& f )
{
    if ( !f )
        return false;
    return is_quantifier( f->op ) || has_quantifier( f->lhs ) || has_quantifier( f->rhs );
}

} // namespace

Formula random_atl_formula( Rng& rng, std::size_t max_size )
{
    for ( ;; )
    {
        auto f = random_state( rng, 2 + pick( rng, max_size - 1 ) );
        if ( has_quantifier( f ) )
            return f;
    }
}

std::vector< Formula > atl_formula_suite( std::uint64_t seed, std::size_t count, std::size_t max_size )
{
    Rng rng{ seed };
    std::vector< Formula > out;
    std::set< std::string > seen;
    while ( out.size() < count )
    {
        auto f = random_atl_formula( rng, max_size );
        if ( seen.insert( to_string( f, kSysEnv ) ).second )
            out.push_back( f );
    }
    return out;
}

std::vector< Formula > ltl_suite()
{
    auto p = f_prop( 0 );
    auto q = f_prop( 1 );
    auto F = f_eventually;
    auto G = f_always;
    auto X = f_next;
    auto U = f_until;
    auto R = f_release;
    auto n = f_not;
    return {
        f_true(),
        f_false(),
        p,
        X( p ),
        F( p ),
        G( p ),
        U( p, q ),
        R( p, q ),
        G( F( p ) ),
        F( G( p ) ),
        f_and( G( F( p ) ), G( F( q ) ) ),
        f_or( F( G( p ) ), G( F( q ) ) ),
        f_and( G( p ), F( n( p ) ) ),
        G( f_implies( p, F( q ) ) ),
        G( f_implies( p, X( q ) ) ),
        U( p, U( q, n( p ) ) ),
        X( X( p ) ),
        F( f_and( p, X( n( p ) ) ) ),
        f_implies( G( F( p ) ), G( F( q ) ) ),
        R( n( p ), f_or( q, X( p ) ) ),
        G( U( p, q ) ),
        f_and( F( p ), G( n( q ) ) ),
        U( n( q ), f_and( p, G( q ) ) ),
        F( f_and( G( p ), F( q ) ) ),
    };
}

bool ltl_holds_on_lasso( const Formula& ltl, const std::vector< Letter >& stem, const std::vector< Letter >& loop )
{
    std::vector< Letter > word = stem;
    word.insert( word.end(), loop.begin(), loop.end() );
    auto n = word.size();
    auto next = [ & ]( std::size_t i ) { return i + 1 < n ? i + 1 : stem.size(); };

    std::function< std::vector< bool >( const Formula& ) > eval = [ & ]( const Formula& f ) {
        std::vector< bool > v( n, false );
        switch ( f->op )
        {
        case Op::True: v.assign( n, true ); break;
        case Op::False: break;
        case Op::Prop:
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = ( word[ i ] >> f->prop ) & 1U;
            break;
        case Op::Not:
        {
            auto a = eval( f->lhs );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = !a[ i ];
            break;
        }
        case Op::And:
        case Op::Or:
        {
            auto a = eval( f->lhs );
            auto b = eval( f->rhs );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = f->op == Op::And ? a[ i ] && b[ i ] : a[ i ] || b[ i ];
            break;
        }
        case Op::Next:
        {
            auto a = eval( f->lhs );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = a[ next( i ) ];
            break;
        }
        case Op::Until:
        case Op::Release:
        {
            auto a = eval( f->lhs );
            auto b = eval( f->rhs );
            bool until = f->op == Op::Until;
            v.assign( n, !until );
            for ( bool changed = true; changed; )
            {
                changed = false;
                for ( std::size_t i = n; i-- > 0; )
                {
                    bool nv = until ? b[ i ] || ( a[ i ] && v[ next( i ) ] ) : b[ i ] && ( a[ i ] || v[ next( i ) ] );
                    if ( nv != v[ i ] )
                    {
                        v[ i ] = nv;
                        changed = true;
                    }
                }
            }
            break;
        }
        default: throw std::logic_error{ "quantifier in LTL formula" };
        }
        return v;
    };
    return eval( ltl )[ 0 ];
}

ParityGame random_game( Rng& rng, std::size_t max_positions, int num_colors )
{
    ParityGame g;
    auto n = 1 + pick( rng, max_positions );
    for ( std::size_t i = 0; i < n; ++i )
        g.add_position( coin( rng, 0.5 ) ? Player::Automaton : Player::Pathfinder,
                        static_cast< int >( pick( rng, static_cast< std::size_t >( num_colors ) ) ) );
    for ( std::size_t i = 0; i < n; ++i )
    {
        auto k = 1 + pick( rng, std::min< std::size_t >( n, 3 ) );
        std::set< int > targets;
        while ( targets.size() < k )
            targets.insert( static_cast< int >( pick( rng, n ) ) );
        for ( auto t : targets )
            g.add_edge( static_cast< int >( i ), t );
    }
    return g;
}

Cgs random_tree_cgs( Rng& rng, std::size_t depth, std::size_t max_branching )
{
    // Shape first, so that state ids follow BFS order.
    std::vector< std::vector< int > > children{ {} };
    std::vector< std::size_t > level{ 0 };
    for ( std::size_t i = 0; i < children.size(); ++i )
    {
        if ( level[ i ] == depth )
            continue;
        auto k = pick( rng, max_branching + 1 );
        for ( std::size_t c = 0; c < k; ++c )
        {
            children[ i ].push_back( static_cast< int >( children.size() ) );
            children.emplace_back();
            level.push_back( level[ i ] + 1 );
        }
    }
    CgsBuilder b{ { "a1", "a2" }, { "x", "y" }, { "p", "q" } };
    for ( std::size_t i = 0; i < children.size(); ++i )
        b.add_state( "n" + std::to_string( i ), pick( rng, 4 ) );
    b.set_initial( 0 );
    for ( std::size_t i = 0; i < children.size(); ++i )
    {
        auto s = static_cast< StateId >( i );
        if ( children[ i ].empty() )
        {
            b.set_transition( s, { 0, 0 }, s );
            continue;
        }
        // Every child must be reachable by some full decision.
        std::vector< int > targets = children[ i ];
        while ( targets.size() < 4 )
            targets.push_back( children[ i ][ pick( rng, children[ i ].size() ) ] );
        std::shuffle( targets.begin(), targets.end(), rng );
        for ( int f = 0; f < 4; ++f )
            b.set_transition( s, { f / 2, f % 2 }, targets[ static_cast< std::size_t >( f ) ] );
    }
    return std::move( b ).build();
}

namespace
{

bool is_leaf( const Cgs& g, StateId s ) { return g.successors( s ).size() == 1 && g.successors( s )[ 0 ] == s; }

void subtree( const Cgs& g, StateId s, std::vector< StateId >& out )
{
    out.push_back( s );
    if ( is_leaf( g, s ) )
        return;
    for ( auto c : g.successors( s ) )
        subtree( g, c, out );
}

} // namespace

std::vector< Letter > tree_basic_truth( const Cgs& tree, const BasicSubformulaTable& table )
{
    auto n = tree.num_states();
    auto np = table.num_props;
    std::vector< Letter > bits( n, 0 );
    for ( std::size_t i = 0; i < table.size(); ++i )
    {
        auto& basic = table.basics[ i ];
        auto ltl = ltl_projection( basic->lhs, table );
        for ( std::size_t s = 0; s < n; ++s )
        {
            std::vector< StateId > nodes;
            subtree( tree, static_cast< StateId >( s ), nodes );
            std::vector< std::vector< CoalitionMove > > moves;
            for ( auto v : nodes )
                moves.push_back( tree.coalition_moves( v, basic->coalition ) );
            std::vector< std::size_t > choice( nodes.size(), 0 );
            auto letter = [ & ]( StateId v ) { return tree.label( v ) | ( bits[ v ] << np ); };
            bool holds = false;
            for ( ;; )
            {
                bool all_plays = true;
                std::vector< Letter > stem;
                std::function< void( StateId ) > walk = [ & ]( StateId v ) {
                    if ( !all_plays )
                        return;
                    if ( is_leaf( tree, v ) )
                    {
                        all_plays = ltl_holds_on_lasso( ltl, stem, { letter( v ) } );
                        return;
                    }
                    auto k = static_cast< std::size_t >( std::find( nodes.begin(), nodes.end(), v ) - nodes.begin() );
                    stem.push_back( letter( v ) );
                    for ( auto t : moves[ k ][ choice[ k ] ].outcomes )
                        walk( t );
                    stem.pop_back();
                };
                walk( static_cast< StateId >( s ) );
                if ( all_plays )
                {
                    holds = true;
                    break;
                }
                std::size_t k = 0;
                for ( ; k < nodes.size(); ++k )
                {
                    if ( ++choice[ k ] < moves[ k ].size() )
                        break;
                    choice[ k ] = 0;
                }
                if ( k == nodes.size() )
                    break;
            }
            if ( holds )
                bits[ s ] |= Letter{ 1 } << i;
        }
    }
    return bits;
}

bool eval_propositional( const Formula& f, Letter letter ) { return ltl_holds_on_lasso( f, {}, { letter } ); }

std::string read_file( const std::string& path )
{
    std::ifstream in{ path };
    if ( !in )
        throw std::runtime_error{ "cannot open " + path };
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace modcheck::testing
