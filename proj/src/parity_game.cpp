#include "modcheck/parity_game.hpp"

#include "modcheck/error.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace modcheck
{

int ParityGame::add_position( Player p, int c, std::string label )
{
    owner.push_back( p );
    color.push_back( c );
    succ.emplace_back();
    name.push_back( std::move( label ) );
    return static_cast< int >( owner.size() - 1 );
}

void ParityGame::validate() const
{
    for ( std::size_t v = 0; v < size(); ++v )
        if ( succ[ v ].empty() )
            throw std::logic_error{ "parity game position " + std::to_string( v ) + " has no successor" };
}

namespace
{

class Zielonka
{
    const ParityGame& _g;
    std::vector< std::vector< int > > _pred;
    std::vector< int > _count;
    std::vector< int > _rank;

public:
    GameSolution sol;

    explicit Zielonka( const ParityGame& g ) : _g{ g }, _pred( g.size() ), _count( g.size() ), _rank( g.size() )
    {
        for ( std::size_t v = 0; v < g.size(); ++v )
            for ( auto w : g.succ[ v ] )
                _pred[ w ].push_back( static_cast< int >( v ) );
        for ( auto& p : _pred )
        {
            std::sort( p.begin(), p.end() );
            p.erase( std::unique( p.begin(), p.end() ), p.end() );
        }
        sol.winner.assign( g.size(), Player::Automaton );
        sol.strategy.assign( g.size(), -1 );
    }

    // Extends the marked target to its attractor for pl inside the subgame
    // and assigns attractor strategies. Returns the added positions, target
    // first, in order of addition.
    std::vector< int > attractor( const std::vector< char >& in, const std::vector< int >& verts,
                                  std::vector< char >& mark, Player pl )
    {
        std::vector< int > order;
        for ( auto v : verts )
        {
            if ( mark[ v ] )
            {
                _rank[ v ] = static_cast< int >( order.size() );
                order.push_back( v );
            }
            else
            {
                int c = 0;
                for ( auto w : _g.succ[ v ] )
                    c += in[ w ] ? 1 : 0;
                _count[ v ] = c;
            }
        }
        auto targets = order.size();
        for ( std::size_t k = 0; k < order.size(); ++k )
        {
            auto w = order[ k ];
            for ( auto v : _pred[ w ] )
            {
                if ( !in[ v ] || mark[ v ] )
                    continue;
                if ( _g.owner[ v ] == pl || --_count[ v ] == 0 )
                {
                    mark[ v ] = 1;
                    _rank[ v ] = static_cast< int >( order.size() );
                    order.push_back( v );
                }
            }
        }
        for ( auto k = targets; k < order.size(); ++k )
        {
            auto v = order[ k ];
            if ( _g.owner[ v ] != pl )
                continue;
            int best = -1;
            for ( auto w : _g.succ[ v ] )
                if ( in[ w ] && mark[ w ] && _rank[ w ] < _rank[ v ] && ( best < 0 || w < best ) )
                    best = w;
            sol.strategy[ v ] = best;
        }
        return order;
    }

    // Solves the subgame given by `in` (a trap-closed subset) and writes the
    // winners and strategies of its positions. `in` is left unchanged.
    void run( std::vector< char >& in, std::vector< int > verts )
    {
        std::vector< int > removed; // positions taken out by the loop below
        while ( !verts.empty() )
        {
            int d = -1;
            for ( auto v : verts )
                d = std::max( d, _g.color[ v ] );
            auto p = parity_winner( d );
            auto q = opponent( p );

            std::vector< char > mark( _g.size(), 0 );
            for ( auto v : verts )
                if ( _g.color[ v ] == d )
                    mark[ v ] = 1;
            auto a = attractor( in, verts, mark, p );

            std::vector< int > rest;
            for ( auto v : verts )
                if ( !mark[ v ] )
                    rest.push_back( v );
            for ( auto v : a )
                in[ v ] = 0;
            run( in, rest );
            for ( auto v : a )
                in[ v ] = 1;

            std::vector< int > opp_region;
            for ( auto v : rest )
                if ( sol.winner[ v ] == q )
                    opp_region.push_back( v );

            if ( opp_region.empty() )
            {
                for ( auto v : verts )
                    sol.winner[ v ] = p;
                for ( auto v : verts )
                {
                    if ( _g.color[ v ] != d || _g.owner[ v ] != p )
                        continue;
                    int best = -1;
                    for ( auto w : _g.succ[ v ] )
                        if ( in[ w ] && ( best < 0 || w < best ) )
                            best = w;
                    sol.strategy[ v ] = best;
                }
                for ( auto v : verts )
                    if ( _g.owner[ v ] != p )
                        sol.strategy[ v ] = -1;
                break;
            }

            std::vector< char > bmark( _g.size(), 0 );
            for ( auto v : opp_region )
                bmark[ v ] = 1;
            auto b = attractor( in, verts, bmark, q );
            for ( auto v : b )
            {
                sol.winner[ v ] = q;
                if ( _g.owner[ v ] != q )
                    sol.strategy[ v ] = -1;
                in[ v ] = 0;
                removed.push_back( v );
            }
            std::vector< int > left;
            for ( auto v : verts )
                if ( !bmark[ v ] )
                    left.push_back( v );
            verts = std::move( left );
        }
        for ( auto v : removed )
            in[ v ] = 1;
    }
};

} // namespace

GameSolution solve( const ParityGame& g )
{
    g.validate();
    Zielonka z{ g };
    std::vector< char > in( g.size(), 1 );
    std::vector< int > verts( g.size() );
    for ( std::size_t v = 0; v < g.size(); ++v )
        verts[ v ] = static_cast< int >( v );
    z.run( in, verts );
    return std::move( z.sol );
}

std::vector< Player > brute_solve( const ParityGame& g, std::size_t cap )
{
    g.validate();
    auto n = g.size();
    if ( n > cap )
        throw ResourceError{ "game", cap };

    std::vector< int > choice( n, 0 );
    auto play_winner = [ & ]( int start ) {
        std::vector< int > seen( n, -1 );
        std::vector< int > path;
        int v = start;
        while ( seen[ v ] < 0 )
        {
            seen[ v ] = static_cast< int >( path.size() );
            path.push_back( v );
            v = g.succ[ v ][ choice[ v ] ];
        }
        int best = -1;
        for ( auto k = static_cast< std::size_t >( seen[ v ] ); k < path.size(); ++k )
            best = std::max( best, g.color[ path[ k ] ] );
        return parity_winner( best );
    };

    std::vector< int > mine, theirs;
    for ( std::size_t v = 0; v < n; ++v )
        ( g.owner[ v ] == Player::Automaton ? mine : theirs ).push_back( static_cast< int >( v ) );

    // Odometer over the choices of the given positions; returns false when done.
    auto advance = [ & ]( const std::vector< int >& positions ) {
        for ( auto v : positions )
        {
            if ( ++choice[ v ] < static_cast< int >( g.succ[ v ].size() ) )
                return true;
            choice[ v ] = 0;
        }
        return false;
    };

    std::vector< Player > winner( n, Player::Pathfinder );
    do
    {
        std::vector< bool > wins_all( n, true );
        for ( auto v : theirs )
            choice[ v ] = 0;
        do
        {
            for ( std::size_t v = 0; v < n; ++v )
                if ( wins_all[ v ] && play_winner( static_cast< int >( v ) ) != Player::Automaton )
                    wins_all[ v ] = false;
        } while ( advance( theirs ) );
        for ( std::size_t v = 0; v < n; ++v )
            if ( wins_all[ v ] )
                winner[ v ] = Player::Automaton;
    } while ( advance( mine ) );
    return winner;
}

std::string to_text( const ParityGame& g, const GameSolution* sol )
{
    std::ostringstream os;
    os << "kind: parity-game\npositions: " << g.size() << "\ninitial: " << g.initial << '\n';
    if ( sol && g.size() > 0 )
        os << "initial-winner: " << ( sol->winner[ g.initial ] == Player::Automaton ? "automaton" : "pathfinder" )
           << '\n';
    for ( std::size_t v = 0; v < g.size(); ++v )
    {
        os << "pos " << v << ( g.owner[ v ] == Player::Automaton ? " automaton" : " pathfinder" ) << " color "
           << g.color[ v ];
        if ( sol )
            os << " won-by " << ( sol->winner[ v ] == Player::Automaton ? "automaton" : "pathfinder" );
        if ( !g.name[ v ].empty() )
            os << " \"" << g.name[ v ] << '"';
        os << "\n  ->";
        for ( auto w : g.succ[ v ] )
            os << ' ' << w;
        os << '\n';
    }
    return os.str();
}

std::string to_dot( const ParityGame& g, const GameSolution* sol )
{
    std::ostringstream os;
    os << "digraph game {\n";
    for ( std::size_t v = 0; v < g.size(); ++v )
    {
        os << "  n" << v << " [shape=" << ( g.owner[ v ] == Player::Automaton ? "diamond" : "box" ) << ", label=\"" << v
           << " c" << g.color[ v ] << "\"";
        if ( sol )
            os << ", style=filled, fillcolor=" << ( sol->winner[ v ] == Player::Automaton ? "palegreen" : "lightpink" );
        if ( static_cast< int >( v ) == g.initial )
            os << ", penwidth=2";
        os << "];\n";
    }
    for ( std::size_t v = 0; v < g.size(); ++v )
        for ( auto w : g.succ[ v ] )
        {
            os << "  n" << v << " -> n" << w;
            if ( sol && sol->strategy[ v ] == w )
                os << " [style=bold]";
            os << ";\n";
        }
    os << "}\n";
    return os.str();
}

} // namespace modcheck
