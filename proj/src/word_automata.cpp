#include "modcheck/word_automata.hpp"

#include "modcheck/error.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace modcheck
{

std::size_t project_letter( const std::vector< int >& atoms, Letter global )
{
    std::size_t local = 0;
    for ( std::size_t i = 0; i < atoms.size(); ++i )
        if ( ( global >> atoms[ i ] ) & 1U )
            local |= std::size_t{ 1 } << i;
    return local;
}

Letter unproject_letter( const std::vector< int >& atoms, std::size_t local )
{
    Letter global = 0;
    for ( std::size_t i = 0; i < atoms.size(); ++i )
        if ( ( local >> i ) & 1U )
            global |= Letter{ 1 } << atoms[ i ];
    return global;
}

bool Nbw::is_deterministic() const
{
    if ( initial.size() > 1 )
        return false;
    for ( auto& row : delta )
        for ( auto& succ : row )
            if ( succ.size() > 1 )
                return false;
    return true;
}

int Dpw::min_color() const { return color.empty() ? 0 : *std::min_element( color.begin(), color.end() ); }
int Dpw::max_color() const { return color.empty() ? 0 : *std::max_element( color.begin(), color.end() ); }

std::size_t Dpw::index() const { return std::set< int >( color.begin(), color.end() ).size(); }

// ---------------------------------------------------------------------------
// LTL -> NBW

namespace
{

struct Cover
{
    std::uint64_t pos = 0; // local literal masks
    std::uint64_t neg = 0;
    Bitset next;
    Bitset postponed;

    friend bool operator==( const Cover&, const Cover& ) = default;
    friend auto operator<=>( const Cover& a, const Cover& b )
    {
        if ( auto c = a.pos <=> b.pos; c != 0 )
            return c;
        if ( auto c = a.neg <=> b.neg; c != 0 )
            return c;
        if ( auto c = a.next <=> b.next; c != 0 )
            return c;
        return a.postponed <=> b.postponed;
    }

    [[nodiscard]] bool subsumes( const Cover& o ) const
    {
        return ( pos & ~o.pos ) == 0 && ( neg & ~o.neg ) == 0 && next.subset_of( o.next ) &&
               postponed.subset_of( o.postponed );
    }

    [[nodiscard]] bool enabled( std::size_t letter ) const { return ( letter & pos ) == pos && ( letter & neg ) == 0; }
};

class Tableau
{
    std::vector< Formula > _closure;
    FormulaMap< int > _ids;
    std::vector< int > _untils; // closure ids of U subformulas
    std::map< int, int > _local_bit; // prop -> local bit

public:
    std::vector< int > atoms;

    explicit Tableau( const Formula& nnf )
    {
        intern( nnf );
        for ( std::size_t i = 0; i < _closure.size(); ++i )
        {
            if ( _closure[ i ]->op == Op::Until )
                _untils.push_back( static_cast< int >( i ) );
            if ( _closure[ i ]->op == Op::Prop )
                atoms.push_back( _closure[ i ]->prop );
        }
        std::sort( atoms.begin(), atoms.end() );
        atoms.erase( std::unique( atoms.begin(), atoms.end() ), atoms.end() );
        for ( std::size_t i = 0; i < atoms.size(); ++i )
            _local_bit[ atoms[ i ] ] = static_cast< int >( i );
    }

    int intern( const Formula& f )
    {
        if ( auto it = _ids.find( f ); it != _ids.end() )
            return it->second;
        if ( f->lhs )
            intern( f->lhs );
        if ( f->rhs )
            intern( f->rhs );
        auto id = static_cast< int >( _closure.size() );
        _closure.push_back( f );
        _ids.emplace( f, id );
        return id;
    }

    [[nodiscard]] int id( const Formula& f ) const { return _ids.at( f ); }
    [[nodiscard]] std::size_t size() const { return _closure.size(); }
    [[nodiscard]] const std::vector< int >& untils() const { return _untils; }

    [[nodiscard]] std::vector< Cover > expand( const Bitset& obligations ) const
    {
        struct Branch
        {
            Bitset todo;
            Bitset done;
            Cover cover;
        };
        std::vector< Cover > out;
        std::vector< Branch > stack;
        Cover empty{ 0, 0, Bitset{ size() }, Bitset{ size() } };
        stack.push_back( { obligations, Bitset{ size() }, empty } );
        while ( !stack.empty() )
        {
            auto b = std::move( stack.back() );
            stack.pop_back();
            bool dead = false;
            while ( !dead )
            {
                int fid = -1;
                b.todo.for_each( [ & ]( std::size_t i ) {
                    if ( fid < 0 )
                        fid = static_cast< int >( i );
                } );
                if ( fid < 0 )
                    break;
                b.todo.reset( fid );
                if ( b.done.test( fid ) )
                    continue;
                b.done.set( fid );
                auto& f = _closure[ fid ];
                auto push = [ & ]( Branch& br, const Formula& g ) { br.todo.set( id( g ) ); };
                switch ( f->op )
                {
                case Op::True: break;
                case Op::False: dead = true; break;
                case Op::Prop:
                {
                    auto bit = std::uint64_t{ 1 } << _local_bit.at( f->prop );
                    b.cover.pos |= bit;
                    dead = ( b.cover.neg & bit ) != 0;
                    break;
                }
                case Op::Not:
                {
                    auto bit = std::uint64_t{ 1 } << _local_bit.at( f->lhs->prop );
                    b.cover.neg |= bit;
                    dead = ( b.cover.pos & bit ) != 0;
                    break;
                }
                case Op::And:
                    push( b, f->lhs );
                    push( b, f->rhs );
                    break;
                case Op::Or:
                {
                    Branch alt = b;
                    push( alt, f->rhs );
                    stack.push_back( std::move( alt ) );
                    push( b, f->lhs );
                    break;
                }
                case Op::Next: b.cover.next.set( id( f->lhs ) ); break;
                case Op::Until:
                {
                    Branch alt = b;
                    push( alt, f->lhs );
                    alt.cover.next.set( fid );
                    alt.cover.postponed.set( fid );
                    stack.push_back( std::move( alt ) );
                    push( b, f->rhs );
                    break;
                }
                case Op::Release:
                {
                    Branch alt = b;
                    push( alt, f->rhs );
                    alt.cover.next.set( fid );
                    stack.push_back( std::move( alt ) );
                    push( b, f->lhs );
                    push( b, f->rhs );
                    break;
                }
                default: throw ModelError{ "LTL translation applied to a formula with quantifiers" };
                }
            }
            if ( !dead )
                out.push_back( std::move( b.cover ) );
        }
        std::sort( out.begin(), out.end() );
        out.erase( std::unique( out.begin(), out.end() ), out.end() );
        std::vector< Cover > kept;
        for ( std::size_t i = 0; i < out.size(); ++i )
        {
            bool redundant = false;
            for ( std::size_t j = 0; j < out.size() && !redundant; ++j )
                redundant = j != i && out[ j ].subsumes( out[ i ] );
            if ( !redundant )
                kept.push_back( out[ i ] );
        }
        return kept;
    }
};

std::vector< std::vector< int > > union_graph( const Nbw& n )
{
    std::vector< std::vector< int > > g( n.num_states );
    for ( std::size_t s = 0; s < n.num_states; ++s )
    {
        std::set< int > succ;
        for ( auto& row : n.delta[ s ] )
            succ.insert( row.begin(), row.end() );
        g[ s ].assign( succ.begin(), succ.end() );
    }
    return g;
}

// Tarjan SCC; returns component id per vertex.
std::vector< int > scc( const std::vector< std::vector< int > >& g )
{
    auto n = g.size();
    std::vector< int > index( n, -1 ), low( n, 0 ), comp( n, -1 );
    std::vector< bool > on_stack( n, false );
    std::vector< int > stack;
    int counter = 0, ncomp = 0;
    struct Frame
    {
        int v;
        std::size_t edge;
    };
    for ( std::size_t root = 0; root < n; ++root )
    {
        if ( index[ root ] >= 0 )
            continue;
        std::vector< Frame > call{ { static_cast< int >( root ), 0 } };
        index[ root ] = low[ root ] = counter++;
        stack.push_back( static_cast< int >( root ) );
        on_stack[ root ] = true;
        while ( !call.empty() )
        {
            auto& fr = call.back();
            auto v = fr.v;
            if ( fr.edge < g[ v ].size() )
            {
                auto w = g[ v ][ fr.edge++ ];
                if ( index[ w ] < 0 )
                {
                    index[ w ] = low[ w ] = counter++;
                    stack.push_back( w );
                    on_stack[ w ] = true;
                    call.push_back( { w, 0 } );
                }
                else if ( on_stack[ w ] )
                    low[ v ] = std::min( low[ v ], index[ w ] );
                continue;
            }
            if ( low[ v ] == index[ v ] )
            {
                int w;
                do
                {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[ w ] = false;
                    comp[ w ] = ncomp;
                } while ( w != v );
                ++ncomp;
            }
            call.pop_back();
            if ( !call.empty() )
                low[ call.back().v ] = std::min( low[ call.back().v ], low[ v ] );
        }
    }
    return comp;
}

// Keeps the states that can reach an accepting cycle.
Nbw trim( const Nbw& n )
{
    auto g = union_graph( n );
    auto comp = scc( g );
    auto ncomp = comp.empty() ? 0 : *std::max_element( comp.begin(), comp.end() ) + 1;
    std::vector< int > comp_size( ncomp, 0 );
    for ( auto c : comp )
        ++comp_size[ c ];
    std::vector< bool > good_comp( ncomp, false );
    for ( std::size_t s = 0; s < n.num_states; ++s )
    {
        if ( !n.accepting[ s ] )
            continue;
        bool cyclic = comp_size[ comp[ s ] ] > 1 ||
                      std::find( g[ s ].begin(), g[ s ].end(), static_cast< int >( s ) ) != g[ s ].end();
        if ( cyclic )
            good_comp[ comp[ s ] ] = true;
    }
    std::vector< std::vector< int > > rev( n.num_states );
    for ( std::size_t s = 0; s < n.num_states; ++s )
        for ( auto t : g[ s ] )
            rev[ t ].push_back( static_cast< int >( s ) );
    std::vector< bool > live( n.num_states, false );
    std::vector< int > work;
    for ( std::size_t s = 0; s < n.num_states; ++s )
        if ( good_comp[ comp[ s ] ] )
        {
            live[ s ] = true;
            work.push_back( static_cast< int >( s ) );
        }
    while ( !work.empty() )
    {
        auto t = work.back();
        work.pop_back();
        for ( auto s : rev[ t ] )
            if ( !live[ s ] )
            {
                live[ s ] = true;
                work.push_back( s );
            }
    }
    // Renumber in BFS order from the initial states, restricted to live states.
    std::vector< int > renum( n.num_states, -1 );
    std::vector< int > order;
    for ( auto i : n.initial )
        if ( live[ i ] && renum[ i ] < 0 )
        {
            renum[ i ] = static_cast< int >( order.size() );
            order.push_back( i );
        }
    for ( std::size_t k = 0; k < order.size(); ++k )
        for ( auto t : g[ order[ k ] ] )
            if ( live[ t ] && renum[ t ] < 0 )
            {
                renum[ t ] = static_cast< int >( order.size() );
                order.push_back( t );
            }
    Nbw out;
    out.atoms = n.atoms;
    out.num_states = order.size();
    for ( auto i : n.initial )
        if ( renum[ i ] >= 0 && std::find( out.initial.begin(), out.initial.end(), renum[ i ] ) == out.initial.end() )
            out.initial.push_back( renum[ i ] );
    out.delta.resize( order.size() );
    out.accepting.resize( order.size() );
    for ( std::size_t k = 0; k < order.size(); ++k )
    {
        auto s = order[ k ];
        out.accepting[ k ] = n.accepting[ s ];
        out.delta[ k ].resize( n.num_letters() );
        for ( std::size_t l = 0; l < n.num_letters(); ++l )
        {
            for ( auto t : n.delta[ s ][ l ] )
                if ( renum[ t ] >= 0 )
                    out.delta[ k ][ l ].push_back( renum[ t ] );
            std::sort( out.delta[ k ][ l ].begin(), out.delta[ k ][ l ].end() );
        }
    }
    return out;
}

} // namespace

Nbw ltl_to_nbw( const Formula& ltl, std::size_t cap )
{
    if ( !is_ltl( ltl ) )
        throw ModelError{ "LTL translation applied to a formula with quantifiers" };
    auto nnf = to_nnf( ltl );
    Tableau tab{ nnf };
    auto k = tab.untils().size();
    std::size_t letters = std::size_t{ 1 } << tab.atoms.size();

    // Tableau states are identified by their cover lists.
    std::map< std::vector< Cover >, int > cover_ids;
    std::vector< std::vector< Cover > > covers;
    auto cover_state = [ & ]( const Bitset& obligations ) {
        auto cs = tab.expand( obligations );
        auto [ it, fresh ] = cover_ids.emplace( cs, static_cast< int >( covers.size() ) );
        if ( fresh )
            covers.push_back( std::move( cs ) );
        return it->second;
    };

    Bitset init{ tab.size() };
    init.set( tab.id( nnf ) );
    auto s0 = cover_state( init );

    // Degeneralized states: (cover state, level in 0..k).
    std::map< std::pair< int, int >, int > ids;
    std::vector< std::pair< int, int > > states;
    auto state_of = [ & ]( int c, int level ) {
        auto [ it, fresh ] = ids.emplace( std::pair{ c, level }, static_cast< int >( states.size() ) );
        if ( fresh )
        {
            if ( states.size() >= cap )
                throw ResourceError{ "nbw", cap };
            states.emplace_back( c, level );
        }
        return it->second;
    };

    Nbw n;
    n.atoms = tab.atoms;
    n.initial.push_back( state_of( s0, 0 ) );
    for ( std::size_t i = 0; i < states.size(); ++i )
    {
        auto [ c, level ] = states[ i ];
        std::vector< std::vector< int > > row( letters );
        auto cs = covers[ c ]; // copy: cover_state may grow the table
        for ( auto& cv : cs )
        {
            auto j = level == static_cast< int >( k ) ? 0 : level;
            while ( j < static_cast< int >( k ) && !cv.postponed.test( tab.untils()[ j ] ) )
                ++j;
            auto target = state_of( cover_state( cv.next ), j );
            for ( std::size_t l = 0; l < letters; ++l )
                if ( cv.enabled( l ) )
                    row[ l ].push_back( target );
        }
        for ( auto& succ : row )
        {
            std::sort( succ.begin(), succ.end() );
            succ.erase( std::unique( succ.begin(), succ.end() ), succ.end() );
        }
        n.delta.push_back( std::move( row ) );
    }
    n.num_states = states.size();
    n.accepting.resize( n.num_states );
    for ( std::size_t i = 0; i < states.size(); ++i )
        n.accepting[ i ] = states[ i ].second == static_cast< int >( k );
    return trim( n );
}

bool nbw_is_empty( const Nbw& n ) { return trim( n ).initial.empty(); }

// ---------------------------------------------------------------------------
// Safra trees

std::size_t SafraTree::hash() const
{
    std::size_t h = labels.size();
    for ( std::size_t i = 0; i < labels.size(); ++i )
        h = hash_combine( hash_combine( h, labels[ i ].hash() ), static_cast< std::size_t >( parent[ i ] + 1 ) );
    return h;
}

SafraTree safra_initial( const Bitset& initial )
{
    SafraTree t;
    if ( initial.any() )
    {
        t.labels.push_back( initial );
        t.parent.push_back( -1 );
    }
    return t;
}

SafraStep safra_step( const SafraTree& tree, const std::function< Bitset( const Bitset& ) >& post,
                      const Bitset& accepting, std::size_t n )
{
    auto max_of_min = [ n ]( std::size_t c ) { return static_cast< int >( 2 * n + 2 - c ); };
    if ( tree.empty() )
        return { tree, max_of_min( 2 * n + 1 ) };

    auto old = tree.labels.size();
    auto labels = tree.labels;
    auto parent = tree.parent;

    for ( std::size_t i = 0; i < old; ++i )
    {
        auto f = labels[ i ] & accepting;
        if ( f.any() )
        {
            labels.push_back( std::move( f ) );
            parent.push_back( static_cast< int >( i ) );
        }
    }
    for ( auto& l : labels )
        l = post( l );

    auto m = labels.size();
    auto width = labels[ 0 ].size();

    // Horizontal merge: states also held by an older sibling of the node or
    // of one of its ancestors are dropped.
    std::vector< Bitset > forbidden( m, Bitset{ width } );
    std::vector< Bitset > older_children( m, Bitset{ width } );
    for ( std::size_t i = 0; i < m; ++i )
    {
        if ( parent[ i ] >= 0 )
        {
            auto p = static_cast< std::size_t >( parent[ i ] );
            forbidden[ i ] = forbidden[ p ] | older_children[ p ];
            labels[ i ] -= forbidden[ i ];
            older_children[ p ] |= labels[ i ];
        }
    }

    std::vector< bool > alive( m );
    std::vector< std::vector< int > > children( m );
    for ( std::size_t i = 0; i < m; ++i )
    {
        alive[ i ] = labels[ i ].any() && ( parent[ i ] < 0 || alive[ parent[ i ] ] );
        if ( parent[ i ] >= 0 )
            children[ parent[ i ] ].push_back( static_cast< int >( i ) );
    }

    // Vertical merge.
    std::vector< bool > marked( m, false );
    for ( std::size_t i = 0; i < m; ++i )
    {
        if ( !alive[ i ] )
            continue;
        if ( parent[ i ] >= 0 && ( !alive[ parent[ i ] ] || marked[ parent[ i ] ] ) )
        {
            alive[ i ] = false;
            continue;
        }
        Bitset u{ width };
        bool any_child = false;
        for ( auto c : children[ i ] )
            if ( alive[ c ] )
            {
                u |= labels[ c ];
                any_child = true;
            }
        if ( any_child && u == labels[ i ] )
            marked[ i ] = true;
    }

    std::size_t removed = old, good = old;
    for ( std::size_t i = 0; i < old; ++i )
    {
        if ( !alive[ i ] && removed == old )
            removed = i;
        if ( alive[ i ] && marked[ i ] && good == old )
            good = i;
    }
    std::size_t min_color;
    if ( good < removed )
        min_color = 2 * ( good + 1 );
    else if ( removed < old )
        min_color = 2 * ( removed + 1 ) - 1;
    else
        min_color = 2 * n + 1;

    SafraTree out;
    std::vector< int > renum( m, -1 );
    for ( std::size_t i = 0; i < m; ++i )
    {
        if ( !alive[ i ] )
            continue;
        renum[ i ] = static_cast< int >( out.labels.size() );
        out.labels.push_back( std::move( labels[ i ] ) );
        out.parent.push_back( parent[ i ] < 0 ? -1 : renum[ parent[ i ] ] );
    }
    return { std::move( out ), max_of_min( min_color ) };
}

// ---------------------------------------------------------------------------
// NBW -> DPW

namespace
{

Dpw deterministic_to_dpw( const Nbw& n )
{
    Dpw d;
    d.atoms = n.atoms;
    auto sink = static_cast< int >( n.num_states );
    d.delta.assign( n.num_states + 1, std::vector< int >( n.num_letters(), sink ) );
    d.color.assign( n.num_states + 1, 1 );
    for ( std::size_t s = 0; s < n.num_states; ++s )
    {
        d.color[ s ] = n.accepting[ s ] ? 2 : 1;
        for ( std::size_t l = 0; l < n.num_letters(); ++l )
            if ( !n.delta[ s ][ l ].empty() )
                d.delta[ s ][ l ] = n.delta[ s ][ l ][ 0 ];
    }
    d.initial = n.initial.empty() ? sink : n.initial[ 0 ];
    return d;
}

struct SafraState
{
    SafraTree tree;
    int color;
    friend bool operator==( const SafraState&, const SafraState& ) = default;
};

struct SafraStateHash
{
    std::size_t operator()( const SafraState& s ) const { return hash_combine( s.tree.hash(), s.color ); }
};

} // namespace

Dpw nbw_to_dpw( const Nbw& n, std::size_t cap )
{
    if ( n.is_deterministic() )
        return dpw_minimize( deterministic_to_dpw( n ) );

    Bitset acc{ n.num_states };
    for ( std::size_t s = 0; s < n.num_states; ++s )
        if ( n.accepting[ s ] )
            acc.set( s );
    Bitset init{ n.num_states };
    for ( auto i : n.initial )
        init.set( i );

    std::unordered_map< SafraState, int, SafraStateHash > ids;
    std::vector< SafraState > states;
    auto intern = [ & ]( SafraState s ) {
        auto [ it, fresh ] = ids.emplace( s, static_cast< int >( states.size() ) );
        if ( fresh )
        {
            if ( states.size() >= cap )
                throw ResourceError{ "dpw", cap };
            states.push_back( std::move( s ) );
        }
        return it->second;
    };

    Dpw d;
    d.atoms = n.atoms;
    d.initial = intern( { safra_initial( init ), 1 } );
    for ( std::size_t i = 0; i < states.size(); ++i )
    {
        std::vector< int > row( n.num_letters() );
        for ( std::size_t l = 0; l < n.num_letters(); ++l )
        {
            auto post = [ & ]( const Bitset& from ) {
                Bitset to{ n.num_states };
                from.for_each( [ & ]( std::size_t q ) {
                    for ( auto t : n.delta[ q ][ l ] )
                        to.set( t );
                } );
                return to;
            };
            auto step = safra_step( states[ i ].tree, post, acc, n.num_states );
            row[ l ] = intern( { std::move( step.tree ), step.color } );
        }
        d.delta.push_back( std::move( row ) );
    }
    for ( auto& s : states )
        d.color.push_back( s.color );
    return dpw_minimize( d );
}

Dpw dpw_complement( const Dpw& d )
{
    Dpw c = d;
    for ( auto& col : c.color )
        ++col;
    return c;
}

Dpw compact_colors( const Dpw& d )
{
    std::vector< int > distinct( d.color.begin(), d.color.end() );
    std::sort( distinct.begin(), distinct.end() );
    distinct.erase( std::unique( distinct.begin(), distinct.end() ), distinct.end() );
    std::map< int, int > remap;
    int current = 0;
    for ( std::size_t i = 0; i < distinct.size(); ++i )
    {
        auto c = distinct[ i ];
        if ( i == 0 )
            current = c % 2 ? 1 : 2;
        else if ( ( c - distinct[ i - 1 ] ) % 2 != 0 )
            ++current;
        remap[ c ] = current;
    }
    Dpw out = d;
    for ( auto& c : out.color )
        c = remap[ c ];
    return out;
}

Dpw dpw_minimize( const Dpw& d )
{
    auto n = d.num_states();
    auto letters = d.num_letters();
    std::vector< int > block( n );
    {
        std::map< int, int > by_color;
        for ( std::size_t s = 0; s < n; ++s )
            block[ s ] = by_color.emplace( d.color[ s ], static_cast< int >( by_color.size() ) ).first->second;
    }
    std::size_t num_blocks = 0;
    for ( ;; )
    {
        std::map< std::vector< int >, int > sigs;
        std::vector< int > next( n );
        for ( std::size_t s = 0; s < n; ++s )
        {
            std::vector< int > sig{ block[ s ] };
            for ( std::size_t l = 0; l < letters; ++l )
                sig.push_back( block[ d.delta[ s ][ l ] ] );
            next[ s ] = sigs.emplace( std::move( sig ), static_cast< int >( sigs.size() ) ).first->second;
        }
        block = std::move( next );
        if ( sigs.size() == num_blocks )
            break;
        num_blocks = sigs.size();
    }

    // Quotient, numbered in BFS order from the initial block.
    std::vector< int > rep( num_blocks, -1 );
    for ( std::size_t s = 0; s < n; ++s )
        if ( rep[ block[ s ] ] < 0 )
            rep[ block[ s ] ] = static_cast< int >( s );
    std::vector< int > renum( num_blocks, -1 );
    std::vector< int > order{ block[ d.initial ] };
    renum[ block[ d.initial ] ] = 0;
    for ( std::size_t k = 0; k < order.size(); ++k )
        for ( std::size_t l = 0; l < letters; ++l )
        {
            auto b = block[ d.delta[ rep[ order[ k ] ] ][ l ] ];
            if ( renum[ b ] < 0 )
            {
                renum[ b ] = static_cast< int >( order.size() );
                order.push_back( b );
            }
        }
    Dpw out;
    out.atoms = d.atoms;
    out.initial = 0;
    for ( auto b : order )
    {
        auto s = rep[ b ];
        out.color.push_back( d.color[ s ] );
        std::vector< int > row( letters );
        for ( std::size_t l = 0; l < letters; ++l )
            row[ l ] = renum[ block[ d.delta[ s ][ l ] ] ];
        out.delta.push_back( std::move( row ) );
    }
    return compact_colors( out );
}

Dpw ltl_to_dpw( const Formula& ltl, std::size_t cap ) { return nbw_to_dpw( ltl_to_nbw( ltl, cap ), cap ); }

// ---------------------------------------------------------------------------
// Lassos

bool lasso_accepts( const Nbw& n, const std::vector< Letter >& stem, const std::vector< Letter >& loop )
{
    auto total = stem.size() + loop.size();
    auto letter_at = [ & ]( std::size_t i ) { return project_letter( n.atoms, i < stem.size() ? stem[ i ] : loop[ i - stem.size() ] ); };
    auto next_pos = [ & ]( std::size_t i ) { return i + 1 < total ? i + 1 : stem.size(); };
    auto key = [ & ]( std::size_t q, std::size_t i ) { return q * total + i; };

    std::vector< bool > seen( n.num_states * total, false );
    std::vector< std::pair< int, std::size_t > > work;
    for ( auto q : n.initial )
        if ( !seen[ key( q, 0 ) ] )
        {
            seen[ key( q, 0 ) ] = true;
            work.emplace_back( q, 0 );
        }
    std::vector< std::pair< int, std::size_t > > reached;
    while ( !work.empty() )
    {
        auto [ q, i ] = work.back();
        work.pop_back();
        reached.emplace_back( q, i );
        auto j = next_pos( i );
        for ( auto t : n.delta[ q ][ letter_at( i ) ] )
            if ( !seen[ key( t, j ) ] )
            {
                seen[ key( t, j ) ] = true;
                work.emplace_back( t, j );
            }
    }
    for ( auto [ q, i ] : reached )
    {
        if ( !n.accepting[ q ] || i < stem.size() )
            continue;
        std::vector< bool > vis( n.num_states * total, false );
        std::vector< std::pair< int, std::size_t > > w{ { q, i } };
        while ( !w.empty() )
        {
            auto [ r, k ] = w.back();
            w.pop_back();
            auto j = next_pos( k );
            for ( auto t : n.delta[ r ][ letter_at( k ) ] )
            {
                if ( t == q && j == i )
                    return true;
                if ( !vis[ key( t, j ) ] )
                {
                    vis[ key( t, j ) ] = true;
                    w.emplace_back( t, j );
                }
            }
        }
    }
    return false;
}

bool lasso_accepts( const Dpw& d, const std::vector< Letter >& stem, const std::vector< Letter >& loop )
{
    auto s = d.initial;
    for ( auto l : stem )
        s = d.step( s, l );
    std::map< int, std::size_t > first_seen;
    std::vector< int > trace{ s };
    std::vector< std::size_t > loop_start;
    for ( std::size_t iter = 0;; ++iter )
    {
        if ( auto it = first_seen.find( s ); it != first_seen.end() )
        {
            int best = -1;
            for ( auto k = loop_start[ it->second ]; k < trace.size(); ++k )
                best = std::max( best, d.color[ trace[ k ] ] );
            return best % 2 == 0;
        }
        first_seen[ s ] = iter;
        loop_start.push_back( trace.size() - 1 );
        for ( auto l : loop )
        {
            s = d.step( s, l );
            trace.push_back( s );
        }
    }
}

// ---------------------------------------------------------------------------
// Text dumps

namespace
{

std::string letter_text( const std::vector< int >& atoms, std::size_t local )
{
    std::string out = "[";
    for ( std::size_t i = 0; i < atoms.size(); ++i )
    {
        if ( i )
            out += ' ';
        out += ( ( local >> i ) & 1U ) ? "" : "!";
        out += "a" + std::to_string( atoms[ i ] );
    }
    return out + "]";
}

} // namespace

std::string to_text( const Nbw& n )
{
    std::ostringstream os;
    os << "kind: nbw\nstates: " << n.num_states << "\natoms:";
    for ( auto a : n.atoms )
        os << " a" << a;
    os << "\nstart:";
    for ( auto i : n.initial )
        os << ' ' << i;
    os << '\n';
    for ( std::size_t s = 0; s < n.num_states; ++s )
    {
        os << "state " << s << ( n.accepting[ s ] ? " accepting" : "" ) << '\n';
        for ( std::size_t l = 0; l < n.num_letters(); ++l )
        {
            if ( n.delta[ s ][ l ].empty() )
                continue;
            os << "  " << letter_text( n.atoms, l ) << " ->";
            for ( auto t : n.delta[ s ][ l ] )
                os << ' ' << t;
            os << '\n';
        }
    }
    return os.str();
}

std::string to_text( const Dpw& d )
{
    std::ostringstream os;
    os << "kind: dpw\nstates: " << d.num_states() << "\natoms:";
    for ( auto a : d.atoms )
        os << " a" << a;
    os << "\nstart: " << d.initial << "\ncolors: " << d.index() << '\n';
    for ( std::size_t s = 0; s < d.num_states(); ++s )
    {
        os << "state " << s << " color " << d.color[ s ] << '\n';
        for ( std::size_t l = 0; l < d.num_letters(); ++l )
            os << "  " << letter_text( d.atoms, l ) << " -> " << d.delta[ s ][ l ] << '\n';
    }
    return os.str();
}

} // namespace modcheck
