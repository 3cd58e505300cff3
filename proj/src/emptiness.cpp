#include "modcheck/emptiness.hpp"

#include "modcheck/error.hpp"
#include "modcheck/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace modcheck
{

// ---------------------------------------------------------------------------
// D_good

namespace
{

struct SafraKey
{
    SafraTree tree;
    int color;
    friend bool operator==( const SafraKey&, const SafraKey& ) = default;
};

struct SafraKeyHash
{
    std::size_t operator()( const SafraKey& k ) const { return hash_combine( k.tree.hash(), k.color ); }
};

struct StepKeyHash
{
    std::size_t operator()( const std::pair< int, Relation >& k ) const
    {
        auto h = static_cast< std::size_t >( k.first );
        for ( auto [ q, r ] : k.second )
            h = hash_combine( h, static_cast< std::size_t >( q ) * 131 + static_cast< std::size_t >( r ) );
        return h;
    }
};

} // namespace

struct GoodTraces::Impl
{
    std::size_t nq = 0;
    std::vector< int > alpha;
    std::vector< int > odd; // odd colours of the ACG
    std::size_t n_bad = 0;
    Bitset accepting;

    struct Entry
    {
        SafraTree tree;
        int color;
        std::vector< int > obligations;
    };
    std::vector< Entry > states;
    std::unordered_map< SafraKey, int, SafraKeyHash > ids;
    std::unordered_map< std::pair< int, Relation >, int, StepKeyHash > cache;

    [[nodiscard]] std::size_t committed( std::size_t q, std::size_t ci ) const { return nq + q * odd.size() + ci; }

    int intern( SafraKey key )
    {
        auto [ it, fresh ] = ids.emplace( key, static_cast< int >( states.size() ) );
        if ( fresh )
        {
            Entry e{ std::move( key.tree ), key.color + 1, {} };
            if ( !e.tree.empty() )
                e.tree.labels[ 0 ].for_each( [ & ]( std::size_t i ) {
                    if ( i < nq )
                        e.obligations.push_back( static_cast< int >( i ) );
                } );
            states.push_back( std::move( e ) );
        }
        return it->second;
    }
};

GoodTraces::GoodTraces( const Acg& a ) : _impl{ std::make_unique< Impl >() }
{
    auto& m = *_impl;
    m.nq = a.num_states();
    m.alpha = a.color;
    std::set< int > odd;
    for ( auto c : a.color )
        if ( c % 2 )
            odd.insert( c );
    m.odd.assign( odd.begin(), odd.end() );
    m.n_bad = m.nq * ( 1 + m.odd.size() );
    m.accepting = Bitset{ m.n_bad };
    for ( std::size_t q = 0; q < m.nq; ++q )
        for ( std::size_t ci = 0; ci < m.odd.size(); ++ci )
            if ( m.alpha[ q ] == m.odd[ ci ] )
                m.accepting.set( m.committed( q, ci ) );

    Bitset init{ m.n_bad };
    auto q0 = static_cast< std::size_t >( a.initial );
    init.set( q0 );
    for ( std::size_t ci = 0; ci < m.odd.size(); ++ci )
        if ( m.alpha[ q0 ] <= m.odd[ ci ] )
            init.set( m.committed( q0, ci ) );
    m.intern( { safra_initial( init ), 1 } );
}

GoodTraces::~GoodTraces() = default;
GoodTraces::GoodTraces( GoodTraces&& ) noexcept = default;
GoodTraces& GoodTraces::operator=( GoodTraces&& ) noexcept = default;

int GoodTraces::initial() const { return 0; }
int GoodTraces::color( int d ) const { return _impl->states[ d ].color; }
const std::vector< int >& GoodTraces::obligations( int d ) const { return _impl->states[ d ].obligations; }
std::size_t GoodTraces::size() const { return _impl->states.size(); }
std::size_t GoodTraces::bad_states() const { return _impl->n_bad; }

int GoodTraces::step( int d, const Relation& r )
{
    auto& m = *_impl;
    auto key = std::pair{ d, r };
    if ( auto it = m.cache.find( key ); it != m.cache.end() )
        return it->second;

    std::vector< std::vector< int > > succ( m.nq );
    for ( auto [ q, q2 ] : r )
        succ[ q ].push_back( q2 );
    auto post = [ & ]( const Bitset& from ) {
        Bitset to{ m.n_bad };
        from.for_each( [ & ]( std::size_t i ) {
            if ( i < m.nq )
            {
                for ( auto q2 : succ[ i ] )
                {
                    to.set( q2 );
                    for ( std::size_t ci = 0; ci < m.odd.size(); ++ci )
                        if ( m.alpha[ q2 ] <= m.odd[ ci ] )
                            to.set( m.committed( q2, ci ) );
                }
                return;
            }
            auto q = ( i - m.nq ) / m.odd.size();
            auto ci = ( i - m.nq ) % m.odd.size();
            for ( auto q2 : succ[ q ] )
                if ( m.alpha[ q2 ] <= m.odd[ ci ] )
                    to.set( m.committed( q2, ci ) );
        } );
        return to;
    };
    // Copy: interning may reallocate the state table.
    auto tree = m.states[ d ].tree;
    auto next = safra_step( tree, post, m.accepting, m.n_bad );
    auto id = m.intern( { std::move( next.tree ), next.color } );
    m.cache.emplace( std::move( key ), id );
    return id;
}

// ---------------------------------------------------------------------------
// ACG x CGS -> NTA

std::size_t Nta::index() const
{
    std::set< int > colors;
    for ( auto& s : states )
        colors.insert( s.color );
    return colors.size();
}

std::vector< const NtaTransition* > Nta::successors( int state, const BotLetter& letter ) const
{
    std::vector< const NtaTransition* > out;
    auto& st = states[ state ];
    if ( state == bottom )
    {
        if ( letter.bottom )
            for ( auto& t : st.transitions )
                out.push_back( &t );
        return out;
    }
    if ( letter.bottom )
        return out;
    for ( auto& t : st.transitions )
        if ( t.letter == letter.content )
            out.push_back( &t );
    return out;
}

namespace
{

using Option = std::vector< std::pair< int, int > >; // (direction, ACG state), sorted

void minimize_options( std::vector< Option >& opts )
{
    for ( auto& o : opts )
    {
        std::sort( o.begin(), o.end() );
        o.erase( std::unique( o.begin(), o.end() ), o.end() );
    }
    std::sort( opts.begin(), opts.end(),
               []( const Option& x, const Option& y ) { return x.size() != y.size() ? x.size() < y.size() : x < y; } );
    opts.erase( std::unique( opts.begin(), opts.end() ), opts.end() );
    std::vector< Option > kept;
    for ( auto& o : opts )
    {
        bool dominated = false;
        for ( auto& k : kept )
            if ( std::includes( o.begin(), o.end(), k.begin(), k.end() ) )
            {
                dominated = true;
                break;
            }
        if ( !dominated )
            kept.push_back( o );
    }
    opts = std::move( kept );
}

class NtaBuilder
{
    Acg& _a;
    const Cgs& _g;
    NtaOptions _opt;
    GoodTraces _good;
    Nta _nta;
    std::map< std::pair< StateId, int >, int > _ids;
    std::map< std::tuple< StateId, AgentSet, std::size_t >, std::vector< CoalitionMove > > _moves;
    std::map< std::tuple< StateId, std::size_t, int, Letter >, std::vector< Option > > _resolved;

    int state_of( StateId s, int d )
    {
        auto [ it, fresh ] = _ids.emplace( std::pair{ s, d }, static_cast< int >( _nta.states.size() ) );
        if ( fresh )
        {
            if ( _nta.states.size() >= _opt.max_states )
                throw ResourceError{ "nta", _opt.max_states };
            _nta.states.push_back( { s, d, _good.color( d ), {} } );
        }
        return it->second;
    }

    const std::vector< CoalitionMove >& moves( StateId s, AgentSet coalition, std::size_t mask,
                                               const std::vector< bool >& enabled )
    {
        auto key = std::tuple{ s, coalition, mask };
        if ( auto it = _moves.find( key ); it != _moves.end() )
            return it->second;
        return _moves.emplace( key, restrict_moves( _g.coalition_moves( s, coalition ), enabled ) ).first->second;
    }

    // Ways for one atom to send obligations to the enabled children.
    std::vector< Option > atom_options( StateId s, const AcgAtom& atom, std::size_t mask,
                                        const std::vector< bool >& enabled )
    {
        auto& ms = moves( s, atom.coalition, mask, enabled );
        std::vector< Option > out;
        if ( atom.mode == Mode::Box )
        {
            for ( auto& m : ms )
            {
                Option o;
                for ( auto t : m.outcomes )
                    o.emplace_back( t, atom.state );
                out.push_back( std::move( o ) );
            }
        }
        else
        {
            // One consistent child per available decision.
            std::vector< std::size_t > pick( ms.size(), 0 );
            for ( ;; )
            {
                Option o;
                for ( std::size_t i = 0; i < ms.size(); ++i )
                    o.emplace_back( ms[ i ].outcomes[ pick[ i ] ], atom.state );
                out.push_back( std::move( o ) );
                std::size_t i = 0;
                for ( ; i < ms.size(); ++i )
                {
                    if ( ++pick[ i ] < ms[ i ].outcomes.size() )
                        break;
                    pick[ i ] = 0;
                }
                if ( i == ms.size() )
                    break;
            }
        }
        minimize_options( out );
        return out;
    }

    const std::vector< Option >& resolve( StateId s, std::size_t mask, const std::vector< bool >& enabled, int q,
                                          Letter sigma )
    {
        auto key = std::tuple{ s, mask, q, sigma };
        if ( auto it = _resolved.find( key ); it != _resolved.end() )
            return it->second;
        std::vector< Option > out;
        for ( auto& model : _a.minimal_models( q, sigma ) )
        {
            std::vector< Option > partial{ Option{} };
            for ( auto atom_id : model )
            {
                auto choices = atom_options( s, _a.atoms[ atom_id ], mask, enabled );
                std::vector< Option > next;
                for ( auto& p : partial )
                    for ( auto& c : choices )
                    {
                        auto o = p;
                        o.insert( o.end(), c.begin(), c.end() );
                        next.push_back( std::move( o ) );
                    }
                minimize_options( next );
                partial = std::move( next );
                if ( partial.empty() )
                    break;
            }
            out.insert( out.end(), partial.begin(), partial.end() );
        }
        minimize_options( out );
        return _resolved.emplace( key, std::move( out ) ).first->second;
    }

    void add_transition( int state, std::vector< StateId > enabled, Letter basics, const std::vector< Relation >& rel )
    {
        if ( _nta.num_transitions >= _opt.max_transitions )
            throw ResourceError{ "nta", _opt.max_transitions };
        auto d = _nta.states[ state ].good;
        NtaTransition t;
        t.letter = _g.label( _nta.states[ state ].direction );
        t.basics = basics;
        for ( std::size_t i = 0; i < enabled.size(); ++i )
            t.children.push_back( state_of( enabled[ i ], _good.step( d, rel[ i ] ) ) );
        t.enabled = std::move( enabled );
        _nta.states[ state ].transitions.push_back( std::move( t ) );
        ++_nta.num_transitions;
    }

    void expand( int state )
    {
        auto s = _nta.states[ state ].direction;
        auto d = _nta.states[ state ].good;
        auto obligations = _good.obligations( d ); // copy: stepping may grow the table
        auto& succ = _g.successors( s );
        auto k = succ.size();

        if ( obligations.empty() )
        {
            add_transition( state, succ, 0, std::vector< Relation >( k ) );
            return;
        }

        std::size_t full = ( std::size_t{ 1 } << k ) - 1;
        std::size_t first_mask = _g.is_env_state( s ) ? 1 : full;
        std::size_t num_basics = _a.basics.size();
        for ( auto mask = first_mask; mask <= full; ++mask )
        {
            std::vector< StateId > enabled_list;
            std::vector< bool > enabled( _g.num_states(), false );
            for ( std::size_t b = 0; b < k; ++b )
                if ( ( mask >> b ) & 1U )
                {
                    enabled_list.push_back( succ[ b ] );
                    enabled[ succ[ b ] ] = true;
                }
            for ( Letter beta = 0; beta < ( Letter{ 1 } << num_basics ); ++beta )
            {
                Letter sigma = _g.label( s ) | ( beta << _a.num_props );
                std::vector< const std::vector< Option >* > per_q;
                bool feasible = true;
                for ( auto q : obligations )
                {
                    auto& opts = resolve( s, mask, enabled, q, sigma );
                    if ( opts.empty() )
                    {
                        feasible = false;
                        break;
                    }
                    per_q.push_back( &opts );
                }
                if ( !feasible )
                    continue;

                std::set< std::vector< Relation > > seen;
                std::vector< std::size_t > pick( per_q.size(), 0 );
                for ( ;; )
                {
                    std::vector< Relation > rel( enabled_list.size() );
                    for ( std::size_t i = 0; i < per_q.size(); ++i )
                        for ( auto [ t, q2 ] : ( *per_q[ i ] )[ pick[ i ] ] )
                        {
                            auto pos = std::lower_bound( enabled_list.begin(), enabled_list.end(), t ) - enabled_list.begin();
                            rel[ pos ].emplace_back( obligations[ i ], q2 );
                        }
                    for ( auto& r : rel )
                    {
                        std::sort( r.begin(), r.end() );
                        r.erase( std::unique( r.begin(), r.end() ), r.end() );
                    }
                    if ( seen.insert( rel ).second )
                        add_transition( state, enabled_list, beta, rel );
                    std::size_t i = 0;
                    for ( ; i < per_q.size(); ++i )
                    {
                        if ( ++pick[ i ] < per_q[ i ]->size() )
                            break;
                        pick[ i ] = 0;
                    }
                    if ( i == per_q.size() )
                        break;
                }
            }
        }
    }

public:
    NtaBuilder( Acg& a, const Cgs& g, const NtaOptions& opt ) : _a{ a }, _g{ g }, _opt{ opt }, _good{ a } {}

    Nta run()
    {
        _nta.num_directions = _g.num_states();
        _nta.bottom = 0;
        _nta.states.push_back( { kUndefined, -1, 0, { NtaTransition{ {}, 0, 0, {} } } } );
        _nta.initial = state_of( _g.initial(), _good.initial() );
        for ( std::size_t i = 1; i < _nta.states.size(); ++i )
            expand( static_cast< int >( i ) );
        _nta.good_states = _good.size();
        return std::move( _nta );
    }
};

} // namespace

Nta acg_to_nta( Acg& a, const Cgs& g, const NtaOptions& options )
{
    if ( a.num_letter_bits() > 64 )
        throw ModelError{ "automaton alphabet exceeds 64 letter bits" };
    return NtaBuilder{ a, g, options }.run();
}

std::string to_text( const Nta& n, const Cgs& g )
{
    std::ostringstream os;
    os << "kind: nta\nstates: " << n.size() << "\ndirections: " << n.num_directions << "\nindex: " << n.index()
       << "\ntransitions: " << n.num_transitions << "\ngood-states: " << n.good_states << "\ninitial: " << n.initial
       << "\nbottom: " << n.bottom << '\n';
    for ( std::size_t i = 0; i < n.size(); ++i )
    {
        auto& st = n.states[ i ];
        if ( static_cast< int >( i ) == n.bottom )
        {
            os << "state " << i << " bottom color " << st.color << "\n  [bot] -> all directions " << i << '\n';
            continue;
        }
        os << "state " << i << " dir " << g.state_names()[ st.direction ] << " good " << st.good << " color "
           << st.color << '\n';
        for ( auto& t : st.transitions )
        {
            os << "  [" << t.letter << " b" << t.basics << "]";
            for ( std::size_t j = 0; j < t.enabled.size(); ++j )
                os << ' ' << g.state_names()[ t.enabled[ j ] ] << ':' << t.children[ j ];
            os << '\n';
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Emptiness game and witness folding

EmptinessGame emptiness_game( const Nta& n )
{
    EmptinessGame eg;
    auto& g = eg.game;
    auto win = g.add_position( Player::Automaton, 0, "bottom" );
    g.add_edge( win, win );
    auto lose = g.add_position( Player::Pathfinder, 1, "dead end" );
    g.add_edge( lose, lose );
    eg.transition_of_position.assign( 2, { -1, -1 } );

    eg.state_position.assign( n.size(), -1 );
    for ( std::size_t i = 0; i < n.size(); ++i )
    {
        if ( static_cast< int >( i ) == n.bottom )
        {
            eg.state_position[ i ] = win;
            continue;
        }
        eg.state_position[ i ] = g.add_position( Player::Automaton, n.states[ i ].color, "nta " + std::to_string( i ) );
        eg.transition_of_position.emplace_back( -1, -1 );
    }
    for ( std::size_t i = 0; i < n.size(); ++i )
    {
        if ( static_cast< int >( i ) == n.bottom )
            continue;
        auto& st = n.states[ i ];
        auto pos = eg.state_position[ i ];
        if ( st.transitions.empty() )
        {
            g.add_edge( pos, lose );
            continue;
        }
        for ( std::size_t k = 0; k < st.transitions.size(); ++k )
        {
            auto& t = st.transitions[ k ];
            auto tp = g.add_position( Player::Pathfinder, 0 );
            eg.transition_of_position.emplace_back( static_cast< int >( i ), static_cast< int >( k ) );
            g.add_edge( pos, tp );
            for ( auto c : t.children )
                g.add_edge( tp, eg.state_position[ c ] );
            if ( t.enabled.size() < n.num_directions )
                g.add_edge( tp, win );
        }
    }
    g.initial = eg.state_position[ n.initial ];
    return eg;
}

EmptinessResult nta_emptiness( const Nta& n, const Cgs& g )
{
    auto eg = emptiness_game( n );
    auto sol = solve( eg.game );
    EmptinessResult r;
    r.game_positions = eg.game.size();
    if ( sol.winner[ eg.game.initial ] != Player::Automaton )
        return r;
    r.empty = false;

    FiniteStrategyTree w;
    std::map< int, int > memory_of; // NTA state -> memory
    std::vector< int > order{ n.initial };
    memory_of[ n.initial ] = 0;
    for ( std::size_t k = 0; k < order.size(); ++k )
    {
        auto i = order[ k ];
        auto choice = sol.strategy[ eg.state_position[ i ] ];
        auto [ si, ti ] = eg.transition_of_position[ choice ];
        auto& t = n.states[ si ].transitions[ ti ];
        StrategyMemory m;
        m.state = n.states[ i ].direction;
        m.enabled = t.enabled;
        m.basics = t.basics;
        for ( std::size_t j = 0; j < t.enabled.size(); ++j )
        {
            auto c = t.children[ j ];
            auto [ it, fresh ] = memory_of.emplace( c, static_cast< int >( order.size() ) );
            if ( fresh )
                order.push_back( c );
            m.next[ t.enabled[ j ] ] = it->second;
        }
        w.memories.push_back( std::move( m ) );
    }
    (void)g;
    r.witness = normalize_witness( w );
    return r;
}

// ---------------------------------------------------------------------------
// Strategy trees

void validate_strategy_tree( const Cgs& g, const FiniteStrategyTree& t )
{
    if ( t.memories.empty() || t.initial < 0 || static_cast< std::size_t >( t.initial ) >= t.memories.size() )
        throw ModelError{ "strategy tree has no initial memory" };
    if ( t.memories[ t.initial ].state != g.initial() )
        throw ModelError{ "strategy tree root is not the initial state" };
    for ( std::size_t i = 0; i < t.memories.size(); ++i )
    {
        auto& m = t.memories[ i ];
        if ( m.state < 0 || static_cast< std::size_t >( m.state ) >= g.num_states() )
            throw ModelError{ "strategy memory refers to an unknown state" };
        auto& succ = g.successors( m.state );
        if ( m.enabled.empty() )
            throw ModelError{ "strategy memory disables every successor" };
        for ( auto s : m.enabled )
            if ( !std::binary_search( succ.begin(), succ.end(), s ) )
                throw ModelError{ "strategy memory enables a non-successor" };
        if ( !g.is_env_state( m.state ) && m.enabled != succ )
            throw ModelError{ "strategy memory prunes a system state" };
        if ( m.next.size() != m.enabled.size() )
            throw ModelError{ "strategy memory update is not defined on every enabled direction" };
        for ( auto s : m.enabled )
        {
            auto it = m.next.find( s );
            if ( it == m.next.end() || it->second < 0 || static_cast< std::size_t >( it->second ) >= t.memories.size() ||
                 t.memories[ it->second ].state != s )
                throw ModelError{ "strategy memory update is inconsistent with its direction" };
        }
    }
}

FiniteStrategyTree normalize_witness( const FiniteStrategyTree& t )
{
    auto n = t.memories.size();
    std::vector< int > block( n );
    {
        std::map< std::tuple< StateId, std::vector< StateId >, Letter >, int > ids;
        for ( std::size_t i = 0; i < n; ++i )
        {
            auto& m = t.memories[ i ];
            block[ i ] = ids.emplace( std::tuple{ m.state, m.enabled, m.basics }, static_cast< int >( ids.size() ) )
                             .first->second;
        }
    }
    for ( ;; )
    {
        std::map< std::pair< int, std::vector< int > >, int > ids;
        std::vector< int > refined( n );
        for ( std::size_t i = 0; i < n; ++i )
        {
            std::vector< int > sig;
            for ( auto [ s, k ] : t.memories[ i ].next )
                sig.push_back( block[ k ] );
            refined[ i ] =
                ids.emplace( std::pair{ block[ i ], std::move( sig ) }, static_cast< int >( ids.size() ) ).first->second;
        }
        bool stable = std::set< int >( refined.begin(), refined.end() ).size() ==
                      std::set< int >( block.begin(), block.end() ).size();
        block = std::move( refined );
        if ( stable )
            break;
    }

    FiniteStrategyTree out;
    out.basics = t.basics;
    std::map< int, int > renumber;
    std::vector< int > order{ t.initial };
    renumber[ block[ t.initial ] ] = 0;
    for ( std::size_t k = 0; k < order.size(); ++k )
    {
        auto m = t.memories[ order[ k ] ];
        for ( auto& [ s, next ] : m.next )
        {
            auto [ it, fresh ] = renumber.emplace( block[ next ], static_cast< int >( order.size() ) );
            if ( fresh )
                order.push_back( next );
            next = it->second;
        }
        out.memories.push_back( std::move( m ) );
    }
    return out;
}

std::optional< Pruning > witness_pruning( const Cgs& g, const FiniteStrategyTree& t )
{
    Pruning p;
    for ( auto& m : t.memories )
    {
        if ( !g.is_env_state( m.state ) )
            continue;
        auto [ it, fresh ] = p.enabled.emplace( m.state, m.enabled );
        if ( !fresh && it->second != m.enabled )
            return std::nullopt;
    }
    // States the tree never visits keep all successors.
    for ( std::size_t s = 0; s < g.num_states(); ++s )
        if ( g.is_env_state( static_cast< StateId >( s ) ) )
            p.enabled.emplace( static_cast< StateId >( s ), g.successors( static_cast< StateId >( s ) ) );
    return p;
}

Cgs product_cgs( const Cgs& g, const FiniteStrategyTree& t )
{
    validate_strategy_tree( g, t );
    CgsBuilder b{ g.agent_names(), g.action_names(), g.prop_names() };
    for ( std::size_t i = 0; i < t.memories.size(); ++i )
        b.add_state( g.state_names()[ t.memories[ i ].state ] + "@" + std::to_string( i ), g.label( t.memories[ i ].state ) );
    b.set_initial( t.initial );
    for ( std::size_t i = 0; i < t.memories.size(); ++i )
    {
        auto& m = t.memories[ i ];
        for ( std::size_t f = 0; f < g.num_full_decisions(); ++f )
        {
            auto tgt = g.target( m.state, f );
            if ( tgt == kUndefined )
                continue;
            auto it = m.next.find( tgt );
            if ( it == m.next.end() )
                continue;
            b.set_transition( static_cast< StateId >( i ), g.full_decision( f ).actions, it->second );
        }
    }
    return std::move( b ).build();
}

BotTree bot_completion( const Cgs& g, const FiniteStrategyTree& t, std::size_t depth )
{
    validate_strategy_tree( g, t );
    BotTree tree;
    std::vector< int > memory; // per node; -1 for completion nodes
    auto root = t.memories[ t.initial ];
    tree.nodes.push_back( { { false, g.label( root.state ) }, root.state, {} } );
    memory.push_back( t.initial );
    std::vector< std::size_t > frontier{ 0 };
    for ( std::size_t level = 0; level < depth; ++level )
    {
        std::vector< std::size_t > next;
        for ( auto node : frontier )
        {
            auto mem = memory[ node ];
            for ( std::size_t dir = 0; dir < g.num_states(); ++dir )
            {
                int child_mem = -1;
                if ( mem >= 0 )
                    if ( auto it = t.memories[ mem ].next.find( static_cast< StateId >( dir ) );
                         it != t.memories[ mem ].next.end() )
                        child_mem = it->second;
                BotTreeNode child;
                if ( child_mem >= 0 )
                {
                    child.letter = { false, g.label( static_cast< StateId >( dir ) ) };
                    child.state = static_cast< StateId >( dir );
                }
                else
                    child.letter = { true, 0 };
                tree.nodes.push_back( std::move( child ) );
                memory.push_back( child_mem );
                tree.nodes[ node ].children.push_back( tree.nodes.size() - 1 );
                next.push_back( tree.nodes.size() - 1 );
            }
        }
        frontier = std::move( next );
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Module checking

const char* engine_name( Engine e )
{
    switch ( e )
    {
    case Engine::Auto: return "auto";
    case Engine::Atl: return "atl";
    case Engine::AtlStar: return "atlstar";
    }
    return "?";
}

BuiltAcg build_negation_acg( const Cgs& g, const Formula& phi, const CheckOptions& options )
{
    if ( !is_state_formula( phi ) )
        throw ModelError{ "temporal operator outside quantifier" };
    auto neg = to_nnf( f_not( phi ) );
    bool atl = classify( neg ) == FormulaClass::Atl;
    auto engine = options.engine;
    if ( engine == Engine::Auto )
        engine = atl ? Engine::Atl : Engine::AtlStar;
    if ( engine == Engine::Atl && !atl )
        throw ModelError{ "formula is not in the ATL fragment; use the atlstar engine" };
    BuiltAcg out{ Acg{}, engine, {} };
    if ( engine == Engine::Atl )
        out.acg = atl_to_acg( neg, g.num_props() );
    else
        out.acg = atlstar_to_acg( neg, g.num_props(), options.max_dpw_states, &out.dpw_stats );
    return out;
}

namespace
{

double ms_since( std::chrono::steady_clock::time_point start )
{
    return std::chrono::duration< double, std::milli >( std::chrono::steady_clock::now() - start ).count();
}

} // namespace

CheckResult module_check( const Cgs& g, const Formula& phi, const CheckOptions& options )
{
    CheckResult r;
    auto t0 = std::chrono::steady_clock::now();
    auto built = build_negation_acg( g, phi, options );
    r.stats.times.acg_ms = ms_since( t0 );
    r.engine = built.engine;
    auto& a = built.acg;
    r.stats.acg_states = a.num_states();
    r.stats.acg_atoms = a.atoms.size();
    r.stats.acg_index = a.index();
    r.stats.basics = a.basics.size();
    r.stats.dpw_states = built.dpw_stats.dpw_states;
    r.stats.max_dpw_index = built.dpw_stats.max_dpw_index;

    auto t1 = std::chrono::steady_clock::now();
    auto nta = acg_to_nta( a, g, { options.max_nta_states, 4 * options.max_nta_states } );
    r.stats.times.nta_ms = ms_since( t1 );
    r.stats.nta_states = nta.size();
    r.stats.nta_transitions = nta.num_transitions;
    r.stats.nta_index = nta.index();
    r.stats.good_states = nta.good_states;

    auto t2 = std::chrono::steady_clock::now();
    auto res = nta_emptiness( nta, g );
    r.stats.times.game_ms = ms_since( t2 );
    r.stats.game_positions = res.game_positions;
    r.holds = res.empty;
    if ( res.witness )
    {
        res.witness->basics = a.basics;
        r.counterexample = std::move( res.witness );
    }
    return r;
}

bool validate_counterexample( const Cgs& g, const Formula& phi, const FiniteStrategyTree& w )
{
    std::optional< Cgs > product;
    try
    {
        product.emplace( product_cgs( g, w ) );
    }
    catch ( const ModelError& )
    {
        return false;
    }
    auto& p = *product;
    try
    {
        return !fixpoint_model_check( p, phi ).test( p.initial() );
    }
    catch ( const ModelError& )
    {
        // Outside the fixpoint fragment: check the B-labelled product against
        // the well-formedness automaton of !phi.
    }
    auto a = atlstar_to_acg( to_nnf( f_not( phi ) ), g.num_props() );
    if ( a.basics.size() != w.basics.size() )
        return false;
    for ( std::size_t i = 0; i < a.basics.size(); ++i )
        if ( !formula_equal( a.basics[ i ], w.basics[ i ] ) )
            return false;
    std::vector< Letter > letters;
    for ( auto& m : w.memories )
        letters.push_back( g.label( m.state ) | ( m.basics << g.num_props() ) );
    return membership( a, p, letters )[ p.initial() ];
}

} // namespace modcheck
