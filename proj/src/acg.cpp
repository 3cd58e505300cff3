#include "modcheck/acg.hpp"

#include "modcheck/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace modcheck
{

// ---------------------------------------------------------------------------
// Positive boolean formulas

std::size_t PbfPool::NodeHash::operator()( const PbfNode& n ) const
{
    std::size_t h = static_cast< std::size_t >( n.kind );
    h = hash_combine( h, static_cast< std::size_t >( n.value + 1 ) );
    h = hash_combine( h, n.positive );
    h = hash_combine( h, static_cast< std::size_t >( n.lhs + 1 ) );
    return hash_combine( h, static_cast< std::size_t >( n.rhs + 1 ) );
}

PbfPool::PbfPool()
{
    intern( { PbfKind::True } );
    intern( { PbfKind::False } );
}

int PbfPool::intern( const PbfNode& n )
{
    auto [ it, fresh ] = _ids.emplace( n, static_cast< int >( _nodes.size() ) );
    if ( fresh )
        _nodes.push_back( n );
    return it->second;
}

int PbfPool::atom( int atom_id ) { return intern( { PbfKind::Atom, atom_id } ); }
int PbfPool::test( int bit, bool positive ) { return intern( { PbfKind::Test, bit, positive } ); }

int PbfPool::conj( int a, int b )
{
    if ( a == bottom() || b == bottom() )
        return bottom();
    if ( a == top() )
        return b;
    if ( b == top() || a == b )
        return a;
    return intern( { PbfKind::And, -1, true, std::min( a, b ), std::max( a, b ) } );
}

int PbfPool::disj( int a, int b )
{
    if ( a == top() || b == top() )
        return top();
    if ( a == bottom() )
        return b;
    if ( b == bottom() || a == b )
        return a;
    return intern( { PbfKind::Or, -1, true, std::min( a, b ), std::max( a, b ) } );
}

int PbfPool::fold( int id, Letter letter )
{
    auto n = _nodes[ id ];
    switch ( n.kind )
    {
    case PbfKind::True:
    case PbfKind::False:
    case PbfKind::Atom: return id;
    case PbfKind::Test: return ( ( ( letter >> n.value ) & 1U ) != 0 ) == n.positive ? top() : bottom();
    default: break;
    }
    auto key = std::pair{ id, letter };
    if ( auto it = _fold_cache.find( key ); it != _fold_cache.end() )
        return it->second;
    auto l = fold( n.lhs, letter );
    auto r = fold( n.rhs, letter );
    auto out = n.kind == PbfKind::And ? conj( l, r ) : disj( l, r );
    _fold_cache.emplace( key, out );
    return out;
}

namespace
{

void minimize_models( std::vector< std::vector< int > >& models )
{
    for ( auto& m : models )
    {
        std::sort( m.begin(), m.end() );
        m.erase( std::unique( m.begin(), m.end() ), m.end() );
    }
    std::sort( models.begin(), models.end(),
               []( const auto& x, const auto& y ) { return x.size() != y.size() ? x.size() < y.size() : x < y; } );
    models.erase( std::unique( models.begin(), models.end() ), models.end() );
    std::vector< std::vector< int > > kept;
    for ( auto& m : models )
    {
        bool dominated = false;
        for ( auto& k : kept )
            if ( std::includes( m.begin(), m.end(), k.begin(), k.end() ) )
            {
                dominated = true;
                break;
            }
        if ( !dominated )
            kept.push_back( m );
    }
    models = std::move( kept );
}

} // namespace

std::vector< std::vector< int > > PbfPool::minimal_models( int id ) const
{
    auto& n = _nodes[ id ];
    switch ( n.kind )
    {
    case PbfKind::True: return { {} };
    case PbfKind::False: return {};
    case PbfKind::Atom: return { { n.value } };
    case PbfKind::Test: throw std::logic_error{ "minimal models of a formula with letter tests" };
    case PbfKind::Or:
    {
        auto l = minimal_models( n.lhs );
        auto r = minimal_models( n.rhs );
        l.insert( l.end(), r.begin(), r.end() );
        minimize_models( l );
        return l;
    }
    case PbfKind::And:
    {
        auto l = minimal_models( n.lhs );
        auto r = minimal_models( n.rhs );
        std::vector< std::vector< int > > out;
        for ( auto& x : l )
            for ( auto& y : r )
            {
                auto m = x;
                m.insert( m.end(), y.begin(), y.end() );
                out.push_back( std::move( m ) );
            }
        minimize_models( out );
        return out;
    }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Acg

std::size_t Acg::index() const { return std::set< int >( color.begin(), color.end() ).size(); }

int Acg::add_state( std::string name, int c )
{
    color.push_back( c );
    delta.push_back( PbfPool::bottom() );
    state_names.push_back( std::move( name ) );
    state_formulas.emplace_back();
    return static_cast< int >( color.size() - 1 );
}

int Acg::atom_id( const AcgAtom& a )
{
    auto [ it, fresh ] = _atom_ids.emplace( a, static_cast< int >( atoms.size() ) );
    if ( fresh )
        atoms.push_back( a );
    return it->second;
}

int Acg::transition( int q, Letter letter ) { return pool.fold( delta[ q ], letter ); }

const std::vector< std::vector< int > >& Acg::minimal_models( int q, Letter letter )
{
    auto key = std::pair{ q, letter };
    if ( auto it = _model_cache.find( key ); it != _model_cache.end() )
        return it->second;
    return _model_cache.emplace( key, pool.minimal_models( transition( q, letter ) ) ).first->second;
}

namespace
{

std::string coalition_text( AgentSet a, const Signature* sig )
{
    std::string out = "{";
    bool first = true;
    for ( std::size_t i = 0; i < kMaxAgents; ++i )
        if ( ( a >> i ) & 1U )
        {
            out += first ? "" : ",";
            first = false;
            out += sig && i < sig->agents.size() ? sig->agents[ i ] : std::to_string( i );
        }
    return out + "}";
}

std::string bit_text( int bit, std::size_t num_props, const Signature* sig )
{
    if ( static_cast< std::size_t >( bit ) < num_props )
        return sig && static_cast< std::size_t >( bit ) < sig->props.size() ? sig->props[ bit ] : "p" + std::to_string( bit );
    return "b" + std::to_string( bit - static_cast< int >( num_props ) );
}

} // namespace

std::string Acg::pbf_text( int id, const Signature* sig ) const
{
    auto& n = pool.node( id );
    switch ( n.kind )
    {
    case PbfKind::True: return "true";
    case PbfKind::False: return "false";
    case PbfKind::Test: return ( n.positive ? "" : "!" ) + bit_text( n.value, num_props, sig );
    case PbfKind::Atom:
    {
        auto& a = atoms[ n.value ];
        return "(q" + std::to_string( a.state ) + "," + ( a.mode == Mode::Box ? "box" : "dia" ) + "," +
               coalition_text( a.coalition, sig ) + ")";
    }
    case PbfKind::And: return "(" + pbf_text( n.lhs, sig ) + " & " + pbf_text( n.rhs, sig ) + ")";
    case PbfKind::Or: return "(" + pbf_text( n.lhs, sig ) + " | " + pbf_text( n.rhs, sig ) + ")";
    }
    return "?";
}

std::string to_text( const Acg& a, const Signature* sig )
{
    std::ostringstream os;
    os << "kind: acg\nstates: " << a.num_states() << "\natoms: " << a.atoms.size() << "\nsize: " << a.size()
       << "\nindex: " << a.index() << "\ninitial: q" << a.initial << '\n';
    for ( std::size_t i = 0; i < a.basics.size(); ++i )
        os << "basic b" << i << " = " << to_string( a.basics[ i ], sig ) << '\n';
    for ( std::size_t q = 0; q < a.num_states(); ++q )
        os << "state q" << q << " color " << a.color[ q ] << " \""
           << ( a.state_formulas[ q ] ? to_string( a.state_formulas[ q ], sig ) : a.state_names[ q ] ) << "\"\n  delta = "
           << a.pbf_text( a.delta[ q ], sig ) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// ATL -> ACG

namespace
{

class AtlTranslator
{
    Acg& _a;
    FormulaMap< int > _states;
    std::vector< Formula > _pending;

public:
    explicit AtlTranslator( Acg& a ) : _a{ a } {}

    int state_of( const Formula& f )
    {
        if ( auto it = _states.find( f ); it != _states.end() )
            return it->second;
        bool least = is_quantifier( f->op ) && f->lhs->op == Op::Until;
        auto q = _a.add_state( to_string( f ), least ? 1 : 0 );
        _a.state_formulas[ q ] = f;
        _states.emplace( f, q );
        _pending.push_back( f );
        return q;
    }

    int exp( const Formula& f )
    {
        auto& pool = _a.pool;
        switch ( f->op )
        {
        case Op::True: return PbfPool::top();
        case Op::False: return PbfPool::bottom();
        case Op::Prop: return pool.test( f->prop, true );
        case Op::Not:
            if ( f->lhs->op != Op::Prop )
                throw ModelError{ "ATL translation expects negation normal form" };
            return pool.test( f->lhs->prop, false );
        case Op::And: return pool.conj( exp( f->lhs ), exp( f->rhs ) );
        case Op::Or: return pool.disj( exp( f->lhs ), exp( f->rhs ) );
        case Op::Exists:
        case Op::Forall: break;
        default: throw ModelError{ "formula is not in the ATL fragment" };
        }
        auto mode = f->op == Op::Exists ? Mode::Box : Mode::Diamond;
        auto& path = f->lhs;
        switch ( path->op )
        {
        case Op::Next: return pool.atom( _a.atom_id( { state_of( path->lhs ), mode, f->coalition } ) );
        case Op::Until:
        {
            auto self = pool.atom( _a.atom_id( { state_of( f ), mode, f->coalition } ) );
            return pool.disj( exp( path->rhs ), pool.conj( exp( path->lhs ), self ) );
        }
        case Op::Release:
        {
            auto self = pool.atom( _a.atom_id( { state_of( f ), mode, f->coalition } ) );
            return pool.conj( exp( path->rhs ), pool.disj( exp( path->lhs ), self ) );
        }
        default:
            if ( is_state_formula( path ) )
                return exp( path );
            throw ModelError{ "formula is not in the ATL fragment" };
        }
    }

    void run( const Formula& root )
    {
        _a.initial = state_of( root );
        for ( std::size_t i = 0; i < _pending.size(); ++i )
        {
            auto f = _pending[ i ];
            auto q = _states.at( f );
            _a.delta[ q ] = exp( f );
        }
    }
};

} // namespace

Acg atl_to_acg( const Formula& nnf, std::size_t num_props )
{
    if ( classify( nnf ) != FormulaClass::Atl )
        throw ModelError{ "formula is not in the ATL fragment" };
    Acg a;
    a.num_props = num_props;
    AtlTranslator{ a }.run( nnf );
    return a;
}

// ---------------------------------------------------------------------------
// ATL* -> ACG

namespace
{

int propositional( Acg& a, const Formula& f, bool negated )
{
    auto& pool = a.pool;
    switch ( f->op )
    {
    case Op::True: return negated ? PbfPool::bottom() : PbfPool::top();
    case Op::False: return negated ? PbfPool::top() : PbfPool::bottom();
    case Op::Prop: return pool.test( f->prop, !negated );
    case Op::Not: return propositional( a, f->lhs, !negated );
    case Op::And:
    {
        auto l = propositional( a, f->lhs, negated );
        auto r = propositional( a, f->rhs, negated );
        return negated ? pool.disj( l, r ) : pool.conj( l, r );
    }
    case Op::Or:
    {
        auto l = propositional( a, f->lhs, negated );
        auto r = propositional( a, f->rhs, negated );
        return negated ? pool.conj( l, r ) : pool.disj( l, r );
    }
    default: throw std::logic_error{ "projection of a state formula is not propositional" };
    }
}

struct DpwRun
{
    const Dpw* dpw;
    int base;   // ACG state of DPW state 0
    Mode mode;
    AgentSet coalition;
};

bool is_sink( const Dpw& d, int s )
{
    for ( auto t : d.delta[ s ] )
        if ( t != s )
            return false;
    return true;
}

// delta of the ACG state standing for DPW state s: read the letter, move the
// DPW, and send the successor along the run's mode and coalition.
int dpw_step_formula( Acg& a, const DpwRun& run, int s )
{
    auto& d = *run.dpw;
    auto& pool = a.pool;
    std::map< int, int > by_target;
    for ( std::size_t l = 0; l < d.num_letters(); ++l )
    {
        int cube = PbfPool::top();
        for ( std::size_t i = 0; i < d.atoms.size(); ++i )
            cube = pool.conj( cube, pool.test( d.atoms[ i ], ( ( l >> i ) & 1U ) != 0 ) );
        auto t = d.delta[ s ][ l ];
        auto [ it, fresh ] = by_target.emplace( t, cube );
        if ( !fresh )
            it->second = pool.disj( it->second, cube );
    }
    int out = PbfPool::bottom();
    for ( auto& [ t, cubes ] : by_target )
    {
        int target;
        if ( is_sink( d, t ) )
            target = d.color[ t ] % 2 == 0 ? PbfPool::top() : PbfPool::bottom();
        else
            target = pool.atom( a.atom_id( { run.base + t, run.mode, run.coalition } ) );
        out = pool.disj( out, pool.conj( cubes, target ) );
    }
    return out;
}

} // namespace

Acg atlstar_to_acg( const Formula& phi, std::size_t num_props, std::size_t dpw_cap, AtlStarStats* stats )
{
    if ( !is_state_formula( phi ) )
        throw ModelError{ "ATL* translation expects a state formula" };
    auto table = basic_subformulas( phi, num_props );
    if ( table.num_atoms() > 64 )
        throw ModelError{ "too many propositions and basic subformulas for a 64-bit letter" };

    Acg a;
    a.num_props = num_props;
    a.basics = table.basics;
    a.initial = a.add_state( "init", 0 );
    auto root_prop = propositional( a, ltl_projection( phi, table ), false );
    if ( table.size() == 0 )
    {
        a.delta[ a.initial ] = root_prop;
        return a;
    }
    auto bc = a.add_state( "broadcast", 0 );

    // Each D+/D- is kept alive for the formula building below.
    std::vector< Dpw > dpws;
    dpws.reserve( 2 * table.size() );
    std::vector< DpwRun > pos, neg;
    AtlStarStats local;
    for ( std::size_t i = 0; i < table.size(); ++i )
    {
        auto& basic = table.basics[ i ];
        auto ltl = ltl_projection( basic->lhs, table );
        for ( int sign = 0; sign < 2; ++sign )
        {
            dpws.push_back( ltl_to_dpw( sign == 0 ? ltl : f_not( ltl ), dpw_cap ) );
            auto& d = dpws.back();
            local.dpw_states += d.num_states();
            local.max_dpw_states = std::max( local.max_dpw_states, d.num_states() );
            local.max_dpw_index = std::max( local.max_dpw_index, d.index() );
            auto base = static_cast< int >( a.num_states() );
            for ( std::size_t s = 0; s < d.num_states(); ++s )
                a.add_state( "b" + std::to_string( i ) + ( sign == 0 ? "+" : "-" ) + std::to_string( s ), d.color[ s ] );
            DpwRun run{ &d, base, sign == 0 ? Mode::Box : Mode::Diamond, basic->coalition };
            ( sign == 0 ? pos : neg ).push_back( run );
        }
    }
    if ( stats )
        *stats = local;

    auto& pool = a.pool;
    int checks = pool.atom( a.atom_id( { bc, Mode::Box, 0 } ) );
    for ( std::size_t i = 0; i < table.size(); ++i )
    {
        for ( auto* run : { &pos[ i ], &neg[ i ] } )
            for ( std::size_t s = 0; s < run->dpw->num_states(); ++s )
                a.delta[ run->base + static_cast< int >( s ) ] = dpw_step_formula( a, *run, static_cast< int >( s ) );
        auto bit = table.atom_of( static_cast< int >( i ) );
        auto start_pos = dpw_step_formula( a, pos[ i ], pos[ i ].dpw->initial );
        auto start_neg = dpw_step_formula( a, neg[ i ], neg[ i ].dpw->initial );
        auto clause = pool.disj( pool.conj( pool.test( bit, true ), start_pos ), pool.conj( pool.test( bit, false ), start_neg ) );
        checks = pool.conj( checks, clause );
    }
    a.delta[ bc ] = checks;
    a.delta[ a.initial ] = pool.conj( root_prop, checks );
    return a;
}

// ---------------------------------------------------------------------------
// Membership game

namespace
{

class MembershipBuilder
{
    Acg& _a;
    const Cgs& _g;
    const std::vector< Letter >& _letters;
    ParityGame& _game;
    int _win = -1;
    int _lose = -1;
    std::map< std::pair< StateId, int >, int > _state_pos;
    std::map< std::pair< StateId, int >, int > _node_pos;
    std::vector< std::pair< StateId, int > > _work;

public:
    MembershipBuilder( Acg& a, const Cgs& g, const std::vector< Letter >& letters, ParityGame& game )
        : _a{ a }, _g{ g }, _letters{ letters }, _game{ game }
    {
        _win = _game.add_position( Player::Automaton, 0, "win" );
        _game.add_edge( _win, _win );
        _lose = _game.add_position( Player::Pathfinder, 1, "lose" );
        _game.add_edge( _lose, _lose );
    }

    int state_position( StateId s, int q )
    {
        auto [ it, fresh ] = _state_pos.emplace( std::pair{ s, q }, -1 );
        if ( fresh )
        {
            it->second = _game.add_position( Player::Automaton, _a.color[ q ],
                                             _g.state_names()[ s ] + "," + std::to_string( q ) );
            _work.emplace_back( s, q );
        }
        return it->second;
    }

    int node_position( StateId s, int id )
    {
        auto& n = _a.pool.node( id );
        if ( n.kind == PbfKind::True )
            return _win;
        if ( n.kind == PbfKind::False )
            return _lose;
        if ( auto it = _node_pos.find( { s, id } ); it != _node_pos.end() )
            return it->second;
        int pos;
        switch ( n.kind )
        {
        case PbfKind::Or:
        case PbfKind::And:
        {
            pos = _game.add_position( n.kind == PbfKind::Or ? Player::Automaton : Player::Pathfinder, 0 );
            _node_pos.emplace( std::pair{ s, id }, pos );
            auto l = node_position( s, n.lhs );
            auto r = node_position( s, n.rhs );
            _game.add_edge( pos, l );
            _game.add_edge( pos, r );
            break;
        }
        case PbfKind::Atom:
        {
            auto atom = _a.atoms[ n.value ];
            auto chooser = atom.mode == Mode::Box ? Player::Automaton : Player::Pathfinder;
            pos = _game.add_position( chooser, 0 );
            _node_pos.emplace( std::pair{ s, id }, pos );
            for ( auto& m : _g.coalition_moves( s, atom.coalition ) )
            {
                auto mp = _game.add_position( opponent( chooser ), 0 );
                _game.add_edge( pos, mp );
                for ( auto t : m.outcomes )
                    _game.add_edge( mp, state_position( t, atom.state ) );
            }
            break;
        }
        default: throw std::logic_error{ "unfolded letter test in membership game" };
        }
        return pos;
    }

    void run()
    {
        while ( !_work.empty() )
        {
            auto [ s, q ] = _work.back();
            _work.pop_back();
            auto pos = _state_pos.at( { s, q } );
            _game.add_edge( pos, node_position( s, _a.transition( q, _letters[ s ] ) ) );
        }
    }
};

} // namespace

MembershipGame membership_game( Acg& a, const Cgs& g, const std::vector< Letter >& letters )
{
    if ( letters.size() != g.num_states() )
        throw ModelError{ "membership game needs exactly one letter per state" };
    auto bits = a.num_letter_bits();
    for ( auto l : letters )
        if ( bits < 64 && ( l >> bits ) != 0 )
            throw ModelError{ "letter outside the automaton alphabet" };
    MembershipGame mg;
    MembershipBuilder b{ a, g, letters, mg.game };
    for ( std::size_t s = 0; s < g.num_states(); ++s )
        mg.start.push_back( b.state_position( static_cast< StateId >( s ), a.initial ) );
    b.run();
    mg.game.initial = mg.start[ g.initial() ];
    return mg;
}

std::vector< bool > membership( Acg& a, const Cgs& g, const std::vector< Letter >& letters )
{
    auto mg = membership_game( a, g, letters );
    auto sol = solve( mg.game );
    std::vector< bool > out;
    for ( auto p : mg.start )
        out.push_back( sol.winner[ p ] == Player::Automaton );
    return out;
}

} // namespace modcheck
