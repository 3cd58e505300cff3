#include "modcheck/cgs.hpp"

#include "modcheck/error.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <set>
#include <sstream>

namespace modcheck
{

Decision Decision::unite( const Decision& other ) const
{
    if ( coalition & other.coalition )
        throw ModelError{ "cannot unite decisions over overlapping coalitions" };
    Decision out = *this;
    out.coalition |= other.coalition;
    for ( std::size_t a = 0; a < other.actions.size(); ++a )
        if ( other.covers( static_cast< int >( a ) ) )
            out.actions[ a ] = other.actions[ a ];
    return out;
}

std::optional< StateId > Cgs::find_state( std::string_view name ) const
{
    for ( std::size_t i = 0; i < _states.size(); ++i )
        if ( _states[ i ] == name )
            return static_cast< StateId >( i );
    return std::nullopt;
}

std::optional< int > Cgs::find_agent( std::string_view name ) const
{
    for ( std::size_t i = 0; i < _agents.size(); ++i )
        if ( _agents[ i ] == name )
            return static_cast< int >( i );
    return std::nullopt;
}

std::optional< int > Cgs::find_prop( std::string_view name ) const
{
    for ( std::size_t i = 0; i < _props.size(); ++i )
        if ( _props[ i ] == name )
            return static_cast< int >( i );
    return std::nullopt;
}

int Cgs::action_of( std::size_t full, int agent ) const
{
    auto m = _actions.size();
    for ( auto a = static_cast< int >( _agents.size() ) - 1; a > agent; --a )
        full /= m;
    return static_cast< int >( full % m );
}

std::size_t Cgs::full_index( const std::vector< int >& actions ) const
{
    std::size_t idx = 0;
    for ( auto act : actions )
        idx = idx * _actions.size() + static_cast< std::size_t >( act );
    return idx;
}

Decision Cgs::full_decision( std::size_t full ) const
{
    Decision d{ all_agents(), std::vector< int >( _agents.size() ) };
    for ( std::size_t a = 0; a < _agents.size(); ++a )
        d.actions[ a ] = action_of( full, static_cast< int >( a ) );
    return d;
}

std::vector< CoalitionMove > Cgs::coalition_moves( StateId s, AgentSet coalition ) const
{
    // Group the defined rows of tau(s, .) by their projection on the coalition.
    std::map< std::vector< int >, std::set< StateId > > groups;
    for ( std::size_t f = 0; f < _num_full; ++f )
    {
        auto t = target( s, f );
        if ( t == kUndefined )
            continue;
        std::vector< int > proj( _agents.size(), -1 );
        for ( std::size_t a = 0; a < _agents.size(); ++a )
            if ( ( coalition >> a ) & 1U )
                proj[ a ] = action_of( f, static_cast< int >( a ) );
        groups[ proj ].insert( t );
    }
    std::vector< CoalitionMove > out;
    out.reserve( groups.size() );
    for ( auto& [ proj, targets ] : groups )
        out.push_back( { Decision{ coalition, proj }, { targets.begin(), targets.end() } } );
    return out;
}

std::vector< Decision > Cgs::available_decisions( StateId s, AgentSet coalition ) const
{
    std::vector< Decision > out;
    for ( auto& m : coalition_moves( s, coalition ) )
        out.push_back( m.decision );
    return out;
}

std::vector< CoalitionMove > restrict_moves( const std::vector< CoalitionMove >& moves,
                                             const std::vector< bool >& enabled )
{
    std::vector< CoalitionMove > out;
    for ( auto& m : moves )
    {
        CoalitionMove r{ m.decision, {} };
        for ( auto t : m.outcomes )
            if ( enabled[ t ] )
                r.outcomes.push_back( t );
        if ( !r.outcomes.empty() )
            out.push_back( std::move( r ) );
    }
    return out;
}

// ---------------------------------------------------------------------------
// Builder

CgsBuilder::CgsBuilder( std::vector< std::string > agents, std::vector< std::string > actions,
                        std::vector< std::string > props )
{
    if ( agents.empty() )
        throw ModelError{ "a game structure needs at least one agent" };
    if ( actions.empty() )
        throw ModelError{ "a game structure needs at least one action" };
    if ( agents.size() > kMaxAgents )
        throw ModelError{ "too many agents (limit " + std::to_string( kMaxAgents ) + ")" };
    if ( props.size() > kMaxProps )
        throw ModelError{ "too many propositions (limit " + std::to_string( kMaxProps ) + ")" };
    auto check_unique = []( const std::vector< std::string >& names, const char* what ) {
        std::set< std::string > seen;
        for ( auto& n : names )
            if ( !seen.insert( n ).second )
                throw ModelError{ std::string{ "duplicate " } + what + " name '" + n + "'" };
    };
    check_unique( agents, "agent" );
    check_unique( actions, "action" );
    check_unique( props, "proposition" );

    _g._agents = std::move( agents );
    _g._actions = std::move( actions );
    _g._props = std::move( props );
    _g._num_full = 1;
    for ( std::size_t i = 0; i < _g._agents.size(); ++i )
        _g._num_full *= _g._actions.size();
    if ( auto env = _g.find_agent( "env" ) )
        _g._env = *env;
}

StateId CgsBuilder::add_state( std::string name, PropSet label, std::optional< Owner > declared )
{
    if ( _g.find_state( name ) )
        throw ModelError{ "duplicate state name '" + name + "'" };
    _g._states.push_back( std::move( name ) );
    _g._labels.push_back( label );
    _g._table.resize( _g._table.size() + _g._num_full, kUndefined );
    _declared.push_back( declared );
    _set.emplace_back( _g._num_full, false );
    return static_cast< StateId >( _g._states.size() - 1 );
}

void CgsBuilder::set_initial( StateId s ) { _g._initial = s; }

void CgsBuilder::set_transition( StateId s, const std::vector< int >& actions, StateId target )
{
    assert( actions.size() == _g._agents.size() );
    auto f = _g.full_index( actions );
    if ( _set[ s ][ f ] )
        throw ModelError{ "duplicate transition entry in state '" + _g._states[ s ] + "' for decision " +
                          decision_to_string( _g, _g.full_decision( f ) ) };
    _set[ s ][ f ] = true;
    _g._table[ s * _g._num_full + f ] = target;
}

Cgs CgsBuilder::build() &&
{
    auto& g = _g;
    if ( g._states.empty() )
        throw ModelError{ "a game structure needs at least one state" };
    if ( g._initial < 0 || static_cast< std::size_t >( g._initial ) >= g._states.size() )
        throw ModelError{ "initial state out of range" };

    g._successors.assign( g._states.size(), {} );
    for ( std::size_t s = 0; s < g._states.size(); ++s )
    {
        std::set< StateId > succ;
        for ( std::size_t f = 0; f < g._num_full; ++f )
            if ( auto t = g.target( static_cast< StateId >( s ), f ); t != kUndefined )
                succ.insert( t );
        if ( succ.empty() )
            throw ModelError{ "blocked state '" + g._states[ s ] + "': no full decision has a defined successor" };
        g._successors[ s ].assign( succ.begin(), succ.end() );
    }

    g._owner.assign( g._states.size(), Owner::System );
    if ( g._env >= 0 )
    {
        AgentSet env_only = AgentSet{ 1 } << g._env;
        AgentSet others = g.all_agents() & ~env_only;
        for ( std::size_t s = 0; s < g._states.size(); ++s )
        {
            auto sid = static_cast< StateId >( s );
            bool passive = g.coalition_moves( sid, env_only ).size() == 1;
            bool controlled = g.coalition_moves( sid, others ).size() == 1;
            if ( !passive && !controlled )
                throw ModelError{ "state '" + g._states[ s ] +
                                  "' is neither environment-controlled nor environment-passive" };
            g._owner[ s ] = passive ? Owner::System : Owner::Environment;
            if ( auto decl = _declared[ s ] )
            {
                if ( *decl == Owner::Environment && !controlled )
                    throw ModelError{ "state '" + g._states[ s ] +
                                      "' is declared owner=env but is not controlled by the environment" };
                if ( *decl == Owner::System && !passive )
                    throw ModelError{ "state '" + g._states[ s ] +
                                      "' is declared owner=sys but the environment is not passive there" };
            }
        }
    }
    return std::move( g );
}

// ---------------------------------------------------------------------------
// Textual format

namespace
{

bool is_ident_char( char c )
{
    return std::isalnum( static_cast< unsigned char >( c ) ) || c == '_' || c == '\'' || c == '.';
}

class LineCursor
{
    std::string_view _line;
    std::size_t _lineno;
    std::size_t _pos = 0;

public:
    LineCursor( std::string_view line, std::size_t lineno ) : _line{ line }, _lineno{ lineno } {}

    void skip_ws()
    {
        while ( _pos < _line.size() && std::isspace( static_cast< unsigned char >( _line[ _pos ] ) ) )
            ++_pos;
    }

    [[nodiscard]] bool at_end()
    {
        skip_ws();
        return _pos >= _line.size() || _line[ _pos ] == '#';
    }

    [[nodiscard]] std::size_t column() const { return _pos + 1; }

    [[noreturn]] void fail( const std::string& msg ) const { throw ParseError{ _lineno, column(), msg }; }

    bool try_consume( std::string_view tok )
    {
        skip_ws();
        if ( _line.substr( _pos, tok.size() ) == tok )
        {
            _pos += tok.size();
            return true;
        }
        return false;
    }

    void expect( std::string_view tok )
    {
        if ( !try_consume( tok ) )
            fail( "expected '" + std::string{ tok } + "'" );
    }

    std::string ident( const char* what )
    {
        skip_ws();
        auto start = _pos;
        while ( _pos < _line.size() && is_ident_char( _line[ _pos ] ) )
            ++_pos;
        if ( start == _pos )
            fail( std::string{ "expected " } + what );
        return std::string{ _line.substr( start, _pos - start ) };
    }

    std::vector< std::string > ident_list()
    {
        std::vector< std::string > out;
        while ( !at_end() )
        {
            out.push_back( ident( "identifier" ) );
            try_consume( "," );
        }
        return out;
    }

    void expect_end()
    {
        if ( !at_end() )
            fail( "unexpected trailing input" );
    }
};

struct PendingRow
{
    std::size_t state;
    std::vector< int > actions;
    std::string target;
    std::size_t line;
    std::size_t column;
};

struct PendingState
{
    std::string name;
    PropSet label;
    std::optional< Owner > owner;
};

} // namespace

Cgs parse_cgs( std::string_view text )
{
    std::optional< std::vector< std::string > > agents, actions, props;
    std::optional< std::pair< std::string, std::pair< std::size_t, std::size_t > > > init;
    std::vector< PendingState > states;
    std::vector< PendingRow > rows;

    auto index_in = []( const std::vector< std::string >& names, std::string_view n ) -> int {
        for ( std::size_t i = 0; i < names.size(); ++i )
            if ( names[ i ] == n )
                return static_cast< int >( i );
        return -1;
    };

    std::size_t lineno = 0;
    std::size_t start = 0;
    while ( start <= text.size() )
    {
        auto end = text.find( '\n', start );
        if ( end == std::string_view::npos )
            end = text.size();
        auto line = text.substr( start, end - start );
        if ( !line.empty() && line.back() == '\r' )
            line.remove_suffix( 1 );
        ++lineno;
        start = end + 1;

        LineCursor cur{ line, lineno };
        if ( cur.at_end() )
            continue;

        auto header = [ & ]( std::string_view kw, auto& slot ) {
            if ( slot )
                cur.fail( "duplicate '" + std::string{ kw } + "' header" );
            if ( !states.empty() )
                cur.fail( "'" + std::string{ kw } + "' must precede the state declarations" );
            cur.expect( ":" );
            slot = cur.ident_list();
        };

        if ( cur.try_consume( "agents" ) )
            header( "agents", agents );
        else if ( cur.try_consume( "actions" ) )
            header( "actions", actions );
        else if ( cur.try_consume( "props" ) )
            header( "props", props );
        else if ( cur.try_consume( "init" ) )
        {
            if ( init )
                cur.fail( "duplicate 'init' header" );
            cur.expect( ":" );
            auto col = cur.column();
            auto name = cur.ident( "initial state name" );
            init = { name, { lineno, col } };
            cur.expect_end();
        }
        else if ( cur.try_consume( "state" ) )
        {
            if ( !agents || !actions )
                cur.fail( "'agents' and 'actions' must be declared before states" );
            if ( !props )
                props.emplace();
            PendingState st;
            st.name = cur.ident( "state name" );
            for ( auto& other : states )
                if ( other.name == st.name )
                    cur.fail( "duplicate state name '" + st.name + "'" );
            cur.expect( "{" );
            st.label = 0;
            while ( !cur.try_consume( "}" ) )
            {
                if ( cur.at_end() )
                    cur.fail( "unterminated label set" );
                auto col = cur.column();
                auto p = cur.ident( "proposition" );
                auto idx = index_in( *props, p );
                if ( idx < 0 )
                    throw ParseError{ lineno, col + 1, "unknown proposition '" + p + "'" };
                st.label |= PropSet{ 1 } << idx;
                cur.try_consume( "," );
            }
            if ( cur.try_consume( "owner" ) )
            {
                cur.expect( "=" );
                auto o = cur.ident( "owner (env or sys)" );
                if ( o == "env" )
                    st.owner = Owner::Environment;
                else if ( o == "sys" )
                    st.owner = Owner::System;
                else
                    cur.fail( "owner must be 'env' or 'sys'" );
            }
            cur.expect_end();
            states.push_back( std::move( st ) );
        }
        else if ( cur.try_consume( "(" ) )
        {
            if ( states.empty() )
                cur.fail( "transition row outside of a state block" );
            std::vector< int > acts( agents->size(), -1 );
            bool first = true;
            while ( !cur.try_consume( ")" ) )
            {
                if ( !first )
                    cur.expect( "," );
                first = false;
                auto col = cur.column();
                auto ag = cur.ident( "agent name" );
                auto ai = index_in( *agents, ag );
                if ( ai < 0 )
                    throw ParseError{ lineno, col + 1, "unknown agent '" + ag + "'" };
                if ( acts[ ai ] >= 0 )
                    throw ParseError{ lineno, col + 1, "agent '" + ag + "' assigned twice" };
                cur.expect( "=" );
                auto acol = cur.column();
                auto ac = cur.ident( "action name" );
                auto ci = index_in( *actions, ac );
                if ( ci < 0 )
                    throw ParseError{ lineno, acol + 1, "unknown action '" + ac + "'" };
                acts[ ai ] = ci;
            }
            for ( std::size_t a = 0; a < acts.size(); ++a )
                if ( acts[ a ] < 0 )
                    cur.fail( "decision does not assign an action to agent '" + ( *agents )[ a ] + "'" );
            cur.expect( "->" );
            cur.skip_ws();
            auto tcol = cur.column();
            auto tgt = cur.ident( "target state" );
            cur.expect_end();
            rows.push_back( { states.size() - 1, std::move( acts ), tgt, lineno, tcol } );
        }
        else
            cur.fail( "expected 'agents:', 'actions:', 'props:', 'init:', 'state' or a transition row" );
    }

    if ( !agents )
        throw ParseError{ lineno, 1, "missing 'agents:' header" };
    if ( !actions )
        throw ParseError{ lineno, 1, "missing 'actions:' header" };
    if ( !init )
        throw ParseError{ lineno, 1, "missing 'init:' header" };
    if ( states.empty() )
        throw ParseError{ lineno, 1, "no states declared" };
    if ( !props )
        props.emplace();
    if ( index_in( *agents, "env" ) < 0 )
        throw ModelError{ "open game structure requires an environment agent named 'env'" };

    CgsBuilder b{ *agents, *actions, *props };
    for ( auto& st : states )
        b.add_state( st.name, st.label, st.owner );
    auto find = [ & ]( const std::string& n ) -> int {
        for ( std::size_t i = 0; i < states.size(); ++i )
            if ( states[ i ].name == n )
                return static_cast< int >( i );
        return -1;
    };
    for ( auto& r : rows )
    {
        auto t = find( r.target );
        if ( t < 0 )
            throw ParseError{ r.line, r.column, "unknown state '" + r.target + "'" };
        try
        {
            b.set_transition( static_cast< StateId >( r.state ), r.actions, t );
        }
        catch ( const ModelError& e )
        {
            throw ModelError{ "line " + std::to_string( r.line ) + ": " + e.what() };
        }
    }
    auto i0 = find( init->first );
    if ( i0 < 0 )
        throw ParseError{ init->second.first, init->second.second, "unknown initial state '" + init->first + "'" };
    b.set_initial( i0 );
    return std::move( b ).build();
}

std::string decision_to_string( const Cgs& g, const Decision& d )
{
    std::string out = "(";
    bool first = true;
    for ( std::size_t a = 0; a < g.num_agents(); ++a )
    {
        if ( !d.covers( static_cast< int >( a ) ) )
            continue;
        if ( !first )
            out += ", ";
        first = false;
        out += g.agent_names()[ a ] + "=" + g.action_names()[ d.actions[ a ] ];
    }
    return out + ")";
}

std::string render_cgs( const Cgs& g )
{
    std::ostringstream os;
    auto list = [ & ]( const char* kw, const std::vector< std::string >& names ) {
        os << kw << ":";
        for ( auto& n : names )
            os << ' ' << n;
        os << '\n';
    };
    list( "agents", g.agent_names() );
    list( "actions", g.action_names() );
    list( "props", g.prop_names() );
    os << "init: " << g.state_names()[ g.initial() ] << '\n';
    for ( std::size_t s = 0; s < g.num_states(); ++s )
    {
        auto sid = static_cast< StateId >( s );
        os << "state " << g.state_names()[ s ] << " {";
        bool first = true;
        for ( std::size_t p = 0; p < g.num_props(); ++p )
        {
            if ( !( ( g.label( sid ) >> p ) & 1U ) )
                continue;
            os << ( first ? "" : " " ) << g.prop_names()[ p ];
            first = false;
        }
        os << '}';
        if ( g.is_open() )
            os << " owner=" << ( g.owner( sid ) == Owner::Environment ? "env" : "sys" );
        os << '\n';
        for ( std::size_t f = 0; f < g.num_full_decisions(); ++f )
            if ( auto t = g.target( sid, f ); t != kUndefined )
                os << "  " << decision_to_string( g, g.full_decision( f ) ) << " -> " << g.state_names()[ t ] << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Pruning and unwinding

void validate_pruning( const Cgs& g, const Pruning& p )
{
    for ( auto& [ s, enabled ] : p.enabled )
    {
        if ( s < 0 || static_cast< std::size_t >( s ) >= g.num_states() )
            throw ModelError{ "pruning refers to unknown state " + std::to_string( s ) };
        if ( !g.is_env_state( s ) )
            throw ModelError{ "pruning defined on non-environment state '" + g.state_names()[ s ] + "'" };
        if ( enabled.empty() )
            throw ModelError{ "pruning disables every successor of state '" + g.state_names()[ s ] + "'" };
        auto& succ = g.successors( s );
        for ( auto t : enabled )
            if ( !std::binary_search( succ.begin(), succ.end(), t ) )
                throw ModelError{ "pruning enables a non-successor of state '" + g.state_names()[ s ] + "'" };
    }
    for ( std::size_t s = 0; s < g.num_states(); ++s )
        if ( g.is_env_state( static_cast< StateId >( s ) ) && !p.enabled.contains( static_cast< StateId >( s ) ) )
            throw ModelError{ "pruning undefined on environment state '" + g.state_names()[ s ] + "'" };
}

Cgs apply_pruning( const Cgs& g, const Pruning& p )
{
    validate_pruning( g, p );
    CgsBuilder b{ g.agent_names(), g.action_names(), g.prop_names() };
    for ( std::size_t s = 0; s < g.num_states(); ++s )
        b.add_state( g.state_names()[ s ], g.label( static_cast< StateId >( s ) ) );
    b.set_initial( g.initial() );
    for ( std::size_t s = 0; s < g.num_states(); ++s )
    {
        auto sid = static_cast< StateId >( s );
        const std::vector< StateId >* enabled = nullptr;
        if ( auto it = p.enabled.find( sid ); it != p.enabled.end() )
            enabled = &it->second;
        for ( std::size_t f = 0; f < g.num_full_decisions(); ++f )
        {
            auto t = g.target( sid, f );
            if ( t == kUndefined )
                continue;
            if ( enabled && std::find( enabled->begin(), enabled->end(), t ) == enabled->end() )
                continue;
            b.set_transition( sid, g.full_decision( f ).actions, t );
        }
    }
    return std::move( b ).build();
}

UnwoundTree unwind_bounded( const Cgs& g, std::size_t depth )
{
    UnwoundTree tree;
    tree.nodes.push_back( { { g.initial() }, g.label( g.initial() ), {} } );
    std::vector< std::size_t > frontier{ 0 };
    for ( std::size_t level = 0; level < depth; ++level )
    {
        std::vector< std::size_t > next;
        for ( auto n : frontier )
        {
            auto last = tree.nodes[ n ].track.back();
            for ( auto t : g.successors( last ) )
            {
                UnwindNode child{ tree.nodes[ n ].track, g.label( t ), {} };
                child.track.push_back( t );
                tree.nodes.push_back( std::move( child ) );
                tree.nodes[ n ].children.push_back( tree.nodes.size() - 1 );
                next.push_back( tree.nodes.size() - 1 );
            }
        }
        frontier = std::move( next );
    }
    return tree;
}

} // namespace modcheck
