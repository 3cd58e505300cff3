#include "modcheck/report.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

namespace modcheck
{

namespace
{

using nlohmann::ordered_json;

ordered_json state_list( const Cgs& g, const std::vector< StateId >& states )
{
    auto out = ordered_json::array();
    for ( auto s : states )
        out.push_back( g.state_names()[ s ] );
    return out;
}

ordered_json pruning_json( const Cgs& g, const Pruning& p )
{
    ordered_json out = ordered_json::object();
    for ( auto& [ s, enabled ] : p.enabled )
        out[ g.state_names()[ s ] ] = state_list( g, enabled );
    return out;
}

ordered_json witness_json( const Cgs& g, const FiniteStrategyTree& w )
{
    auto sig = signature_of( g );
    ordered_json out;
    out[ "initial_memory" ] = w.initial;
    auto basics = ordered_json::array();
    for ( auto& b : w.basics )
        basics.push_back( to_string( b, sig ) );
    out[ "basics" ] = basics;
    auto memories = ordered_json::array();
    for ( std::size_t i = 0; i < w.memories.size(); ++i )
    {
        auto& m = w.memories[ i ];
        ordered_json j;
        j[ "memory" ] = i;
        j[ "state" ] = g.state_names()[ m.state ];
        j[ "enabled" ] = state_list( g, m.enabled );
        auto labels = ordered_json::array();
        for ( std::size_t b = 0; b < w.basics.size(); ++b )
            if ( ( m.basics >> b ) & 1U )
                labels.push_back( static_cast< int >( b ) );
        j[ "basic_labels" ] = labels;
        ordered_json next = ordered_json::object();
        for ( auto [ s, k ] : m.next )
            next[ g.state_names()[ s ] ] = k;
        j[ "next" ] = next;
        memories.push_back( j );
    }
    out[ "memories" ] = memories;
    if ( auto p = witness_pruning( g, w ) )
        out[ "memoryless_pruning" ] = pruning_json( g, *p );
    else
        out[ "memoryless_pruning" ] = nullptr;
    return out;
}

} // namespace

std::string check_report( const Cgs& g, const Formula& phi, const CheckOptions& options, const CheckResult& r,
                          const ReportOptions& ro )
{
    auto& st = r.stats;
    ordered_json j;
    j[ "verdict" ] = r.holds ? "holds" : "fails";
    j[ "engine" ] = engine_name( r.engine );
    j[ "formula" ] = to_string( phi, signature_of( g ) );
    j[ "model" ] = { { "states", g.num_states() }, { "agents", g.num_agents() }, { "props", g.num_props() } };
    j[ "sizes" ] = {
        { "acg", { { "states", st.acg_states }, { "atoms", st.acg_atoms }, { "size", st.acg_size() },
                   { "index", st.acg_index }, { "basics", st.basics } } },
        { "dpw", { { "states", st.dpw_states }, { "max_index", st.max_dpw_index } } },
        { "nta", { { "states", st.nta_states }, { "transitions", st.nta_transitions }, { "index", st.nta_index },
                   { "good_states", st.good_states } } },
        { "game", { { "positions", st.game_positions } } },
    };
    j[ "caps" ] = { { "max_dpw_states", options.max_dpw_states },
                    { "max_nta_states", options.max_nta_states },
                    { "hit", nullptr } };
    if ( ro.timing )
        j[ "time_ms" ] = { { "acg", st.times.acg_ms }, { "nta", st.times.nta_ms }, { "game", st.times.game_ms } };
    if ( r.counterexample )
    {
        j[ "witness" ] = witness_json( g, *r.counterexample );
        j[ "witness" ][ "dot" ] = ro.counterexample_path.empty() ? ordered_json( nullptr )
                                                                 : ordered_json( ro.counterexample_path );
    }
    else
        j[ "witness" ] = nullptr;
    return j.dump( 2 ) + "\n";
}

std::string failure_report( const std::string& verdict, const std::string& message, const std::string& stage )
{
    ordered_json j;
    j[ "verdict" ] = verdict;
    j[ "message" ] = message;
    j[ "caps" ] = { { "hit", stage.empty() ? ordered_json( nullptr ) : ordered_json( stage ) } };
    return j.dump( 2 ) + "\n";
}

std::string oracle_report( const Cgs& g, const Formula& phi, const OracleVerdict& v )
{
    ordered_json j;
    j[ "verdict" ] = v.violation_found() ? "violation-found" : "no-memoryless-violation";
    j[ "formula" ] = to_string( phi, signature_of( g ) );
    j[ "prunings_checked" ] = v.prunings_checked;
    j[ "pruning" ] = v.violation ? pruning_json( g, *v.violation ) : ordered_json( nullptr );
    return j.dump( 2 ) + "\n";
}

std::string witness_dot( const Cgs& g, const FiniteStrategyTree& w )
{
    auto label = [ & ]( StateId s ) {
        std::string out;
        for ( std::size_t p = 0; p < g.num_props(); ++p )
            if ( ( g.label( s ) >> p ) & 1U )
                out += ( out.empty() ? "" : "," ) + g.prop_names()[ p ];
        return "{" + out + "}";
    };
    std::ostringstream os;
    os << "digraph witness {\n  node [shape=box];\n";
    for ( std::size_t i = 0; i < w.memories.size(); ++i )
    {
        auto& m = w.memories[ i ];
        os << "  m" << i << " [label=\"" << g.state_names()[ m.state ] << " / m" << i << "\\n" << label( m.state );
        if ( !w.basics.empty() )
        {
            os << "\\nB:";
            for ( std::size_t b = 0; b < w.basics.size(); ++b )
                if ( ( m.basics >> b ) & 1U )
                    os << " b" << b;
        }
        os << "\"";
        if ( g.is_env_state( m.state ) )
            os << ", style=rounded";
        if ( static_cast< int >( i ) == w.initial )
            os << ", penwidth=2";
        os << "];\n";
    }
    for ( std::size_t i = 0; i < w.memories.size(); ++i )
    {
        auto& m = w.memories[ i ];
        for ( auto [ s, k ] : m.next )
            os << "  m" << i << " -> m" << k << ";\n";
        for ( auto s : g.successors( m.state ) )
        {
            if ( m.next.contains( s ) )
                continue;
            os << "  x" << i << "_" << s << " [label=\"" << g.state_names()[ s ] << "\", style=dashed];\n";
            os << "  m" << i << " -> x" << i << "_" << s << " [style=dashed, label=\"pruned\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace modcheck
