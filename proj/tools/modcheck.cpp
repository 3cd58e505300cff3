#include "modcheck/acg.hpp"
#include "modcheck/emptiness.hpp"
#include "modcheck/error.hpp"
#include "modcheck/oracle.hpp"
#include "modcheck/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace
{

using namespace modcheck;

enum Exit
{
    kHolds = 0,
    kFails = 1,
    kUsage = 2,
    kResource = 3
};

struct Inputs
{
    std::string model_path;
    std::string formula;
    std::string engine = "auto";
    std::size_t max_dpw_states = kDefaultStateCap;
    std::size_t max_nta_states = kDefaultStateCap;
};

Cgs load_model( const std::string& path )
{
    std::ifstream in{ path };
    if ( !in )
        throw ModelError{ "cannot read model file '" + path + "'" };
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cgs( ss.str() );
}

CheckOptions check_options( const Inputs& in )
{
    static const std::map< std::string, Engine > engines{
        { "auto", Engine::Auto }, { "atl", Engine::Atl }, { "atlstar", Engine::AtlStar } };
    CheckOptions o;
    o.engine = engines.at( in.engine );
    o.max_dpw_states = in.max_dpw_states;
    o.max_nta_states = in.max_nta_states;
    return o;
}

void write_file( const std::string& path, const std::string& text )
{
    std::ofstream out{ path };
    if ( !out )
        throw ModelError{ "cannot write '" + path + "'" };
    out << text;
}

std::string witness_text( const Cgs& g, const FiniteStrategyTree& w )
{
    std::ostringstream os;
    for ( std::size_t i = 0; i < w.memories.size(); ++i )
    {
        auto& m = w.memories[ i ];
        os << "  m" << i << " at " << g.state_names()[ m.state ] << ":";
        for ( auto [ s, k ] : m.next )
            os << ' ' << g.state_names()[ s ] << "->m" << k;
        if ( m.enabled.size() < g.successors( m.state ).size() )
            os << "  (pruned)";
        os << '\n';
    }
    return os.str();
}

int run_check( const Inputs& in, bool json, bool timing, const std::string& cex_path )
{
    auto g = load_model( in.model_path );
    auto phi = parse_formula( in.formula, signature_of( g ) );
    auto options = check_options( in );
    auto r = module_check( g, phi, options );
    if ( r.counterexample && !validate_counterexample( g, phi, *r.counterexample ) )
        throw std::logic_error{ "counterexample failed validation" };
    if ( r.counterexample && !cex_path.empty() )
        write_file( cex_path, witness_dot( g, *r.counterexample ) );
    if ( json )
        std::cout << check_report( g, phi, options, r, { timing, r.counterexample ? cex_path : std::string{} } );
    else
    {
        std::cout << ( r.holds ? "holds" : "fails" ) << " (engine " << engine_name( r.engine ) << ")\n";
        if ( r.counterexample )
            std::cout << "counterexample:\n" << witness_text( g, *r.counterexample );
    }
    return r.holds ? kHolds : kFails;
}

int run_oracle( const Inputs& in, std::size_t max_prunings )
{
    auto g = load_model( in.model_path );
    auto phi = parse_formula( in.formula, signature_of( g ) );
    auto v = oracle_module_check( g, phi, max_prunings );
    std::cout << oracle_report( g, phi, v );
    return v.violation_found() ? kFails : kHolds;
}

int run_dump( const Inputs& in, const std::string& stage, bool dot )
{
    auto g = load_model( in.model_path );
    auto sig = signature_of( g );
    if ( stage == "model" )
    {
        std::cout << render_cgs( g );
        return kHolds;
    }
    auto phi = parse_formula( in.formula, sig );
    auto options = check_options( in );
    if ( stage == "dpw" )
    {
        auto neg = to_nnf( f_not( phi ) );
        auto table = basic_subformulas( neg, g.num_props() );
        if ( table.size() == 0 )
            std::cout << "# no basic subformulas\n";
        for ( std::size_t i = 0; i < table.size(); ++i )
        {
            auto ltl = ltl_projection( table.basics[ i ]->lhs, table );
            std::cout << "# b" << i << " = " << to_string( table.basics[ i ], sig ) << "\n# D+\n"
                      << to_text( ltl_to_dpw( ltl, options.max_dpw_states ) ) << "# D-\n"
                      << to_text( ltl_to_dpw( f_not( ltl ), options.max_dpw_states ) );
        }
        return kHolds;
    }
    auto built = build_negation_acg( g, phi, options );
    if ( stage == "acg" )
    {
        std::cout << "# automaton for the negation, engine " << engine_name( built.engine ) << '\n'
                  << to_text( built.acg, &sig );
        return kHolds;
    }
    auto nta = acg_to_nta( built.acg, g, { options.max_nta_states, 4 * options.max_nta_states } );
    if ( stage == "nta" )
    {
        std::cout << to_text( nta, g );
        return kHolds;
    }
    auto eg = emptiness_game( nta );
    auto sol = solve( eg.game );
    std::cout << ( dot ? to_dot( eg.game, &sol ) : to_text( eg.game, &sol ) );
    return kHolds;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Module checker for ATL and ATL* over open concurrent game structures" };
    app.require_subcommand( 1 );

    Inputs in;
    bool json = false;
    bool timing = false;
    std::string cex_path;
    std::size_t max_prunings = kDefaultPruningCap;
    std::string stage;
    bool dot = false;

    auto add_inputs = [ & ]( CLI::App* cmd ) {
        cmd->add_option( "model", in.model_path, "Model file" )->required();
        cmd->add_option( "formula", in.formula, "ATL/ATL* state formula" );
        cmd->add_option( "--engine", in.engine, "atl, atlstar or auto" )
            ->check( CLI::IsMember( { "auto", "atl", "atlstar" } ) )
            ->capture_default_str();
        cmd->add_option( "--max-dpw-states", in.max_dpw_states, "State cap for word automata" )
            ->capture_default_str();
        cmd->add_option( "--max-nta-states", in.max_nta_states, "State cap for the tree automaton" )
            ->capture_default_str();
    };

    auto* check = app.add_subcommand( "check", "Decide whether the model reactively satisfies the formula" );
    add_inputs( check );
    check->get_option( "formula" )->required();
    check->add_flag( "--json", json, "JSON report on stdout" );
    check->add_flag( "--timing", timing, "Include wall-clock stage times in the report" );
    check->add_option( "--counterexample", cex_path, "Write the witness as DOT to this path" );

    auto* oracle = app.add_subcommand( "oracle", "Brute-force scan of memoryless environment prunings (ATL)" );
    add_inputs( oracle );
    oracle->get_option( "formula" )->required();
    oracle->add_option( "--max-prunings", max_prunings, "Pruning enumeration cap" )->capture_default_str();

    auto* dump = app.add_subcommand( "dump", "Print an intermediate construction" );
    add_inputs( dump );
    dump->add_option( "--stage", stage, "model, acg, dpw, nta or game" )
        ->required()
        ->check( CLI::IsMember( { "model", "acg", "dpw", "nta", "game" } ) );
    dump->add_flag( "--dot", dot, "Game as DOT" );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::CallForHelp& e )
    {
        return app.exit( e );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e );
        return kUsage;
    }

    json = json || *oracle;
    try
    {
        if ( *check )
            return run_check( in, json, timing, cex_path );
        if ( *oracle )
            return run_oracle( in, max_prunings );
        if ( stage != "model" && in.formula.empty() )
        {
            std::cerr << "error: a formula is required for stage '" << stage << "'\n";
            return kUsage;
        }
        return run_dump( in, stage, dot );
    }
    catch ( const ResourceError& e )
    {
        if ( json )
            std::cout << failure_report( "resource-exceeded", e.what(), e.stage() );
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    }
    catch ( const ParseError& e )
    {
        if ( json )
            std::cout << failure_report( "error", e.what() );
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    catch ( const ModelError& e )
    {
        if ( json )
            std::cout << failure_report( "error", e.what() );
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
