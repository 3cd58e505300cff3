#include "modcheck/oracle.hpp"

#include "modcheck/error.hpp"

#include <limits>

namespace modcheck
{

std::size_t count_prunings( const Cgs& g )
{
    constexpr auto kMax = std::numeric_limits< std::size_t >::max();
    std::size_t total = 1;
    for ( std::size_t s = 0; s < g.num_states(); ++s )
    {
        if ( !g.is_env_state( static_cast< StateId >( s ) ) )
            continue;
        auto k = g.successors( static_cast< StateId >( s ) ).size();
        std::size_t options = k >= 63 ? kMax : ( std::size_t{ 1 } << k ) - 1;
        if ( options != 0 && total > kMax / options )
            return kMax;
        total *= options;
    }
    return total;
}

void for_each_pruning( const Cgs& g, const std::function< bool( const Pruning& ) >& f, std::size_t cap )
{
    if ( count_prunings( g ) > cap )
        throw ResourceError{ "prunings", cap };
    std::vector< StateId > env;
    for ( std::size_t s = 0; s < g.num_states(); ++s )
        if ( g.is_env_state( static_cast< StateId >( s ) ) )
            env.push_back( static_cast< StateId >( s ) );
    std::vector< std::size_t > mask( env.size(), 1 );
    for ( ;; )
    {
        Pruning p;
        for ( std::size_t i = 0; i < env.size(); ++i )
        {
            auto& succ = g.successors( env[ i ] );
            std::vector< StateId > enabled;
            for ( std::size_t b = 0; b < succ.size(); ++b )
                if ( ( mask[ i ] >> b ) & 1U )
                    enabled.push_back( succ[ b ] );
            p.enabled.emplace( env[ i ], std::move( enabled ) );
        }
        if ( !f( p ) )
            return;
        // Last environment state varies fastest.
        auto i = env.size();
        for ( ; i > 0; --i )
        {
            auto full = ( std::size_t{ 1 } << g.successors( env[ i - 1 ] ).size() ) - 1;
            if ( mask[ i - 1 ] < full )
            {
                ++mask[ i - 1 ];
                break;
            }
            mask[ i - 1 ] = 1;
        }
        if ( i == 0 )
            return;
    }
}

std::vector< Pruning > enumerate_prunings( const Cgs& g, std::size_t cap )
{
    std::vector< Pruning > out;
    for_each_pruning(
        g,
        [ & ]( const Pruning& p ) {
            out.push_back( p );
            return true;
        },
        cap );
    return out;
}

Bitset pre( const Cgs& g, AgentSet coalition, const Bitset& z )
{
    Bitset out{ g.num_states() };
    for ( std::size_t s = 0; s < g.num_states(); ++s )
    {
        for ( auto& m : g.coalition_moves( static_cast< StateId >( s ), coalition ) )
        {
            bool inside = true;
            for ( auto t : m.outcomes )
                inside = inside && z.test( t );
            if ( inside )
            {
                out.set( s );
                break;
            }
        }
    }
    return out;
}

namespace
{

class FixpointChecker
{
    const Cgs& _g;
    std::size_t _n;

    Bitset all() const
    {
        Bitset b{ _n };
        for ( std::size_t s = 0; s < _n; ++s )
            b.set( s );
        return b;
    }

    Bitset complement( const Bitset& b ) const { return all() - b; }

    // <<A>> path, with the path optionally negated.
    Bitset exists( AgentSet a, const Formula& path, bool negated )
    {
        if ( is_state_formula( path ) )
        {
            auto v = eval( path );
            return negated ? complement( v ) : v;
        }
        switch ( path->op )
        {
        case Op::Not: return exists( a, path->lhs, !negated );
        case Op::Next:
        {
            auto target = eval( path->lhs );
            return pre( _g, a, negated ? complement( target ) : target );
        }
        case Op::Until:
        case Op::Release:
        {
            auto lhs = eval( path->lhs );
            auto rhs = eval( path->rhs );
            if ( negated )
            {
                lhs = complement( lhs );
                rhs = complement( rhs );
            }
            // Negation swaps U and R.
            bool least = ( path->op == Op::Until ) != negated;
            if ( least )
            {
                Bitset z{ _n };
                for ( ;; )
                {
                    auto next = rhs | ( lhs & pre( _g, a, z ) );
                    if ( next == z )
                        return z;
                    z = std::move( next );
                }
            }
            auto z = all();
            for ( ;; )
            {
                auto next = rhs & ( lhs | pre( _g, a, z ) );
                if ( next == z )
                    return z;
                z = std::move( next );
            }
        }
        default: throw ModelError{ "fixpoint model checking supports ATL formulas only" };
        }
    }

public:
    explicit FixpointChecker( const Cgs& g ) : _g{ g }, _n{ g.num_states() } {}

    Bitset eval( const Formula& f )
    {
        switch ( f->op )
        {
        case Op::True: return all();
        case Op::False: return Bitset{ _n };
        case Op::Prop:
        {
            Bitset b{ _n };
            for ( std::size_t s = 0; s < _n; ++s )
                if ( ( _g.label( static_cast< StateId >( s ) ) >> f->prop ) & 1U )
                    b.set( s );
            return b;
        }
        case Op::Not: return complement( eval( f->lhs ) );
        case Op::And: return eval( f->lhs ) & eval( f->rhs );
        case Op::Or: return eval( f->lhs ) | eval( f->rhs );
        case Op::Exists: return exists( f->coalition, f->lhs, false );
        case Op::Forall: return complement( exists( f->coalition, f->lhs, true ) );
        default: throw ModelError{ "temporal operator outside quantifier" };
        }
    }
};

} // namespace

Bitset fixpoint_model_check( const Cgs& g, const Formula& phi ) { return FixpointChecker{ g }.eval( phi ); }

OracleVerdict oracle_module_check( const Cgs& g, const Formula& phi, std::size_t cap )
{
    OracleVerdict v;
    for_each_pruning(
        g,
        [ & ]( const Pruning& p ) {
            ++v.prunings_checked;
            auto pruned = apply_pruning( g, p );
            if ( !fixpoint_model_check( pruned, phi ).test( pruned.initial() ) )
            {
                v.violation = p;
                return false;
            }
            return true;
        },
        cap );
    return v;
}

} // namespace modcheck
