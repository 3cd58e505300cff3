#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace modcheck
{

// Fixed-width dynamic bitset. Used for state sets of every automaton kind.
class Bitset
{
    std::vector< std::uint64_t > _words;
    std::size_t _size = 0;

public:
    Bitset() = default;
    explicit Bitset( std::size_t size ) : _words( ( size + 63 ) / 64, 0 ), _size{ size } {}

    [[nodiscard]] std::size_t size() const { return _size; }

    void set( std::size_t i ) { _words[ i / 64 ] |= std::uint64_t{ 1 } << ( i % 64 ); }
    void reset( std::size_t i ) { _words[ i / 64 ] &= ~( std::uint64_t{ 1 } << ( i % 64 ) ); }
    [[nodiscard]] bool test( std::size_t i ) const { return ( _words[ i / 64 ] >> ( i % 64 ) ) & 1U; }

    [[nodiscard]] std::size_t count() const
    {
        std::size_t n = 0;
        for ( auto w : _words )
            n += static_cast< std::size_t >( std::popcount( w ) );
        return n;
    }

    [[nodiscard]] bool none() const
    {
        for ( auto w : _words )
            if ( w != 0 )
                return false;
        return true;
    }
    [[nodiscard]] bool any() const { return !none(); }

    Bitset& operator|=( const Bitset& o )
    {
        for ( std::size_t i = 0; i < _words.size(); ++i )
            _words[ i ] |= o._words[ i ];
        return *this;
    }

    Bitset& operator&=( const Bitset& o )
    {
        for ( std::size_t i = 0; i < _words.size(); ++i )
            _words[ i ] &= o._words[ i ];
        return *this;
    }

    Bitset& operator-=( const Bitset& o )
    {
        for ( std::size_t i = 0; i < _words.size(); ++i )
            _words[ i ] &= ~o._words[ i ];
        return *this;
    }

    friend Bitset operator|( Bitset a, const Bitset& b ) { return a |= b; }
    friend Bitset operator&( Bitset a, const Bitset& b ) { return a &= b; }
    friend Bitset operator-( Bitset a, const Bitset& b ) { return a -= b; }

    [[nodiscard]] bool intersects( const Bitset& o ) const
    {
        for ( std::size_t i = 0; i < _words.size(); ++i )
            if ( _words[ i ] & o._words[ i ] )
                return true;
        return false;
    }

    [[nodiscard]] bool subset_of( const Bitset& o ) const
    {
        for ( std::size_t i = 0; i < _words.size(); ++i )
            if ( _words[ i ] & ~o._words[ i ] )
                return false;
        return true;
    }

    template < typename F >
    void for_each( F&& f ) const
    {
        for ( std::size_t w = 0; w < _words.size(); ++w )
        {
            auto bits = _words[ w ];
            while ( bits )
            {
                auto b = static_cast< std::size_t >( std::countr_zero( bits ) );
                f( w * 64 + b );
                bits &= bits - 1;
            }
        }
    }

    [[nodiscard]] std::vector< int > elements() const
    {
        std::vector< int > out;
        for_each( [ & ]( std::size_t i ) { out.push_back( static_cast< int >( i ) ); } );
        return out;
    }

    friend bool operator==( const Bitset& a, const Bitset& b ) = default;
    friend auto operator<=>( const Bitset& a, const Bitset& b )
    {
        return a._words <=> b._words;
    }

    [[nodiscard]] std::size_t hash() const
    {
        std::size_t h = _size * 0x9e3779b97f4a7c15ULL;
        for ( auto w : _words )
            h = ( h ^ w ) * 0x100000001b3ULL + ( h >> 29 );
        return h;
    }
};

struct BitsetHash
{
    std::size_t operator()( const Bitset& b ) const { return b.hash(); }
};

inline std::size_t hash_combine( std::size_t seed, std::size_t v )
{
    return seed ^ ( v + 0x9e3779b97f4a7c15ULL + ( seed << 6 ) + ( seed >> 2 ) );
}

} // namespace modcheck
