#include "modcheck/formula.hpp"

#include "modcheck/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace modcheck
{

namespace
{

Formula make( Op op, Formula lhs = nullptr, Formula rhs = nullptr, int prop = -1, AgentSet coalition = 0 )
{
    auto n = std::make_shared< FormulaNode >();
    n->op = op;
    n->prop = prop;
    n->coalition = coalition;
    std::size_t h = static_cast< std::size_t >( op ) * 0x9e3779b97f4a7c15ULL;
    h = hash_combine( h, static_cast< std::size_t >( prop + 1 ) );
    h = hash_combine( h, coalition );
    if ( lhs )
    {
        h = hash_combine( h, lhs->hash );
        n->size += lhs->size;
    }
    if ( rhs )
    {
        h = hash_combine( h, rhs->hash );
        n->size += rhs->size;
    }
    n->hash = h;
    n->lhs = std::move( lhs );
    n->rhs = std::move( rhs );
    return n;
}

} // namespace

Formula f_true()
{
    static const Formula t = make( Op::True );
    return t;
}

Formula f_false()
{
    static const Formula f = make( Op::False );
    return f;
}

Formula f_prop( int p ) { return make( Op::Prop, nullptr, nullptr, p ); }
Formula f_not( Formula a ) { return make( Op::Not, std::move( a ) ); }
Formula f_and( Formula a, Formula b ) { return make( Op::And, std::move( a ), std::move( b ) ); }
Formula f_or( Formula a, Formula b ) { return make( Op::Or, std::move( a ), std::move( b ) ); }
Formula f_implies( Formula a, Formula b ) { return f_or( f_not( std::move( a ) ), std::move( b ) ); }
Formula f_next( Formula a ) { return make( Op::Next, std::move( a ) ); }
Formula f_until( Formula a, Formula b ) { return make( Op::Until, std::move( a ), std::move( b ) ); }
Formula f_release( Formula a, Formula b ) { return make( Op::Release, std::move( a ), std::move( b ) ); }
Formula f_eventually( Formula a ) { return f_until( f_true(), std::move( a ) ); }
Formula f_always( Formula a ) { return f_release( f_false(), std::move( a ) ); }
Formula f_exists( AgentSet coalition, Formula path ) { return make( Op::Exists, std::move( path ), nullptr, -1, coalition ); }
Formula f_forall( AgentSet coalition, Formula path ) { return make( Op::Forall, std::move( path ), nullptr, -1, coalition ); }

bool formula_equal( const Formula& a, const Formula& b )
{
    if ( a == b )
        return true;
    if ( !a || !b )
        return false;
    if ( a->hash != b->hash || a->op != b->op || a->prop != b->prop || a->coalition != b->coalition ||
         a->size != b->size )
        return false;
    return formula_equal( a->lhs, b->lhs ) && formula_equal( a->rhs, b->rhs );
}

Signature signature_of( const Cgs& g ) { return { g.agent_names(), g.prop_names() }; }

// ---------------------------------------------------------------------------
// Parser

namespace
{

enum class Tok
{
    End,
    Ident,
    LAngle,   // <<
    RAngle,   // >>
    LBracket, // [[
    RBracket, // ]]
    LParen,
    RParen,
    Bang,
    Amp,
    Bar,
    Arrow,
    Comma
};

struct Token
{
    Tok kind;
    std::string text;
    std::size_t column;
};

std::vector< Token > tokenize( std::string_view s )
{
    std::vector< Token > out;
    std::size_t i = 0;
    while ( i < s.size() )
    {
        char c = s[ i ];
        if ( std::isspace( static_cast< unsigned char >( c ) ) )
        {
            ++i;
            continue;
        }
        auto col = i + 1;
        auto two = s.substr( i, 2 );
        if ( two == "<<" || two == ">>" || two == "[[" || two == "]]" || two == "->" || two == "&&" || two == "||" )
        {
            Tok k = two == "<<"   ? Tok::LAngle
                    : two == ">>" ? Tok::RAngle
                    : two == "[[" ? Tok::LBracket
                    : two == "]]" ? Tok::RBracket
                    : two == "->" ? Tok::Arrow
                    : two == "&&" ? Tok::Amp
                                  : Tok::Bar;
            out.push_back( { k, std::string{ two }, col } );
            i += 2;
            continue;
        }
        switch ( c )
        {
        case '(': out.push_back( { Tok::LParen, "(", col } ); ++i; continue;
        case ')': out.push_back( { Tok::RParen, ")", col } ); ++i; continue;
        case '!': out.push_back( { Tok::Bang, "!", col } ); ++i; continue;
        case '&': out.push_back( { Tok::Amp, "&", col } ); ++i; continue;
        case '|': out.push_back( { Tok::Bar, "|", col } ); ++i; continue;
        case ',': out.push_back( { Tok::Comma, ",", col } ); ++i; continue;
        default: break;
        }
        if ( std::isalnum( static_cast< unsigned char >( c ) ) || c == '_' )
        {
            auto start = i;
            while ( i < s.size() && ( std::isalnum( static_cast< unsigned char >( s[ i ] ) ) || s[ i ] == '_' ||
                                      s[ i ] == '\'' || s[ i ] == '.' ) )
                ++i;
            out.push_back( { Tok::Ident, std::string{ s.substr( start, i - start ) }, col } );
            continue;
        }
        throw ParseError{ 1, col, std::string{ "unexpected character '" } + c + "'" };
    }
    out.push_back( { Tok::End, "", s.size() + 1 } );
    return out;
}

class Parser
{
    std::vector< Token > _toks;
    std::size_t _pos = 0;
    const Signature& _sig;
    int _quantifier_depth = 0;

    const Token& peek() const { return _toks[ _pos ]; }
    const Token& next() { return _toks[ _pos++ ]; }

    [[noreturn]] void fail( const Token& t, const std::string& msg ) const { throw ParseError{ 1, t.column, msg }; }

    bool peek_keyword( std::string_view kw ) const { return peek().kind == Tok::Ident && peek().text == kw; }

    void expect( Tok k, const char* what )
    {
        if ( peek().kind != k )
            fail( peek(), std::string{ "expected " } + what );
        ++_pos;
    }

    void require_quantifier( const Token& t )
    {
        if ( _quantifier_depth == 0 )
            fail( t, "temporal operator outside quantifier" );
    }

    AgentSet agents( Tok close, const char* close_text )
    {
        AgentSet set = 0;
        if ( peek().kind == close )
        {
            ++_pos;
            return set;
        }
        for ( ;; )
        {
            auto& t = next();
            if ( t.kind != Tok::Ident )
                fail( t, "expected agent name" );
            int idx = -1;
            for ( std::size_t a = 0; a < _sig.agents.size(); ++a )
                if ( _sig.agents[ a ] == t.text )
                    idx = static_cast< int >( a );
            if ( idx < 0 )
                fail( t, "unknown agent '" + t.text + "'" );
            set |= AgentSet{ 1 } << idx;
            if ( peek().kind == Tok::Comma )
            {
                ++_pos;
                continue;
            }
            expect( close, close_text );
            return set;
        }
    }

    Formula implication()
    {
        auto lhs = disjunction();
        if ( peek().kind == Tok::Arrow )
        {
            ++_pos;
            return f_implies( lhs, implication() );
        }
        return lhs;
    }

    Formula disjunction()
    {
        auto lhs = conjunction();
        while ( peek().kind == Tok::Bar )
        {
            ++_pos;
            lhs = f_or( lhs, conjunction() );
        }
        return lhs;
    }

    Formula conjunction()
    {
        auto lhs = binary_temporal();
        while ( peek().kind == Tok::Amp )
        {
            ++_pos;
            lhs = f_and( lhs, binary_temporal() );
        }
        return lhs;
    }

    Formula binary_temporal()
    {
        auto lhs = unary();
        if ( peek_keyword( "U" ) || peek_keyword( "R" ) )
        {
            auto& t = next();
            require_quantifier( t );
            auto rhs = binary_temporal();
            return t.text == "U" ? f_until( lhs, rhs ) : f_release( lhs, rhs );
        }
        return lhs;
    }

    Formula quantified( bool exists )
    {
        auto coalition = exists ? agents( Tok::RAngle, "'>>'" ) : agents( Tok::RBracket, "']]'" );
        ++_quantifier_depth;
        auto path = binary_temporal();
        --_quantifier_depth;
        return exists ? f_exists( coalition, path ) : f_forall( coalition, path );
    }

    Formula unary()
    {
        auto& t = peek();
        switch ( t.kind )
        {
        case Tok::Bang: ++_pos; return f_not( unary() );
        case Tok::LAngle: ++_pos; return quantified( true );
        case Tok::LBracket: ++_pos; return quantified( false );
        case Tok::LParen:
        {
            ++_pos;
            auto f = implication();
            expect( Tok::RParen, "')'" );
            return f;
        }
        case Tok::Ident: break;
        default: fail( t, t.kind == Tok::End ? "unexpected end of formula" : "unexpected '" + t.text + "'" );
        }
        ++_pos;
        if ( t.text == "X" || t.text == "F" || t.text == "G" )
        {
            require_quantifier( t );
            auto op = unary();
            return t.text == "X" ? f_next( op ) : t.text == "F" ? f_eventually( op ) : f_always( op );
        }
        if ( t.text == "U" || t.text == "R" )
            fail( t, "'" + t.text + "' is a binary operator" );
        if ( t.text == "true" )
            return f_true();
        if ( t.text == "false" )
            return f_false();
        for ( std::size_t p = 0; p < _sig.props.size(); ++p )
            if ( _sig.props[ p ] == t.text )
                return f_prop( static_cast< int >( p ) );
        fail( t, "unknown proposition '" + t.text + "'" );
    }

public:
    Parser( std::string_view text, const Signature& sig ) : _toks{ tokenize( text ) }, _sig{ sig } {}

    Formula parse()
    {
        auto f = implication();
        if ( peek().kind != Tok::End )
            fail( peek(), "unexpected '" + peek().text + "'" );
        return f;
    }
};

} // namespace

Formula parse_formula( std::string_view text, const Signature& sig ) { return Parser{ text, sig }.parse(); }

// ---------------------------------------------------------------------------
// Printing and queries

namespace
{

std::string agents_text( AgentSet a, const Signature* sig )
{
    std::string out;
    for ( std::size_t i = 0; i < kMaxAgents; ++i )
    {
        if ( !( ( a >> i ) & 1U ) )
            continue;
        if ( !out.empty() )
            out += ",";
        out += sig && i < sig->agents.size() ? sig->agents[ i ] : std::to_string( i );
    }
    return out;
}

// A prefix chain ending in a quantifier would swallow a following U or R.
bool open_quantifier( const Formula& f )
{
    switch ( f->op )
    {
    case Op::Exists:
    case Op::Forall: return true;
    case Op::Not:
    case Op::Next: return open_quantifier( f->lhs );
    case Op::Until: return f->lhs->op == Op::True && open_quantifier( f->rhs );
    case Op::Release: return f->lhs->op == Op::False && open_quantifier( f->rhs );
    default: return false;
    }
}

void print( const Formula& f, const Signature* sig, std::string& out )
{
    auto binary = [ & ]( const char* op ) {
        out += "(";
        bool wrap = ( f->op == Op::Until || f->op == Op::Release ) && open_quantifier( f->lhs );
        if ( wrap )
            out += "(";
        print( f->lhs, sig, out );
        if ( wrap )
            out += ")";
        out += op;
        print( f->rhs, sig, out );
        out += ")";
    };
    switch ( f->op )
    {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Prop:
        if ( sig && f->prop < static_cast< int >( sig->props.size() ) )
            out += sig->props[ f->prop ];
        else
            out += "p" + std::to_string( f->prop );
        break;
    case Op::Not: out += "!"; print( f->lhs, sig, out ); break;
    case Op::And: binary( " & " ); break;
    case Op::Or: binary( " | " ); break;
    case Op::Next: out += "X "; print( f->lhs, sig, out ); break;
    case Op::Until:
        if ( f->lhs->op == Op::True )
        {
            out += "F ";
            print( f->rhs, sig, out );
        }
        else
            binary( " U " );
        break;
    case Op::Release:
        if ( f->lhs->op == Op::False )
        {
            out += "G ";
            print( f->rhs, sig, out );
        }
        else
            binary( " R " );
        break;
    case Op::Exists:
    case Op::Forall:
        out += f->op == Op::Exists ? "<<" : "[[";
        out += agents_text( f->coalition, sig );
        out += f->op == Op::Exists ? ">> " : "]] ";
        print( f->lhs, sig, out );
        break;
    }
}

bool state_formula_rec( const Formula& f, bool quantified )
{
    if ( is_temporal( f->op ) && !quantified )
        return false;
    if ( is_quantifier( f->op ) )
        quantified = true;
    return ( !f->lhs || state_formula_rec( f->lhs, quantified ) ) &&
           ( !f->rhs || state_formula_rec( f->rhs, quantified ) );
}

bool atl_rec( const Formula& f, bool parent_is_quantifier )
{
    if ( is_temporal( f->op ) && !parent_is_quantifier )
        return false;
    bool q = is_quantifier( f->op );
    return ( !f->lhs || atl_rec( f->lhs, q ) ) && ( !f->rhs || atl_rec( f->rhs, q ) );
}

} // namespace

std::string to_string( const Formula& f, const Signature* sig )
{
    std::string out;
    print( f, sig, out );
    return out;
}

std::size_t formula_size( const Formula& f ) { return f->size; }

bool is_state_formula( const Formula& f ) { return state_formula_rec( f, false ); }

bool is_ltl( const Formula& f )
{
    if ( is_quantifier( f->op ) )
        return false;
    return ( !f->lhs || is_ltl( f->lhs ) ) && ( !f->rhs || is_ltl( f->rhs ) );
}

FormulaClass classify( const Formula& f ) { return atl_rec( f, false ) ? FormulaClass::Atl : FormulaClass::AtlStar; }

// ---------------------------------------------------------------------------
// Negation normal form

namespace
{

Formula nnf( const Formula& f, bool negated )
{
    switch ( f->op )
    {
    case Op::True: return negated ? f_false() : f;
    case Op::False: return negated ? f_true() : f;
    case Op::Prop: return negated ? f_not( f ) : f;
    case Op::Not: return nnf( f->lhs, !negated );
    case Op::And:
        return negated ? f_or( nnf( f->lhs, true ), nnf( f->rhs, true ) )
                       : f_and( nnf( f->lhs, false ), nnf( f->rhs, false ) );
    case Op::Or:
        return negated ? f_and( nnf( f->lhs, true ), nnf( f->rhs, true ) )
                       : f_or( nnf( f->lhs, false ), nnf( f->rhs, false ) );
    case Op::Next: return f_next( nnf( f->lhs, negated ) );
    case Op::Until:
        return negated ? f_release( nnf( f->lhs, true ), nnf( f->rhs, true ) )
                       : f_until( nnf( f->lhs, false ), nnf( f->rhs, false ) );
    case Op::Release:
        return negated ? f_until( nnf( f->lhs, true ), nnf( f->rhs, true ) )
                       : f_release( nnf( f->lhs, false ), nnf( f->rhs, false ) );
    case Op::Exists:
    case Op::Forall:
    {
        if ( is_state_formula( f->lhs ) )
            return nnf( f->lhs, negated );
        bool exists = ( f->op == Op::Exists ) != negated;
        auto path = nnf( f->lhs, negated );
        return exists ? f_exists( f->coalition, path ) : f_forall( f->coalition, path );
    }
    }
    return f;
}

} // namespace

Formula to_nnf( const Formula& f ) { return nnf( f, false ); }

// ---------------------------------------------------------------------------
// Basic subformulas and LTL projection

int BasicSubformulaTable::index_of( const Formula& f ) const
{
    auto it = index.find( f );
    return it == index.end() ? -1 : it->second;
}

Formula canonical_basic( const Formula& q )
{
    if ( q->op == Op::Forall )
        return f_exists( q->coalition, f_not( q->lhs ) );
    return q;
}

namespace
{

void first_level_quantifiers( const Formula& f, std::vector< Formula >& out )
{
    if ( is_quantifier( f->op ) )
    {
        out.push_back( f );
        return;
    }
    if ( f->lhs )
        first_level_quantifiers( f->lhs, out );
    if ( f->rhs )
        first_level_quantifiers( f->rhs, out );
}

int collect( const Formula& quantified, BasicSubformulaTable& t )
{
    auto basic = canonical_basic( quantified );
    if ( auto idx = t.index_of( basic ); idx >= 0 )
        return idx;
    std::vector< Formula > inner;
    first_level_quantifiers( quantified->lhs, inner );
    std::vector< int > levels;
    for ( auto& q : inner )
    {
        auto i = collect( q, t );
        if ( std::find( levels.begin(), levels.end(), i ) == levels.end() )
            levels.push_back( i );
    }
    auto idx = static_cast< int >( t.basics.size() );
    t.basics.push_back( basic );
    t.first_level.push_back( std::move( levels ) );
    t.index.emplace( basic, idx );
    return idx;
}

} // namespace

BasicSubformulaTable basic_subformulas( const Formula& phi, std::size_t num_props )
{
    BasicSubformulaTable t;
    t.num_props = num_props;
    std::vector< Formula > top;
    first_level_quantifiers( phi, top );
    for ( auto& q : top )
    {
        auto i = collect( q, t );
        if ( std::find( t.root_first_level.begin(), t.root_first_level.end(), i ) == t.root_first_level.end() )
            t.root_first_level.push_back( i );
    }
    return t;
}

Formula ltl_projection( const Formula& psi, const BasicSubformulaTable& table )
{
    if ( is_quantifier( psi->op ) )
    {
        auto idx = table.index_of( canonical_basic( psi ) );
        if ( idx < 0 )
            throw ModelError{ "quantified subformula missing from the basic subformula table" };
        auto atom = f_prop( table.atom_of( idx ) );
        return psi->op == Op::Forall ? f_not( atom ) : atom;
    }
    switch ( psi->op )
    {
    case Op::True:
    case Op::False:
    case Op::Prop: return psi;
    case Op::Not: return f_not( ltl_projection( psi->lhs, table ) );
    case Op::Next: return f_next( ltl_projection( psi->lhs, table ) );
    case Op::And: return f_and( ltl_projection( psi->lhs, table ), ltl_projection( psi->rhs, table ) );
    case Op::Or: return f_or( ltl_projection( psi->lhs, table ), ltl_projection( psi->rhs, table ) );
    case Op::Until: return f_until( ltl_projection( psi->lhs, table ), ltl_projection( psi->rhs, table ) );
    case Op::Release: return f_release( ltl_projection( psi->lhs, table ), ltl_projection( psi->rhs, table ) );
    default: break;
    }
    return psi;
}

Formula ltl_unprojection( const Formula& ltl, const BasicSubformulaTable& table )
{
    switch ( ltl->op )
    {
    case Op::Prop:
        if ( ltl->prop >= static_cast< int >( table.num_props ) )
            return table.basics[ ltl->prop - table.num_props ];
        return ltl;
    case Op::Not:
        if ( ltl->lhs->op == Op::Prop && ltl->lhs->prop >= static_cast< int >( table.num_props ) )
        {
            // Negated atoms of basics <<A>>!psi come from [[A]]psi.
            auto& b = table.basics[ ltl->lhs->prop - table.num_props ];
            if ( b->lhs->op == Op::Not )
                return f_forall( b->coalition, b->lhs->lhs );
        }
        return f_not( ltl_unprojection( ltl->lhs, table ) );
    case Op::Next: return f_next( ltl_unprojection( ltl->lhs, table ) );
    case Op::And: return f_and( ltl_unprojection( ltl->lhs, table ), ltl_unprojection( ltl->rhs, table ) );
    case Op::Or: return f_or( ltl_unprojection( ltl->lhs, table ), ltl_unprojection( ltl->rhs, table ) );
    case Op::Until: return f_until( ltl_unprojection( ltl->lhs, table ), ltl_unprojection( ltl->rhs, table ) );
    case Op::Release: return f_release( ltl_unprojection( ltl->lhs, table ), ltl_unprojection( ltl->rhs, table ) );
    default: return ltl;
    }
}

} // namespace modcheck
