#pragma once

// ATL / ATL* abstract syntax.
//
// Formulas are immutable DAG nodes compared structurally (hash + deep
// equality). F and G are desugared at construction time (F x = true U x,
// G x = false R x); R is a first-class node so that negation normal form
// stays inside the fragment. Prop nodes index propositions; LTL projections
// reuse the same node type with atom indices >= num_props denoting basic
// subformulas.

#include "modcheck/cgs.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace modcheck
{

enum class Op : std::uint8_t
{
    True,
    False,
    Prop,
    Not,
    And,
    Or,
    Next,
    Until,
    Release,
    Exists, // <<A>> psi
    Forall  // [[A]] psi  ==  !<<A>>!psi
};

struct FormulaNode;
using Formula = std::shared_ptr< const FormulaNode >;

struct FormulaNode
{
    Op op;
    int prop = -1;
    AgentSet coalition = 0;
    Formula lhs; // operand of unary nodes
    Formula rhs;
    std::size_t hash = 0;
    std::size_t size = 1;
};

[[nodiscard]] Formula f_true();
[[nodiscard]] Formula f_false();
[[nodiscard]] Formula f_prop( int p );
[[nodiscard]] Formula f_not( Formula a );
[[nodiscard]] Formula f_and( Formula a, Formula b );
[[nodiscard]] Formula f_or( Formula a, Formula b );
[[nodiscard]] Formula f_implies( Formula a, Formula b );
[[nodiscard]] Formula f_next( Formula a );
[[nodiscard]] Formula f_until( Formula a, Formula b );
[[nodiscard]] Formula f_release( Formula a, Formula b );
[[nodiscard]] Formula f_eventually( Formula a );
[[nodiscard]] Formula f_always( Formula a );
[[nodiscard]] Formula f_exists( AgentSet coalition, Formula path );
[[nodiscard]] Formula f_forall( AgentSet coalition, Formula path );

[[nodiscard]] bool formula_equal( const Formula& a, const Formula& b );

struct FormulaHash
{
    std::size_t operator()( const Formula& f ) const { return f->hash; }
};

struct FormulaEq
{
    bool operator()( const Formula& a, const Formula& b ) const { return formula_equal( a, b ); }
};

template < typename V >
using FormulaMap = std::unordered_map< Formula, V, FormulaHash, FormulaEq >;

[[nodiscard]] inline bool is_temporal( Op op ) { return op == Op::Next || op == Op::Until || op == Op::Release; }
[[nodiscard]] inline bool is_quantifier( Op op ) { return op == Op::Exists || op == Op::Forall; }

struct Signature
{
    std::vector< std::string > agents;
    std::vector< std::string > props;
};

[[nodiscard]] Signature signature_of( const Cgs& g );

// Throws ParseError for syntax errors, unknown agents/propositions and
// temporal operators outside every quantifier.
[[nodiscard]] Formula parse_formula( std::string_view text, const Signature& sig );

// Without a signature, propositions print as p<i> and agents as their index.
[[nodiscard]] std::string to_string( const Formula& f, const Signature* sig = nullptr );
[[nodiscard]] inline std::string to_string( const Formula& f, const Signature& sig ) { return to_string( f, &sig ); }

// Number of AST nodes (F and G count as their desugared form).
[[nodiscard]] std::size_t formula_size( const Formula& f );

[[nodiscard]] bool is_state_formula( const Formula& f );
[[nodiscard]] bool is_ltl( const Formula& f );

enum class FormulaClass
{
    Atl,
    AtlStar
};

// Atl iff every temporal node is the immediate operand of a quantifier.
[[nodiscard]] FormulaClass classify( const Formula& f );

// Negations pushed to propositions. Quantifiers over state formulas are
// dropped (they are equivalent to their operand).
[[nodiscard]] Formula to_nnf( const Formula& f );

struct BasicSubformulaTable
{
    std::size_t num_props = 0;
    // Distinct basic subformulas as Exists nodes, inner ones first. A Forall
    // node [[A]]psi contributes the basic <<A>>!psi.
    std::vector< Formula > basics;
    // first_level[i]: basics occurring outside every quantifier in the path
    // formula of basics[i].
    std::vector< std::vector< int > > first_level;
    std::vector< int > root_first_level;
    FormulaMap< int > index;

    [[nodiscard]] std::size_t size() const { return basics.size(); }
    [[nodiscard]] int index_of( const Formula& f ) const;
    [[nodiscard]] int atom_of( int basic ) const { return static_cast< int >( num_props ) + basic; }
    [[nodiscard]] std::size_t num_atoms() const { return num_props + basics.size(); }
};

// The basic subformula a quantifier node stands for.
[[nodiscard]] Formula canonical_basic( const Formula& quantified );

[[nodiscard]] BasicSubformulaTable basic_subformulas( const Formula& phi, std::size_t num_props );

// [psi]_LTL: first-level quantified subformulas replaced by their atoms
// (Forall nodes by the negated atom of their basic).
[[nodiscard]] Formula ltl_projection( const Formula& psi, const BasicSubformulaTable& table );
[[nodiscard]] Formula ltl_unprojection( const Formula& ltl, const BasicSubformulaTable& table );

} // namespace modcheck
