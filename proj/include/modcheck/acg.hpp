#pragma once

// Parity alternating automata over concurrent game trees.
//
// Transition formulas are stored once per state as a positive boolean
// formula whose leaves are atoms (q, box|diamond, A), constants, and letter
// tests; reading a letter folds the tests away. Letters are global bitmasks:
// propositions first, then one bit per basic subformula.

#include "modcheck/cgs.hpp"
#include "modcheck/formula.hpp"
#include "modcheck/parity_game.hpp"
#include "modcheck/word_automata.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace modcheck
{

enum class PbfKind : std::uint8_t
{
    True,
    False,
    Atom,
    Test,
    And,
    Or
};

struct PbfNode
{
    PbfKind kind;
    int value = -1; // atom id, or tested letter bit
    bool positive = true;
    int lhs = -1;
    int rhs = -1;

    friend bool operator==( const PbfNode&, const PbfNode& ) = default;
};

// Hash-consed, constant-folding store of positive boolean formulas.
class PbfPool
{
    struct NodeHash
    {
        std::size_t operator()( const PbfNode& n ) const;
    };

    std::vector< PbfNode > _nodes;
    std::unordered_map< PbfNode, int, NodeHash > _ids;
    std::map< std::pair< int, Letter >, int > _fold_cache;

    int intern( const PbfNode& n );

public:
    PbfPool();

    [[nodiscard]] static constexpr int top() { return 0; }
    [[nodiscard]] static constexpr int bottom() { return 1; }
    int atom( int atom_id );
    int test( int bit, bool positive );
    int conj( int a, int b );
    int disj( int a, int b );

    [[nodiscard]] const PbfNode& node( int id ) const { return _nodes[ id ]; }
    [[nodiscard]] std::size_t size() const { return _nodes.size(); }

    // Resolves letter tests; the result has no Test nodes.
    int fold( int id, Letter letter );
    // Minimal sets of atom ids satisfying a test-free formula.
    [[nodiscard]] std::vector< std::vector< int > > minimal_models( int id ) const;
};

enum class Mode : std::uint8_t
{
    Box,    // some available A-decision, all consistent children
    Diamond // every available A-decision, some consistent child
};

struct AcgAtom
{
    int state;
    Mode mode;
    AgentSet coalition;

    friend bool operator==( const AcgAtom&, const AcgAtom& ) = default;
    friend auto operator<=>( const AcgAtom&, const AcgAtom& ) = default;
};

class Acg
{
    std::map< AcgAtom, int > _atom_ids;
    std::map< std::pair< int, Letter >, std::vector< std::vector< int > > > _model_cache;

public:
    std::size_t num_props = 0;
    std::vector< Formula > basics; // letter bit num_props + i
    int initial = 0;
    std::vector< int > color;
    std::vector< int > delta; // pool id per state
    std::vector< std::string > state_names;
    std::vector< Formula > state_formulas; // subformula of an ATL state; null otherwise
    std::vector< AcgAtom > atoms;
    PbfPool pool;

    [[nodiscard]] std::size_t num_states() const { return color.size(); }
    [[nodiscard]] std::size_t num_letter_bits() const { return num_props + basics.size(); }
    // |Q| + |Atoms|
    [[nodiscard]] std::size_t size() const { return num_states() + atoms.size(); }
    // Number of distinct colours.
    [[nodiscard]] std::size_t index() const;

    int add_state( std::string name, int c );
    int atom_id( const AcgAtom& a );

    // delta(q, letter) with tests resolved.
    [[nodiscard]] int transition( int q, Letter letter );
    [[nodiscard]] const std::vector< std::vector< int > >& minimal_models( int q, Letter letter );

    [[nodiscard]] std::string pbf_text( int id, const Signature* sig = nullptr ) const;
};

[[nodiscard]] std::string to_text( const Acg& a, const Signature* sig = nullptr );

// Linear translation for ATL formulas in negation normal form: one state per
// distinct quantified or next-target subformula; until states get colour 1,
// everything else colour 0.
[[nodiscard]] Acg atl_to_acg( const Formula& nnf, std::size_t num_props );

struct AtlStarStats
{
    std::size_t dpw_states = 0;     // summed over all D+ / D- automata
    std::size_t max_dpw_states = 0; // largest single automaton
    std::size_t max_dpw_index = 0;
};

// Automaton for the trees over AP u B_phi that are well-formed w.r.t. phi.
// Throws ResourceError("dpw", cap).
[[nodiscard]] Acg atlstar_to_acg( const Formula& phi, std::size_t num_props, std::size_t dpw_cap = kDefaultStateCap,
                                  AtlStarStats* stats = nullptr );

struct MembershipGame
{
    ParityGame game;
    std::vector< int > start; // position of (s, q0) per CGS state
};

// Acceptance game of the ACG on the unwinding of g from each state, with one
// letter per CGS state. Throws ModelError on letters outside the alphabet.
[[nodiscard]] MembershipGame membership_game( Acg& a, const Cgs& g, const std::vector< Letter >& letters );

// Per CGS state: whether the unwinding from that state is accepted.
[[nodiscard]] std::vector< bool > membership( Acg& a, const Cgs& g, const std::vector< Letter >& letters );

} // namespace modcheck
