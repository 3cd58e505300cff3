#pragma once

// Omega-word automata over explicit letters.
//
// An automaton reads global letters (bitmasks over atom indices: propositions
// first, then basic-subformula atoms). Internally it only looks at the atoms
// it mentions; a global letter is projected onto that local alphabet of
// 2^|atoms| letters. Parity conditions are max-parity everywhere: a run is
// accepting iff the highest colour seen infinitely often is even.

#include "modcheck/bitset.hpp"
#include "modcheck/formula.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace modcheck
{

using Letter = std::uint64_t;

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

// Projection of global letters onto a sorted atom list.
[[nodiscard]] std::size_t project_letter( const std::vector< int >& atoms, Letter global );
[[nodiscard]] Letter unproject_letter( const std::vector< int >& atoms, std::size_t local );

struct Nbw
{
    std::vector< int > atoms;
    std::size_t num_states = 0;
    std::vector< int > initial;
    std::vector< std::vector< std::vector< int > > > delta; // [state][local letter] -> successors
    std::vector< bool > accepting;

    [[nodiscard]] std::size_t num_letters() const { return std::size_t{ 1 } << atoms.size(); }
    [[nodiscard]] bool is_deterministic() const;
};

struct Dpw
{
    std::vector< int > atoms;
    int initial = 0;
    std::vector< std::vector< int > > delta; // [state][local letter]
    std::vector< int > color;

    [[nodiscard]] std::size_t num_states() const { return color.size(); }
    [[nodiscard]] std::size_t num_letters() const { return std::size_t{ 1 } << atoms.size(); }
    [[nodiscard]] int step( int state, Letter global ) const { return delta[ state ][ project_letter( atoms, global ) ]; }
    [[nodiscard]] int min_color() const;
    [[nodiscard]] int max_color() const;
    // Number of distinct colours.
    [[nodiscard]] std::size_t index() const;
};

// Tableau construction over the atoms occurring in the formula (quantifier
// free). Throws ResourceError("nbw", cap).
[[nodiscard]] Nbw ltl_to_nbw( const Formula& ltl, std::size_t cap = kDefaultStateCap );

[[nodiscard]] bool nbw_is_empty( const Nbw& n );

// Safra trees in compact form: node i has name i+1, parents are older than
// their children, and children are ordered by age.
struct SafraTree
{
    std::vector< Bitset > labels;
    std::vector< int > parent; // -1 for the root

    [[nodiscard]] bool empty() const { return labels.empty(); }
    [[nodiscard]] std::size_t hash() const;
    friend bool operator==( const SafraTree&, const SafraTree& ) = default;
};

struct SafraTreeHash
{
    std::size_t operator()( const SafraTree& t ) const { return t.hash(); }
};

struct SafraStep
{
    SafraTree tree;
    int color; // max-parity colour of the step, in 1..2n+1
};

[[nodiscard]] SafraTree safra_initial( const Bitset& initial );

// One determinization step. post maps a label to its successor set under the
// letter being read; n bounds the number of tree nodes (the number of states
// of the underlying nondeterministic automaton).
[[nodiscard]] SafraStep safra_step( const SafraTree& tree, const std::function< Bitset( const Bitset& ) >& post,
                                    const Bitset& accepting, std::size_t n );

// Throws ResourceError("dpw", cap).
[[nodiscard]] Dpw nbw_to_dpw( const Nbw& n, std::size_t cap = kDefaultStateCap );
[[nodiscard]] Dpw dpw_complement( const Dpw& d );

// Moore-style bisimulation quotient followed by colour compaction.
[[nodiscard]] Dpw dpw_minimize( const Dpw& d );
[[nodiscard]] Dpw compact_colors( const Dpw& d );

[[nodiscard]] Dpw ltl_to_dpw( const Formula& ltl, std::size_t cap = kDefaultStateCap );

// stem . loop^omega over global letters; loop must be nonempty.
[[nodiscard]] bool lasso_accepts( const Nbw& n, const std::vector< Letter >& stem, const std::vector< Letter >& loop );
[[nodiscard]] bool lasso_accepts( const Dpw& d, const std::vector< Letter >& stem, const std::vector< Letter >& loop );

[[nodiscard]] std::string to_text( const Nbw& n );
[[nodiscard]] std::string to_text( const Dpw& d );

} // namespace modcheck
