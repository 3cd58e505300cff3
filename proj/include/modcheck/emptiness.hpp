#pragma once

// Module checking through tree-automata emptiness.
//
// For G |=r phi we build an ACG for !phi, turn it into a nondeterministic
// parity tree automaton over the bottom-completion encodings of the strategy
// trees of G (with guessed B-labels when the ATL* route is taken), and solve
// the emptiness game. A nonempty automaton yields a finite-memory
// environment strategy tree witnessing the violation.
//
// NTA states pair a CGS state (the direction the node was reached by) with a
// state of a lazily determinized automaton D_good over relation letters. A
// relation letter R is the set of pairs (q, q') of ACG states such that the
// copy in q at a node sends a copy in q' to a given child; D_good accepts the
// relation words all of whose traces satisfy the parity condition. It is the
// complement of the Safra determinization of N_bad, which guesses a trace and
// an odd colour c that recurs forever while nothing above c does.

#include "modcheck/acg.hpp"
#include "modcheck/cgs.hpp"
#include "modcheck/formula.hpp"
#include "modcheck/parity_game.hpp"
#include "modcheck/word_automata.hpp"

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace modcheck
{

// Letter of a bottom-completion encoding: a content letter or the mark.
struct BotLetter
{
    bool bottom = false;
    PropSet content = 0;

    friend bool operator==( const BotLetter&, const BotLetter& ) = default;
};

using Relation = std::vector< std::pair< int, int > >; // sorted (q, q') pairs

class GoodTraces
{
    struct Impl;
    std::unique_ptr< Impl > _impl;

public:
    explicit GoodTraces( const Acg& a );
    ~GoodTraces();
    GoodTraces( GoodTraces&& ) noexcept;
    GoodTraces& operator=( GoodTraces&& ) noexcept;

    [[nodiscard]] int initial() const;
    int step( int d, const Relation& r );
    [[nodiscard]] int color( int d ) const;
    // ACG states with a copy at a node whose D_good state is d.
    [[nodiscard]] const std::vector< int >& obligations( int d ) const;
    [[nodiscard]] std::size_t size() const;
    // Number of N_bad states, which bounds the Safra tree size.
    [[nodiscard]] std::size_t bad_states() const;
};

struct NtaTransition
{
    std::vector< StateId > enabled; // concrete directions, sorted
    PropSet letter = 0;             // content letter read at the node
    Letter basics = 0;              // guessed B-label (bit i = basic i)
    std::vector< int > children;    // NTA state per enabled direction
};

struct NtaState
{
    StateId direction = kUndefined; // CGS state of the node; kUndefined for the bottom sink
    int good = -1;
    int color = 0;
    std::vector< NtaTransition > transitions;
};

struct Nta
{
    std::size_t num_directions = 0;
    int initial = 0;
    int bottom = 0; // accepting sink reading the completion mark forever
    std::vector< NtaState > states;
    std::size_t good_states = 0;
    std::size_t num_transitions = 0;

    [[nodiscard]] std::size_t size() const { return states.size(); }
    // Number of distinct colours.
    [[nodiscard]] std::size_t index() const;
    // Transitions of a state for a node letter; every direction outside
    // `enabled` must carry the completion mark.
    [[nodiscard]] std::vector< const NtaTransition* > successors( int state, const BotLetter& letter ) const;
};

struct NtaOptions
{
    std::size_t max_states = kDefaultStateCap;
    std::size_t max_transitions = 4 * kDefaultStateCap;
};

// Throws ResourceError("nta", cap).
[[nodiscard]] Nta acg_to_nta( Acg& a, const Cgs& g, const NtaOptions& options = {} );

[[nodiscard]] std::string to_text( const Nta& n, const Cgs& g );

struct StrategyMemory
{
    StateId state = 0;
    std::vector< StateId > enabled; // all successors at system states
    Letter basics = 0;              // B-label of the node (bit i = basic i)
    std::map< StateId, int > next;  // enabled direction -> memory
};

// A regular strategy tree: unrolling from the initial memory yields a member
// of exec(G).
struct FiniteStrategyTree
{
    int initial = 0;
    std::vector< StrategyMemory > memories;
    std::vector< Formula > basics;
};

struct EmptinessGame
{
    ParityGame game;
    std::vector< int > state_position;                           // per NTA state
    std::vector< std::pair< int, int > > transition_of_position; // (NTA state, transition) or (-1,-1)
};

[[nodiscard]] EmptinessGame emptiness_game( const Nta& n );

struct EmptinessResult
{
    bool empty = true;
    std::optional< FiniteStrategyTree > witness;
    std::size_t game_positions = 0;
};

[[nodiscard]] EmptinessResult nta_emptiness( const Nta& n, const Cgs& g );

// Complete S-branching prefix of the unrolled strategy tree. Node 0 is the
// root; every node above the depth bound has exactly |S| children, indexed by
// direction.
struct BotTreeNode
{
    BotLetter letter;
    StateId state = kUndefined;
    std::vector< std::size_t > children;
};

struct BotTree
{
    std::vector< BotTreeNode > nodes;
};

[[nodiscard]] BotTree bot_completion( const Cgs& g, const FiniteStrategyTree& t, std::size_t depth );

// Merges memories with the same state, enabled set and B-label whose updates
// agree up to the merge (coarsest bisimulation), renumbered in BFS order.
[[nodiscard]] FiniteStrategyTree normalize_witness( const FiniteStrategyTree& t );

// The memoryless pruning denoted by the tree, if every memory over the same
// CGS state enables the same successors.
[[nodiscard]] std::optional< Pruning > witness_pruning( const Cgs& g, const FiniteStrategyTree& t );

// Finite CGS whose unwinding is the strategy tree. State i is memory i.
[[nodiscard]] Cgs product_cgs( const Cgs& g, const FiniteStrategyTree& t );

// Throws ModelError when the tree is not a member of exec(g).
void validate_strategy_tree( const Cgs& g, const FiniteStrategyTree& t );

enum class Engine
{
    Auto,
    Atl,
    AtlStar
};

[[nodiscard]] const char* engine_name( Engine e );

struct CheckOptions
{
    Engine engine = Engine::Auto;
    std::size_t max_dpw_states = kDefaultStateCap;
    std::size_t max_nta_states = kDefaultStateCap;
};

struct StageTimes
{
    double acg_ms = 0;
    double nta_ms = 0;
    double game_ms = 0;
};

struct CheckStats
{
    std::size_t acg_states = 0;
    std::size_t acg_atoms = 0;
    std::size_t acg_index = 0;
    std::size_t basics = 0;
    std::size_t dpw_states = 0;
    std::size_t max_dpw_index = 0;
    std::size_t good_states = 0;
    std::size_t nta_states = 0;
    std::size_t nta_transitions = 0;
    std::size_t nta_index = 0;
    std::size_t game_positions = 0;
    StageTimes times;

    [[nodiscard]] std::size_t acg_size() const { return acg_states + acg_atoms; }
};

struct CheckResult
{
    bool holds = true;
    Engine engine = Engine::Atl;
    CheckStats stats;
    std::optional< FiniteStrategyTree > counterexample;
};

struct BuiltAcg
{
    Acg acg;
    Engine engine;
    AtlStarStats dpw_stats;
};

// The automaton for !phi selected by the engine option. Throws ModelError
// when the ATL engine is forced on a formula outside the fragment.
[[nodiscard]] BuiltAcg build_negation_acg( const Cgs& g, const Formula& phi, const CheckOptions& options );

[[nodiscard]] CheckResult module_check( const Cgs& g, const Formula& phi, const CheckOptions& options = {} );

// True iff the strategy tree is a member of exec(g) and violates phi.
[[nodiscard]] bool validate_counterexample( const Cgs& g, const Formula& phi, const FiniteStrategyTree& w );

} // namespace modcheck
