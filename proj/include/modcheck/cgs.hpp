#pragma once

// Finite (open) concurrent game structures.
//
// Agents, actions, propositions and states are interned to contiguous
// integers in declaration order. A full decision assigns one action to every
// agent and is addressed by its mixed-radix index (agent 0 most significant),
// so the transition table is a dense |S| x |Ac|^|Ag| array whose entries are
// either a target state or kUndefined.

#include "modcheck/bitset.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modcheck
{

using StateId = int;
using AgentSet = std::uint32_t;
using PropSet = std::uint64_t;

inline constexpr StateId kUndefined = -1;
inline constexpr std::size_t kMaxAgents = 16;
inline constexpr std::size_t kMaxProps = 48;

// An A-decision: one action per agent of the coalition.
struct Decision
{
    AgentSet coalition = 0;
    std::vector< int > actions; // indexed by agent id; -1 outside the coalition

    [[nodiscard]] bool covers( int agent ) const { return ( coalition >> agent ) & 1U; }

    // Union of two decisions over disjoint coalitions.
    [[nodiscard]] Decision unite( const Decision& other ) const;

    friend bool operator==( const Decision&, const Decision& ) = default;
    friend auto operator<=>( const Decision&, const Decision& ) = default;
};

enum class Owner : std::uint8_t
{
    Environment, // controlled by env: a unique (Ag \ {env})-decision is available
    System       // env is passive: a unique {env}-decision is available
};

// An available A-decision together with every successor it is consistent with.
struct CoalitionMove
{
    Decision decision;
    std::vector< StateId > outcomes; // sorted, unique, nonempty
};

class Cgs
{
    friend class CgsBuilder;

    std::vector< std::string > _agents;
    std::vector< std::string > _actions;
    std::vector< std::string > _props;
    std::vector< std::string > _states;
    int _env = -1;
    StateId _initial = 0;
    std::vector< PropSet > _labels;
    std::size_t _num_full = 1;
    std::vector< StateId > _table;
    std::vector< std::vector< StateId > > _successors;
    std::vector< Owner > _owner;

    Cgs() = default;

public:
    [[nodiscard]] std::size_t num_states() const { return _states.size(); }
    [[nodiscard]] std::size_t num_agents() const { return _agents.size(); }
    [[nodiscard]] std::size_t num_actions() const { return _actions.size(); }
    [[nodiscard]] std::size_t num_props() const { return _props.size(); }
    [[nodiscard]] std::size_t num_full_decisions() const { return _num_full; }

    [[nodiscard]] const std::vector< std::string >& agent_names() const { return _agents; }
    [[nodiscard]] const std::vector< std::string >& action_names() const { return _actions; }
    [[nodiscard]] const std::vector< std::string >& prop_names() const { return _props; }
    [[nodiscard]] const std::vector< std::string >& state_names() const { return _states; }

    [[nodiscard]] std::optional< StateId > find_state( std::string_view name ) const;
    [[nodiscard]] std::optional< int > find_agent( std::string_view name ) const;
    [[nodiscard]] std::optional< int > find_prop( std::string_view name ) const;

    // -1 when the structure has no environment agent (closed CGS).
    [[nodiscard]] int env_agent() const { return _env; }
    [[nodiscard]] bool is_open() const { return _env >= 0; }
    [[nodiscard]] AgentSet all_agents() const { return ( AgentSet{ 1 } << _agents.size() ) - 1; }

    [[nodiscard]] StateId initial() const { return _initial; }
    [[nodiscard]] PropSet label( StateId s ) const { return _labels[ s ]; }

    [[nodiscard]] StateId target( StateId s, std::size_t full ) const { return _table[ s * _num_full + full ]; }
    [[nodiscard]] int action_of( std::size_t full, int agent ) const;
    [[nodiscard]] std::size_t full_index( const std::vector< int >& actions ) const;
    [[nodiscard]] Decision full_decision( std::size_t full ) const;

    [[nodiscard]] const std::vector< StateId >& successors( StateId s ) const { return _successors[ s ]; }

    // Dc_A(s), ordered by the projected mixed-radix index.
    [[nodiscard]] std::vector< Decision > available_decisions( StateId s, AgentSet coalition ) const;
    [[nodiscard]] std::vector< CoalitionMove > coalition_moves( StateId s, AgentSet coalition ) const;

    // Meaningful only for open structures.
    [[nodiscard]] Owner owner( StateId s ) const { return _owner[ s ]; }
    [[nodiscard]] bool is_env_state( StateId s ) const { return is_open() && _owner[ s ] == Owner::Environment; }
};

// Restricts moves to the enabled successors of a pruned node. Moves left
// without outcomes are no longer available and are dropped.
[[nodiscard]] std::vector< CoalitionMove > restrict_moves( const std::vector< CoalitionMove >& moves,
                                                           const std::vector< bool >& enabled );

class CgsBuilder
{
    Cgs _g;
    std::vector< std::optional< Owner > > _declared;
    std::vector< std::vector< bool > > _set;

public:
    CgsBuilder( std::vector< std::string > agents, std::vector< std::string > actions,
                std::vector< std::string > props );

    StateId add_state( std::string name, PropSet label, std::optional< Owner > declared = std::nullopt );
    void set_initial( StateId s );
    // actions: one per agent, in agent order. Throws ModelError on duplicates.
    void set_transition( StateId s, const std::vector< int >& actions, StateId target );

    [[nodiscard]] std::size_t num_states() const { return _g._states.size(); }

    // Validates totality (no blocked states) and, when an agent named "env"
    // exists, the environment/system classification of every state.
    [[nodiscard]] Cgs build() &&;
};

[[nodiscard]] Cgs parse_cgs( std::string_view text );
[[nodiscard]] std::string render_cgs( const Cgs& g );

// Memoryless environment pruning: enabled successors per environment state.
struct Pruning
{
    std::map< StateId, std::vector< StateId > > enabled;

    friend bool operator==( const Pruning&, const Pruning& ) = default;
};

void validate_pruning( const Cgs& g, const Pruning& p );
[[nodiscard]] Cgs apply_pruning( const Cgs& g, const Pruning& p );

struct UnwindNode
{
    std::vector< StateId > track; // s0 . nu
    PropSet label = 0;
    std::vector< std::size_t > children;
};

// Prefix of Unw(G); node 0 is the root.
struct UnwoundTree
{
    std::vector< UnwindNode > nodes;
};

[[nodiscard]] UnwoundTree unwind_bounded( const Cgs& g, std::size_t depth );

[[nodiscard]] std::string decision_to_string( const Cgs& g, const Decision& d );

} // namespace modcheck
