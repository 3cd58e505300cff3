#pragma once

// Brute-force reference machinery: memoryless pruning enumeration, fixpoint
// ATL model checking, and exhaustive module checking over memoryless
// environments.

#include "modcheck/bitset.hpp"
#include "modcheck/cgs.hpp"
#include "modcheck/formula.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace modcheck
{

inline constexpr std::size_t kDefaultPruningCap = std::size_t{ 1 } << 20;

// Saturates at SIZE_MAX.
[[nodiscard]] std::size_t count_prunings( const Cgs& g );

// Product over environment states (first state most significant) of the
// nonempty successor subsets, each in increasing bitmask order over the
// sorted successor list. Stops early when f returns false. Throws
// ResourceError("prunings", cap) when the count exceeds the cap.
void for_each_pruning( const Cgs& g, const std::function< bool( const Pruning& ) >& f,
                       std::size_t cap = kDefaultPruningCap );
[[nodiscard]] std::vector< Pruning > enumerate_prunings( const Cgs& g, std::size_t cap = kDefaultPruningCap );

// Controllable predecessor: states with an available A-decision all of whose
// outcomes lie in z.
[[nodiscard]] Bitset pre( const Cgs& g, AgentSet coalition, const Bitset& z );

// Satisfaction set of an ATL state formula. Quantified path formulas may be
// X, U, R (F, G desugared) or negations thereof. Throws ModelError otherwise.
[[nodiscard]] Bitset fixpoint_model_check( const Cgs& g, const Formula& phi );

struct OracleVerdict
{
    std::optional< Pruning > violation;
    std::size_t prunings_checked = 0;

    [[nodiscard]] bool violation_found() const { return violation.has_value(); }
};

[[nodiscard]] OracleVerdict oracle_module_check( const Cgs& g, const Formula& phi,
                                                 std::size_t cap = kDefaultPruningCap );

} // namespace modcheck
