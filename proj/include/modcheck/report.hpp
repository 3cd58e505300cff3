#pragma once

// Machine-readable run reports (JSON) and counterexample graphs (DOT).

#include "modcheck/cgs.hpp"
#include "modcheck/emptiness.hpp"
#include "modcheck/formula.hpp"
#include "modcheck/oracle.hpp"

#include <string>

namespace modcheck
{

struct ReportOptions
{
    bool timing = false; // wall-clock times make reports nondeterministic
    std::string counterexample_path;
};

[[nodiscard]] std::string check_report( const Cgs& g, const Formula& phi, const CheckOptions& options,
                                        const CheckResult& r, const ReportOptions& ro = {} );

// verdict is "resource-exceeded" or "error".
[[nodiscard]] std::string failure_report( const std::string& verdict, const std::string& message,
                                          const std::string& stage = {} );

[[nodiscard]] std::string oracle_report( const Cgs& g, const Formula& phi, const OracleVerdict& v );

// Product of g with the witness memory. Edges into successors the witness
// disables are drawn dashed to a pruned copy of the target.
[[nodiscard]] std::string witness_dot( const Cgs& g, const FiniteStrategyTree& w );

} // namespace modcheck
