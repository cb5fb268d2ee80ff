#pragma once

// Persistence: instances and reference solutions as JSON, parameters in the
// flat config schema, convergence traces as versioned CSV.

#include "proxsplit/apps.hpp"
#include "proxsplit/params.hpp"
#include "proxsplit/splitting.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

namespace proxsplit {

inline constexpr const char* kInstanceFormat = "proxsplit-instance v1";
inline constexpr const char* kReferenceFormat = "proxsplit-reference v1";
inline constexpr const char* kTraceHeader = "# proxsplit-trace v1";

nlohmann::json to_json(const OperatorParam& s);
/// Keys: kind, alpha, beta, d, N, K (only those relevant to the kind).
OperatorParam param_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BqpInstance& inst);
nlohmann::json to_json(const SrInstance& inst);

using AnyInstance = std::variant<BqpInstance, SrInstance>;
AnyInstance instance_from_json(const nlohmann::json& j);

template <typename Scalar>
nlohmann::json to_json(const ReferenceSolution<Scalar>& ref);
template <typename Scalar>
ReferenceSolution<Scalar> reference_from_json(const nlohmann::json& j);

/// Columns k, fp_residual_sq, opt_residual, mse, elapsed_ms. Values are
/// written with round-trip precision; mse is empty when not tracked.
void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace proxsplit
