#pragma once

#include "evpos/lattice.hpp"
#include "evpos/matrix.hpp"
#include "evpos/operators.hpp"

#include <string>
#include <string_view>

#include "json.hpp"

namespace evpos {

inline constexpr std::string_view model_schema_version = "evpos-model/1";

// Every reader rejects unknown fields and throws SchemaError naming the
// offending path, e.g. "model.functions[1].exponent".

/// Parses JSON text; syntax errors report "line L, column C".
[[nodiscard]] nlohmann::json parse_json_text(const std::string& text,
                                             const std::string& source = "input");
/// Reads and parses a file; an unreadable file is a SchemaError on its path.
[[nodiscard]] nlohmann::json read_json_file(const std::string& path);

/// A number (real) or a [re, im] pair.
[[nodiscard]] Complex complex_from_json(const nlohmann::json& j, const std::string& where);
[[nodiscard]] nlohmann::json complex_to_json(Complex z);
[[nodiscard]] CVector cvector_from_json(const nlohmann::json& j, const std::string& where);
[[nodiscard]] nlohmann::json cvector_to_json(std::span<const Complex> v);

/// {"n": N, "entries": [[re, im], ...]} row-major, N * N entries.
[[nodiscard]] ComplexMatrix matrix_from_json(const nlohmann::json& j,
                                             const std::string& where = "matrix");
[[nodiscard]] nlohmann::json matrix_to_json(const ComplexMatrix& a);

/// {"kind": "ell1" | "ell2" | "ell_inf"}, {"kind": "lp_quadrature", "p", "nodes", "weights"},
/// {"kind": "lp_midpoint", "p", "cells"}, {"kind": "grid_sup", "nodes"},
/// {"kind": "grid_sup_uniform", "count"}.
[[nodiscard]] Norm norm_from_json(const nlohmann::json& j, const std::string& where = "norm");
[[nodiscard]] nlohmann::json norm_to_json(const Norm& norm);

[[nodiscard]] FunctionRep function_from_json(const nlohmann::json& j, const std::string& where);
[[nodiscard]] nlohmann::json function_to_json(const FunctionRep& f);
[[nodiscard]] FunctionalRep functional_from_json(const nlohmann::json& j,
                                                 const std::string& where);
[[nodiscard]] nlohmann::json functional_to_json(const FunctionalRep& phi);

/// Model descriptor: {"kind": "dense" | "rank_k" | "diagonal" | "weighted_shift", ...};
/// a bare matrix object {"n", "entries"} is read as a dense model on ell1.
[[nodiscard]] OperatorModel model_from_json(const nlohmann::json& j,
                                            const std::string& where = "model");
[[nodiscard]] nlohmann::json model_to_json(const OperatorModel& t);

/// A list of entries or {"entries": [...]}; the length must equal `dim`.
[[nodiscard]] LatticeVector vector_from_json(const nlohmann::json& j, const Norm& norm,
                                             std::size_t dim,
                                             const std::string& where = "vector");

}  // namespace evpos
