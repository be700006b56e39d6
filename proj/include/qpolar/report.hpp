#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpolar/symbols.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

inline constexpr const char* kToolVersion = "qpolar 1.0.0";

/// On-disk symbol document: n plus row-major real/imaginary parts of Q.
/// Complex numbers never appear raw in the format.
struct SymbolDocument {
    int n = 0;
    RMat Q_re;
    RMat Q_im;
    std::vector<std::string> warnings;
};

SymbolDocument load_symbol_document(const std::string& path);
SymbolDocument symbol_document_from_json(const nlohmann::json& j);
QuadraticSymbol to_symbol(const SymbolDocument& doc);

/// FNV-1a digest of the canonical text form of a symbol.
std::string input_digest(const QuadraticSymbol& q);

/// Deterministic JSON serialization: keys sorted, floats printed with 17
/// significant digits, no locale dependence. Byte-identical across runs.
std::string dump_json17(const nlohmann::json& j);

nlohmann::json matrix_to_json(const RMat& m);
nlohmann::json matrix_to_json(const CMat& m);

struct CommandOptions {
    std::optional<std::string> input_path;
    std::optional<std::string> example;
    std::optional<double> t;
    std::optional<std::string> t_grid;  // "start:stop:N[log|lin]"
    double rank_tol = 1e-9;
    double res_tol = 1e-8;
    std::uint64_t seed = 0;
    std::string format = "json";  // json | csv
    std::optional<std::string> directions_path;
};

struct CommandResult {
    nlohmann::json report;
    std::string csv;  // filled by certify when format == csv
    int exit_code = 0;
};

std::vector<double> parse_t_grid(const std::string& spec);
std::vector<RVec> load_directions(const std::string& path, Eigen::Index dim);

CommandResult cmd_analyze(const CommandOptions& options);
CommandResult cmd_decompose(const CommandOptions& options);
CommandResult cmd_certify(const CommandOptions& options);
CommandResult cmd_report(const CommandOptions& options);

}  // namespace qpolar
