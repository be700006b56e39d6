#include "qpolar/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qpolar/catalog.hpp"
#include "qpolar/certify.hpp"
#include "qpolar/matfun.hpp"
#include "qpolar/polar.hpp"
#include "qpolar/singular.hpp"

namespace qpolar {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void dump_value(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_value(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump_value(v, out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

struct ResolvedInput {
    QuadraticSymbol symbol;
    std::string source;
    std::vector<std::string> warnings;
};

ResolvedInput resolve_input(const CommandOptions& options) {
    if (options.example && options.input_path)
        throw InputError("give either --input or --example, not both");
    ResolvedInput in;
    if (options.example) {
        in.symbol = find_example(*options.example).symbol;
        in.source = "example:" + *options.example;
    } else if (options.input_path) {
        SymbolDocument doc = load_symbol_document(*options.input_path);
        in.symbol = to_symbol(doc);
        in.warnings = doc.warnings;
        in.source = "file:" + *options.input_path;
    } else {
        throw InputError("an input is required (--input PATH or --example NAME)");
    }
    return in;
}

json report_header(const char* command, const ResolvedInput& in,
                   const CommandOptions& options) {
    json j;
    j["command"] = command;
    j["version"] = kToolVersion;
    j["seed"] = options.seed;
    j["digest"] = input_digest(in.symbol);
    j["source"] = in.source;
    j["params"]["rank_tol"] = options.rank_tol;
    j["params"]["res_tol"] = options.res_tol;
    if (!in.warnings.empty()) j["warnings"] = in.warnings;
    return j;
}

std::vector<double> resolve_times(const CommandOptions& options) {
    if (options.t && options.t_grid)
        throw InputError("give either --t or --t-grid, not both");
    if (options.t) return {*options.t};
    if (options.t_grid) return parse_t_grid(*options.t_grid);
    throw InputError("a time is required (--t X or --t-grid SPEC)");
}

json direction_to_json(const RVec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

SymbolDocument load_symbol_document(const std::string& path) {
    std::ifstream stream(path);
    if (!stream) throw InputError("cannot open input file '" + path + "'");
    json j;
    try {
        stream >> j;
    } catch (const json::exception& e) {
        throw InputError("malformed symbol document: " + std::string(e.what()));
    }
    return symbol_document_from_json(j);
}

SymbolDocument symbol_document_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("Q_re"))
        throw InputError("symbol document needs fields 'n' and 'Q_re'");
    SymbolDocument doc;
    doc.n = j.at("n").get<int>();
    if (doc.n < 1) throw InputError("symbol document: n must be >= 1");
    const int dim = 2 * doc.n;

    auto parse_matrix = [dim](const json& rows, const char* name) {
        if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
            throw InputError(std::string("symbol document: ") + name +
                             " must be a 2n x 2n array");
        RMat m(dim, dim);
        for (int i = 0; i < dim; ++i) {
            const json& row = rows.at(i);
            if (!row.is_array() || static_cast<int>(row.size()) != dim)
                throw InputError(std::string("symbol document: ") + name +
                                 " must be a 2n x 2n array");
            for (int k = 0; k < dim; ++k) m(i, k) = row.at(k).get<double>();
        }
        return m;
    };

    doc.Q_re = parse_matrix(j.at("Q_re"), "Q_re");
    doc.Q_im = j.contains("Q_im") ? parse_matrix(j.at("Q_im"), "Q_im")
                                  : RMat::Zero(dim, dim);

    const double scale =
        std::max({1.0, spectral_norm(doc.Q_re), spectral_norm(doc.Q_im)});
    const double asym = std::max(
        spectral_norm(RMat(doc.Q_re - doc.Q_re.transpose())),
        spectral_norm(RMat(doc.Q_im - doc.Q_im.transpose())));
    if (asym > 1e-9 * scale)
        throw InputError("symbol document: Q is not symmetric within 1e-9");
    if (asym > 1e-12 * scale)
        doc.warnings.push_back("Q symmetrized (asymmetry above 1e-12)");
    doc.Q_re = 0.5 * (doc.Q_re + doc.Q_re.transpose()).eval();
    doc.Q_im = 0.5 * (doc.Q_im + doc.Q_im.transpose()).eval();
    return doc;
}

QuadraticSymbol to_symbol(const SymbolDocument& doc) {
    return QuadraticSymbol::make(
        doc.n, doc.Q_re.cast<Complex>() +
                   Complex(0.0, 1.0) * doc.Q_im.cast<Complex>());
}

std::string input_digest(const QuadraticSymbol& q) {
    std::string text = std::to_string(q.n);
    for (Eigen::Index i = 0; i < q.Q.rows(); ++i)
        for (Eigen::Index j = 0; j < q.Q.cols(); ++j) {
            text += format_double(q.Q(i, j).real());
            text += ',';
            text += format_double(q.Q(i, j).imag());
            text += ';';
        }
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string dump_json17(const json& j) {
    std::string out;
    dump_value(j, out);
    return out;
}

json matrix_to_json(const RMat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

json matrix_to_json(const CMat& m) {
    json j;
    j["re"] = matrix_to_json(RMat(m.real()));
    j["im"] = matrix_to_json(RMat(m.imag()));
    return j;
}

std::vector<double> parse_t_grid(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw InputError("t-grid must look like start:stop:N[log|lin]");
    double start = 0.0, stop = 0.0;
    long count = 0;
    bool logarithmic = true;
    try {
        start = std::stod(spec.substr(0, first));
        stop = std::stod(spec.substr(first + 1, second - first - 1));
        std::string tail = spec.substr(second + 1);
        if (tail.size() >= 3 && tail.substr(tail.size() - 3) == "log") {
            tail = tail.substr(0, tail.size() - 3);
        } else if (tail.size() >= 3 && tail.substr(tail.size() - 3) == "lin") {
            logarithmic = false;
            tail = tail.substr(0, tail.size() - 3);
        }
        count = std::stol(tail);
    } catch (const std::exception&) {
        throw InputError("t-grid must look like start:stop:N[log|lin]");
    }
    if (count < 2 || !(start > 0.0) || !(stop > start))
        throw InputError("t-grid needs 0 < start < stop and N >= 2");
    std::vector<double> grid(count);
    for (long i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        grid[i] = logarithmic
                      ? std::exp(std::log(start) +
                                 f * (std::log(stop) - std::log(start)))
                      : start + f * (stop - start);
    }
    return grid;
}

std::vector<RVec> load_directions(const std::string& path, Eigen::Index dim) {
    std::ifstream stream(path);
    if (!stream) throw InputError("cannot open directions file '" + path + "'");
    json j;
    try {
        stream >> j;
    } catch (const json::exception& e) {
        throw InputError("malformed directions file: " + std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("directions") ||
        !j.at("directions").is_array())
        throw InputError("directions file needs a 'directions' array");
    std::vector<RVec> out;
    for (const auto& entry : j.at("directions")) {
        if (!entry.is_array() || static_cast<Eigen::Index>(entry.size()) != dim)
            throw InputError("each direction must have 2n entries");
        RVec v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v(i) = entry.at(i).get<double>();
        out.push_back(v);
    }
    return out;
}

CommandResult cmd_analyze(const CommandOptions& options) {
    const ResolvedInput in = resolve_input(options);
    const SingularSpaceInfo info = singular_space(in.symbol, options.rank_tol);
    const StabilityReport stability = check_singular_stability(in.symbol, info);

    CommandResult result;
    json& j = result.report;
    j = report_header("analyze", in, options);
    j["results"]["k0"] = info.k0;
    j["results"]["dim_S"] = static_cast<int>(info.dim_S());
    json dims = json::array();
    for (const RMat& vk : info.Vk_bases)
        dims.push_back(static_cast<int>(vk.cols()));
    j["results"]["Vk_dims"] = dims;
    j["results"]["S_basis"] = matrix_to_json(info.S_basis);
    j["results"]["stability"]["reF_residual"] = stability.reF_residual;
    j["results"]["stability"]["imF_residual"] = stability.imF_residual;

    if (options.directions_path) {
        json rows = json::array();
        for (const RVec& x0 :
             load_directions(*options.directions_path, in.symbol.dim())) {
            json row;
            row["direction"] = direction_to_json(x0);
            try {
                row["index"] = index_of(info, x0);
                row["in_Sperp"] = true;
            } catch (const NotInSperp&) {
                row["in_Sperp"] = false;
            }
            rows.push_back(row);
        }
        j["results"]["directions"] = rows;
    }
    j["pass"] = true;
    return result;
}

CommandResult cmd_decompose(const CommandOptions& options) {
    const ResolvedInput in = resolve_input(options);
    const std::vector<double> times = resolve_times(options);

    CommandResult result;
    json& j = result.report;
    j = report_header("decompose", in, options);
    bool all_ok = true;
    json entries = json::array();
    for (double t : times) {
        const PolarFactors f = polar_factors(in.symbol, t);
        const MehlerSymbol mehler = mehler_symbol(in.symbol, t);
        json e;
        e["t"] = t;
        e["within_validity"] = f.within_validity;
        e["A"] = matrix_to_json(f.A);
        e["M"] = matrix_to_json(f.M);
        e["H"] = matrix_to_json(f.H);
        if (f.B) e["B"] = matrix_to_json(*f.B);
        e["mehler_prefactor"] = mehler.prefactor;
        json res;
        for (const auto& [key, value] : f.residuals) res[key] = value;
        e["residuals"] = res;

        bool ok = true;
        for (const char* key :
             {"factorization", "psd_gap", "tan_identity", "integral_rep"}) {
            const auto it = f.residuals.find(key);
            if (it != f.residuals.end() && it->second > options.res_tol)
                ok = false;
        }
        e["pass"] = ok;
        all_ok = all_ok && ok;
        entries.push_back(e);
    }
    j["results"]["factors"] = entries;
    j["pass"] = all_ok;
    result.exit_code = all_ok ? 0 : 2;
    return result;
}

CommandResult cmd_certify(const CommandOptions& options) {
    const ResolvedInput in = resolve_input(options);
    std::vector<double> grid = options.t_grid
                                   ? parse_t_grid(*options.t_grid)
                                   : parse_t_grid("1e-3:1e-1:12log");
    if (options.t) throw InputError("certify takes --t-grid, not --t");
    const SingularSpaceInfo info = singular_space(in.symbol, options.rank_tol);
    std::vector<RVec> directions;
    if (options.directions_path)
        directions = load_directions(*options.directions_path, in.symbol.dim());
    const BoundCertificate cert = certify_lower_bound(
        in.symbol, info, grid, directions, options.rank_tol);

    CommandResult result;
    json& j = result.report;
    j = report_header("certify", in, options);
    j["results"]["t_grid"] = grid;
    j["results"]["c_values"] = cert.c_values;
    j["results"]["c_min_observed"] = cert.c_min_observed;
    j["results"]["k0"] = cert.k0;
    j["results"]["decay_suspected"] = cert.decay_suspected;
    j["results"]["coercivity"]["slope"] = cert.coercivity.slope;
    j["results"]["coercivity"]["half_width"] = cert.coercivity.half_width;
    j["results"]["coercivity"]["rms_residual"] = cert.coercivity.rms_residual;
    json dir_rows = json::array();
    for (const DirectionBound& d : cert.direction_results) {
        json row;
        row["direction"] = direction_to_json(d.x0);
        row["index"] = d.index;
        row["sup_kappa"] = d.sup_kappa;
        row["sup_a"] = d.sup_a;
        row["slope_kappa"] = d.slope_kappa;
        row["slope_a"] = d.slope_a;
        dir_rows.push_back(row);
    }
    j["results"]["directions"] = dir_rows;
    j["pass"] = cert.pass;
    result.exit_code = cert.pass ? 0 : 2;

    if (options.format == "csv") {
        std::string csv = "t,c,eigmin_gap,residual_a\n";
        for (size_t i = 0; i < grid.size(); ++i) {
            const RMat a = a_matrix(in.symbol, grid[i]);
            const RMat k = kappa_matrix(in.symbol, info, grid[i]);
            const RVec eigs = pencil_eigenvalues(a, k, options.rank_tol);
            const double gap = eigs.size() > 1 ? eigs(1) - eigs(0) : 0.0;
            const PolarFactors f = polar_factors(in.symbol, grid[i]);
            csv += format_double(grid[i]) + "," +
                   format_double(cert.c_values[i]) + "," +
                   format_double(gap) + "," +
                   format_double(f.residuals.at("k_vs_exp_a")) + "\n";
        }
        result.csv = csv;
    }
    return result;
}

CommandResult cmd_report(const CommandOptions& options) {
    const ResolvedInput in = resolve_input(options);
    const SingularSpaceInfo info = singular_space(in.symbol, options.rank_tol);

    CommandResult result;
    json& j = result.report;
    j = report_header("report", in, options);

    json sub_rows = json::array();
    for (const SubellipticRow& row : subelliptic_report(in.symbol, info)) {
        json r;
        r["k"] = row.k;
        r["exponent"] = row.exponent;
        r["p_k"] = matrix_to_json(row.pk);
        sub_rows.push_back(r);
    }
    j["results"]["subelliptic"] = sub_rows;
    j["results"]["k0"] = info.k0;

    std::vector<RVec> directions;
    bool canonical = false;
    if (options.directions_path) {
        directions = load_directions(*options.directions_path, in.symbol.dim());
    } else {
        // Default: canonical basis vectors that lie in S^perp.
        canonical = true;
        for (Eigen::Index i = 0; i < in.symbol.dim(); ++i) {
            RVec e = RVec::Zero(in.symbol.dim());
            e(i) = 1.0;
            try {
                index_of(info, e);
                directions.push_back(e);
            } catch (const NotInSperp&) {
            }
        }
    }
    const SmoothingTable table = smoothing_exponents(in.symbol, info, directions);
    json rows = json::array();
    for (const SmoothingRow& row : table.rows) {
        json r;
        r["direction"] = direction_to_json(row.x0);
        r["index"] = row.index;
        r["blowup_exponent"] = row.index + 0.5;
        rows.push_back(r);
    }
    j["results"]["smoothing"]["rows"] = rows;
    j["results"]["smoothing"]["total_exponent"] = table.total_exponent;
    j["results"]["smoothing"]["canonical_directions"] = canonical;
    j["pass"] = true;
    return result;
}

}  // namespace qpolar
