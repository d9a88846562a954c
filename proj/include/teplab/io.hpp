#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ainfty.hpp"
#include "connection.hpp"

namespace teplab {

// Spec files are JSON with every scalar rendered as an exact string
// ("3/2+1/4*i"); serialization is deterministic (fixed key order, two-space
// indent, trailing newline) so that serialize(parse(f)) == f byte-wise for
// files we emitted ourselves.
using Json = nlohmann::ordered_json;

namespace iodetail {

inline Json scalar_json(const Scalar& s) { return Json(s.str()); }

inline Scalar scalar_from(const Json& j, const std::string& path) {
    if (!j.is_string())
        throw ParseError(path + ": scalar must be an exact string");
    try {
        return Scalar::parse(j.get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (size_t r = 0; r < m.rows(); r++) {
        Json row = Json::array();
        for (size_t c = 0; c < m.cols(); c++) row.push_back(scalar_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty())
        throw ParseError(path + ": expected a non-empty array of rows");
    size_t nr = j.size(), nc = j[0].size();
    Matrix m(nr, nc);
    for (size_t r = 0; r < nr; r++) {
        const Json& row = j[r];
        if (!row.is_array() || row.size() != nc)
            throw ParseError(path + "[" + std::to_string(r) + "]: ragged matrix");
        for (size_t c = 0; c < nc; c++)
            m(r, c) = scalar_from(row[c], path + "[" + std::to_string(r) + "][" +
                                              std::to_string(c) + "]");
    }
    return m;
}

inline Json parse_text(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline long int_from(const Json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw ParseError(path + ": expected an integer");
    return j.get<long>();
}

}  // namespace iodetail

// ---------------------------------------------------------------------------
// Connection spec: {rank, order, field, coefficients, pairing?, grading?}.
// coefficients[i] is the matrix of u^{i-2} in the connection form.
// ---------------------------------------------------------------------------
inline Json connection_to_json(const EStructure& E) {
    Json j;
    j["rank"] = E.rank;
    j["order"] = E.order();
    j["field"] = E.field == Field::Q ? "Q" : "QI";
    Json coeffs = Json::array();
    for (const auto& Ai : E.A) coeffs.push_back(iodetail::matrix_json(Ai));
    j["coefficients"] = std::move(coeffs);
    if (E.pol) {
        j["pairing"] = iodetail::matrix_json(E.pol->G);
        j["sesquilinear"] = E.pol->sesquilinear_values;
    }
    if (E.grading) j["grading"] = iodetail::matrix_json(E.grading->mu);
    return j;
}

inline EStructure connection_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("connection spec: expected an object");
    for (const char* key : {"rank", "order", "field", "coefficients"})
        if (!j.contains(key))
            throw ParseError(std::string("connection spec: missing key '") + key + "'");
    EStructure E;
    long rank = iodetail::int_from(j["rank"], "rank");
    long order = iodetail::int_from(j["order"], "order");
    if (rank < 1) throw ParseError("rank: must be >= 1");
    if (order < 0) throw ParseError("order: must be >= 0");
    E.rank = static_cast<size_t>(rank);
    std::string f = j["field"].is_string() ? j["field"].get<std::string>() : "";
    if (f == "Q")
        E.field = Field::Q;
    else if (f == "QI")
        E.field = Field::QI;
    else
        throw ParseError("field: expected \"Q\" or \"QI\"");
    const Json& coeffs = j["coefficients"];
    if (!coeffs.is_array() || coeffs.size() != static_cast<size_t>(order) + 1)
        throw ParseError("coefficients: expected order+1 matrices");
    for (size_t i = 0; i < coeffs.size(); i++) {
        Matrix Ai = iodetail::matrix_from(coeffs[i],
                                          "coefficients[" + std::to_string(i) + "]");
        if (Ai.rows() != E.rank || Ai.cols() != E.rank)
            throw ParseError("coefficients[" + std::to_string(i) + "]: wrong shape");
        if (E.field == Field::Q)
            for (size_t r = 0; r < E.rank; r++)
                for (size_t c = 0; c < E.rank; c++)
                    if (!Ai(r, c).is_real())
                        throw ParseError("coefficients[" + std::to_string(i) +
                                         "]: imaginary entry over field Q");
        E.A.push_back(std::move(Ai));
    }
    if (j.contains("pairing")) {
        Polarization p;
        p.G = iodetail::matrix_from(j["pairing"], "pairing");
        if (p.G.rows() != E.rank || p.G.cols() != E.rank)
            throw ParseError("pairing: wrong shape");
        if (j.contains("sesquilinear")) {
            if (!j["sesquilinear"].is_boolean())
                throw ParseError("sesquilinear: expected a boolean");
            p.sesquilinear_values = j["sesquilinear"].get<bool>();
        }
        E.pol = std::move(p);
    }
    if (j.contains("grading")) {
        GradingData g;
        g.mu = iodetail::matrix_from(j["grading"], "grading");
        if (g.mu.rows() != E.rank || g.mu.cols() != E.rank)
            throw ParseError("grading: wrong shape");
        E.grading = std::move(g);
    }
    return E;
}

// ---------------------------------------------------------------------------
// A-infinity spec: basis, Z/2 degrees, unit index, t-order M, sparse
// operation tables (curvature = the arity-0 entry), optional pairing.
// ---------------------------------------------------------------------------
inline Json ainfty_to_json(const AInfty& A) {
    Json j;
    j["basis"] = A.names;
    j["degrees"] = A.par;
    j["unit"] = A.unit;
    j["t_order"] = A.t_trunc;
    j["t_parity"] = A.t_parity;
    Json ops = Json::array();
    for (size_t k = 0; k < A.mtab.size(); k++)
        for (const auto& [in, val] : A.mtab[k]) {
            Json op;
            op["inputs"] = in;
            Json terms = Json::array();
            for (const auto& re : val) {
                Json term;
                term["c"] = iodetail::scalar_json(re.c);
                term["t"] = re.m.t;
                term["basis"] = re.b;
                terms.push_back(std::move(term));
            }
            op["value"] = std::move(terms);
            ops.push_back(std::move(op));
        }
    j["operations"] = std::move(ops);
    if (A.has_pairing) {
        j["pairing"] = iodetail::matrix_json(A.pairing);
        j["n"] = A.n_dim;
    }
    return j;
}

inline AInfty ainfty_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("algebra spec: expected an object");
    for (const char* key : {"basis", "degrees", "unit", "t_order", "operations"})
        if (!j.contains(key))
            throw ParseError(std::string("algebra spec: missing key '") + key + "'");
    AInfty A;
    if (!j["basis"].is_array() || j["basis"].empty())
        throw ParseError("basis: expected a non-empty array of names");
    for (const auto& n : j["basis"]) {
        if (!n.is_string()) throw ParseError("basis: names must be strings");
        A.names.push_back(n.get<std::string>());
    }
    if (!j["degrees"].is_array() || j["degrees"].size() != A.dim())
        throw ParseError("degrees: expected one Z/2 degree per basis element");
    for (const auto& d : j["degrees"]) {
        long v = iodetail::int_from(d, "degrees");
        if (v != 0 && v != 1) throw ParseError("degrees: entries must be 0 or 1");
        A.par.push_back(static_cast<int>(v));
    }
    long unit = iodetail::int_from(j["unit"], "unit");
    if (unit < 0 || unit >= static_cast<long>(A.dim()))
        throw ParseError("unit: index out of range");
    if (A.par[unit] != 0) throw ParseError("unit: the unit must be even");
    A.unit = static_cast<int>(unit);
    long M = iodetail::int_from(j["t_order"], "t_order");
    if (M < 1) throw ParseError("t_order: must be >= 1");
    A.t_trunc = static_cast<int>(M);
    if (j.contains("t_parity")) {
        long tp = iodetail::int_from(j["t_parity"], "t_parity");
        if (tp != 0 && tp != 1) throw ParseError("t_parity: must be 0 or 1");
        A.t_parity = static_cast<int>(tp);
    }
    const Json& ops = j["operations"];
    if (!ops.is_array()) throw ParseError("operations: expected an array");
    A.mtab.resize(3);
    for (size_t o = 0; o < ops.size(); o++) {
        std::string path = "operations[" + std::to_string(o) + "]";
        const Json& op = ops[o];
        if (!op.is_object() || !op.contains("inputs") || !op.contains("value"))
            throw ParseError(path + ": expected {inputs, value}");
        std::vector<int> in;
        for (const auto& i : op["inputs"]) {
            long b = iodetail::int_from(i, path + ".inputs");
            if (b < 0 || b >= static_cast<long>(A.dim()))
                throw ParseError(path + ".inputs: index out of range");
            in.push_back(static_cast<int>(b));
        }
        Elem val;
        for (const auto& term : op["value"]) {
            std::string tpath = path + ".value";
            if (!term.is_object() || !term.contains("c") || !term.contains("basis"))
                throw ParseError(tpath + ": expected {c, t?, basis}");
            RingElem re;
            re.c = iodetail::scalar_from(term["c"], tpath + ".c");
            re.m = Mono{};
            if (term.contains("t")) {
                long t = iodetail::int_from(term["t"], tpath + ".t");
                if (t < 0 || t >= M) throw ParseError(tpath + ".t: out of range");
                re.m.t = static_cast<int>(t);
            }
            long b = iodetail::int_from(term["basis"], tpath + ".basis");
            if (b < 0 || b >= static_cast<long>(A.dim()))
                throw ParseError(tpath + ".basis: index out of range");
            re.b = static_cast<int>(b);
            val.push_back(std::move(re));
        }
        if (A.lookup_m(in)) throw ParseError(path + ": duplicate operation entry");
        size_t arity = in.size();  // read before the move: evaluation order
        A.set_m(arity, std::move(in), std::move(val));
    }
    if (j.contains("pairing")) {
        A.pairing = iodetail::matrix_from(j["pairing"], "pairing");
        if (A.pairing.rows() != A.dim() || A.pairing.cols() != A.dim())
            throw ParseError("pairing: wrong shape");
        A.has_pairing = true;
        if (j.contains("n"))
            A.n_dim = static_cast<int>(iodetail::int_from(j["n"], "n"));
    }
    return A;
}

// ---------------------------------------------------------------------------
// Text-level entry points (the byte-exact round-trip surface).
// ---------------------------------------------------------------------------
inline std::string dump_spec(const Json& j) { return j.dump(2) + "\n"; }

inline std::string serialize_connection(const EStructure& E) {
    return dump_spec(connection_to_json(E));
}
inline std::string serialize_ainfty(const AInfty& A) {
    return dump_spec(ainfty_to_json(A));
}

inline EStructure parse_connection(const std::string& text,
                                   const std::string& where = "<input>") {
    return connection_from_json(iodetail::parse_text(text, where));
}
inline AInfty parse_ainfty(const std::string& text,
                           const std::string& where = "<input>") {
    return ainfty_from_json(iodetail::parse_text(text, where));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

inline EStructure load_connection(const std::string& path) {
    return parse_connection(read_file(path), path);
}
inline AInfty load_ainfty(const std::string& path) {
    return parse_ainfty(read_file(path), path);
}

}  // namespace teplab
