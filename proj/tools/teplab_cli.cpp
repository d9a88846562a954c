// Batch front end: parse spec files, run decompositions / solvers /
// verifications, emit exact reports.  Output is deterministic; identical
// inputs produce byte-identical reports.  Failures exit nonzero with a
// machine-readable error object on stderr.
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "teplab/identities.hpp"
#include "teplab/io.hpp"
#include "teplab/quantum.hpp"

using namespace teplab;

namespace {

std::string g_out;  // empty = stdout

void emit(const std::string& text) {
    if (g_out.empty())
        std::cout << text;
    else
        write_file(g_out, text);
}

void emit(const Json& j) { emit(dump_spec(j)); }

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    return read_file(path);
}

Json series_json(const MatrixSeries& s) {
    Json arr = Json::array();
    for (size_t k = 0; k < s.size(); k++) arr.push_back(iodetail::matrix_json(s[k]));
    return arr;
}

// Display-only decimal rendition; never used in any comparison.
Json decimal_json(const Matrix& m) {
    Json rows = Json::array();
    for (size_t r = 0; r < m.rows(); r++) {
        Json row = Json::array();
        for (size_t c = 0; c < m.cols(); c++) {
            const Scalar& s = m(r, c);
            std::ostringstream ss;
            ss << s.re().get_d();
            if (!s.is_real()) ss << (s.im() > 0 ? "+" : "") << s.im().get_d() << "i";
            row.push_back(ss.str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Field parse_field(const std::string& f) {
    if (f == "Q") return Field::Q;
    if (f == "QI") return Field::QI;
    throw ParseError("--field: expected Q or QI");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"E-structure and Hochschild laboratory"};
    app.require_subcommand(1);

    // preset
    std::string preset_name, field_opt;
    size_t order = 8, lookahead = 2;
    auto* cmd_preset = app.add_subcommand("preset", "emit a connection spec for a named preset");
    cmd_preset->add_option("name", preset_name)->required();
    cmd_preset->add_option("--order", order);
    cmd_preset->add_option("--field", field_opt);
    cmd_preset->add_option("--out", g_out);

    // decompose
    std::string input;
    bool have_order = false;
    auto* cmd_dec = app.add_subcommand("decompose", "eigenvalue block decomposition");
    cmd_dec->add_option("input", input);
    cmd_dec->add_option("--order", order)->each([&](const std::string&) { have_order = true; });
    cmd_dec->add_option("--field", field_opt);
    cmd_dec->add_option("--out", g_out);

    // flatten
    auto* cmd_flat = app.add_subcommand("flatten", "flatten a scalar-residue block to w/u^2");
    cmd_flat->add_option("input", input);
    cmd_flat->add_option("--order", order)->each([&](const std::string&) { have_order = true; });
    cmd_flat->add_option("--field", field_opt);
    cmd_flat->add_option("--out", g_out);

    // semisimplify
    auto* cmd_ss = app.add_subcommand("semisimplify", "isomorphism to a direct sum of E^{-w/u}");
    cmd_ss->add_option("input", input);
    cmd_ss->add_option("--order", order)->each([&](const std::string&) { have_order = true; });
    cmd_ss->add_option("--field", field_opt);
    cmd_ss->add_option("--out", g_out);

    // rmatrix
    std::string convention = "teleman";
    bool decimal = false;
    auto* cmd_rm = app.add_subcommand("rmatrix", "R-matrix of a quantum preset");
    cmd_rm->add_option("--preset", preset_name)->required();
    cmd_rm->add_option("--order", order);
    cmd_rm->add_option("--convention", convention)
        ->check(CLI::IsMember({"teleman", "grading"}));
    cmd_rm->add_flag("--decimal", decimal, "attach display-only decimal rendition");
    cmd_rm->add_option("--out", g_out);

    // solve-isomorphism
    std::string from_path, to_path;
    auto* cmd_iso = app.add_subcommand("solve-isomorphism",
                                       "formal isomorphism between two connections");
    cmd_iso->add_option("--from", from_path)->required();
    cmd_iso->add_option("--to", to_path)->required();
    cmd_iso->add_option("--order", order);
    cmd_iso->add_option("--lookahead", lookahead);
    cmd_iso->add_option("--out", g_out);

    // verify-identities
    std::string algebra_path;
    int trials = 100, maxlen = 4;
    unsigned seed = 12345;
    auto* cmd_vi = app.add_subcommand("verify-identities",
                                      "randomized chain-level identity suite");
    cmd_vi->add_option("--algebra", algebra_path)->required();
    cmd_vi->add_option("--trials", trials);
    cmd_vi->add_option("--maxlen", maxlen);
    cmd_vi->add_option("--seed", seed);
    cmd_vi->add_option("--out", g_out);

    // check-polarization
    auto* cmd_pol = app.add_subcommand("check-polarization",
                                       "covariant constancy of the pairing");
    cmd_pol->add_option("input", input);
    cmd_pol->add_option("--preset", preset_name);
    cmd_pol->add_option("--order", order)->each([&](const std::string&) { have_order = true; });
    cmd_pol->add_option("--out", g_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_preset) {
            QuantumEStructure q = build_quantum(preset(preset_name), order);
            if (!field_opt.empty()) q.E.field = parse_field(field_opt);
            emit(serialize_connection(q.E));
        } else if (*cmd_dec) {
            EStructure E = parse_connection(read_input(input), input.empty() ? "<stdin>" : input);
            if (!field_opt.empty()) E.field = parse_field(field_opt);
            size_t N = have_order ? order : E.order();
            BlockDecomposition bd = block_diagonalize(E, N);
            Json j;
            j["order"] = N;
            j["gauge"] = series_json(bd.P);
            Json blocks = Json::array();
            for (size_t i = 0; i < bd.sub.size(); i++) {
                Json blk;
                blk["eigenvalue"] = bd.eigen.blocks[i].w.str();
                blk["rank"] = bd.eigen.blocks[i].mult;
                blk["connection"] = connection_to_json(bd.sub[i]);
                blocks.push_back(std::move(blk));
            }
            j["blocks"] = std::move(blocks);
            emit(j);
        } else if (*cmd_flat) {
            EStructure E = parse_connection(read_input(input), input.empty() ? "<stdin>" : input);
            if (!field_opt.empty()) E.field = parse_field(field_opt);
            size_t N = have_order ? order : E.order();
            FlattenResult f = flatten_scalar_block(E, N);
            Json j;
            j["w"] = f.w.str();
            j["certified"] = f.certificate_ok;
            j["gauge"] = series_json(f.Q);
            emit(j);
        } else if (*cmd_ss) {
            EStructure E = parse_connection(read_input(input), input.empty() ? "<stdin>" : input);
            if (!field_opt.empty()) E.field = parse_field(field_opt);
            size_t N = have_order ? order : E.order();
            SemisimplifyResult s = semisimplify(E, N);
            Json j;
            Json ws = Json::array();
            for (const auto& w : s.weights) ws.push_back(w.str());
            j["weights"] = std::move(ws);
            j["certified"] = s.certificate_ok;
            j["gauge"] = series_json(s.gauge);
            emit(j);
        } else if (*cmd_rm) {
            QuantumEStructure q = build_quantum(preset(preset_name), order);
            TelemanResult tr = teleman_rmatrix(q, order);
            MatrixSeries R = tr.R;
            if (convention == "grading") {
                Matrix xi = tr.eigen.C.inverse() * q.E.residue() * tr.eigen.C;
                R = rmatrix_from_grading(xi, tr.mu_eigen, order, q.E.field);
            }
            Json j;
            j["preset"] = preset_name;
            j["convention"] = convention;
            j["order"] = order;
            Json evs = Json::array();
            for (const auto& b : tr.eigen.blocks) evs.push_back(b.w.str());
            j["eigenvalues"] = std::move(evs);
            j["frame"] = iodetail::matrix_json(tr.eigen.C);
            j["coefficients"] = series_json(R);
            if (decimal) {
                Json d;
                d["note"] = "approximate decimal rendition, display only";
                Json arr = Json::array();
                for (size_t k = 0; k < R.size(); k++) arr.push_back(decimal_json(R[k]));
                d["coefficients"] = std::move(arr);
                j["decimal_display"] = std::move(d);
            }
            emit(j);
        } else if (*cmd_iso) {
            EStructure E1 = load_connection(from_path);
            EStructure E2 = load_connection(to_path);
            IsomorphismSolution sol = isomorphism_solve_full(E1, E2, order, lookahead);
            if (sol.kernel_dim != 0)
                throw NonUnique("solution space has dimension " +
                                std::to_string(sol.kernel_dim));
            Json j;
            j["order"] = order;
            j["lookahead"] = lookahead;
            j["kernel_dimension"] = sol.kernel_dim;
            j["R"] = series_json(sol.R);
            emit(j);
        } else if (*cmd_vi) {
            AInfty A = load_ainfty(algebra_path);
            SuiteOptions opt;
            opt.trials = trials;
            opt.maxlen = maxlen;
            opt.seed = seed;
            opt.arity_cap = std::min(kArityCap, static_cast<size_t>(maxlen) + 1);
            IdentityReport rep;
            identity_suite(A, algebra_path, opt, rep);
            Json j;
            j["algebra"] = algebra_path;
            j["trials"] = trials;
            j["maxlen"] = maxlen;
            j["seed"] = seed;
            Json ids = Json::array();
            for (const auto& [name, tally] : rep.items) {
                Json it;
                it["name"] = name;
                it["checks"] = tally.checks;
                it["failures"] = tally.failures;
                if (tally.failures) it["witness"] = tally.first_witness;
                ids.push_back(std::move(it));
            }
            j["identities"] = std::move(ids);
            j["pass"] = rep.pass();
            emit(j);
            return rep.pass() ? 0 : 1;
        } else if (*cmd_pol) {
            EStructure E;
            if (!preset_name.empty()) {
                E = build_quantum(preset(preset_name), order).E;
            } else {
                E = parse_connection(read_input(input), input.empty() ? "<stdin>" : input);
                if (have_order && order + 1 < E.A.size()) E.A.resize(order + 1);
            }
            PolarizationReport r = check_polarization(E);
            Json j;
            j["pass"] = r.pass;
            j["first_failing_order"] = r.first_failing_order;
            emit(j);
            return r.pass ? 0 : 1;
        }
    } catch (const Error& e) {
        Json err;
        err["error"]["code"] = e.code();
        err["error"]["message"] = e.what();
        std::cerr << dump_spec(err);
        return 1;
    }
    return 0;
}
