// Command-line driver for the generalized mirror transformation pipeline:
// I-function -> small connection -> Birkhoff/canonical frame -> big
// reconstruction -> flat coordinates -> product/GW tables.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdm/bigrecon.hpp"
#include "qdm/birkhoff.hpp"
#include "qdm/connection.hpp"
#include "qdm/geometry.hpp"
#include "qdm/ifunction.hpp"
#include "qdm/json_io.hpp"
#include "qdm/mirrormap.hpp"

namespace {

using namespace qdm;

const std::vector<std::string> kStageOrder = {
    "ifunction", "connection", "canonical", "reconstruct",
    "products",  "gw",         "verify"};

int stage_rank(const std::string& s) {
    for (size_t i = 0; i < kStageOrder.size(); ++i)
        if (kStageOrder[i] == s) return static_cast<int>(i);
    throw ConfigError("unknown stage: " + s);
}

GeometryInput parse_builtin(const std::string& spec) {
    // builtin:P<n>[/O(k1),O(k2),...]
    const std::string body = spec.substr(8);
    if (body.empty() || (body[0] != 'P' && body[0] != 'p'))
        throw ConfigError("builtin geometries have the form builtin:P<n>[/O(k),...]");
    size_t slash = body.find('/');
    int n = 0;
    try {
        n = std::stoi(body.substr(1, slash == std::string::npos
                                         ? std::string::npos
                                         : slash - 1));
    } catch (const std::exception&) {
        throw ConfigError("could not parse projective dimension in " + spec);
    }
    std::vector<int> twists;
    if (slash != std::string::npos) {
        std::string rest = body.substr(slash + 1);
        std::istringstream is(rest);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.size() < 4 || (tok[0] != 'O' && tok[0] != 'o') ||
                tok[1] != '(' || tok.back() != ')')
                throw ConfigError("bundle summands have the form O(k): " + tok);
            try {
                twists.push_back(std::stoi(tok.substr(2, tok.size() - 3)));
            } catch (const std::exception&) {
                throw ConfigError("could not parse twist in " + tok);
            }
        }
    }
    if (n < 1) throw ConfigError("projective dimension must be >= 1");
    return projective_space(n, twists);
}

GeometryInput load(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return parse_builtin(spec);
    std::ifstream in(spec);
    if (!in) throw ConfigError("cannot open geometry file: " + spec);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_geometry(buf.str());
}

struct Options {
    std::string geometry;
    int q_order = 6;
    int t_order = 5;
    std::vector<int> weights;
    std::string lambda = "zero";
    std::string mode = "reduced";
    std::string format = "json";
    std::string stages = "all";
    std::string out_dir;
    bool oracle = false;
    bool locus = false;
};

struct Pipeline {
    GeometryInput geom;
    SeriesContext ctx;
    LambdaMode lmode = LambdaMode::Zero;
    ReconMode rmode = ReconMode::Reduced;
    int t_order = 0;

    std::optional<CohVectorSeries> ifn;
    std::optional<MatrixSeries> frame;
    std::optional<SmallConnection> conn;
    std::optional<BirkhoffFactors> factors;
    std::optional<std::vector<MatrixSeries>> canon;
    std::optional<CohVectorSeries> jfun;
    std::optional<BigConnection> big;
    std::optional<MirrorMap> mirror;
    std::optional<QuantumProductTable> table;
    std::optional<GwReport> gw;

    void run_ifunction() {
        if (ifn) return;
        ifn = i_function(geom, ctx, lmode);
    }
    void run_connection() {
        run_ifunction();
        if (conn) return;
        frame = frame_columns(geom, *ifn);
        conn = connection_from_frame(geom, *frame);
        if (geom.r > 1) conn->check_flatness();
    }
    void run_canonical() {
        run_connection();
        if (canon) return;
        factors = birkhoff_factorize(*frame);
        canon = canonical_connection(*conn, *factors);
        jfun = canonical_j(*factors, geom);
    }
    void run_reconstruct() {
        run_canonical();
        if (big) return;
        big = reconstruct_big(*canon, geom.presentation, t_order, rmode);
    }
    void run_products() {
        run_reconstruct();
        if (table) return;
        mirror = mirror_map(*canon, geom.presentation);
        table = flat_products(*big, *mirror);
    }
    void run_gw() {
        run_products();
        if (gw) return;
        int k = 0;
        if (geom.bundle_rows.size() == 1 && geom.bundle_rows[0].size() == 1)
            k = geom.bundle_rows[0][0];
        if (k < 1)
            throw ConfigError("GW extraction needs a single O(k) twist with k >= 1");
        gw = gw_extract(*table, geom.presentation, k);
    }
};

struct VerifyFailure {
    std::string name;
    std::string witness;
};

std::vector<VerifyFailure> verify(Pipeline& p, bool oracle) {
    std::vector<VerifyFailure> fails;
    auto expect = [&](bool ok, const std::string& name, const std::string& w) {
        if (!ok) fails.push_back({name, w});
    };

    p.run_products();
    try {
        p.conn->check_flatness();
    } catch (const Error& e) {
        fails.push_back({"small-connection flatness", e.what()});
    }

    // Birkhoff identity and splitting structure.
    const SeriesContext& ctx = p.ctx;
    const int n = p.geom.dim();
    expect(*p.frame * p.factors->l_plus == p.factors->l_minus_inv,
           "Birkhoff identity L^-1 L+ = L-^-1", "");
    expect(pi_plus(p.factors->l_minus_inv) == identity_series(ctx, n),
           "pi_plus(L-^-1) = id", "");
    bool plus_ok = true;
    for (const auto& [d, m] : p.factors->l_plus.coeffs())
        if (!(m == m.pi_plus())) plus_ok = false;
    expect(plus_ok, "L+ has only nonnegative hbar powers", "");
    expect(birkhoff_l_plus_neumann(*p.frame) == p.factors->l_plus,
           "recursion/Neumann L+ agreement", "");

    for (const auto& ca : *p.canon)
        for (const auto& [d, m] : ca.coeffs())
            expect(m.hbar_free(), "canonical connection hbar-independence", d.str());

    FlatnessReport report = flatness_check(*p.big);
    for (const auto& item : report.items)
        expect(item.pass, "big flatness: " + item.name, item.witness);

    // Frobenius symmetry of the twisted three-point tensor.
    if (p.geom.r == 1 && p.geom.presentation.pairing.has_value() &&
        p.geom.bundle_rows.size() == 1 && p.geom.bundle_rows[0].size() == 1 &&
        p.geom.bundle_rows[0][0] >= 1) {
        p.run_gw();
        bool sym = true;
        for (int a = 0; a < n && sym; ++a)
            for (int b = 0; b < n && sym; ++b)
                for (int c = 0; c < n && sym; ++c) {
                    const auto& t = p.gw->three_point;
                    if (!(t[a][b][c] == t[b][a][c]) || !(t[a][b][c] == t[a][c][b]))
                        sym = false;
                }
        expect(sym, "Frobenius symmetry of three-point tensor", "");
    }

    // Oracle equivalence for P^{N-1} / O(k) data.
    if (oracle) {
        bool rank_one_proj = p.geom.r == 1;
        for (const auto& row : p.geom.weight_rows)
            if (row != std::vector<int>{1}) rank_one_proj = false;
        if (rank_one_proj &&
            (p.geom.bundle_rows.empty() || p.geom.bundle_rows.size() == 1)) {
            int k = p.geom.bundle_rows.empty() ? 0 : p.geom.bundle_rows[0][0];
            int big_n = static_cast<int>(p.geom.weight_rows.size());
            std::vector<ScalarSeries> cols = pf_reduce(big_n, k, ctx);
            bool match = true;
            for (int i = 0; i < big_n && match; ++i) {
                ScalarSeries got(ctx);
                for (const auto& [d, m] : p.conn->matrices[0].coeffs()) {
                    CoeffScalar e = m.at(i, big_n - 1);
                    if (d.is_zero() && i == big_n - 1)
                        continue; // companion subdiagonal, not part of C_i
                    if (!e.is_zero()) got.add(d, e);
                }
                // Subtract the cup-matrix constant part.
                CoeffScalar m0 = p.geom.presentation.cup_matrix(0).at(i, big_n - 1);
                if (!m0.is_zero()) got.add(NovikovExponent::zero(ctx.rank), -m0);
                if (!(got == cols[i])) match = false;
            }
            expect(match, "pf_reduce oracle equivalence", "");
        }
    }

    // Truncation stability: canonical matrices at D+1 agree through D.
    {
        Pipeline q;
        q.geom = p.geom;
        q.ctx = SeriesContext(p.ctx.rank, p.ctx.truncation + 1, p.ctx.weights);
        q.lmode = p.lmode;
        q.rmode = p.rmode;
        q.t_order = p.t_order;
        q.run_canonical();
        bool stable = true;
        for (size_t a = 0; a < p.canon->size(); ++a)
            if (!((*q.canon)[a].truncated(p.ctx.truncation) == (*p.canon)[a]))
                stable = false;
        expect(stable, "truncation stability D vs D+1", "");
    }
    return fails;
}

void emit(const Options& opt, const std::string& stage, const json& doc,
          const std::string& text, const std::string& csv) {
    std::string payload;
    std::string ext;
    if (opt.format == "json") {
        payload = doc.dump(2) + "\n";
        ext = ".json";
    } else if (opt.format == "text") {
        payload = text.empty() ? doc.dump(2) + "\n" : text;
        ext = ".txt";
    } else {
        payload = csv.empty() ? doc.dump(2) + "\n" : csv;
        ext = csv.empty() ? ".json" : ".csv";
    }
    if (opt.out_dir.empty()) {
        std::cout << "== " << stage << " ==\n" << payload;
    } else {
        std::filesystem::create_directories(opt.out_dir);
        std::ofstream out(std::filesystem::path(opt.out_dir) / (stage + ext));
        out << payload;
    }
}

int run(const Options& opt) {
    Pipeline p;
    p.geom = load(opt.geometry);
    p.geom.validate();
    if (opt.q_order < 1) throw ConfigError("--q-order must be >= 1");
    if (opt.t_order < 0) throw ConfigError("--t-order must be >= 0");
    std::vector<int> weights = opt.weights;
    if (weights.empty()) weights.assign(p.geom.r, 1);
    p.ctx = SeriesContext(p.geom.r, opt.q_order, weights);
    p.lmode = opt.lambda == "poly" ? LambdaMode::Poly : LambdaMode::Zero;
    p.rmode = opt.mode == "full" ? ReconMode::Full : ReconMode::Reduced;
    p.t_order = opt.t_order;

    std::vector<std::string> wanted;
    if (opt.stages == "all") {
        wanted = kStageOrder;
    } else {
        std::istringstream is(opt.stages);
        std::string tok;
        while (std::getline(is, tok, ',')) wanted.push_back(tok);
        int prev = -1;
        for (const auto& s : wanted) {
            int rank = stage_rank(s);
            if (rank <= prev) throw ConfigError("stages must follow pipeline order");
            prev = rank;
        }
    }
    if (wanted.empty()) throw ConfigError("no stages requested");

    for (const auto& stage : wanted) {
        if (stage == "ifunction") {
            p.run_ifunction();
            emit(opt, stage, to_json(p.ifn->series), to_text(p.ifn->series), "");
        } else if (stage == "connection") {
            p.run_connection();
            json doc;
            doc["A"] = json::array();
            for (const auto& a : p.conn->matrices) doc["A"].push_back(to_json(a));
            if (opt.oracle && p.geom.r == 1 && p.geom.bundle_rows.size() <= 1) {
                bool proj = true;
                for (const auto& row : p.geom.weight_rows)
                    if (row != std::vector<int>{1}) proj = false;
                if (proj) {
                    int k = p.geom.bundle_rows.empty() ? 0 : p.geom.bundle_rows[0][0];
                    auto cols = pf_reduce(static_cast<int>(p.geom.weight_rows.size()),
                                          k, p.ctx);
                    doc["pf_reduce"] = json::array();
                    for (const auto& c : cols) doc["pf_reduce"].push_back(to_json(c));
                }
            }
            std::string text;
            for (const auto& a : p.conn->matrices) text += to_text(a);
            emit(opt, stage, doc, text, "");
        } else if (stage == "canonical") {
            p.run_canonical();
            json doc;
            doc["A_canonical"] = json::array();
            for (const auto& a : *p.canon) doc["A_canonical"].push_back(to_json(a));
            doc["J"] = to_json(p.jfun->series);
            std::string text;
            for (const auto& a : *p.canon) text += to_text(a);
            text += "J:\n" + to_text(p.jfun->series);
            emit(opt, stage, doc, text, "");
        } else if (stage == "reconstruct") {
            p.run_reconstruct();
            json doc;
            doc["A"] = json::array();
            for (const auto& a : p.big->big_a) doc["A"].push_back(to_json(a));
            doc["Omega"] = json::array();
            for (const auto& o : p.big->big_omega) doc["Omega"].push_back(to_json(o));
            emit(opt, stage, doc, "", "");
        } else if (stage == "products") {
            p.run_products();
            json doc;
            doc["mirror_map"] = to_json(*p.mirror);
            doc["t_vars"] = p.table->t_vars;
            doc["structure"] = json::array();
            for (const auto& m : p.table->structure)
                doc["structure"].push_back(to_json(m));
            if (opt.locus) doc["locus"] = to_json(*p.mirror);
            std::string text;
            for (const auto& m : p.table->structure) text += to_text(m);
            emit(opt, stage, doc, text, table_to_csv(*p.table));
        } else if (stage == "gw") {
            p.run_gw();
            json doc;
            doc["degree"] = p.gw->degree_k;
            doc["potential_third_derivative"] = to_json(p.gw->potential_third);
            emit(opt, stage, doc, "", "");
        } else if (stage == "verify") {
            std::vector<VerifyFailure> fails = verify(p, opt.oracle);
            json doc;
            doc["pass"] = fails.empty();
            doc["failures"] = json::array();
            for (const auto& f : fails) {
                json t;
                t["identity"] = f.name;
                t["witness"] = f.witness;
                doc["failures"].push_back(std::move(t));
            }
            emit(opt, stage, doc, "", "");
            if (!fails.empty()) {
                json diag;
                diag["error"] = "InvariantFailure";
                diag["message"] = fails.front().name;
                std::cerr << diag.dump() << "\n";
                return 4;
            }
        }
    }
    return 0;
}

bool is_config_error(const std::string& kind) {
    return kind == "ConfigError";
}
bool is_validation_error(const std::string& kind) {
    return kind == "SchemaError" || kind == "ValidationError" || kind == "NotNef" ||
           kind == "PresentationRequired" || kind == "PairingMissing" ||
           kind == "NotRankOne" || kind == "NonConvexAtLambdaZero";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized mirror transformation engine"};
    Options opt;
    app.add_option("geometry", opt.geometry,
                   "Geometry JSON file or builtin:P<n>[/O(k1),O(k2),...]")
        ->required();
    app.add_option("--q-order", opt.q_order, "Novikov truncation order D");
    app.add_option("--t-order", opt.t_order, "t-variable truncation order");
    app.add_option("--weights", opt.weights, "Novikov weights w_a")->delimiter(',');
    app.add_option("--lambda", opt.lambda, "Equivariant parameter mode")
        ->check(CLI::IsMember({"zero", "poly"}));
    app.add_option("--mode", opt.mode, "Reconstruction mode")
        ->check(CLI::IsMember({"reduced", "full"}));
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    app.add_option("--stages", opt.stages,
                   "Comma-separated pipeline stages, or 'all'");
    app.add_option("--out", opt.out_dir, "Artifact output directory");
    app.add_flag("--oracle", opt.oracle, "Enable the pf_reduce cross-check");
    app.add_flag("--locus", opt.locus, "Include the mirror-map image locus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(opt);
    } catch (const qdm::Error& e) {
        qdm::json diag;
        diag["error"] = e.kind();
        diag["message"] = e.what();
        std::cerr << diag.dump() << "\n";
        if (is_config_error(e.kind())) return 2;
        if (is_validation_error(e.kind())) return 3;
        return 4;
    } catch (const std::exception& e) {
        qdm::json diag;
        diag["error"] = "InternalError";
        diag["message"] = e.what();
        std::cerr << diag.dump() << "\n";
        return 4;
    }
}
