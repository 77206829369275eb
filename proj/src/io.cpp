#include "preslab/io.hpp"

#include <fstream>
#include <sstream>

namespace preslab {

namespace {

json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) { return cplx(j.at(0).get<double>(), j.at(1).get<double>()); }

json vector_to_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(complex_to_json(z));
    return a;
}

std::vector<cplx> vector_from_json(const json& j) {
    std::vector<cplx> v;
    for (const auto& e : j) v.push_back(complex_from_json(e));
    return v;
}

}  // namespace

json to_json(const CMatrix& m) {
    json data = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto& data = j.at("data");
    if (static_cast<int>(data.size()) != rows * cols) {
        throw std::invalid_argument("matrix json: data length != rows*cols");
    }
    CMatrix m(rows, cols);
    int idx = 0;
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(data.at(idx++));
    if (!m.all_finite()) throw std::invalid_argument("matrix json: non-finite entry");
    return m;
}

CMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    json j;
    in >> j;
    return matrix_from_json(j);
}

void save_matrix(const CMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    out << to_json(m).dump(2) << "\n";
}

json to_json(const SuperOp& phi) {
    json j = to_json(phi.mat);
    j["n"] = phi.n;
    return j;
}

SuperOp superop_from_json(const json& j) {
    SuperOp phi;
    phi.n = j.at("n").get<int>();
    phi.mat = matrix_from_json(j);
    if (phi.mat.rows() != phi.n * phi.n || phi.mat.cols() != phi.n * phi.n) {
        throw std::invalid_argument("superop json: matrix is not n^2 x n^2");
    }
    return phi;
}

json to_json(const RankFactorization& f) {
    json vs = json::array();
    json fs = json::array();
    for (const auto& v : f.vs) vs.push_back(vector_to_json(v));
    for (const auto& g : f.fs) fs.push_back(vector_to_json(g));
    return json{{"k", f.k}, {"vs", std::move(vs)}, {"fs", std::move(fs)}};
}

RankFactorization rank_factorization_from_json(const json& j) {
    RankFactorization f;
    f.k = j.at("k").get<int>();
    for (const auto& v : j.at("vs")) f.vs.push_back(vector_from_json(v));
    for (const auto& g : j.at("fs")) f.fs.push_back(vector_from_json(g));
    return f;
}

json to_json(const WitnessTriple& w) {
    return json{{"q_piece", to_json(w.q_piece)},
                {"p_piece", to_json(w.p_piece)},
                {"A", to_json(w.a)},
                {"B", to_json(w.b)},
                {"residuals",
                 {{"ab_minus_c", w.residuals.ab_minus_c},
                  {"ap", w.residuals.ap},
                  {"qb", w.residuals.qb}}}};
}

WitnessTriple witness_from_json(const json& j) {
    WitnessTriple w;
    w.q_piece = matrix_from_json(j.at("q_piece"));
    w.p_piece = matrix_from_json(j.at("p_piece"));
    w.a = matrix_from_json(j.at("A"));
    w.b = matrix_from_json(j.at("B"));
    const auto& r = j.at("residuals");
    w.residuals.ab_minus_c = r.at("ab_minus_c").get<double>();
    w.residuals.ap = r.at("ap").get<double>();
    w.residuals.qb = r.at("qb").get<double>();
    return w;
}

json to_json(const FactorizationCertificate& c) {
    json q_pieces = json::array();
    json p_pieces = json::array();
    json witnesses = json::array();
    for (const auto& m : c.q_pieces) q_pieces.push_back(to_json(m));
    for (const auto& m : c.p_pieces) p_pieces.push_back(to_json(m));
    for (const auto& w : c.witnesses) witnesses.push_back(to_json(w));
    return json{{"strategy", to_string(c.strategy)},
                {"Q", to_json(c.q)},
                {"P", to_json(c.p)},
                {"C", to_json(c.c)},
                {"q_pieces", std::move(q_pieces)},
                {"p_pieces", std::move(p_pieces)},
                {"witnesses", std::move(witnesses)}};
}

FactorizationCertificate certificate_from_json(const json& j) {
    FactorizationCertificate c;
    c.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    c.q = matrix_from_json(j.at("Q"));
    c.p = matrix_from_json(j.at("P"));
    c.c = matrix_from_json(j.at("C"));
    for (const auto& m : j.at("q_pieces")) c.q_pieces.push_back(matrix_from_json(m));
    for (const auto& m : j.at("p_pieces")) c.p_pieces.push_back(matrix_from_json(m));
    for (const auto& w : j.at("witnesses")) c.witnesses.push_back(witness_from_json(w));
    return c;
}

json to_json(const PointwiseElement& v) {
    return json{{"m", v.size()}, {"values", vector_to_json(v.values)}};
}

PointwiseElement pointwise_from_json(const json& j) {
    PointwiseElement v;
    v.values = vector_from_json(j.at("values"));
    if (j.at("m").get<int>() != v.size()) {
        throw std::invalid_argument("pointwise json: m != values length");
    }
    return v;
}

json to_json(const Tolerances& t) {
    return json{{"pivot_eps", t.pivot_eps}, {"rank_eps", t.rank_eps}, {"check_tol", t.check_tol}};
}

Tolerances tolerances_from_json(const json& j) {
    Tolerances t;
    t.pivot_eps = j.at("pivot_eps").get<double>();
    t.rank_eps = j.at("rank_eps").get<double>();
    t.check_tol = j.at("check_tol").get<double>();
    t.validate();
    return t;
}

json to_json(const VerificationReport& r) {
    json details = json::array();
    for (const auto& d : r.details) {
        details.push_back(json{{"label", d.label}, {"residual", d.residual}});
    }
    return json{{"name", r.name},
                {"n", r.n},
                {"seed", r.seed},
                {"samples", r.samples},
                {"max_residual", r.max_residual},
                {"mean_residual", r.mean_residual},
                {"verdict", to_string(r.verdict)},
                {"details", std::move(details)}};
}

VerificationReport report_from_json(const json& j) {
    VerificationReport r;
    r.name = j.at("name").get<std::string>();
    r.n = j.at("n").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.samples = j.at("samples").get<int>();
    for (const auto& d : j.at("details")) {
        r.details.push_back({d.at("label").get<std::string>(), d.at("residual").get<double>()});
    }
    // statistics are stored, not re-derived from details
    r.max_residual = j.at("max_residual").get<double>();
    r.mean_residual = j.at("mean_residual").get<double>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    return r;
}

json to_json(const PipelineReport& p) {
    json stages = json::array();
    for (const auto& s : p.stages) stages.push_back(to_json(s));
    return json{{"stages", std::move(stages)},
                {"class", to_string(p.mclass.kind)},
                {"homo_residual", p.mclass.homo_residual},
                {"anti_residual", p.mclass.anti_residual},
                {"margin_warning", p.mclass.margin_warning},
                {"z", to_json(p.z)},
                {"D", to_json(p.d)},
                {"verdict", to_string(p.overall)}};
}

std::string report_csv_header() {
    return "name,n,seed,samples,max_residual,mean_residual,verdict,label,residual";
}

std::string report_to_csv(const VerificationReport& r) {
    std::ostringstream out;
    out.precision(17);
    const auto prefix = [&]() -> std::ostringstream& {
        out << r.name << ',' << r.n << ',' << r.seed << ',' << r.samples << ','
            << r.max_residual << ',' << r.mean_residual << ',' << to_string(r.verdict);
        return out;
    };
    if (r.details.empty()) {
        prefix() << ",,\n";
    } else {
        for (const auto& d : r.details) {
            prefix() << ',' << d.label << ',' << d.residual << '\n';
        }
    }
    return out.str();
}

std::string report_to_text(const VerificationReport& r) {
    std::ostringstream out;
    out.precision(6);
    out << r.name << " (n=" << r.n << ", seed=" << r.seed << ", samples=" << r.samples
        << "): " << to_string(r.verdict) << "  max=" << r.max_residual
        << " mean=" << r.mean_residual << "\n";
    for (const auto& d : r.details) {
        out << "  " << d.label << ": " << d.residual << "\n";
    }
    return out.str();
}

}  // namespace preslab
