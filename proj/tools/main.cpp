// preslab: seeded experiment runner for fixed-product preserver verification.
//
// Every subcommand derives all randomness from --seed, embeds its full
// configuration in the report, and exits 0/1/2/3 for Pass/Fail/Infeasible/
// usage-or-IO error. Reports are byte-deterministic under --no-timestamp.

#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>

#include <CLI11.hpp>

#include "preslab/io.hpp"

using namespace preslab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUsage = 3;

Tolerances tolerances_from_config(const json& cfg) {
    if (cfg.contains("tolerances")) return tolerances_from_json(cfg.at("tolerances"));
    return Tolerances{};
}

cplx alpha_from_config(const json& cfg) {
    if (!cfg.contains("alpha")) return cplx(1.0, 0.0);
    return cplx(cfg.at("alpha").at(0).get<double>(), cfg.at("alpha").at(1).get<double>());
}

CMatrix sample_rank_k(int n, int k, Rng& rng) {
    if (k >= n) return sample_invertible(n, rng, Tolerances{});
    return sample_ginibre(n, k, rng) * sample_ginibre(k, n, rng);
}

std::vector<int> sample_permutation(int m, Rng& rng) {
    std::vector<int> sigma(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    for (int i = m - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(sigma[i], sigma[j]);
    }
    return sigma;
}

/// Map parameters shared by verify-preserver, thm33 and thm41.
struct FamilyInstance {
    SuperOp phi;
    CMatrix c;
    CMatrix d;
    CMatrix u;
};

/// Builds one structural-family map. The transpose family only exists at
/// invertible C, so that branch ignores rank_c; invertible_c forces an
/// invertible C for the conjugation family too (the Thm 4.1 hypothesis).
FamilyInstance build_family(const json& cfg, Rng& param, bool invertible_c,
                            const Tolerances& tol) {
    const int n = cfg.at("n").get<int>();
    const cplx alpha = alpha_from_config(cfg);
    const std::string family = cfg.value("family", std::string("conj"));

    FamilyInstance inst;
    inst.u = cfg.contains("U") ? matrix_from_json(cfg.at("U")) : sample_invertible(n, param, tol);
    if (family == "conj") {
        const int k = cfg.value("rank_c", 1);
        inst.c = cfg.contains("C")
                     ? matrix_from_json(cfg.at("C"))
                     : (invertible_c ? sample_invertible(n, param, tol)
                                     : sample_rank_k(n, k, param));
        inst.d = (alpha * alpha) * (inst.u * inst.c * inverse(inst.u, tol));
        inst.phi = conjugation_map(alpha, inst.u, tol);
    } else if (family == "tconj") {
        inst.c = cfg.contains("C") ? matrix_from_json(cfg.at("C"))
                                   : sample_invertible(n, param, tol);
        inst.d = cfg.contains("D") ? matrix_from_json(cfg.at("D"))
                                   : solve_transpose_constraint(alpha, inst.u, inst.c, tol);
        inst.phi = transpose_conjugation_map(alpha, inst.d, inst.u, tol);
    } else {
        throw std::invalid_argument("unknown family: " + family);
    }
    return inst;
}

json run_config(const json& cfg);  // forward

json run_factorize(const json& cfg, const Tolerances& tol) {
    const int n = cfg.at("n").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int k = cfg.value("rank_c", 1);
    Rng rng(seed);
    Rng param = rng.fork(0);
    const CMatrix c =
        cfg.contains("C") ? matrix_from_json(cfg.at("C")) : sample_rank_k(n, k, param);

    VerificationReport rep;
    rep.name = "factorize";
    rep.n = n;
    rep.seed = seed;
    const auto f = rank_factorize(c, tol);
    rep.add_detail("reconstruction", rel_residual(f.reconstruct() - c, c.frobenius_norm()));
    rep.add_detail("rank agreement", f.k == rank(c, tol) ? 0.0 : 1.0);
    rep.finalize(tol.check_tol);

    json out;
    out["config"] = cfg;
    out["report"] = to_json(rep);
    out["factorization"] = to_json(f);
    return out;
}

json run_prop21(const json& cfg, const Tolerances& tol) {
    const int n = cfg.at("n").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int k = cfg.value("rank_c", 1);
    Rng rng(seed);
    Rng param = rng.fork(0);
    const int r = 1 + static_cast<int>(param.next_u64() % static_cast<std::uint64_t>(n - 1));
    const auto [q, p] = sample_zero_product_pair(n, r, param, tol);
    const CMatrix c = sample_rank_k(n, k, param);

    VerificationReport rep;
    rep.name = "prop21";
    rep.n = n;
    rep.seed = seed;
    json out;
    out["config"] = cfg;
    try {
        const auto cert = construct_certificate(q, p, c, tol);
        for (std::size_t i = 0; i < cert.witnesses.size(); ++i) {
            const auto chk = verify_four_equations(cert.witnesses[i], c, tol);
            const double worst = std::max(std::max(chk.ab, chk.aqb), std::max(chk.apb, chk.aqpb));
            rep.add_detail("witness " + std::to_string(i), chk.pass ? worst : 1.0);
        }
        CMatrix q_sum = CMatrix::zero(n, n);
        for (const auto& piece : cert.q_pieces) q_sum = q_sum + piece;
        rep.add_detail("Q piece sum", rel_residual(q_sum - q, q.frobenius_norm()));
        CMatrix p_sum = CMatrix::zero(n, n);
        for (const auto& piece : cert.p_pieces) p_sum = p_sum + piece;
        rep.add_detail("P piece sum", rel_residual(p_sum - p, p.frobenius_norm()));
        rep.finalize(tol.check_tol);
        out["certificate"] = to_json(cert);
    } catch (const InfeasibleDimension& e) {
        rep.verdict = Verdict::Infeasible;
        rep.add_detail(std::string("infeasible: ") + e.what(), 0.0);
    }
    out["report"] = to_json(rep);
    return out;
}

json run_verify_preserver(const json& cfg, const Tolerances& tol) {
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int samples = cfg.value("samples", 200);
    Rng rng(seed);
    Rng param = rng.fork(0);
    const auto inst = build_family(cfg, param, /*invertible_c=*/false, tol);

    std::vector<VerificationReport> checks;
    Rng r1 = rng.fork(1);
    checks.push_back(check_preserves_at(inst.phi, inst.c, inst.d, samples, r1, tol));
    Rng r2 = rng.fork(2);
    checks.push_back(check_rank_equality(inst.phi, inst.c, r2, tol));
    checks.push_back(check_annihilator_inclusion(inst.phi, inst.c, inst.d, tol));
    if (cfg.value("family", std::string("conj")) == "conj") {
        // Only the conjugation family preserves zero products in general; the
        // transpose family is a preserver at its fixed invertible C only.
        Rng r3 = rng.fork(3);
        checks.push_back(check_zero_product_preserving(inst.phi, samples, r3, tol));
    }

    VerificationReport rep;
    rep.name = "verify-preserver";
    rep.n = cfg.at("n").get<int>();
    rep.seed = seed;
    rep.samples = samples;
    for (const auto& c : checks) rep.add_detail(c.name, c.passed() ? c.max_residual : 1.0);
    rep.finalize(tol.check_tol);

    json out;
    out["config"] = cfg;
    out["report"] = to_json(rep);
    json sub = json::array();
    for (const auto& c : checks) sub.push_back(to_json(c));
    out["checks"] = std::move(sub);
    return out;
}

json run_thm33(const json& cfg, const Tolerances& tol) {
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int samples = cfg.value("samples", 100);
    Rng rng(seed);

    VerificationReport rep;
    rep.name = "thm33";
    rep.seed = seed;
    rep.samples = samples;

    if (cfg.contains("m")) {
        const int m = cfg.at("m").get<int>();
        rep.n = m;
        for (int t = 0; t < samples; ++t) {
            Rng tr = rng.fork(static_cast<std::uint64_t>(t));
            const CMatrix phi = composition_map(sample_permutation(m, tr));
            PointwiseElement c;
            switch (t % 3) {
                case 0: c = PointwiseElement::zero(m); break;
                case 1: c = perturb_to_invertible(sample_pointwise(m, tr), 0.5); break;
                default:
                    c = perturb_to_invertible(sample_pointwise(m, tr), 0.5);
                    for (int i = 0; i < m / 2; ++i) c.values[i] = 0.0;
                    break;
            }
            const auto one = check_theorem33_pointwise(phi, c, tr, tol);
            rep.add_sample(one.passed() ? one.max_residual : 1.0);
        }
    } else {
        const int n = cfg.at("n").get<int>();
        rep.n = n;
        const std::string family = cfg.value("family", std::string("conj"));
        for (int t = 0; t < samples; ++t) {
            Rng tr = rng.fork(static_cast<std::uint64_t>(t));
            json trial_cfg = cfg;
            if (family == "conj") trial_cfg["rank_c"] = std::max(1, t % (n + 1));
            const auto inst = build_family(trial_cfg, tr, /*invertible_c=*/family == "tconj", tol);
            const CMatrix c = (family == "conj" && t % (n + 1) == 0) ? CMatrix::zero(n, n)
                                                                     : inst.c;
            const auto one = check_theorem33(inst.phi, c, tr, tol);
            rep.add_sample(one.passed() ? one.max_residual : 1.0);
        }
    }
    rep.finalize(tol.check_tol);

    json out;
    out["config"] = cfg;
    out["report"] = to_json(rep);
    return out;
}

json run_thm41(const json& cfg, const Tolerances& tol) {
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int samples = cfg.value("samples", 100);
    Rng rng(seed);
    Rng param = rng.fork(0);
    const auto inst = build_family(cfg, param, /*invertible_c=*/true, tol);

    Rng pipe_rng = rng.fork(1);
    const auto pipe = theorem41_pipeline(inst.phi, inst.c, samples, pipe_rng, tol);

    VerificationReport rep;
    rep.name = "thm41";
    rep.n = cfg.at("n").get<int>();
    rep.seed = seed;
    rep.samples = samples;
    for (const auto& stage : pipe.stages) {
        rep.add_detail(stage.name, stage.passed() ? stage.max_residual : 1.0);
    }
    rep.add_detail(std::string("class: ") + to_string(pipe.mclass.kind),
                   pipe.mclass.margin_warning ? 1.0 : 0.0);
    rep.finalize(tol.check_tol);
    if (!pipe.passed()) rep.verdict = Verdict::Fail;

    json out;
    out["config"] = cfg;
    out["report"] = to_json(rep);
    out["pipeline"] = to_json(pipe);
    return out;
}

json run_hua(const json& cfg, const Tolerances& tol) {
    const int n = cfg.at("n").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int samples = cfg.value("samples", 1000);
    Rng rng(seed);

    VerificationReport rep;
    rep.name = "hua";
    rep.n = n;
    rep.seed = seed;
    rep.samples = samples;
    for (int i = 0; i < samples; ++i) {
        Rng sr = rng.fork(static_cast<std::uint64_t>(i));
        CMatrix a = sample_ginibre(n, sr);
        while (!is_invertible(a, tol) || !is_invertible(CMatrix::identity(n) - a, tol)) {
            a = sample_ginibre(n, sr);
        }
        rep.add_sample(hua_identity_residual(a, tol));
    }
    rep.add_detail("max residual", rep.max_residual);
    rep.finalize(tol.check_tol);

    json out;
    out["config"] = cfg;
    out["report"] = to_json(rep);
    return out;
}

json run_pointwise(const json& cfg, const Tolerances& tol) {
    const int m = cfg.at("m").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int samples = cfg.value("samples", 200);
    Rng rng(seed);

    VerificationReport rep;
    rep.name = "pointwise";
    rep.n = m;
    rep.seed = seed;
    rep.samples = samples;

    Rng param = rng.fork(0);
    const CMatrix halving = composition_map(halving_index_map(m));
    const CMatrix perm = composition_map(sample_permutation(m, param));
    double worst_mult = 0.0;
    for (int t = 0; t < samples; ++t) {
        Rng tr = rng.fork(1 + static_cast<std::uint64_t>(t));
        const auto f = sample_pointwise(m, tr);
        const auto g = sample_pointwise(m, tr);
        for (const CMatrix* phi : {&halving, &perm}) {
            const auto lhs = apply_map(*phi, f * g);
            const auto rhs = apply_map(*phi, f) * apply_map(*phi, g);
            worst_mult = std::max(worst_mult,
                                  (lhs - rhs).sup_norm() / std::max(1.0, lhs.sup_norm()));
        }
    }
    rep.add_detail("composition multiplicativity", worst_mult);

    Rng t33 = rng.fork(1 + static_cast<std::uint64_t>(samples));
    const auto dich = check_theorem33_pointwise(perm, PointwiseElement::unit(m), t33, tol);
    rep.add_detail("automorphism dichotomies", dich.passed() ? dich.max_residual : 1.0);
    rep.finalize(tol.check_tol);

    json out;
    out["config"] = cfg;
    out["report"] = to_json(rep);
    return out;
}

json run_config(const json& cfg) {
    const Tolerances tol = tolerances_from_config(cfg);
    tol.validate();
    const std::string sub = cfg.at("subcommand").get<std::string>();
    if (sub == "factorize") return run_factorize(cfg, tol);
    if (sub == "prop21") return run_prop21(cfg, tol);
    if (sub == "verify-preserver") return run_verify_preserver(cfg, tol);
    if (sub == "thm33") return run_thm33(cfg, tol);
    if (sub == "thm41") return run_thm41(cfg, tol);
    if (sub == "hua") return run_hua(cfg, tol);
    if (sub == "pointwise") return run_pointwise(cfg, tol);
    throw std::invalid_argument("unknown subcommand in config: " + sub);
}

int exit_code_for(const json& out) {
    switch (verdict_from_string(out.at("report").at("verdict").get<std::string>())) {
        case Verdict::Pass: return kExitPass;
        case Verdict::Fail: return kExitFail;
        case Verdict::Infeasible: return kExitInfeasible;
    }
    return kExitUsage;
}

std::string render(const json& out, const std::string& format) {
    if (format == "json") return out.dump(2) + "\n";
    const auto rep = report_from_json(out.at("report"));
    if (format == "csv") return report_csv_header() + "\n" + report_to_csv(rep);
    return report_to_text(rep);
}

void emit(const json& out, const std::string& format, const std::string& out_path) {
    const std::string text = render(out, format);
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot write report file: " + out_path);
    file << text;
}

std::string iso_timestamp() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"preslab: numerical verification of fixed-product preserver theorems"};
    app.require_subcommand(1);

    int n = 3;
    int m = 4;
    std::uint64_t seed = 0;
    int samples = 0;  // 0 = per-subcommand default
    int rank_c = 1;
    std::string family = "conj";
    std::string alpha_str = "1,0";
    std::string u_path, d_path, c_path;
    std::string out_path;
    std::string format = "json";
    std::string in_path;
    double tol_override = 0.0;
    bool no_timestamp = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "RNG seed (all randomness derives from it)");
        sub->add_option("--samples", samples, "sample count (0 = subcommand default)");
        sub->add_option("--tol", tol_override, "override the pass/fail residual tolerance");
        sub->add_option("--out", out_path, "write the report here instead of stdout");
        sub->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_flag("--no-timestamp", no_timestamp,
                      "omit the timestamp for byte-identical reports");
    };
    const auto add_family = [&](CLI::App* sub) {
        sub->add_option("--family", family, "structural family")
            ->check(CLI::IsMember({"conj", "tconj"}));
        sub->add_option("--alpha", alpha_str, "scalar alpha as RE,IM (or RE)");
        sub->add_option("--U", u_path, "matrix file for U");
        sub->add_option("--D", d_path, "matrix file for D (tconj only)");
        sub->add_option("--C", c_path, "matrix file for the fixed product C");
    };

    CLI::App* factorize = app.add_subcommand("factorize", "rank factorization of C");
    factorize->add_option("--n", n, "matrix size");
    factorize->add_option("--rank-c", rank_c, "rank of the sampled C");
    factorize->add_option("--C", c_path, "matrix file for C");
    add_common(factorize);

    CLI::App* prop21 = app.add_subcommand("prop21", "zero-product certificate construction");
    prop21->add_option("--n", n, "matrix size");
    prop21->add_option("--rank-c", rank_c, "rank of the sampled C");
    add_common(prop21);

    CLI::App* verify = app.add_subcommand("verify-preserver",
                                          "product, rank and annihilator checks");
    verify->add_option("--n", n, "matrix size");
    verify->add_option("--rank-c", rank_c, "rank of the sampled C (conj family)");
    add_family(verify);
    add_common(verify);

    CLI::App* thm33 = app.add_subcommand("thm33", "zero/invertibility dichotomies");
    thm33->add_option("--n", n, "matrix size (matrix-algebra mode)");
    CLI::Option* opt_m = thm33->add_option("--m", m, "arity (pointwise-algebra mode)");
    thm33->add_option("--family", family, "structural family")
        ->check(CLI::IsMember({"conj", "tconj"}));
    thm33->add_option("--alpha", alpha_str, "scalar alpha as RE,IM");
    add_common(thm33);

    CLI::App* thm41 = app.add_subcommand("thm41", "invertible-case staged pipeline");
    thm41->add_option("--n", n, "matrix size");
    add_family(thm41);
    add_common(thm41);

    CLI::App* hua = app.add_subcommand("hua", "Hua identity residual sweep");
    hua->add_option("--n", n, "matrix size");
    add_common(hua);

    CLI::App* pointwise = app.add_subcommand("pointwise", "coordinate algebra checks");
    pointwise->add_option("--m", m, "arity of the coordinate algebra");
    add_common(pointwise);

    CLI::App* revalidate = app.add_subcommand("revalidate", "re-run a stored report");
    revalidate->add_option("--in", in_path, "json report to re-validate")->required();
    add_common(revalidate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (n < 1 || m < 1 || samples < 0 || rank_c < 0) {
            throw std::invalid_argument("dimensions and counts must be positive");
        }

        json out;
        if (revalidate->parsed()) {
            std::ifstream in(in_path);
            if (!in) throw std::runtime_error("cannot open report file: " + in_path);
            json stored;
            in >> stored;
            const json rerun = run_config(stored.at("config"));
            const std::string old_verdict = stored.at("report").at("verdict").get<std::string>();
            const std::string new_verdict = rerun.at("report").at("verdict").get<std::string>();

            VerificationReport rep;
            rep.name = "revalidate";
            rep.n = stored.at("report").at("n").get<int>();
            rep.seed = stored.at("report").at("seed").get<std::uint64_t>();
            rep.add_detail("stored verdict " + old_verdict, 0.0);
            rep.add_detail("recomputed verdict " + new_verdict,
                           old_verdict == new_verdict ? 0.0 : 1.0);
            rep.finalize(0.5);
            out["config"] = json{{"subcommand", "revalidate"}, {"in", in_path}};
            out["report"] = to_json(rep);
            out["recomputed"] = rerun.at("report");
        } else {
            json cfg;
            CLI::App* sub = app.get_subcommands().front();
            cfg["subcommand"] = sub->get_name();
            if (sub == pointwise || (sub == thm33 && opt_m->count() > 0)) {
                cfg["m"] = m;
            } else {
                cfg["n"] = n;
            }
            cfg["seed"] = seed;
            if (samples > 0) cfg["samples"] = samples;
            if (sub == factorize || sub == prop21 || sub == verify) cfg["rank_c"] = rank_c;
            if (sub == verify || sub == thm41 || (sub == thm33 && opt_m->count() == 0)) {
                cfg["family"] = family;
                double re = 1.0, im = 0.0;
                const auto comma = alpha_str.find(',');
                re = std::stod(alpha_str.substr(0, comma));
                if (comma != std::string::npos) im = std::stod(alpha_str.substr(comma + 1));
                cfg["alpha"] = json::array({re, im});
            }
            Tolerances tol;
            if (tol_override > 0.0) tol.check_tol = tol_override;
            cfg["tolerances"] = to_json(tol);
            if (!u_path.empty()) cfg["U"] = to_json(load_matrix(u_path));
            if (!d_path.empty()) cfg["D"] = to_json(load_matrix(d_path));
            if (!c_path.empty()) cfg["C"] = to_json(load_matrix(c_path));
            out = run_config(cfg);
        }

        if (!no_timestamp) out["timestamp"] = iso_timestamp();
        emit(out, format, out_path);
        return exit_code_for(out);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
