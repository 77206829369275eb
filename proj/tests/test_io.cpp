#include <doctest.h>

#include <cstdio>

#include "preslab/io.hpp"

using namespace preslab;

namespace {
const Tolerances kTol;
}

TEST_CASE("matrix json round trip") {
    Rng rng(1);
    const CMatrix m = sample_ginibre(3, 4, rng);
    const CMatrix back = matrix_from_json(to_json(m));
    CHECK(back == m);

    const json j = to_json(CMatrix::unit(2, 0, 1));
    CHECK(j["rows"] == 2);
    CHECK(j["cols"] == 2);
    CHECK(j["data"].size() == 4);
    CHECK(j["data"][1][0] == 1.0);  // row-major: entry (0,1)

    CHECK_THROWS(matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", json::array()}}));
}

TEST_CASE("matrix file round trip") {
    Rng rng(2);
    const CMatrix m = sample_ginibre(3, rng);
    const std::string path = "io_test_matrix.json";
    save_matrix(m, path);
    const CMatrix back = load_matrix(path);
    std::remove(path.c_str());
    CHECK(back == m);
    CHECK_THROWS(load_matrix("nonexistent_matrix_file.json"));
}

TEST_CASE("superop json round trip") {
    Rng rng(3);
    const SuperOp phi = conjugation_map(cplx(2, 1), sample_invertible(2, rng, kTol), kTol);
    const SuperOp back = superop_from_json(to_json(phi));
    CHECK(back.n == phi.n);
    CHECK(back.mat == phi.mat);
}

TEST_CASE("rank factorization json round trip") {
    Rng rng(4);
    const CMatrix c = sample_ginibre(4, 2, rng) * sample_ginibre(2, 4, rng);
    const auto f = rank_factorize(c, kTol);
    const auto back = rank_factorization_from_json(to_json(f));
    CHECK(back.k == f.k);
    CHECK(back.vs == f.vs);
    CHECK(back.fs == f.fs);
    CHECK(back.reconstruct() == f.reconstruct());
}

TEST_CASE("certificate json round trip") {
    Rng rng(5);
    const auto [q, p] = sample_zero_product_pair(4, 1, rng, kTol);
    const CMatrix c = sample_ginibre(4, 1, rng) * sample_ginibre(1, 4, rng);
    const auto cert = construct_certificate(q, p, c, kTol);
    const auto back = certificate_from_json(to_json(cert));
    CHECK(back.strategy == cert.strategy);
    CHECK(back.q == cert.q);
    CHECK(back.p == cert.p);
    CHECK(back.c == cert.c);
    REQUIRE(back.witnesses.size() == cert.witnesses.size());
    for (std::size_t i = 0; i < back.witnesses.size(); ++i) {
        CHECK(back.witnesses[i].a == cert.witnesses[i].a);
        CHECK(back.witnesses[i].b == cert.witnesses[i].b);
        CHECK(back.witnesses[i].q_piece == cert.witnesses[i].q_piece);
        CHECK(back.witnesses[i].p_piece == cert.witnesses[i].p_piece);
    }
    // the round-tripped certificate still verifies
    for (const auto& w : back.witnesses) CHECK(verify_four_equations(w, back.c, kTol).pass);
}

TEST_CASE("pointwise json round trip") {
    Rng rng(6);
    const PointwiseElement v = sample_pointwise(5, rng);
    const auto back = pointwise_from_json(to_json(v));
    CHECK(back.values == v.values);
    CHECK(to_json(v)["m"] == 5);
}

TEST_CASE("tolerances json round trip") {
    Tolerances t;
    t.pivot_eps = 1e-11;
    t.rank_eps = 1e-7;
    t.check_tol = 1e-8;
    const Tolerances back = tolerances_from_json(to_json(t));
    CHECK(back.pivot_eps == t.pivot_eps);
    CHECK(back.rank_eps == t.rank_eps);
    CHECK(back.check_tol == t.check_tol);
}

TEST_CASE("verdict string round trip") {
    for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::Infeasible}) {
        CHECK(verdict_from_string(to_string(v)) == v);
    }
    CHECK_THROWS(verdict_from_string("bogus"));
}

TEST_CASE("report json round trip") {
    VerificationReport r;
    r.name = "demo";
    r.n = 3;
    r.seed = 42;
    r.add_sample(1e-12);
    r.add_detail("worst case", 5e-10);
    r.finalize(1e-9);
    REQUIRE(r.passed());

    const json j = to_json(r);
    CHECK(j["name"] == "demo");
    CHECK(j["verdict"] == "Pass");
    CHECK(j["details"].size() == 1);
    CHECK(j["details"][0]["label"] == "worst case");

    const auto back = report_from_json(j);
    CHECK(back.name == r.name);
    CHECK(back.n == r.n);
    CHECK(back.seed == r.seed);
    CHECK(back.samples == r.samples);
    CHECK(back.max_residual == r.max_residual);
    CHECK(back.mean_residual == r.mean_residual);
    CHECK(back.verdict == r.verdict);
    REQUIRE(back.details.size() == 1);
    CHECK(back.details[0].label == "worst case");
    CHECK(back.details[0].residual == r.details[0].residual);
}

TEST_CASE("report serialization is byte deterministic") {
    VerificationReport r;
    r.name = "det";
    r.seed = 7;
    r.add_detail("a", 0.25);
    r.finalize(1.0);
    CHECK(to_json(r).dump(2) == to_json(r).dump(2));
}

TEST_CASE("csv and text rendering") {
    VerificationReport r;
    r.name = "render";
    r.n = 2;
    r.seed = 9;
    r.add_detail("eq1", 1e-11);
    r.add_detail("eq2", 2e-11);
    r.finalize(1e-9);

    const std::string header = report_csv_header();
    CHECK(header.find("name") != std::string::npos);
    const std::string csv = report_to_csv(r);
    CHECK(csv.find("render") != std::string::npos);
    CHECK(csv.find("eq1") != std::string::npos);
    CHECK(csv.find("eq2") != std::string::npos);

    const std::string text = report_to_text(r);
    CHECK(text.find("render") != std::string::npos);
    CHECK(text.find("Pass") != std::string::npos);
}

TEST_CASE("pipeline report json has the expected shape") {
    Rng rng(7);
    const SuperOp phi = conjugation_map(cplx(1, 0), sample_invertible(2, rng, kTol), kTol);
    Rng pr(8);
    const auto pipe = theorem41_pipeline(phi, CMatrix::identity(2), 10, pr, kTol);
    const json j = to_json(pipe);
    CHECK(j.contains("stages"));
    CHECK(j.contains("class"));
    CHECK(j.contains("z"));
    CHECK(j.contains("verdict"));
    CHECK(j["verdict"] == "Pass");
}
