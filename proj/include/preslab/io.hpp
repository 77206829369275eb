#pragma once

#include <string>

#include <json.hpp>

#include "preslab/matrix.hpp"
#include "preslab/pointwise.hpp"
#include "preslab/rank_one.hpp"
#include "preslab/report.hpp"
#include "preslab/superop.hpp"
#include "preslab/verify.hpp"
#include "preslab/zp_factory.hpp"

namespace preslab {

using json = nlohmann::ordered_json;

// Shared matrix file format: {"rows": n, "cols": m, "data": [[re, im], ...]}
// in row-major order.
json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

CMatrix load_matrix(const std::string& path);
void save_matrix(const CMatrix& m, const std::string& path);

// SuperOp: the matrix format plus an "n" field.
json to_json(const SuperOp& phi);
SuperOp superop_from_json(const json& j);

// {"k": k, "vs": [vector...], "fs": [vector...]}, vectors as [[re,im],...].
json to_json(const RankFactorization& f);
RankFactorization rank_factorization_from_json(const json& j);

json to_json(const WitnessTriple& w);
WitnessTriple witness_from_json(const json& j);

json to_json(const FactorizationCertificate& c);
FactorizationCertificate certificate_from_json(const json& j);

// {"m": m, "values": [[re,im],...]}
json to_json(const PointwiseElement& v);
PointwiseElement pointwise_from_json(const json& j);

json to_json(const Tolerances& t);
Tolerances tolerances_from_json(const json& j);

// {"name","n","seed","samples","max_residual","mean_residual","verdict",
//  "details":[{"label","residual"}]}
json to_json(const VerificationReport& r);
VerificationReport report_from_json(const json& j);

json to_json(const PipelineReport& p);

std::string report_csv_header();
std::string report_to_csv(const VerificationReport& r);
std::string report_to_text(const VerificationReport& r);

}  // namespace preslab
