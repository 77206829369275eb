#include "preslab/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace preslab {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        case Verdict::Infeasible: return "Infeasible";
    }
    return "?";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "Pass") return Verdict::Pass;
    if (s == "Fail") return Verdict::Fail;
    if (s == "Infeasible") return Verdict::Infeasible;
    throw std::invalid_argument("unknown verdict: " + s);
}

void VerificationReport::add_sample(double residual) {
    max_residual = std::max(max_residual, residual);
    sum_ += residual;
    ++count_;
    mean_residual = sum_ / count_;
}

void VerificationReport::add_detail(const std::string& label, double residual) {
    details.push_back(Detail{label, residual});
    add_sample(residual);
}

void VerificationReport::finalize(double tol) {
    if (verdict == Verdict::Infeasible) return;
    verdict = max_residual <= tol ? Verdict::Pass : Verdict::Fail;
}

}  // namespace preslab
