#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace preslab {

enum class Verdict { Pass, Fail, Infeasible };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// Structured outcome of one property check. Reproducible bit-for-bit from
/// (name, seed, inputs, tolerances).
struct VerificationReport {
    std::string name;
    int n = 0;
    std::uint64_t seed = 0;
    int samples = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    Verdict verdict = Verdict::Pass;

    struct Detail {
        std::string label;
        double residual = 0.0;
    };
    std::vector<Detail> details;

    /// Fold a residual into the max/mean statistics without naming it.
    void add_sample(double residual);
    /// Fold a residual in and record it as a named sub-residual.
    void add_detail(const std::string& label, double residual);
    /// Set the verdict from the accumulated max residual (unless Infeasible).
    void finalize(double tol);

    bool passed() const { return verdict == Verdict::Pass; }

private:
    double sum_ = 0.0;
    int count_ = 0;
};

}  // namespace preslab
