#ifndef QCURV_VERIFY_HPP
#define QCURV_VERIFY_HPP

#include <string>
#include <vector>

namespace qcurv {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    std::string filter;          // substring match on check names
    double gamma_perturb = 0.0;  // test hook: relative perturbation of gamma_m
};

// The built-in oracle suite: closed-form residuals of the two explicit
// solutions, the b_j and gamma_m identities, and the n = 2 kernel identity.
std::vector<CheckResult> run_verification(const VerifyOptions& opts = {});

} // namespace qcurv

#endif
