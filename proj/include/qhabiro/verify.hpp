#pragma once

#include "qhabiro/knots.hpp"

#include <string>
#include <vector>

namespace qh {

struct VerifyResult {
    bool ok = false;
    Rat prec = 0;         // identity holds to O(q^prec)
    std::string detail;   // first failure, empty on success
    std::string message() const;
};

// names of the identity suite
const std::vector<std::string>& identity_names();

// runs one named identity on the built-in knots of reg; throws on unknown name
VerifyResult run_identity(const std::string& name, const Registry& reg, Rat prec, int jobs = 1);

}  // namespace qh
