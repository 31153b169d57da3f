#pragma once

#include <string>
#include <vector>

#include "hrl/smdp_oracle.hpp"

namespace hrl {

struct OracleDomain {
    std::string name;
    OracleGrid grid;
    std::vector<TabularOption> options;
};

// The bundled <=6x6 option domains used by the oracle-check suite.
std::vector<OracleDomain> bundled_oracle_domains();

// Small seeded stochastic MDP plus a probabilistically terminating option,
// for Monte-Carlo cross-checks of the option model.
struct StochasticCase {
    TabularMDP mdp;
    TabularOption option;
};
StochasticCase random_stochastic_case(std::uint64_t seed);

struct OracleCheckResult {
    bool pass = false;
    std::string report;
};

// smdp_q_learning vs SVI fixed points (0.01 max-norm) on every bundled
// domain, and compute_option_model vs Monte-Carlo within 3 standard errors.
OracleCheckResult run_oracle_checks();

}  // namespace hrl
