#include "hrl/oracle_domains.hpp"

#include <cmath>
#include <sstream>

namespace hrl {

std::vector<OracleDomain> bundled_oracle_domains() {
    std::vector<OracleDomain> domains;

    {
        OracleDomain d;
        d.name = "corridor";
        d.grid = OracleGrid::from_ascii({"....G"});
        for (int a = 0; a < 4; ++a) d.options.push_back(d.grid.primitive_option(a));
        d.options.push_back(d.grid.goto_option(d.grid.goal));
        domains.push_back(std::move(d));
    }
    {
        OracleDomain d;
        d.name = "two_rooms";
        d.grid = OracleGrid::from_ascii({
            "..#..G",
            "..#...",
            "......",
            "..#...",
            "..#...",
        });
        int hallway = d.grid.index(2, 2);
        for (int a = 0; a < 4; ++a) d.options.push_back(d.grid.primitive_option(a));
        d.options.push_back(d.grid.goto_option(hallway));
        d.options.push_back(d.grid.goto_option(d.grid.goal));
        domains.push_back(std::move(d));
    }
    {
        OracleDomain d;
        d.name = "open_room";
        d.grid = OracleGrid::from_ascii({
            "....",
            "....",
            "..G.",
            "....",
        });
        for (int a = 0; a < 4; ++a) d.options.push_back(d.grid.primitive_option(a));
        d.options.push_back(d.grid.goto_option(d.grid.index(0, 0)));
        d.options.push_back(d.grid.goto_option(d.grid.goal));
        domains.push_back(std::move(d));
    }
    return domains;
}

StochasticCase random_stochastic_case(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = 6, na = 2;
    StochasticCase c;
    c.mdp = TabularMDP::deterministic(n, na);
    c.mdp.terminal[n - 1] = true;
    for (int s = 0; s < n - 1; ++s)
        for (int a = 0; a < na; ++a) {
            int t1 = static_cast<int>(rng() % n);
            int t2 = static_cast<int>(rng() % n);
            double p = 0.2 + 0.6 * unit(rng);
            c.mdp.trans[s][a] = {{t1, p}, {t2, 1.0 - p}};
            c.mdp.reward[s][a] = unit(rng) * 2.0 - 1.0;
        }
    c.option.initiation.assign(n, true);
    c.option.policy.assign(n, 0);
    for (int s = 0; s < n; ++s) c.option.policy[s] = static_cast<int>(rng() % na);
    c.option.beta.assign(n, 0.3);  // terminates with probability 1
    return c;
}

OracleCheckResult run_oracle_checks() {
    std::ostringstream rep;
    bool pass = true;
    const double gamma = 0.99;

    for (const auto& d : bundled_oracle_domains()) {
        auto q_star = svi_q(d.grid.mdp, d.options, gamma);
        // deterministic domains: unit step size makes each backup exact
        auto q_learned =
            smdp_q_learning(d.grid.mdp, d.options, gamma, 1.0, 6000, 7, 0.3);
        double err = 0.0;
        for (int s = 0; s < d.grid.mdp.num_states; ++s) {
            if (d.grid.mdp.terminal[s]) continue;
            for (std::size_t k = 0; k < d.options.size(); ++k) {
                if (!d.options[k].can_start(s)) continue;
                err = std::max(err, std::abs(q_star[s][k] - q_learned[s][k]));
            }
        }
        bool ok = err <= 0.01;
        pass = pass && ok;
        rep << (ok ? "ok  " : "FAIL") << " domain '" << d.name
            << "': |Q_smdp - Q_svi|_max = " << err << " (limit 0.01)\n";
    }

    {
        auto c = random_stochastic_case(11);
        auto model = compute_option_model(c.mdp, c.option, gamma);
        auto mc = monte_carlo_option_model(c.mdp, c.option, gamma, 1000000, 23);
        double worst = 0.0;
        bool ok = true;
        for (int s = 0; s < c.mdp.num_states; ++s) {
            if (c.mdp.terminal[s]) continue;
            double tol = 3.0 * mc.R_stderr[s] + 1e-9;
            double dev = std::abs(model.R[s] - mc.R[s]);
            worst = std::max(worst, mc.R_stderr[s] > 0 ? dev / mc.R_stderr[s] : 0.0);
            if (dev > tol) ok = false;
            for (int t = 0; t < c.mdp.num_states; ++t) {
                double ptol = 3.0 * mc.P_stderr[s][t] + 1e-9;
                double pdev = std::abs(model.P[s][t] - mc.P[s][t]);
                if (mc.P_stderr[s][t] > 0)
                    worst = std::max(worst, pdev / mc.P_stderr[s][t]);
                if (pdev > ptol) ok = false;
            }
        }
        pass = pass && ok;
        rep << (ok ? "ok  " : "FAIL")
            << " option model vs Monte-Carlo (1e6 samples): worst deviation = " << worst
            << " standard errors (limit 3)\n";
    }

    return {pass, rep.str()};
}

}  // namespace hrl
