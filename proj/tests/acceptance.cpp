// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exits nonzero if
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <string>

#include "octowrap/suites.hpp"

using namespace ocw;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%-4s %s (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

char buf[512];

}  // namespace

int main() {
    SuiteConfig cfg;

    // 1. Cayley-Dickson structural suite: 1e4 random octonion triples,
    //    Moufang + alternativity + norm multiplicativity at 1e-12,
    //    quaternion associator exactly zero; runtime < 5 s.
    {
        auto t0 = std::chrono::steady_clock::now();
        SuiteOutcome r = suite_moufang(cfg);
        double el = seconds_since(t0);
        bool pass = r.pass && el < 5.0;
        std::snprintf(buf, sizeof(buf),
                      "moufang max %.2e, alternativity max %.2e, norm rel max %.2e, "
                      "quaternion associator exact %s, %.2fs",
                      r.report["moufang_max"].get<double>(),
                      r.report["alternativity_max"].get<double>(),
                      r.report["norm_multiplicativity_max_rel"].get<double>(),
                      r.report["quaternion_associator_exact"].get<bool>() ? "yes" : "no", el);
        report("criterion-1 cayley-dickson structural suite", pass, buf);

        // 2. Doubling consistency: octonion table restricted to quaternion
        //    indices equals the quaternion table, exact.
        report("criterion-2 doubling consistency",
               r.report["doubling_consistent"].get<bool>(), "table restriction exact");
    }

    // 3. Closed-form integral table, defect <= 1e-7, runtime < 60 s.
    {
        auto t0 = std::chrono::steady_clock::now();
        SuiteOutcome r = suite_closed_forms(cfg);
        double el = seconds_since(t0);
        double worst = 0.0;
        for (const auto& row : r.report["rows"]) worst = std::max(worst, row["defect"].get<double>());
        bool pass = r.pass && el < 60.0;
        std::snprintf(buf, sizeof(buf), "%zu formulas, max defect %.2e, %.2fs",
                      r.report["rows"].size(), worst, el);
        report("criterion-3 closed-form integrals (17)-(34)", pass, buf);
    }

    // 4. Residue oracle equivalence on >= 200 reducible phrases over H and O
    //    at 1e-8, plus direction homogeneity/additivity.
    {
        SuiteOutcome r = suite_residue_oracle(cfg);
        std::snprintf(buf, sizeof(buf),
                      "%d cases, oracle max defect %.2e, linearity max defect %.2e",
                      r.report["cases"].get<int>(), r.report["oracle_max_defect"].get<double>(),
                      r.report["direction_linearity_max_defect"].get<double>());
        report("criterion-4 residue oracle equivalence", r.pass, buf);
    }

    // 5 + 6. Residue theorem / global sum at 1e-7; Cauchy reconstruction at
    //        20 interior points at 1e-7.
    {
        SuiteOutcome r = suite_residue_theorem(cfg);
        double thm = r.report["residue_theorem_max_defect"].get<double>();
        double gs = r.report["global_sum_max_defect"].get<double>();
        double cy = r.report["cauchy_max_defect"].get<double>();
        std::snprintf(buf, sizeof(buf), "loop defect %.2e, global sum defect %.2e", thm, gs);
        report("criterion-5 residue theorem and global sum", thm <= 1e-7 && gs <= 1e-7, buf);
        std::snprintf(buf, sizeof(buf), "20 interior points, max defect %.2e", cy);
        report("criterion-6 cauchy-type formula", cy <= 1e-7, buf);
    }

    // 7. Cartan suite over the affine corpus (size <= 4), exact, < 5 s.
    {
        auto t0 = std::chrono::steady_clock::now();
        SuiteOutcome r = suite_cartan(cfg);
        double el = seconds_since(t0);
        bool pass = r.pass && el < 5.0;
        std::snprintf(buf, sizeof(buf), "%zu matrices, all checks exact, %.2fs",
                      r.report["rows"].size(), el);
        report("criterion-7 cartan suite", pass, buf);
    }

    // 8. eta(A) relations exact at depth 4 for n <= 3; multiplicity bound up
    //    to height 3.
    {
        SuiteOutcome r = suite_eta_relations(cfg);
        std::snprintf(buf, sizeof(buf), "%zu matrices at depth 4", r.report["rows"].size());
        report("criterion-8 eta(A) relations and multiplicity bound", r.pass, buf);
    }

    // 9. Casimir commutation exact on interior depths for n in {1,2}, D = 4;
    //    vacuum eigenvalue (lambda + 2 rho | lambda) with rho = 0.
    {
        SuiteOutcome r = suite_casimir(cfg);
        report("criterion-9 heisenberg casimir", r.pass, "exact commutation and vacuum eigenvalue");
    }

    // 10. Witt relation exact for |k|,|j| <= 5 on monomials |m| <= 8; Virasoro
    //     central term; cocycle identities >= 100 cases at 1e-9; < 30 s.
    {
        auto t0 = std::chrono::steady_clock::now();
        SuiteOutcome w = suite_witt_virasoro(cfg);
        SuiteOutcome c = suite_cocycle(cfg);
        double el = seconds_since(t0);
        double worst = 0.0;
        for (const auto& row : c.report["rows"]) worst = std::max(worst, row["defect"].get<double>());
        bool pass = w.pass && c.pass && el < 30.0;
        std::snprintf(buf, sizeof(buf),
                      "witt exact, virasoro central term exact, cocycle max defect %.2e over %d "
                      "cases, %.2fs",
                      worst, c.report["cases"].get<int>(), el);
        report("criterion-10 wrap/virasoro suite", pass, buf);
    }

    if (failures == 0) std::printf("all acceptance criteria passed\n");
    return failures == 0 ? 0 : 1;
}
