// Command-line front end: phrase expression parsing, contour/residue
// computations, Cartan utilities, module relation checks, and the named
// verification suites. All structured output is JSON on stdout.
//
// Exit codes: 0 success, 1 tolerance failure, 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "octowrap/json_io.hpp"
#include "octowrap/parse.hpp"
#include "octowrap/suites.hpp"

using namespace ocw;

namespace {

CN parse_point(const std::string& text, int level) {
    if (!text.empty() && text[0] == 'i' && text.size() <= 3) {
        int idx = std::stoi(text.substr(1));
        return CN::gen(level, idx);
    }
    json j = json::parse(text);
    if (j.is_array()) return coords_from_json(j, level);
    return cn_from_json(j);
}

Phrase load_phrase(const std::string& src, int level) {
    if (!src.empty() && (src[0] == '{' || src[0] == '@')) {
        json j;
        if (src[0] == '@') {
            std::ifstream in(src.substr(1));
            if (!in) throw std::runtime_error("cannot open " + src.substr(1));
            in >> j;
        } else {
            j = json::parse(src);
        }
        return phrase_from_json(j);
    }
    return parse_phrase_text(src, level);
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"octowrap: Cayley-Dickson residue calculus and wrap-algebra workbench"};
    app.require_subcommand(1);
    int level = 3;
    app.add_option("--level,-r", level, "Cayley-Dickson level (1=C, 2=H, 3=O)")
        ->check(CLI::Range(1, 3));

    // ---- cd ---------------------------------------------------------------
    auto* cd = app.add_subcommand("cd", "Cayley-Dickson arithmetic");
    std::string cd_op, cd_a, cd_b, cd_c;
    cd->add_option("op", cd_op, "mul|inverse|conj|polar|exp|ln|associator|moufang|table")
        ->required();
    cd->add_option("--a", cd_a, "first operand (JSON coords or iK)");
    cd->add_option("--b", cd_b, "second operand");
    cd->add_option("--c", cd_c, "third operand");

    // ---- phrase -----------------------------------------------------------
    auto* ph = app.add_subcommand("phrase", "parse, print, normalize, evaluate phrases");
    std::string ph_src, ph_at, ph_action = "parse";
    ph->add_option("src", ph_src, "phrase text or JSON ('{...}' or @file)")->required();
    ph->add_option("--action", ph_action, "parse|normalize|derivative|print");
    ph->add_option("--at", ph_at, "evaluation point (JSON coords)");

    // ---- integrate ----------------------------------------------------------
    auto* ig = app.add_subcommand("integrate", "line integral of a phrase along a path");
    std::string ig_src, ig_path;
    double ig_tol = 1e-9;
    ig->add_option("src", ig_src, "phrase text or JSON")->required();
    ig->add_option("--path", ig_path, "path JSON")->required();
    ig->add_option("--tol", ig_tol, "quadrature tolerance");

    // ---- residue ------------------------------------------------------------
    auto* rs = app.add_subcommand("residue", "residue of a phrase at a point");
    std::string rs_src, rs_at = "[0,0,0,0,0,0,0,0]", rs_M = "i1";
    bool rs_sym = false, rs_num = false, rs_both = false;
    double rs_tol = 1e-9;
    rs->add_option("src", rs_src, "phrase text or JSON")->required();
    rs->add_option("--at", rs_at, "pole location (JSON coords)");
    rs->add_option("--M", rs_M, "direction (iK or JSON coords)");
    rs->add_flag("--symbolic", rs_sym, "symbolic rules only");
    rs->add_flag("--numeric", rs_num, "quadrature only");
    rs->add_flag("--both", rs_both, "both with the defect");
    rs->add_option("--tol", rs_tol, "quadrature tolerance");

    // ---- cartan -------------------------------------------------------------
    auto* ct = app.add_subcommand("cartan", "Cartan matrix utilities");
    std::string ct_matrix;
    bool ct_realize = false, ct_symmetrize = false, ct_classify = false, ct_center = false;
    ct->add_option("--matrix", ct_matrix, "integer matrix JSON")->required();
    ct->add_flag("--realize", ct_realize);
    ct->add_flag("--symmetrize", ct_symmetrize);
    ct->add_flag("--classify", ct_classify);
    ct->add_flag("--center", ct_center);

    // ---- eta ----------------------------------------------------------------
    auto* et = app.add_subcommand("eta", "auxiliary-algebra module relations");
    std::string et_spec;
    et->add_option("--spec", et_spec, "{A, lambda:{gamma,d}, depth} JSON")->required();

    // ---- wrap ---------------------------------------------------------------
    auto* wr = app.add_subcommand("wrap", "Witt/Virasoro bracket tables");
    long long wr_k = 1, wr_j = -1;
    bool wr_virasoro = false;
    wr->add_option("--k", wr_k, "first index");
    wr->add_option("--j", wr_j, "second index");
    wr->add_flag("--virasoro", wr_virasoro, "include the central term");

    // ---- suite --------------------------------------------------------------
    auto* su = app.add_subcommand("suite", "run a named verification suite");
    std::string su_name, su_out;
    SuiteConfig cfg;
    su->add_option("name", su_name, "suite name")->required();
    su->add_option("--tol", cfg.tol, "tolerance override");
    su->add_option("--cases", cfg.cases, "case count override");
    su->add_option("--seed", cfg.seed, "random seed");
    su->add_option("--out", su_out, "write the JSON report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cd->parsed()) {
            if (cd_op == "table") {
                const MulTable& t = table(level);
                json sign = json::array(), index = json::array();
                for (int a = 0; a < t.dim(); ++a) {
                    json srow = json::array(), irow = json::array();
                    for (int b = 0; b < t.dim(); ++b) {
                        srow.push_back(static_cast<int>(t.sign[a][b]));
                        irow.push_back(static_cast<int>(t.index[a][b]));
                    }
                    sign.push_back(srow);
                    index.push_back(irow);
                }
                emit(json{{"level", level}, {"sign", sign}, {"index", index}}, "");
                return 0;
            }
            CN a = parse_point(cd_a, level);
            if (cd_op == "inverse") return emit(to_json(inverse(a)), ""), 0;
            if (cd_op == "conj") return emit(to_json(conj(a)), ""), 0;
            if (cd_op == "exp") return emit(to_json(exp_cd(a)), ""), 0;
            if (cd_op == "ln") return emit(to_json(ln_cd(a)), ""), 0;
            if (cd_op == "polar") {
                Polar p = polar(a);
                emit(json{{"rho", p.rho}, {"theta", p.theta}, {"M", coords_json(p.M.value)}}, "");
                return 0;
            }
            CN b = parse_point(cd_b, level);
            if (cd_op == "mul") return emit(to_json(mul(a, b)), ""), 0;
            CN c = parse_point(cd_c, level);
            if (cd_op == "associator") return emit(to_json(associator(a, b, c)), ""), 0;
            if (cd_op == "moufang") {
                MoufangReport r = moufang_check(a, b, c);
                emit(json{{"m1", r.m1}, {"m2", r.m2}, {"m3", r.m3}, {"max", r.max()}}, "");
                return 0;
            }
            std::cerr << "unknown cd operation: " << cd_op << "\n";
            return 2;
        }

        if (ph->parsed()) {
            Phrase p = load_phrase(ph_src, level);
            if (!ph_at.empty()) {
                CN z = parse_point(ph_at, p.level);
                emit(json{{"value", coords_json(eval(p, z))}}, "");
                return 0;
            }
            if (ph_action == "normalize") p = normalize(p);
            if (ph_action == "derivative") p = derivative_at_1(p);
            if (ph_action == "print") {
                std::cout << print_phrase(p) << "\n";
                return 0;
            }
            emit(json{{"phrase", to_json(p)}, {"text", print_phrase(p)}}, "");
            return 0;
        }

        if (ig->parsed()) {
            Phrase p = load_phrase(ig_src, level);
            Path path = path_from_json(json::parse(ig_path), p.level);
            CN v = integrate(p, path, ig_tol);
            emit(json{{"integral", coords_json(v)}}, "");
            return 0;
        }

        if (rs->parsed()) {
            Phrase p = load_phrase(rs_src, level);
            CN at = parse_point(rs_at, p.level);
            CN mv = parse_point(rs_M, p.level);
            Direction M{mv};
            json out;
            if (rs_both || (!rs_sym && !rs_num)) {
                CN sym = residue_symbolic(p, at, M);
                out["symbolic"] = coords_json(sym);
                if (rs_both) {
                    CN num = residue_numeric(p, at, M, {}, rs_tol);
                    out["numeric"] = coords_json(num);
                    out["defect"] = norm(sym - num);
                }
            } else if (rs_sym) {
                out["symbolic"] = coords_json(residue_symbolic(p, at, M));
            } else {
                out["numeric"] = coords_json(residue_numeric(p, at, M, {}, rs_tol));
            }
            emit(out, "");
            return 0;
        }

        if (ct->parsed()) {
            IMat A = json::parse(ct_matrix).get<IMat>();
            json out;
            GcmCheck ck = validate_gcm(A);
            out["gcm_ok"] = ck.ok;
            out["violations"] = ck.violations;
            if (ct_classify || (!ct_realize && !ct_symmetrize && !ct_center))
                out["affine"] = classify_affine(A);
            Realization R = realize(A);
            if (ct_realize) out["realization"] = to_json(R);
            if (ct_center) out["center"] = to_json(center_basis(R));
            if (ct_symmetrize) {
                auto s = symmetrize(A);
                if (std::holds_alternative<Symmetrization>(s)) {
                    const auto& S = std::get<Symmetrization>(s);
                    out["symmetrization"] = json{{"d", to_json(S.d)}, {"B", to_json(S.B)}};
                } else {
                    out["symmetrization"] = json{
                        {"error", "not symmetrizable"},
                        {"cycle", std::get<NotSymmetrizable>(s).cycle}};
                }
            }
            emit(out, "");
            return 0;
        }

        if (et->parsed()) {
            json spec = json::parse(et_spec);
            IMat A = spec.at("A").get<IMat>();
            int depth = spec.value("depth", 4);
            Realization R = realize(A);
            QVec lambda(R.dim_h, Rational(0));
            if (spec.contains("lambda")) {
                const json& jl = spec["lambda"];
                if (jl.contains("coords")) {
                    auto v = jl["coords"].get<std::vector<long long>>();
                    for (std::size_t t = 0; t < v.size() && t < lambda.size(); ++t)
                        lambda[t] = Rational(v[t]);
                } else {
                    auto gs = jl.value("gamma", std::vector<long long>{});
                    auto ds = jl.value("d", std::vector<long long>{});
                    // first n coordinates carry the d-values, the remaining
                    // ones are solved from the gamma pairings
                    QMat tail(R.n, QVec(R.dim_h - R.n, Rational(0)));
                    QVec rhs(R.n, Rational(0));
                    for (int jj = 0; jj < R.n; ++jj) {
                        Rational target = jj < static_cast<int>(gs.size()) ? Rational(gs[jj])
                                                                            : Rational(0);
                        for (int t = 0; t < R.n; ++t) {
                            Rational dval = t < static_cast<int>(ds.size()) ? Rational(ds[t])
                                                                             : Rational(0);
                            target -= dval * R.coroots[jj][t];
                        }
                        rhs[jj] = target;
                        for (int t = R.n; t < R.dim_h; ++t)
                            tail[jj][t - R.n] = R.coroots[jj][t];
                    }
                    auto sol = linq::solve(tail, rhs);
                    if (!sol)
                        throw std::runtime_error(
                            "lambda: gamma/d values are inconsistent; give lambda.coords");
                    for (int t = 0; t < R.n; ++t)
                        lambda[t] = t < static_cast<int>(ds.size()) ? Rational(ds[t]) : Rational(0);
                    for (int t = R.n; t < R.dim_h; ++t) lambda[t] = (*sol)[t - R.n];
                }
            }
            auto [m, act] = build_module(R, lambda, depth);
            RelationReport rep = check_relations(m, act);
            emit(json{{"basis_size", m.size()},
                      {"relations", json{{"ef", rep.ef_defect.str()},
                                         {"hh", rep.hh_defect.str()},
                                         {"he", rep.he_defect.str()},
                                         {"hf", rep.hf_defect.str()}}},
                      {"all_zero", rep.all_zero()}},
                 "");
            return rep.all_zero() ? 0 : 1;
        }

        if (wr->parsed()) {
            json out;
            if (wr_virasoro) {
                VirasoroBracket v = virasoro_bracket(wr_j, CN::zero(level), wr_k, CN::zero(level));
                out = json{{"d_index", v.d_index}, {"d_coeff", v.d_coeff}, {"c_coeff", v.c_coeff}};
            } else {
                double worst = 0.0;
                for (const WittRow& row : witt_bracket(wr_k, wr_j))
                    worst = std::max(worst, row.defect);
                out = json{{"k", wr_k}, {"j", wr_j}, {"relation", "(k-j) d_{k+j}"},
                           {"max_defect", worst}};
            }
            emit(out, "");
            return 0;
        }

        if (su->parsed()) {
            SuiteOutcome res = run_suite(su_name, cfg);
            json out{{"suite", res.name}, {"pass", res.pass}, {"report", res.report}};
            emit(out, su_out);
            return res.pass ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
