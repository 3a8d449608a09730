#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ocw {

/// Finite-dimensional real Lie algebra given by structure constants together
/// with an invariant symmetric form. Validated on construction.
struct BaseLieAlgebra {
    int dim = 0;
    // c[a][b][e]: coefficient of basis element e in [x_a, x_b]
    std::vector<std::vector<std::vector<double>>> c;
    std::vector<std::vector<double>> form;

    std::vector<double> bracket(const std::vector<double>& u, const std::vector<double>& v) const {
        std::vector<double> out(dim, 0.0);
        for (int a = 0; a < dim; ++a) {
            if (u[a] == 0.0) continue;
            for (int b = 0; b < dim; ++b) {
                if (v[b] == 0.0) continue;
                for (int e = 0; e < dim; ++e) out[e] += u[a] * v[b] * c[a][b][e];
            }
        }
        return out;
    }

    double pair(const std::vector<double>& u, const std::vector<double>& v) const {
        double s = 0.0;
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) s += u[a] * form[a][b] * v[b];
        return s;
    }

    void validate(double tol = 1e-12) const {
        auto basis = [&](int j) {
            std::vector<double> e(dim, 0.0);
            e[j] = 1.0;
            return e;
        };
        auto nrm = [&](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
        };
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
                auto ab = bracket(basis(a), basis(b));
                auto ba = bracket(basis(b), basis(a));
                for (int e = 0; e < dim; ++e)
                    if (std::abs(ab[e] + ba[e]) > tol)
                        throw std::invalid_argument("lie algebra: bracket not antisymmetric");
            }
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                for (int e = 0; e < dim; ++e) {
                    auto x = basis(a), y = basis(b), z = basis(e);
                    auto jac = bracket(x, bracket(y, z));
                    auto t2 = bracket(y, bracket(z, x));
                    auto t3 = bracket(z, bracket(x, y));
                    for (int q = 0; q < dim; ++q) jac[q] += t2[q] + t3[q];
                    if (nrm(jac) > tol) throw std::invalid_argument("lie algebra: Jacobi fails");
                    // invariance ([x,y]|z) = (x|[y,z])
                    double lhs = pair(bracket(x, y), z);
                    double rhs = pair(x, bracket(y, z));
                    if (std::abs(lhs - rhs) > tol)
                        throw std::invalid_argument("lie algebra: form not invariant");
                }
    }

    /// Basis (E, H, F): [H,E] = 2E, [H,F] = -2F, [E,F] = H; trace form
    /// normalized to (E|F) = 1, (H|H) = 2.
    static BaseLieAlgebra sl2() {
        BaseLieAlgebra g;
        g.dim = 3;
        g.c.assign(3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
        const int E = 0, H = 1, F = 2;
        g.c[H][E][E] = 2.0;
        g.c[E][H][E] = -2.0;
        g.c[H][F][F] = -2.0;
        g.c[F][H][F] = 2.0;
        g.c[E][F][H] = 1.0;
        g.c[F][E][H] = -1.0;
        g.form.assign(3, std::vector<double>(3, 0.0));
        g.form[E][F] = g.form[F][E] = 1.0;
        g.form[H][H] = 2.0;
        g.validate();
        return g;
    }

    /// Heisenberg block (e, f, gamma, d): [e,f] = gamma central, [d,e] = e,
    /// [d,f] = -f; form (e|f) = 1, (gamma|d) = 1.
    static BaseLieAlgebra heisenberg1() {
        BaseLieAlgebra g;
        g.dim = 4;
        g.c.assign(4, std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0)));
        const int e = 0, f = 1, ga = 2, d = 3;
        g.c[e][f][ga] = 1.0;
        g.c[f][e][ga] = -1.0;
        g.c[d][e][e] = 1.0;
        g.c[e][d][e] = -1.0;
        g.c[d][f][f] = -1.0;
        g.c[f][d][f] = 1.0;
        g.form.assign(4, std::vector<double>(4, 0.0));
        g.form[e][f] = g.form[f][e] = 1.0;
        g.form[ga][d] = g.form[d][ga] = 1.0;
        g.validate();
        return g;
    }

    /// Rotation algebra with the negated Killing form scaled to the identity.
    static BaseLieAlgebra so3() {
        BaseLieAlgebra g;
        g.dim = 3;
        g.c.assign(3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
        g.c[0][1][2] = 1.0;
        g.c[1][0][2] = -1.0;
        g.c[1][2][0] = 1.0;
        g.c[2][1][0] = -1.0;
        g.c[2][0][1] = 1.0;
        g.c[0][2][1] = -1.0;
        g.form.assign(3, std::vector<double>(3, 0.0));
        for (int j = 0; j < 3; ++j) g.form[j][j] = 1.0;
        g.validate();
        return g;
    }
};

}  // namespace ocw
