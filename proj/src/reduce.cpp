#include "abelint/reduce.hpp"

#include <cmath>

namespace abelint {

namespace {

int gen_index(int i, int j) {
    for (int k = 0; k < 9; ++k)
        if (kGenExponents[static_cast<std::size_t>(k)] == std::pair<int, int>{i, j}) return k;
    return -1;
}

GeneratorCombo zero_combo() { return GeneratorCombo{}; }

void add_scaled(GeneratorCombo& acc, const GeneratorCombo& c, const Poly& w) {
    for (int k = 0; k < 9; ++k)
        if (!c[static_cast<std::size_t>(k)].zero() && !w.zero())
            acc[static_cast<std::size_t>(k)] += w * c[static_cast<std::size_t>(k)];
}

void add_scaled(GeneratorCombo& acc, const GeneratorCombo& c, double w) {
    for (int k = 0; k < 9; ++k)
        if (!c[static_cast<std::size_t>(k)].zero() && w != 0.0)
            acc[static_cast<std::size_t>(k)] += w * c[static_cast<std::size_t>(k)];
}

}  // namespace

double eval_combo(const GeneratorCombo& combo, const GeneratorVector& gv, double h) {
    double s = 0.0;
    for (int k = 0; k < 9; ++k) s += combo[static_cast<std::size_t>(k)](h) * gv[k];
    return s;
}

ReductionTable::ReductionTable(const HamiltonianParams& p) : p_(p), built_(4) {
    if (p.a == 0.0 || p.c == 0.0 || p.disc() == 0.0)
        throw std::domain_error("reduction requires a c (b^2 - 4ac) != 0 (a = 0 has its own chart)");
    // generators
    for (int k = 0; k < 9; ++k) {
        GeneratorCombo u = zero_combo();
        u[static_cast<std::size_t>(k)] = Poly::constant(1.0);
        const auto [i, j] = kGenExponents[static_cast<std::size_t>(k)];
        memo_[{i, j}] = u;
    }
    // I_3,1 = -(1/2a) (I11 + (b/3) I13): the i = 3 line of the x-derivative recurrence
    {
        GeneratorCombo u = zero_combo();
        u[kI11] = Poly::constant(-1.0 / (2.0 * p_.a));
        u[kI13] = Poly::constant(-p_.b / (6.0 * p_.a));
        memo_[{3, 1}] = u;
    }
    // I_0,4 = (1/c) (I02 - b I22): the level identity with the x^0 y^0 weight
    {
        GeneratorCombo u = zero_combo();
        u[kI02] = Poly::constant(1.0 / p_.c);
        u[kI22] = Poly::constant(-p_.b / p_.c);
        memo_[{0, 4}] = u;
    }
}

const GeneratorCombo& ReductionTable::get(int i, int j) {
    if (i < 0 || j < 0) throw std::domain_error("negative exponent in reduction");
    if (j == 0) {
        static const GeneratorCombo zero = zero_combo();
        return zero;  // contour x^i dx of an exact form
    }
    auto it = memo_.find({i, j});
    if (it != memo_.end()) return it->second;
    for (int n = built_ + 1; n <= i + j; ++n) build_level(n);
    built_ = std::max(built_, i + j);
    it = memo_.find({i, j});
    if (it == memo_.end()) throw std::logic_error("reduction level build missed a monomial");
    return it->second;
}

void ReductionTable::build_level(int n) {
    // known entries of this level (generators seeded in the constructor)
    auto known = [&](int i) { return memo_.count({i, n - i}) > 0; };

    for (int start = 0; start <= 1; ++start) {
        // unknowns x_i = I_{i, n-i}, i = start, start+2, ..., excluding j = 0 and knowns
        std::vector<int> is;
        for (int i = start; i < n; i += 2)
            if (!known(i)) is.push_back(i);
        if (is.empty()) continue;

        // x_i = base_i + coup_i * x_{nbr(i)}, nbr = i+2 below the saddle line, i-2 above
        std::map<int, GeneratorCombo> base;
        std::map<int, double> coup;
        std::map<int, int> nbr;

        for (int i : is) {
            const int j = n - i;
            GeneratorCombo acc = zero_combo();
            double cp = 0.0;
            int nb = -1;
            if (i <= 2) {
                // y-ladder recurrence (valid for j >= 4)
                const double pref = j / (2.0 * p_.c * (i + j + 1));
                add_scaled(acc, get(i, j - 4), Poly({0.0, 2.0 * pref}));
                add_scaled(acc, get(i + 2, j - 4), -pref);
                add_scaled(acc, get(i, j - 2), pref * (i + 2.0 * j - 3.0) / (j - 2.0));
                const double w = -pref * (i + j + 1.0) * p_.b / (j - 2.0);
                if (known(i + 2)) add_scaled(acc, memo_[{i + 2, j - 2}], w);
                else { cp = w; nb = i + 2; }
            } else if (i == 3) {
                // x-derivative recurrence at i = 3 (no i-4 terms)
                add_scaled(acc, get(1, j), -1.0 / (2.0 * p_.a));
                const double w = -(j * p_.b) / (2.0 * p_.a * (j + 2.0));
                if (known(1)) add_scaled(acc, memo_[{1, j + 2}], w);
                else { cp = w; nb = 1; }
            } else {
                // x-ladder recurrence (valid for i >= 4)
                const double pref = 1.0 / (2.0 * p_.a * (i + j + 1));
                add_scaled(acc, get(i - 4, j), Poly({0.0, pref * 2.0 * (i - 3.0)}));
                add_scaled(acc, get(i - 2, j), -pref * (2.0 * i + j - 2.0));
                add_scaled(acc, get(i - 4, j + 2), pref * j * (i - 3.0) / (j + 2.0));
                const double w = -pref * (i + j + 1.0) * j * p_.b / (j + 2.0);
                if (known(i - 2)) add_scaled(acc, memo_[{i - 2, j + 2}], w);
                else { cp = w; nb = i - 2; }
            }
            base[i] = acc;
            coup[i] = cp;
            nbr[i] = nb;
        }

        // resolve the unique 2-cycle (if any), then propagate
        std::vector<int> pending = is;
        std::map<int, GeneratorCombo> solved;
        auto resolved = [&](int i) { return solved.count(i) > 0; };

        bool progress = true;
        while (!pending.empty() && progress) {
            progress = false;
            for (auto it = pending.begin(); it != pending.end();) {
                const int i = *it;
                if (nbr[i] < 0 || resolved(nbr[i])) {
                    GeneratorCombo v = base[i];
                    if (nbr[i] >= 0) add_scaled(v, solved[nbr[i]], coup[i]);
                    solved[i] = v;
                    it = pending.erase(it);
                    progress = true;
                } else {
                    ++it;
                }
            }
            if (!progress && !pending.empty()) {
                // the remaining chain hangs off one mutual pair: find it
                int lo = -1;
                for (int i : pending)
                    if (nbr[i] >= 0 && nbr.count(nbr[i]) && nbr[nbr[i]] == i) {
                        lo = i;
                        break;
                    }
                if (lo < 0)
                    throw std::logic_error("unexpected coupling structure in reduction level");
                const int hi = nbr[lo];
                // x_lo = b_lo + c_lo (b_hi + c_hi x_lo)
                const double det = 1.0 - coup[lo] * coup[hi];
                GeneratorCombo v = base[lo];
                add_scaled(v, base[hi], coup[lo]);
                for (auto& poly : v) poly *= 1.0 / det;
                solved[lo] = v;
                pending.erase(std::find(pending.begin(), pending.end(), lo));
                progress = true;
            }
        }
        for (auto& [i, v] : solved) memo_[{i, n - i}] = v;
    }
}

ReductionResult reduce_monomial(const HamiltonianParams& p, int i, int j) {
    ReductionTable table(p);
    ReductionResult r;
    r.i = i;
    r.j = j;
    r.coef = table.get(i, j);
    for (int k = 0; k < 9; ++k) r.degree[static_cast<std::size_t>(k)] = r.coef[static_cast<std::size_t>(k)].degree();
    return r;
}

MelnikovDecomposition decompose_melnikov(const HamiltonianParams& p, const PerturbationPoly& pert) {
    ReductionTable table(p);
    MelnikovDecomposition d;
    d.degree = pert.degree();
    const int n = pert.degree();
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            if (pert.b(i, j) != 0.0) add_scaled(d.coef, table.get(i, j), pert.b(i, j));
            // -f dy converts through the exact form d(x^i y^(j+1)) to a dx-moment
            if (pert.a(i, j) != 0.0 && i >= 1)
                add_scaled(d.coef, table.get(i - 1, j + 1),
                           pert.a(i, j) * static_cast<double>(i) / (j + 1));
        }
    return d;
}

std::array<int, 9> coefficient_degree_bounds(int n) {
    std::array<int, 9> b{};
    b[kI01] = floor_div(n - 1, 4);
    b[kI03] = floor_div(n - 3, 4);
    b[kI21] = floor_div(n - 3, 4);
    b[kI23] = floor_div(n - 1, 4) - 1;
    b[kI12] = floor_div(n - 3, 4);
    b[kI11] = floor_div(n - 2, 4);
    b[kI13] = floor_div(n, 4) - 1;
    b[kI02] = floor_div(n - 2, 4);
    b[kI22] = floor_div(n, 4) - 1;
    return b;
}

}  // namespace abelint
