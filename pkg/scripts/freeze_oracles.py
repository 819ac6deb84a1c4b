"""Recompute the reference constants frozen into the test suite.

Everything here is evaluated with mpmath at 40 digits, directly from the
defining integrals, and shares no code with the package. Run it and compare
the printed values with the literals in tests/.
"""

from mpmath import mp, mpf, quad, log, exp, sqrt

mp.dps = 40


def fermi(x):
    return 1 / (1 + exp(x))


def marginal_avg(f, lo, hi):
    # average over the 1/a prior, in u = ln a
    return quad(lambda u: f(exp(u)), [log(lo), 0, log(hi)]) / log(hi / lo)


def joint_avg_a(f, lo, hi, theta):
    d = -log(theta)
    k = 1 / (d * log(hi / lo))
    return k * quad(lambda u: quad(lambda v: f(exp(u), exp(v)), [u - d, u]),
                    [log(lo), log(theta), 0, log(hi)])


def main():
    t1, th = mpf(1), mpf("0.5")
    t2 = t1 * th
    lo, hi = mpf("0.1"), mpf(10)
    rows = {
        "E_ini_1[0.1,10]": marginal_avg(lambda a: a * fermi(a / t1), lo, hi),
        "E_ini_2[0.1,10]": marginal_avg(lambda a: a * fermi(a / t2), lo, hi),
        "C_1[0.1,10]": marginal_avg(
            lambda a: (a / t1) ** 2 * fermi(a / t1) * fermi(-a / t1), lo, hi),
        "E_fin_1A[0.1,10]": joint_avg_a(lambda x, y: x * fermi(y / t2), lo, hi, th),
        "E_fin_2A[0.1,10]": joint_avg_a(lambda x, y: y * fermi(x / t1), lo, hi, th),
        "E_ini_1[1e-6,1e6]": marginal_avg(lambda a: a * fermi(a), mpf("1e-6"), mpf("1e6")),
        "ln2/ln(1e12)": log(2) / log(mpf("1e12")),
        "T_final(0.5)": t1 * (1 - th) / log(1 / th),
        "eta_expected(0.5)": 1 + (th * log(th) + 1 - th) / (log(th) + 1 - th),
        "zhang(0.5)": 2 * (1 - th) ** 2 / (3 - 2 * th * (1 + log(th)) - th**2),
        "curzon_ahlborn(0.81)": 1 - sqrt(mpf("0.81")),
    }
    eta = mpf("0.25")
    for name, (a, b) in {"[0.1,10]": (lo, hi), "[0.5,2]": (mpf("0.5"), mpf(2))}.items():
        def w(x):
            return x * eta * (fermi(x / t1) - fermi(x * (1 - eta) / t2))
        rows[f"W_A(eta=0.25){name}"] = marginal_avg(w, a, b)
        rows[f"W_B(eta=0.25){name}"] = marginal_avg(lambda y: w(y / (1 - eta)), a, b)
    width = max(map(len, rows))
    for k, v in rows.items():
        print(f"{k:<{width}}  {mp.nstr(v, 17)}")


if __name__ == "__main__":
    main()
