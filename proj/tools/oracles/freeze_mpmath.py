"""Freeze high-precision reference values for the special-function tests.

Writes tests/oracles/mpmath_values.inc, a list of C++ aggregate initializers.
Chi moments use E[chi^k] = 2^(k/2) G((p+k)/2)/G(p/2) 1F1(-k/2; p/2; -lam^2/2),
which is independent of the Laguerre path the library takes.
"""

from pathlib import Path

import mpmath as mp

mp.mp.dps = 50

OUT = Path(__file__).resolve().parents[2] / "tests" / "oracles" / "mpmath_values.inc"


def kummer_cases():
    cases = []
    for a, b in [(-0.5, 0.5), (-0.5, 1.5), (0.5, 2.0), (1.5, 3.5), (-1.5, 1.0), (2.25, 1.25)]:
        for x in [-200.0, -35.0, -4.0, -0.3, 0.0, 0.7, 5.0, 30.0]:
            cases.append((a, b, x, mp.hyp1f1(a, b, x)))
    return cases


def laguerre(nu, alpha, x):
    return mp.binomial(nu + alpha, nu) * mp.hyp1f1(-nu, alpha + 1, x)


def laguerre_cases():
    cases = []
    for p in [1, 2, 3, 4, 6, 12, 37]:
        alpha = mp.mpf(p) / 2 - 1
        for x in [0.0, -1e-8, -0.01, -1.0, -7.5, -42.0, -59.0, -61.0, -250.0, -3000.0, -1e5]:
            for nu in [0.5, 1.5]:
                cases.append((nu, float(alpha), x, laguerre(mp.mpf(nu), alpha, x)))
    return cases


def chi_raw(p, lam, k):
    p = mp.mpf(p)
    lam = mp.mpf(lam)
    return (mp.power(2, mp.mpf(k) / 2) * mp.gamma((p + k) / 2) / mp.gamma(p / 2)
            * mp.hyp1f1(-mp.mpf(k) / 2, p / 2, -lam * lam / 2))


def chi_cases():
    cases = []
    for p in [1, 2, 3, 5, 6, 10]:
        for lam in [0.0, 0.25, 1.0, 3.0, 8.0, 20.0]:
            cases.append((p, lam, *(chi_raw(p, lam, k) for k in (1, 2, 3, 4))))
    return cases


def g(v):
    return mp.nstr(v, 20)


def main():
    lines = ["// Generated by tools/oracles/freeze_mpmath.py (mpmath, 50 digits). Do not edit.", ""]
    lines.append("inline const KummerCase kKummerCases[] = {")
    for a, b, x, v in kummer_cases():
        lines.append(f"    {{{a!r}, {b!r}, {x!r}, {g(v)}}},")
    lines.append("};")
    lines.append("")
    lines.append("inline const LaguerreCase kLaguerreCases[] = {")
    for nu, alpha, x, v in laguerre_cases():
        lines.append(f"    {{{nu!r}, {alpha!r}, {x!r}, {g(v)}}},")
    lines.append("};")
    lines.append("")
    lines.append("inline const ChiCase kChiCases[] = {")
    for p, lam, m1, m2, m3, m4 in chi_cases():
        lines.append(f"    {{{p}, {lam!r}, {g(m1)}, {g(m2)}, {g(m3)}, {g(m4)}}},")
    lines.append("};")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
