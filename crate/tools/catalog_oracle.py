#!/usr/bin/env python3
"""Generate the bundled q-series catalog from classical product formulas.

j(q)   = E4(q)^3 / Delta(q),   E4 = 1 + 240 sum sigma_3(n) q^n,
                               Delta = q prod (1 - q^n)^24
2B     = eta(t)^24 / eta(2t)^24 + 24
3B     = eta(t)^12 / eta(3t)^12 + 12
4C     = eta(t)^8  / eta(4t)^8  + 8

Areas are the PSL2(Z) indices of the fixing groups Gamma0(N) (1, 3, 4, 6).
Output: one JSON record per line, coefficients of q^0 .. q^PREC.
"""
import json
import sys

PREC = int(sys.argv[1]) if len(sys.argv) > 1 else 40
N = PREC + 8


def mul(a, b):
    out = [0] * N
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b[: N - i]):
            out[i + j] += x * y
    return out


def inv(a):
    # a[0] must be +-1
    out = [0] * N
    out[0] = 1 // a[0]
    for n in range(1, N):
        s = sum(a[k] * out[n - k] for k in range(1, n + 1))
        out[n] = -s * out[0]
    return out


def prod_pow(step, power):
    """prod_{n>=1} (1 - q^{step n})^power as a power series."""
    series = [0] * N
    series[0] = 1
    factor_inv = power < 0
    for n in range(1, N):
        if step * n >= N:
            break
        f = [0] * N
        f[0] = 1
        f[step * n] = -1
        if factor_inv:
            f = inv(f)
        for _ in range(abs(power)):
            series = mul(series, f)
    return series


def sigma3(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def j_series():
    e4 = [1] + [240 * sigma3(n) for n in range(1, N)]
    e4c = mul(mul(e4, e4), e4)
    # j = q^{-1} E4^3 / prod (1-q^n)^24
    return mul(e4c, inv(prod_pow(1, 24)))  # index k -> coefficient of q^{k-1}


def eta_quotient(level, power, shift):
    # q^{-1} prod (1-q^n)^power / prod (1-q^{level n})^power
    s = mul(prod_pow(1, power), inv(prod_pow(level, power)))
    s = list(s)
    s[1] += shift
    return s


def record(name, area, laurent):
    assert laurent[0] == 1
    coeffs = [str(c) for c in laurent[1 : PREC + 2]]
    return json.dumps({"name": name, "area": str(area), "coeffs": coeffs})


if __name__ == "__main__":
    print(record("1A", 1, j_series()))
    print(record("2B", 3, eta_quotient(2, 24, 24)))
    print(record("3B", 4, eta_quotient(3, 12, 12)))
    print(record("4C", 6, eta_quotient(4, 8, 8)))
