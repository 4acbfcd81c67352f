#!/usr/bin/env python3
"""Generate synthetic catalogs with planted relations, using Fraction
arithmetic only.

pair.jsonl    P1 = f(P2) with f = (x^3-2x^2+3x+1)/(x^2+x+5); areas 1, 3.
chain5.jsonl  A = h3(B), B(q^3) = h2(C), C = h1(D), E = h4(D) with
              h1 = (x^2+3x-1)/(x+2), h2 = x^3-4x+2, h3 = (x^2-x+4)/(x-1),
              h4 = (x^3+2x^2-x+3)/(x^2-2x+2); areas 1, 2, 6, 12, 4.
chain4.jsonl  chain5 without B, so B appears only as an intermediate.

Usage: fixture_oracle.py OUTDIR
"""
import json
import random
import sys
from fractions import Fraction as F

OUT_PREC = 40


class Laurent:
    """lead exponent plus coefficient list; coeffs known through lead+len-1."""

    def __init__(self, lead, coeffs):
        self.lead = lead
        self.c = list(coeffs)

    @property
    def top(self):
        return self.lead + len(self.c) - 1

    def coeff(self, e):
        i = e - self.lead
        return self.c[i] if 0 <= i < len(self.c) else F(0)

    def __mul__(self, o):
        n = min(len(self.c), len(o.c))
        out = [F(0)] * n
        for i in range(n):
            if self.c[i] == 0:
                continue
            for j in range(n - i):
                out[i + j] += self.c[i] * o.c[j]
        return Laurent(self.lead + o.lead, out)

    def add_const(self, k):
        # only used with lead <= 0 and 0 within range
        out = list(self.c)
        i = -self.lead
        if i < len(out):
            out[i] += k
        return Laurent(self.lead, out)

    def scale(self, k):
        return Laurent(self.lead, [x * k for x in self.c])

    def inv(self):
        a = self.c
        out = [F(0)] * len(a)
        out[0] = 1 / a[0]
        for n in range(1, len(a)):
            out[n] = -sum(a[k] * out[n - k] for k in range(1, n + 1)) / a[0]
        return Laurent(-self.lead, out)


def poly_at(p, s):
    """p lowest degree first, s with lead -1; relative length preserved."""
    acc = Laurent(0, [F(p[-1])] + [F(0)] * (len(s.c) - 1))
    for c in reversed(p[:-1]):
        acc = acc * s
        acc = acc.add_const(F(c))
    return acc


def ratfun_at(num, den, s):
    return poly_at(num, s) * poly_at(den, s).inv()


def qseries(coeffs):
    """1/q + coeffs[0] + coeffs[1] q + ..."""
    return Laurent(-1, [F(1)] + [F(c) for c in coeffs])


def subst(s, r):
    out = [F(0)] * ((len(s.c) - 1) * r + 1)
    for i, c in enumerate(s.c):
        out[i * r] = c
    return Laurent(s.lead * r, out)


def inner_solve(num, den, target, nterms):
    """s = 1/q + c0 + ... with num(s)/den(s) = target; target lead -d."""
    d = len(num) - len(den)
    cs = []
    for k in range(nterms):
        e = k - d + 1

        def value(ck):
            s = qseries(cs + [ck])
            return ratfun_at(num, den, s).coeff(e)

        v0, v1 = value(F(0)), value(F(1))
        cs.append((target.coeff(e) - v0) / (v1 - v0))
    return cs


def to_text(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def record(name, area, coeffs):
    return json.dumps({"name": name, "area": area, "coeffs": [to_text(F(c)) for c in coeffs[: OUT_PREC + 1]]})


def series_coeffs(s):
    assert s.lead == -1 and s.c[0] == 1
    return s.c[1:]


def pair():
    rng = random.Random(7)
    p2 = qseries([rng.randint(-5, 5) for _ in range(OUT_PREC + 6)])
    p1 = ratfun_at([1, 3, -2, 1], [5, 1, 1], p2)
    return [record("P1", "1", series_coeffs(p1)), record("P2", "3", series_coeffs(p2))]


def chain5():
    rng = random.Random(11)
    b = qseries([rng.randint(-5, 5) for _ in range(OUT_PREC + 6)])
    h1 = ([-1, 3, 1], [2, 1])
    h2 = ([2, -4, 0, 1], [1])
    h3 = ([4, -1, 1], [-1, 1])
    c = qseries(inner_solve(*h2, subst(b, 3), OUT_PREC + 3))
    d = qseries(inner_solve(*h1, c, OUT_PREC + 2))
    a = ratfun_at(*h3, b)
    h4 = ([3, -1, 2, 1], [2, -2, 1])
    e = ratfun_at(*h4, d)
    # forward checks
    assert all(x == y for x, y in zip(ratfun_at(*h1, d).c[: OUT_PREC], c.c[: OUT_PREC]))
    back = ratfun_at(*h2, c)
    assert all(back.coeff(e) == subst(b, 3).coeff(e) for e in range(-3, back.top + 1))
    return [
        record("A", "1", series_coeffs(a)),
        record("B", "2", series_coeffs(b)),
        record("C", "6", series_coeffs(c)),
        record("D", "12", series_coeffs(d)),
        record("E", "4", series_coeffs(e)),
    ]


def main():
    out = sys.argv[1]
    full = chain5()
    hidden = [row for row in full if json.loads(row)["name"] != "B"]
    for name, rows in [("pair.jsonl", pair()), ("chain5.jsonl", full), ("chain4.jsonl", hidden)]:
        with open(f"{out}/{name}", "w") as fh:
            fh.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
