"""Independent cross-checks that share no code with the engine.

* :func:`schubert_lines` - lines on a hypersurface via c_top(Sym^l S*) on G(2, N+1)
* :func:`kontsevich_p2` - rational plane curves through 3d - 1 points
* :func:`quintic_mirror` - instanton numbers of the quintic from the mirror periods
* :func:`j_function_p` - one-point descendants of P^N from the J-function
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import comb, factorial

__all__ = [
    "SchubertClass",
    "schubert_lines",
    "kontsevich_p2",
    "quintic_mirror",
    "invert_multiple_covers",
    "multiple_cover_sum",
    "j_function_p",
]


class SchubertClass:
    """Element of H*(G(2, N+1)) in the basis sigma_{a,b}, N-1 >= a >= b >= 0."""

    def __init__(self, N: int, coeffs=None):
        self.N = N
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def one(cls, N):
        return cls(N, {(0, 0): 1})

    def _valid(self, a, b):
        return self.N - 1 >= a >= b >= 0

    def times_sigma1(self):
        # Pieri: sigma_1 * sigma_{a,b} = sigma_{a+1,b} + sigma_{a,b+1}
        out = defaultdict(int)
        for (a, b), c in self.coeffs.items():
            for nb in ((a + 1, b), (a, b + 1)):
                if self._valid(*nb):
                    out[nb] += c
        return SchubertClass(self.N, out)

    def times_sigma11(self):
        out = defaultdict(int)
        for (a, b), c in self.coeffs.items():
            if self._valid(a + 1, b + 1):
                out[(a + 1, b + 1)] += c
        return SchubertClass(self.N, out)

    def __add__(self, other):
        out = defaultdict(int, self.coeffs)
        for k, v in other.coeffs.items():
            out[k] += v
        return SchubertClass(self.N, out)

    def scale(self, c):
        return SchubertClass(self.N, {k: c * v for k, v in self.coeffs.items()})

    def degree(self):
        return self.coeffs.get((self.N - 1, self.N - 1), 0)


def schubert_lines(N: int, l: int) -> int:
    """Number of lines on a general degree-l hypersurface in P^N.

    Chern roots x1, x2 of S* give c_top(Sym^l S*) = prod_j (j x1 + (l-j) x2).
    The factors for j and l-j pair up to j(l-j) e1^2 + (l-2j)^2 e2, with
    e1 = sigma_1 and e2 = sigma_{1,1}; a middle factor (l/2) e1 remains
    when l is even.
    """
    if l + 1 != 2 * (N - 1):
        raise ValueError(
            f"rank of Sym^{l} S* is {l + 1}, dimension of G(2,{N + 1}) is {2 * (N - 1)}"
        )
    cls = SchubertClass.one(N)
    for j in range(0, (l + 1) // 2):
        a, b = j * (l - j), (l - 2 * j) ** 2
        cls = cls.times_sigma1().times_sigma1().scale(a) + cls.times_sigma11().scale(b)
    if l % 2 == 0:
        cls = cls.times_sigma1().scale(l // 2)
    return cls.degree()


def kontsevich_p2(dmax: int) -> list[int]:
    """[N_1, ..., N_dmax] for rational plane curves."""
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    Nd = [0, 1]
    for d in range(2, dmax + 1):
        total = 0
        for d1 in range(1, d):
            d2 = d - d1
            total += Nd[d1] * Nd[d2] * (
                d1 * d1 * d2 * d2 * comb(3 * d - 4, 3 * d1 - 2)
                - d1**3 * d2 * comb(3 * d - 4, 3 * d1 - 1)
            )
        Nd.append(total)
    return Nd[1:]


# truncated power series as lists of Fractions, index = power

def _mul(a, b, n):
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _inv(a, n):
    if not a[0]:
        raise ZeroDivisionError("series with zero constant term")
    out = [Fraction(0)] * n
    out[0] = 1 / a[0]
    for k in range(1, n):
        s = sum(a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1))
        out[k] = -s / a[0]
    return out


def _exp(a, n):
    """exp of a series with zero constant term, via f' = a' f."""
    assert not a[0]
    da = [k * a[k] for k in range(1, n)]
    f = [Fraction(0)] * n
    f[0] = Fraction(1)
    for k in range(1, n):
        f[k] = sum(da[j - 1] * f[k - j] for j in range(1, k + 1)) / k
    return f


def _compose(a, b, n):
    """a(b(x)) for b with zero constant term."""
    out = [Fraction(0)] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(n):
        if k < len(a) and a[k]:
            for i in range(n):
                out[i] += a[k] * power[i]
        power = _mul(power, b, n)
    return out


def _revert(q, n):
    """Compositional inverse of q(z) = z + O(z^2)."""
    assert q[0] == 0 and q[1] == 1
    z = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 2)
    # fixed point z <- x - (q(z) - z), one new coefficient per pass
    for _ in range(n):
        qz = _compose(q, z, n)
        z = [z[i] - (qz[i] - (1 if i == 1 else 0)) for i in range(n)]
    return z


def multiple_cover_sum(n_d: dict[int, int], d: int) -> Fraction:
    """I_d = sum over k | d of n_{d/k} / k^3."""
    return sum(
        (Fraction(n_d[d // k], k**3) for k in range(1, d + 1) if d % k == 0),
        Fraction(0),
    )


def invert_multiple_covers(I: dict[int, Fraction]) -> dict[int, Fraction]:
    """Solve I_d = sum_{k | d} n_{d/k} / k^3 for n_d, d = 1, 2, ..."""
    n = {}
    for d in sorted(I):
        n[d] = I[d] - sum(
            (Fraction(n[d // k], k**3) for k in range(2, d + 1) if d % k == 0),
            Fraction(0),
        )
    return n


def quintic_mirror(dmax: int) -> tuple[list[Fraction], list[int]]:
    """Degree-d invariants I_d and instanton numbers n_d of the quintic.

    w0 = sum (5m)!/(m!)^5 z^m; the log solution is w0 log z + w1 with
    w1 = sum (5m)!/(m!)^5 * 5 (H_{5m} - H_m) z^m. The mirror map is
    q = z exp(w1/w0), and the Yukawa coupling
    5 / ((1 - 5^5 z) w0^2 (z dt/dz)^3) in the variable q equals
    5 + sum_d n_d d^3 q^d / (1 - q^d).
    """
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    n = dmax + 1
    a = [Fraction(factorial(5 * m), factorial(m) ** 5) for m in range(n)]
    harm = [Fraction(0)]
    for k in range(1, 5 * n):
        harm.append(harm[-1] + Fraction(1, k))
    b = [a[m] * 5 * (harm[5 * m] - harm[m]) for m in range(n)]
    f = _mul(b, _inv(a, n), n)  # t = log z + f(z)
    qz = [Fraction(0)] + _exp(f, n)[: n - 1]  # q = z exp(f)
    z_of_q = _revert(qz, n)
    # z dt/dz = 1 + z f'(z)
    zdt = [Fraction(1)] + [k * f[k] for k in range(1, n)]
    denom = _mul(_mul(_mul(zdt, zdt, n), zdt, n), _mul(a, a, n), n)
    denom = _mul(denom, [Fraction(1), Fraction(-(5**5))], n)
    yuk_z = [5 * c for c in _inv(denom, n)]
    yuk_q = _compose(yuk_z, z_of_q, n)
    if yuk_q[0] != 5:
        raise AssertionError("Yukawa coupling must start with 5")
    # yuk_q[d] = sum_{k | d} n_k k^3
    inst = {}
    for d in range(1, dmax + 1):
        rest = sum(inst[k] * k**3 for k in inst if d % k == 0)
        val = (yuk_q[d] - rest) / d**3
        if val.denominator != 1:
            raise AssertionError(f"non-integral instanton number at degree {d}")
        inst[d] = int(val)
    I = [multiple_cover_sum(inst, d) for d in range(1, dmax + 1)]
    return I, [inst[d] for d in range(1, dmax + 1)]


def j_function_p(N: int, d: int, k: int, a: int) -> Fraction:
    """<tau_k(H^a)>_d on P^N read off the small J-function.

    sum_k z^(-k-1) <tau_k(phi_a)>_d phi^a = z / prod_{j=1}^d (H + j z)^(N+1),
    so the coefficient of H^(N-a) z^(-k-1) is the invariant.
    """
    b = N - a
    if b < 0 or b > N:
        return Fraction(0)
    # z-power of the H^b term: 1 - d(N+1) - b
    if 1 - d * (N + 1) - b != -k - 1:
        return Fraction(0)
    series = {0: Fraction(1)}
    for j in range(1, d + 1):
        factor = {c: Fraction((-1) ** c * comb(N + c, c), j ** (N + 1 + c)) for c in range(N + 1)}
        new = defaultdict(Fraction)
        for c1, v1 in series.items():
            for c2, v2 in factor.items():
                if c1 + c2 <= N:
                    new[c1 + c2] += v1 * v2
        series = new
    return series.get(b, Fraction(0))
