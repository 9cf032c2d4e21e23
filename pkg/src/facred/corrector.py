"""Randomized self-correction of low-degree polynomial oracles.

Querying an oracle along a random degree-2 curve through the target point
turns per-point errors into correctable noise on a univariate restriction:
a Berlekamp-Welch decode of the degree-2d restriction recovers the value at
curve parameter 0. An oracle that is right on most uniform inputs thereby
answers correctly at any fixed point with constant probability, and
repetition with plurality voting pushes the error down.
"""

from collections import Counter
from dataclasses import dataclass

from .errors import AmplifyExhausted, DecodeFailure, FacredError, InvalidParameters


@dataclass(frozen=True)
class CorrectionParams:
    d: int
    p: int
    epsilon: float = 0.1
    m: int = 0  # curve points queried; 0 means the 12d+1 default

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameters(f"degree {self.d} < 1")
        if self.p <= 12 * self.d:
            raise InvalidParameters(f"p={self.p} must exceed 12d={12 * self.d}")
        if not 0 < self.epsilon < 1 / 3:
            raise InvalidParameters(f"epsilon={self.epsilon} outside (0, 1/3)")
        if self.m == 0:
            object.__setattr__(self, "m", 12 * self.d + 1)
        if self.m < 4 * self.d + 3:
            raise InvalidParameters(f"m={self.m} < 4d+3={4 * self.d + 3}")
        if self.m > self.p - 1:
            raise InvalidParameters(f"m={self.m} needs {self.m} distinct nonzero curve parameters mod {self.p}")


def _solve_mod(rows, rhs, p):
    """One solution of a linear system over F_p, or None. Free variables -> 0."""
    n_eq = len(rows)
    n_var = len(rows[0]) if rows else 0
    a = [[rows[i][j] % p for j in range(n_var)] + [rhs[i] % p] for i in range(n_eq)]
    pivots = []
    r = 0
    for c in range(n_var):
        pr = next((i for i in range(r, n_eq) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [v * inv % p for v in a[r]]
        for i in range(n_eq):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(vi - f * vr) % p for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_eq:
            break
    for i in range(r, n_eq):
        if a[i][n_var]:
            return None
    x = [0] * n_var
    for i, c in enumerate(pivots):
        x[c] = a[i][n_var]
    return x


def _poly_divmod(num, den, p):
    """Quotient and remainder of coefficient lists (low to high) over F_p."""
    num = num[:]
    dd = len(den) - 1
    while den and den[-1] == 0:
        den = den[:-1]
        dd -= 1
    if not den:
        raise ZeroDivisionError
    inv = pow(den[-1], -1, p)
    q = [0] * max(0, len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        coef = num[i] * inv % p
        q[i - dd] = coef
        if coef:
            for j, dc in enumerate(den):
                num[i - dd + j] = (num[i - dd + j] - coef * dc) % p
    while num and num[-1] == 0:
        num.pop()
    return q, num


def berlekamp_welch(xs, ys, D: int, e: int, p: int) -> list[int]:
    """Decode a degree <= D polynomial from values with at most e errors.

    Returns coefficients (constant first, length D+1) of a polynomial
    agreeing with at least len(xs) - e of the supplied points; raises
    DecodeFailure when no such polynomial exists.
    """
    xs = [x % p for x in xs]
    ys = [y % p for y in ys]
    if len(xs) != len(ys):
        raise InvalidParameters("xs and ys lengths differ")
    if len(set(xs)) != len(xs):
        raise InvalidParameters("abscissae must be distinct")
    if len(xs) < D + 2 * e + 1:
        raise InvalidParameters(f"{len(xs)} points cannot correct {e} errors at degree {D}")
    if e == 0:
        # plain interpolation through the first D+1 points, then agreement check
        pts = list(zip(xs, ys))[: D + 1]
        coeffs = _interpolate(pts, p)
    else:
        # Q(x) = y * E(x) with E monic of degree e, deg Q <= D + e
        nq = D + e + 1
        rows, rhs = [], []
        for x, y in zip(xs, ys):
            xp = [pow(x, j, p) for j in range(nq)]
            row = xp[:nq] + [(-y * pow(x, j, p)) % p for j in range(e)]
            rows.append(row)
            rhs.append(y * pow(x, e, p) % p)
        sol = _solve_mod(rows, rhs, p)
        if sol is None:
            raise DecodeFailure("no consistent error locator")
        q = sol[:nq]
        E = sol[nq:] + [1]
        coeffs, rem = _poly_divmod(q, E, p)
        if rem:
            raise DecodeFailure("error locator does not divide Q")
        coeffs = (coeffs + [0] * (D + 1))[: D + 1]
    agree = sum(1 for x, y in zip(xs, ys) if _eval_poly(coeffs, x, p) == y)
    if agree < len(xs) - e:
        raise DecodeFailure(f"decoded polynomial agrees on {agree}/{len(xs)} points")
    return coeffs


def _eval_poly(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _interpolate(pts, p):
    n = len(pts)
    coeffs = [0] * n
    for i, (xi, yi) in enumerate(pts):
        # Lagrange basis polynomial for xi, accumulated coefficient-wise
        basis = [1]
        denom = 1
        for j, (xj, _) in enumerate(pts):
            if j == i:
                continue
            basis = [((basis[k - 1] if k else 0) - xj * (basis[k] if k < len(basis) else 0)) % p
                     for k in range(len(basis) + 1)]
            denom = denom * (xi - xj) % p
        scale = yi * pow(denom, -1, p) % p
        for k in range(len(basis)):
            coeffs[k] = (coeffs[k] + scale * basis[k]) % p
    return coeffs


def correct(x, oracle, params: CorrectionParams, rng) -> int:
    """Value of the degree-d polynomial behind ``oracle`` at point x.

    Draws y, z uniform in F_p^n, queries the oracle at x + t*y + t^2*z for
    t = 1..m, and decodes the degree-2d restriction with error budget
    e = floor((m - 2d - 1) / 2). If the oracle matches a degree-d polynomial
    f on all queried points this returns f(x) exactly; under sparse random
    errors it succeeds with probability >= 2/3.
    """
    p, m, d = params.p, params.m, params.d
    n = len(x)
    x = [v % p for v in x]
    y = [rng.randrange(p) for _ in range(n)]
    z = [rng.randrange(p) for _ in range(n)]
    ts = list(range(1, m + 1))
    vals = []
    for t in ts:
        t2 = t * t % p
        pt = [(x[i] + t * y[i] + t2 * z[i]) % p for i in range(n)]
        vals.append(oracle(pt) % p)
    e = (m - 2 * d - 1) // 2
    coeffs = berlekamp_welch(ts, vals, 2 * d, e, p)
    return coeffs[0]


def amplify(op, reps: int, rng, early_stop: bool = True) -> int:
    """Plurality value over ``reps`` runs of op(rng); ties break low.

    Runs raising FacredError (e.g. decode failures) are skipped; if every
    run fails, raises AmplifyExhausted. With early_stop the loop ends once
    the leader cannot be caught, which never changes the returned value.
    """
    if reps < 1:
        raise InvalidParameters(f"reps={reps}")
    votes: Counter = Counter()
    failures = 0
    for i in range(reps):
        try:
            votes[op(rng)] += 1
        except FacredError:
            failures += 1
        if early_stop and votes:
            rest = reps - i - 1
            top = votes.most_common(2)
            lead = top[0][1]
            second = top[1][1] if len(top) > 1 else 0
            if lead > second + rest:
                break
    if not votes:
        raise AmplifyExhausted(f"all {reps} runs failed")
    best = max(votes.values())
    return min(v for v, c in votes.items() if c == best)
