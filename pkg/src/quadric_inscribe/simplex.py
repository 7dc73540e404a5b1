"""Dense two-phase simplex over exact rationals, plus a float presolve hook.

Small problems only (tens of variables, a few hundred rows).  Bland's rule
throughout, so no cycling.  Variables are free; the driver converts to
standard form internally.
"""

from fractions import Fraction

import numpy as np

try:
    from scipy.optimize import linprog as _linprog
except Exception:  # pragma: no cover - scipy is a declared dependency
    _linprog = None

F0 = Fraction(0)
F1 = Fraction(1)


def _to_frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def solve_exact(c, a_ub, b_ub, a_eq=(), b_eq=()):
    """Maximize c.x subject to a_ub x <= b_ub and a_eq x = b_eq, x free.

    Returns (status, x, value) with status "optimal" or "unbounded" and all
    numbers Fractions.  Raises ValueError on an infeasible system.
    """
    c = [Fraction(t) for t in c]
    a_ub = _to_frac_matrix(a_ub)
    b_ub = [Fraction(t) for t in b_ub]
    a_eq = _to_frac_matrix(a_eq)
    b_eq = [Fraction(t) for t in b_eq]
    n = len(c)

    # free x -> xp - xm; slack per ub row; artificial where needed
    rows = []
    for arow, b in zip(a_ub, b_ub):
        rows.append((list(arow), b, "ub"))
    for arow, b in zip(a_eq, b_eq):
        rows.append((list(arow), b, "eq"))
    m = len(rows)
    nslack = sum(1 for r in rows if r[2] == "ub")
    width = 2 * n + nslack + m  # artificials for every row keeps phase 1 simple
    tab = []
    basis = []
    si = 0
    for k, (arow, b, kind) in enumerate(rows):
        row = [F0] * width
        for j, aj in enumerate(arow):
            row[j] = Fraction(aj)
            row[n + j] = -Fraction(aj)
        if kind == "ub":
            row[2 * n + si] = F1
            si += 1
        if b < 0:
            row = [-t for t in row]
            b = -b
        row[2 * n + nslack + k] = F1
        tab.append(row + [b])
        basis.append(2 * n + nslack + k)

    def pivot(r, col):
        piv = tab[r][col]
        tab[r] = [t / piv for t in tab[r]]
        for rr in range(len(tab)):
            if rr != r and tab[rr][col] != 0:
                f = tab[rr][col]
                tab[rr] = [a - f * b for a, b in zip(tab[rr], tab[r])]
        basis[r] = col

    def run_phase(obj, allowed):
        # obj: reduced objective row (maximize)
        while True:
            # reduced costs: obj - sum over basis rows
            red = list(obj)
            const = F0
            for r, bv in enumerate(basis):
                coef = obj[bv]
                if coef != 0:
                    const += coef * tab[r][-1]
                    for j in range(width):
                        red[j] -= coef * tab[r][j]
            enter = None
            for j in allowed:  # Bland: first improving index
                if red[j] > 0:
                    enter = j
                    break
            if enter is None:
                return const
            leave = None
            best = None
            for r in range(m):
                if tab[r][enter] > 0:
                    ratio = tab[r][-1] / tab[r][enter]
                    if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                        best = ratio
                        leave = r
            if leave is None:
                return None  # unbounded
            pivot(leave, enter)

    art_lo = 2 * n + nslack
    # phase 1: maximize -(sum of artificials)
    obj1 = [F0] * width
    for j in range(art_lo, width):
        obj1[j] = Fraction(-1)
    val1 = run_phase(obj1, range(width))
    if val1 is None or val1 < 0:
        raise ValueError("system is infeasible")
    # drive lingering artificials out of the basis where possible
    for r in range(m):
        if basis[r] >= art_lo:
            for j in range(art_lo):
                if tab[r][j] != 0:
                    pivot(r, j)
                    break

    obj2 = [F0] * width
    for j in range(n):
        obj2[j] = c[j]
        obj2[n + j] = -c[j]
    val2 = run_phase(obj2, range(art_lo))
    if val2 is None:
        return "unbounded", None, None
    x = [F0] * n
    for r, bv in enumerate(basis):
        if bv < n:
            x[bv] += tab[r][-1]
        elif bv < 2 * n:
            x[bv - n] -= tab[r][-1]
    return "optimal", x, val2


def presolve_float(c, a_ub, b_ub):
    """Float LP (maximize c.x, a_ub x <= b_ub, x free) via scipy, or None."""
    if _linprog is None:
        return None
    res = _linprog(
        -np.asarray(c, dtype=float),
        A_ub=np.asarray(a_ub, dtype=float),
        b_ub=np.asarray(b_ub, dtype=float),
        bounds=[(None, None)] * len(c),
        method="highs",
    )
    if not res.success:
        return None
    return [float(t) for t in res.x]


def rationalize(xs, max_den=10**7):
    return [Fraction(x).limit_denominator(max_den) for x in xs]
