"""Superpartitions, their diagrams and per-diagram combinatorics.

A superpartition is stored canonically as the pair (antisym; sym): a strictly
decreasing tuple of fermionic parts (last entry may be 0) and a weakly
decreasing tuple of positive bosonic parts.  The equivalent description as a
pair of ordinary partitions (circled, starred) with the circled/starred skew
a simultaneous horizontal and vertical strip is derived on demand.

All diagram cells are 1-based (row, column) pairs.  Hook lengths are returned
as integer polynomials in the deformation parameter so that callers can place
them in whichever coefficient field they work over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .coeffring import AlphaPolynomial

Cell = tuple[int, int]


# ---------------------------------------------------------------------------
# ordinary partition helpers
# ---------------------------------------------------------------------------

def conjugate_partition(parts: Sequence[int]) -> tuple[int, ...]:
    parts = [p for p in parts if p > 0]
    if not parts:
        return ()
    out = [0] * parts[0]
    for p in parts:
        for j in range(p):
            out[j] += 1
    return tuple(out)


def partition_dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True iff lam >= mu in dominance order (equal total weight assumed)."""
    acc_l = acc_m = 0
    for i in range(max(len(lam), len(mu))):
        acc_l += lam[i] if i < len(lam) else 0
        acc_m += mu[i] if i < len(mu) else 0
        if acc_l < acc_m:
            return False
    return True


def b_stat(parts: Sequence[int]) -> int:
    """Sum of (i-1) * parts[i], the standard diagram statistic."""
    return sum(i * p for i, p in enumerate(parts))


def cells(parts: Sequence[int]) -> Iterator[Cell]:
    for i, p in enumerate(parts, start=1):
        for j in range(1, p + 1):
            yield (i, j)


def arm(parts: Sequence[int], s: Cell) -> int:
    return parts[s[0] - 1] - s[1]


def leg(parts: Sequence[int], s: Cell) -> int:
    return sum(1 for p in parts[s[0]:] if p >= s[1])


def n_mult(parts: Sequence[int], i: int) -> int:
    """Multiplicity of the part i."""
    return sum(1 for p in parts if p == i)


def z_stat(parts: Sequence[int]) -> int:
    """Product of i^m_i * m_i! over part sizes i."""
    z = 1
    for i in set(parts):
        m = n_mult(parts, i)
        z *= i ** m * math.factorial(m)
    return z


def f_stat(parts: Sequence[int]) -> int:
    """Product of the factorials of the part multiplicities."""
    f = 1
    for i in set(parts):
        f *= math.factorial(n_mult(parts, i))
    return f


def partitions_bounded(total: int, max_len: int, max_part: Optional[int] = None):
    """All partitions of `total` with at most max_len positive parts."""
    if total == 0:
        yield ()
        return
    if max_len == 0:
        return
    top = total if max_part is None else min(total, max_part)
    for first in range(top, 0, -1):
        for rest in partitions_bounded(total - first, max_len - 1, first):
            yield (first,) + rest


def strict_partitions(total: int, length: int, bound: Optional[int] = None):
    """Strictly decreasing tuples of the given length, entries >= 0."""
    if length == 0:
        if total == 0:
            yield ()
        return
    # smallest possible tail below `first` is (length-2, ..., 1, 0)
    low = (length - 1) * (length - 2) // 2
    top = total - low if bound is None else min(total - low, bound)
    for first in range(top, length - 2, -1):
        if first < 0:
            break
        for rest in strict_partitions(total - first, length - 1, first - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# superpartitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuperPartition:
    antisym: tuple[int, ...]
    sym: tuple[int, ...]

    def __post_init__(self):
        a, s = self.antisym, self.sym
        if any(a[i] <= a[i + 1] for i in range(len(a) - 1)) or (a and a[-1] < 0):
            raise ValueError(f"fermionic parts not strictly decreasing: {a}")
        if any(s[i] < s[i + 1] for i in range(len(s) - 1)) or (s and s[-1] <= 0):
            raise ValueError(f"bosonic parts not weakly decreasing positive: {s}")

    # -- degrees and shapes
    @property
    def m(self) -> int:
        """Fermionic degree."""
        return len(self.antisym)

    @property
    def n(self) -> int:
        """Total (bosonic) degree."""
        return sum(self.antisym) + sum(self.sym)

    @property
    def star(self) -> tuple[int, ...]:
        return tuple(sorted(self.antisym + self.sym, reverse=True))

    @property
    def circled(self) -> tuple[int, ...]:
        return tuple(sorted(tuple(p + 1 for p in self.antisym) + self.sym,
                            reverse=True))

    @property
    def length(self) -> int:
        """Number of rows of the circled diagram."""
        return sum(1 for p in self.circled if p > 0)

    def degree(self) -> tuple[int, int]:
        return (self.n, self.m)

    def sort_key(self):
        return (self.circled, self.star)

    def rows(self) -> list[tuple[int, bool]]:
        """Rows as (starred value, circled flag), top to bottom."""
        out = [(p, True) for p in self.antisym] + [(p, False) for p in self.sym]
        out.sort(key=lambda r: (-r[0], not r[1]))
        return out

    def __str__(self) -> str:
        return ",".join(map(str, self.antisym)) + ";" + ",".join(map(str, self.sym))

    def circled_str(self) -> str:
        parts = [f"{v}o" if c else str(v) for v, c in self.rows()]
        return "(" + ",".join(parts) + ")"


EMPTY = SuperPartition((), ())


def parse_spart(text: str) -> SuperPartition:
    """Parse '3,1,0;5,3,3' or the circled display '(5o,4,3o,3,1o,0o,0)'."""
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    if ";" in t:
        a_txt, s_txt = t.split(";", 1)
        anti = tuple(int(x) for x in a_txt.split(",") if x.strip() != "")
        sym = tuple(int(x) for x in s_txt.split(",") if x.strip() != "")
        sym = tuple(p for p in sym if p != 0)
        return SuperPartition(anti, sym)
    anti, sym = [], []
    for item in (x.strip() for x in t.split(",") if x.strip() != ""):
        if item.endswith("o"):
            anti.append(int(item[:-1]))
        else:
            v = int(item)
            if v:
                sym.append(v)
    return SuperPartition(tuple(sorted(anti, reverse=True)),
                          tuple(sorted(sym, reverse=True)))


def star_pair(L: SuperPartition, N: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(circled, starred) padded with zeros to length N."""
    if N < L.length:
        raise ValueError(f"N={N} too small for {L} (needs {L.length})")
    circ, star = L.circled, L.star
    return (circ + (0,) * (N - len(circ)), star + (0,) * (N - len(star)))


def conjugate(L: SuperPartition) -> SuperPartition:
    """Transpose of the diagram: both members of the pair conjugate."""
    circ = conjugate_partition(L.circled)
    star = conjugate_partition(L.star)
    anti = []
    for i, c in enumerate(circ):
        s = star[i] if i < len(star) else 0
        if c - s == 1:
            anti.append(s)
    sym = []
    for i, s in enumerate(star):
        c = circ[i] if i < len(circ) else 0
        if c == s:
            sym.append(s)
    return SuperPartition(tuple(anti), tuple(sym))


def dominance_leq(O: SuperPartition, L: SuperPartition) -> bool:
    """O <= L: both the starred and circled shapes dominated."""
    if O.degree() != L.degree():
        return False
    return (partition_dominates(L.star, O.star)
            and partition_dominates(L.circled, O.circled))


def is_admissible(L: SuperPartition, k: int, r: int, N: int,
                  allow_noncoprime: bool = False) -> bool:
    """Admissibility: circled[i] - starred[i+k] >= r for 1 <= i <= N-k."""
    if k < 1 or r < 2:
        raise ValueError("need k >= 1 and r >= 2")
    if not allow_noncoprime and math.gcd(k + 1, r - 1) != 1:
        raise ValueError(f"k+1={k + 1} and r-1={r - 1} are not coprime")
    circ, star = star_pair(L, N)
    return all(circ[i] - star[i + k] >= r for i in range(N - k))


def to_overpartition(L: SuperPartition) -> list[tuple[int, bool]]:
    """Circled-shape entries, overlined where the row carries a circle."""
    circ, star = L.circled, L.star
    out = []
    for i, c in enumerate(circ):
        s = star[i] if i < len(star) else 0
        out.append((c, c - s == 1))
    return out


# ---------------------------------------------------------------------------
# diagram surgery: the four one-cell moves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Move:
    """One-cell modification of a superpartition diagram.

    kind is one of 'add_circle', 'remove_circle', 'square_to_circle',
    'circle_to_square'; cell is the marked cell, valid as a coordinate in
    both the original and the modified diagram.
    """
    kind: str
    result: SuperPartition
    cell: Cell


def _without_one(parts: tuple[int, ...], value: int) -> tuple[int, ...]:
    out = list(parts)
    out.remove(value)
    return tuple(out)


def add_circle_moves(L: SuperPartition, N: Optional[int] = None) -> list[Move]:
    star = L.star
    moves = []
    for v in sorted(set(L.sym) | {0}, reverse=True):
        if v in L.antisym:
            continue
        anti = tuple(sorted(L.antisym + (v,), reverse=True))
        sym = _without_one(L.sym, v) if v else L.sym
        res = SuperPartition(anti, sym)
        if N is not None and res.length > N:
            continue
        i = sum(1 for p in star if p > v) + 1
        moves.append(Move("add_circle", res, (i, v + 1)))
    return moves


def remove_circle_moves(L: SuperPartition) -> list[Move]:
    star = L.star
    moves = []
    for v in L.antisym:
        anti = _without_one(L.antisym, v)
        sym = tuple(sorted(L.sym + (v,), reverse=True)) if v else L.sym
        res = SuperPartition(anti, sym)
        i = sum(1 for p in star if p > v) + 1
        moves.append(Move("remove_circle", res, (i, v + 1)))
    return moves


def square_to_circle_moves(L: SuperPartition) -> list[Move]:
    star = L.star
    moves = []
    for s in sorted(set(L.sym), reverse=True):
        if s - 1 in L.antisym:
            continue
        anti = tuple(sorted(L.antisym + (s - 1,), reverse=True))
        sym = _without_one(L.sym, s)
        res = SuperPartition(anti, sym)
        i = sum(1 for p in star if p >= s)
        moves.append(Move("square_to_circle", res, (i, s)))
    return moves


def circle_to_square_moves(L: SuperPartition) -> list[Move]:
    star = L.star
    moves = []
    for v in L.antisym:
        anti = _without_one(L.antisym, v)
        sym = tuple(sorted(L.sym + (v + 1,), reverse=True))
        res = SuperPartition(anti, sym)
        i = sum(1 for p in star if p > v) + 1
        moves.append(Move("circle_to_square", res, (i, v + 1)))
    return moves


def almost_admissible_variants(G: SuperPartition, k: int, r: int, N: int,
                               allow_noncoprime: bool = False) -> list[SuperPartition]:
    """All labels one move away from an admissible G, deduplicated."""
    if not is_admissible(G, k, r, N, allow_noncoprime=allow_noncoprime):
        raise ValueError(f"{G} is not ({k},{r},{N})-admissible")
    seen = {}
    for mv in (add_circle_moves(G, N) + remove_circle_moves(G)
               + square_to_circle_moves(G) + circle_to_square_moves(G)):
        if mv.result.length <= N:
            seen[mv.result] = None
    return sorted(seen, key=lambda S: S.sort_key(), reverse=True)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def enumerate_sparts(n: int, m: int, N: int) -> tuple[SuperPartition, ...]:
    """All superpartitions of degree (n|m) fitting in N rows, biggest first."""
    if m > N or n < 0 or m < 0:
        return ()
    out = []
    for sa in range(n + 1):
        for anti in strict_partitions(sa, m):
            for sym in partitions_bounded(n - sa, N - m):
                out.append(SuperPartition(anti, sym))
    out.sort(key=lambda S: S.sort_key(), reverse=True)
    return tuple(out)


def enumerate_all_m(n: int, N: int) -> list[SuperPartition]:
    out = []
    m = 0
    while m <= N and m * (m - 1) // 2 <= n:
        out.extend(enumerate_sparts(n, m, N))
        m += 1
    return out


def enumerate_admissible(k: int, r: int, N: int, nmax: int,
                         allow_noncoprime: bool = False) -> list[SuperPartition]:
    out = []
    for n in range(nmax + 1):
        for L in enumerate_all_m(n, N):
            if is_admissible(L, k, r, N, allow_noncoprime=allow_noncoprime):
                out.append(L)
    return out


# ---------------------------------------------------------------------------
# hooks and eigenvalue data
# ---------------------------------------------------------------------------

def upper_hook(L: SuperPartition, s: Cell) -> AlphaPolynomial:
    """leg in the circled shape + alpha * (arm in the starred shape + 1)."""
    star, circ = L.star, L.circled
    if not (1 <= s[0] <= len(star) and 1 <= s[1] <= star[s[0] - 1]):
        raise ValueError(f"cell {s} outside the starred diagram of {L}")
    return AlphaPolynomial.linear(leg(circ, s), arm(star, s) + 1)


def lower_hook(L: SuperPartition, s: Cell) -> AlphaPolynomial:
    """leg in the starred shape + 1 + alpha * arm in the circled shape."""
    star, circ = L.star, L.circled
    if not (1 <= s[0] <= len(star) and 1 <= s[1] <= star[s[0] - 1]):
        raise ValueError(f"cell {s} outside the starred diagram of {L}")
    return AlphaPolynomial.linear(leg(star, s) + 1, arm(circ, s))


def circled_rows(L: SuperPartition) -> set[int]:
    circ, star = L.circled, L.star
    return {i + 1 for i, c in enumerate(circ)
            if c - (star[i] if i < len(star) else 0) == 1}


def circled_cols(L: SuperPartition) -> set[int]:
    cc = conjugate_partition(L.circled)
    sc = conjugate_partition(L.star)
    return {j + 1 for j, c in enumerate(cc)
            if c - (sc[j] if j < len(sc) else 0) == 1}


def bosonic_cells(L: SuperPartition) -> list[Cell]:
    """Cells of the starred diagram avoiding circled-row/circled-column crossings."""
    rows_c = circled_rows(L)
    cols_c = circled_cols(L)
    return [s for s in cells(L.star)
            if not (s[0] in rows_c and s[1] in cols_c)]


def skew_circled_cells(L: SuperPartition) -> list[Cell]:
    """Cells of the circled shape outside the staircase (m, m-1, ..., 1)."""
    m = L.m
    out = []
    for i, p in enumerate(L.circled, start=1):
        start = m - i + 1 if i <= m else 0
        for j in range(start + 1, p + 1):
            out.append((i, j))
    return out


def v_poly(L: SuperPartition) -> AlphaPolynomial:
    """Product of lower hooks over the bosonic cells (integral-form scale)."""
    prod = AlphaPolynomial.const(1)
    for s in bosonic_cells(L):
        prod = prod * lower_hook(L, s)
    return prod


def e_star_poly(L: SuperPartition) -> AlphaPolynomial:
    """Eigenvalue of the alpha-deformed Laplacian, linear in alpha."""
    star = L.star
    return AlphaPolynomial.linear(-b_stat(star), b_stat(conjugate_partition(star)))


def e_tilde_poly(L: SuperPartition) -> AlphaPolynomial:
    """Eigenvalue of the fermionic-degree operator, linear in alpha."""
    return AlphaPolynomial.linear(-sum(conjugate(L).antisym), sum(L.antisym))


def epsilon_u(lam: Sequence[int], N: int, alpha) -> list:
    """Coefficients (low u-degree first) of prod_i (alpha*lam_i + 1 - i + u)."""
    one = alpha * 0 + 1
    coeffs = [one]
    for i in range(1, N + 1):
        li = lam[i - 1] if i - 1 < len(lam) else 0
        c = alpha * li + (1 - i)
        coeffs = [c * coeffs[0]] + [c * coeffs[j] + coeffs[j - 1]
                                    for j in range(1, len(coeffs))] + [one]
    return coeffs


def tilde_composition(L: SuperPartition, N: int) -> tuple[int, ...]:
    """Reversed fermionic parts, then reversed zero-padded bosonic parts."""
    if N < L.length:
        raise ValueError("N too small")
    sym_padded = L.sym + (0,) * (N - L.m - len(L.sym))
    return tuple(reversed(L.antisym)) + tuple(reversed(sym_padded))


def eta_bar(eta: Sequence[int], alpha) -> list:
    """Cherednik eigenvalues of the monomial labelled by the composition."""
    out = []
    for i, e in enumerate(eta):
        before = sum(1 for k in range(i) if eta[k] >= e)
        after = sum(1 for k in range(i + 1, len(eta)) if eta[k] > e)
        out.append(alpha * e - before - after)
    return out


def d_eta(eta: Sequence[int], s: Cell) -> AlphaPolynomial:
    """Knop-style hook of the cell in a composition diagram, linear in alpha."""
    i, j = s
    ei = eta[i - 1]
    if not (1 <= j <= ei):
        raise ValueError(f"cell {s} outside the composition {eta}")
    up = sum(1 for k in range(i - 1) if j <= eta[k] + 1 <= ei)
    down = sum(1 for k in range(i, len(eta)) if j <= eta[k] <= ei)
    return AlphaPolynomial.linear(up + down + 1, ei - j + 1)


def d_eta_product(eta: Sequence[int]) -> AlphaPolynomial:
    prod = AlphaPolynomial.const(1)
    for i, e in enumerate(eta, start=1):
        for j in range(1, e + 1):
            prod = prod * d_eta(eta, (i, j))
    return prod


def eigen_data(L: SuperPartition, N: int, alpha) -> dict:
    """Bundle of the eigenvalue data attached to a label in N variables."""
    circ, star = star_pair(L, N)
    return {
        "e_star": e_star_poly(L)(alpha),
        "e_tilde": e_tilde_poly(L)(alpha),
        "epsilon_star": epsilon_u(star, N, alpha),
        "epsilon_circledast": epsilon_u(circ, N, alpha),
        "eta_bar": eta_bar(tilde_composition(L, N), alpha),
    }
