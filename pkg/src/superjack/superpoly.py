"""Polynomials in N commuting and N anticommuting variables.

Terms are stored sparsely as ``(thetas, exps) -> coefficient`` where
``thetas`` is the strictly increasing tuple of anticommuting indices (1-based)
and ``exps`` the length-N exponent vector of the commuting part.  The strictly
increasing theta tuple fixes the sign convention: the coefficient of
``t_{i_1}*...*t_{i_m}`` (indices increasing) is what you get by applying the
left derivatives in the order d_{i_m} ... d_{i_1} and then setting all thetas
to zero.

Coefficients are any exact ring elements supporting + - * / and truthiness:
ints, Fractions and AlphaRational mix freely.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .coeffring import FieldMatrix, UniqueSolution, solve_exact
from .spart import SuperPartition, enumerate_sparts, z_stat

Term = tuple[tuple[int, ...], tuple[int, ...]]


class DivisionFailure(ArithmeticError):
    """An exact polynomial division left a remainder."""


class NotSymmetric(ValueError):
    """Input expected to be invariant under the diagonal symmetric group."""


class SuperPolynomial:
    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms: Optional[dict] = None):
        self.N = N
        self.terms = terms if terms is not None else {}

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero(N: int) -> "SuperPolynomial":
        return SuperPolynomial(N)

    @staticmethod
    def one(N: int) -> "SuperPolynomial":
        return SuperPolynomial(N, {((), (0,) * N): 1})

    @staticmethod
    def x(i: int, N: int, power: int = 1) -> "SuperPolynomial":
        e = [0] * N
        e[i - 1] = power
        return SuperPolynomial(N, {((), tuple(e)): 1})

    @staticmethod
    def theta(i: int, N: int) -> "SuperPolynomial":
        return SuperPolynomial(N, {((i,), (0,) * N): 1})

    @staticmethod
    def constant(c, N: int) -> "SuperPolynomial":
        if not c:
            return SuperPolynomial(N)
        return SuperPolynomial(N, {((), (0,) * N): c})

    def copy(self) -> "SuperPolynomial":
        return SuperPolynomial(self.N, dict(self.terms))

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self.N == other.N and self.terms == other.terms

    def fermionic_degrees(self) -> set[int]:
        return {len(T) for T, _ in self.terms}

    def theta_free(self) -> bool:
        return all(not T for T, _ in self.terms)

    def total_x_degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    # -- additive ring structure --------------------------------------------
    def _iadd_term(self, key: Term, c) -> None:
        cur = self.terms.get(key)
        if cur is None:
            if c:
                self.terms[key] = c
        else:
            cur = cur + c
            if cur:
                self.terms[key] = cur
            else:
                del self.terms[key]

    def __add__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        self._check(other)
        out = self.copy()
        for key, c in other.terms.items():
            out._iadd_term(key, c)
        return out

    def __sub__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        self._check(other)
        out = self.copy()
        for key, c in other.terms.items():
            out._iadd_term(key, -c)
        return out

    def __neg__(self) -> "SuperPolynomial":
        return SuperPolynomial(self.N, {k: -c for k, c in self.terms.items()})

    def scale(self, c) -> "SuperPolynomial":
        if not c:
            return SuperPolynomial(self.N)
        return SuperPolynomial(self.N, {k: v * c for k, v in self.terms.items()})

    def _check(self, other: "SuperPolynomial") -> None:
        if self.N != other.N:
            raise ValueError(f"variable counts differ: {self.N} vs {other.N}")

    # -- multiplication ------------------------------------------------------
    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            return self.scale(other)
        self._check(other)
        out = SuperPolynomial(self.N)
        for (T1, e1), c1 in self.terms.items():
            for (T2, e2), c2 in other.terms.items():
                key_sign = _theta_merge(T1, T2)
                if key_sign is None:
                    continue
                T, sign = key_sign
                e = tuple(a + b for a, b in zip(e1, e2))
                out._iadd_term((T, e), c1 * c2 if sign > 0 else -(c1 * c2))
        return out

    def __rmul__(self, other):
        return self.scale(other)

    # -- calculus -------------------------------------------------------------
    def diff_x(self, i: int) -> "SuperPolynomial":
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            k = e[i - 1]
            if k:
                e2 = list(e)
                e2[i - 1] = k - 1
                out._iadd_term((T, tuple(e2)), c * k)
        return out

    def diff_theta(self, i: int) -> "SuperPolynomial":
        """Left derivative in theta_i."""
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            if i in T:
                pos = T.index(i)
                T2 = T[:pos] + T[pos + 1:]
                out._iadd_term((T2, e), c if pos % 2 == 0 else -c)
        return out

    def mul_x(self, i: int, power: int = 1) -> "SuperPolynomial":
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            e2 = list(e)
            e2[i - 1] += power
            out.terms[(T, tuple(e2))] = c
        return out

    def mul_theta(self, i: int) -> "SuperPolynomial":
        """Left multiplication by theta_i."""
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            if i in T:
                continue
            pos = sum(1 for t in T if t < i)
            T2 = T[:pos] + (i,) + T[pos:]
            out._iadd_term((T2, e), c if pos % 2 == 0 else -c)
        return out

    # -- symmetric group action ----------------------------------------------
    def act_K(self, sigma: Sequence[int]) -> "SuperPolynomial":
        """Permute the commuting variables only: x_i -> x_sigma(i)."""
        inv = _invert(sigma)
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            e2 = tuple(e[inv[p - 1] - 1] for p in range(1, self.N + 1))
            out._iadd_term((T, e2), c)
        return out

    def act_kappa(self, sigma: Sequence[int]) -> "SuperPolynomial":
        """Permute the anticommuting variables only, with resorting sign."""
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            imgs = [sigma[t - 1] for t in T]
            sign = _sort_sign(imgs)
            out._iadd_term((tuple(sorted(imgs)), e), c if sign > 0 else -c)
        return out

    def act_Ksigma(self, sigma: Sequence[int]) -> "SuperPolynomial":
        """Diagonal action on x and theta together."""
        inv = _invert(sigma)
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            e2 = tuple(e[inv[p - 1] - 1] for p in range(1, self.N + 1))
            imgs = [sigma[t - 1] for t in T]
            sign = _sort_sign(imgs)
            out._iadd_term((tuple(sorted(imgs)), e2), c if sign > 0 else -c)
        return out

    def swap_K(self, i: int, j: int) -> "SuperPolynomial":
        sigma = list(range(1, self.N + 1))
        sigma[i - 1], sigma[j - 1] = sigma[j - 1], sigma[i - 1]
        return self.act_K(sigma)

    def is_symmetric(self) -> bool:
        for i in range(1, self.N):
            sigma = list(range(1, self.N + 1))
            sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
            if self.act_Ksigma(sigma) != self:
                return False
        return True

    # -- extraction and substitution -------------------------------------------
    def theta_coefficient(self, indices: Sequence[int]) -> "SuperPolynomial":
        """Coefficient of theta_{i_1}...theta_{i_m}, indices increasing."""
        T0 = tuple(indices)
        if list(T0) != sorted(set(T0)):
            raise ValueError("theta indices must be strictly increasing")
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            if T == T0:
                out.terms[((), e)] = c
        return out

    def restrict_last(self) -> tuple["SuperPolynomial", "SuperPolynomial"]:
        """([f] at x_N = theta_N = 0, [d/d theta_N f] at x_N = theta_N = 0)."""
        N = self.N
        body = SuperPolynomial(N - 1)
        slope = SuperPolynomial(N - 1)
        for (T, e), c in self.terms.items():
            if e[N - 1] != 0:
                continue
            if T and T[-1] == N:
                sign = 1 if (len(T) - 1) % 2 == 0 else -1
                slope._iadd_term((T[:-1], e[:-1]), c if sign > 0 else -c)
            elif not T or T[-1] < N:
                body._iadd_term((T, e[:-1]), c)
        return body, slope

    def extend(self, N2: int) -> "SuperPolynomial":
        if N2 < self.N:
            raise ValueError("cannot shrink; use restrict_last")
        pad = (0,) * (N2 - self.N)
        return SuperPolynomial(N2, {(T, e + pad): c for (T, e), c in self.terms.items()})

    def merge_x(self, sources: Iterable[int], target: int) -> "SuperPolynomial":
        """Identify the commuting variables x_s (s in sources) with x_target."""
        src = set(sources)
        src.discard(target)
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            e2 = list(e)
            moved = 0
            for s in src:
                moved += e2[s - 1]
                e2[s - 1] = 0
            e2[target - 1] += moved
            out._iadd_term((T, tuple(e2)), c)
        return out

    def subs_x(self, assignments: dict[int, "SuperPolynomial"]) -> "SuperPolynomial":
        """Simultaneous substitution x_i -> commutative polynomial."""
        for g in assignments.values():
            self._check(g)
            if not g.theta_free():
                raise ValueError("substitution images must be theta-free")
        power_cache: dict[tuple[int, int], SuperPolynomial] = {}

        def gpow(i: int, k: int) -> SuperPolynomial:
            key = (i, k)
            if key not in power_cache:
                if k == 0:
                    power_cache[key] = SuperPolynomial.one(self.N)
                else:
                    power_cache[key] = gpow(i, k - 1) * assignments[i]
            return power_cache[key]

        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            e_rest = list(e)
            factor = None
            for i in assignments:
                k = e_rest[i - 1]
                e_rest[i - 1] = 0
                if k:
                    factor = gpow(i, k) if factor is None else factor * gpow(i, k)
            base = SuperPolynomial(self.N, {(T, tuple(e_rest)): c})
            out += base if factor is None else base * factor
        return out

    def eval_ones(self):
        """Value with every commuting variable set to 1 (theta-free input)."""
        if not self.theta_free():
            raise ValueError("eval_ones needs a theta-free polynomial")
        acc = 0
        for _, c in self.terms.items():
            acc = c + acc
        return acc

    def coefficient_xpower(self, i: int, k: int) -> "SuperPolynomial":
        """Coefficient of x_i^k (a polynomial in the remaining variables)."""
        out = SuperPolynomial(self.N)
        for (T, e), c in self.terms.items():
            if e[i - 1] == k:
                e2 = list(e)
                e2[i - 1] = 0
                out.terms[(T, tuple(e2))] = c
        return out

    def x_valuation(self, i: int) -> int:
        """Order of vanishing in x_i; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return min(e[i - 1] for _, e in self.terms)

    def map_coeff(self, fn: Callable) -> "SuperPolynomial":
        out = SuperPolynomial(self.N)
        for key, c in self.terms.items():
            v = fn(c)
            if v:
                out.terms[key] = v
        return out

    # -- printing -----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (len(kv[0][0]), kv[0][0], kv[0][1]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for (T, e), c in self.sorted_terms():
            factors = [f"t{i}" for i in T]
            factors += [f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}"
                        for i, k in enumerate(e) if k]
            cs = str(c)
            if factors:
                body = "*".join(factors)
                if cs == "1":
                    chunks.append(body)
                elif cs == "-1":
                    chunks.append(f"-{body}")
                else:
                    chunks.append(f"{cs}*{body}")
            else:
                chunks.append(cs)
        out = chunks[0]
        for ch in chunks[1:]:
            out += ch if ch.startswith("-") else "+" + ch
        return out

    def __repr__(self) -> str:
        return f"SuperPolynomial(N={self.N}, {self})"


# ---------------------------------------------------------------------------
# sign helpers
# ---------------------------------------------------------------------------

def _theta_merge(T1, T2):
    """Concatenate theta blocks; None if a square appears, else (tuple, sign)."""
    if not T1:
        return T2, 1
    if not T2:
        return T1, 1
    s1 = set(T1)
    if s1 & set(T2):
        return None
    inv = 0
    for t in T2:
        inv += sum(1 for u in T1 if u > t)
    merged = tuple(sorted(T1 + T2))
    return merged, (1 if inv % 2 == 0 else -1)


def _sort_sign(seq) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return 1 if inv % 2 == 0 else -1


def _invert(sigma: Sequence[int]) -> list[int]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return inv


# ---------------------------------------------------------------------------
# exact division by (x_i - x_j) and friends
# ---------------------------------------------------------------------------

def divide_xdiff(f: SuperPolynomial, i: int, j: int) -> SuperPolynomial:
    """Exact quotient f / (x_i - x_j); raises DivisionFailure on remainder."""
    levels: dict[int, dict] = {}
    for (T, e), c in f.terms.items():
        levels.setdefault(e[i - 1], {}).setdefault((T, e), c)
    out = SuperPolynomial(f.N)
    for ei in range(max(levels, default=0), 0, -1):
        for (T, e), c in levels.get(ei, {}).items():
            if not c:
                continue
            e_q = list(e)
            e_q[i - 1] = ei - 1
            out._iadd_term((T, tuple(e_q)), c)
            e_c = list(e_q)
            e_c[j - 1] += 1
            key = (T, tuple(e_c))
            lv = levels.setdefault(ei - 1, {})
            lv[key] = lv.get(key, 0) + c
    for c in levels.get(0, {}).values():
        if c:
            raise DivisionFailure(f"(x{i} - x{j}) does not divide the input")
    return out


def unique_arrangements(items: list):
    """Distinct permutations of a multiset, in lexicographic order (Knuth L)."""
    seq = sorted(items)
    n = len(seq)
    while True:
        yield tuple(seq)
        k = n - 2
        while k >= 0 and seq[k] >= seq[k + 1]:
            k -= 1
        if k < 0:
            return
        i = n - 1
        while seq[i] <= seq[k]:
            i -= 1
        seq[k], seq[i] = seq[i], seq[k]
        seq[k + 1:] = reversed(seq[k + 1:])


# ---------------------------------------------------------------------------
# symmetric bases
# ---------------------------------------------------------------------------

def monomial_msym(L: SuperPartition, N: int) -> SuperPolynomial:
    """Monomial symmetric superpolynomial: distinct diagonal-orbit terms."""
    if L.length > N:
        raise ValueError(f"{L} needs at least {L.length} variables")
    m = L.m
    slots = ([(a, 1) for a in L.antisym]
             + [(s, 0) for s in L.sym]
             + [(0, 0)] * (N - m - len(L.sym)))
    out = SuperPolynomial(N)
    for arr in unique_arrangements(slots):
        exps = tuple(v for v, _ in arr)
        positions = [p + 1 for p, (_, kind) in enumerate(arr) if kind == 1]
        # rank k fermionic exponent is the k-th largest; its position in the
        # arrangement gives sigma(k), and the resort sign is the inversion parity
        ranked = sorted(positions,
                        key=lambda p: -arr[p - 1][0])
        sign = _sort_sign(ranked)
        out._iadd_term((tuple(sorted(positions)), exps), sign)
    return out


def to_mbasis(f: SuperPolynomial, verify: bool = True) -> dict[SuperPartition, object]:
    """Expand a symmetric superpolynomial over the monomial superbasis."""
    if verify and not f.is_symmetric():
        raise NotSymmetric("input is not invariant under the diagonal action")
    out: dict[SuperPartition, object] = {}
    for (T, e), c in f.terms.items():
        mdeg = len(T)
        if T != tuple(range(1, mdeg + 1)):
            continue
        head, tail = e[:mdeg], e[mdeg:]
        if any(head[i] <= head[i + 1] for i in range(mdeg - 1)):
            continue
        if any(tail[i] < tail[i + 1] for i in range(len(tail) - 1)):
            continue
        out[SuperPartition(head, tuple(p for p in tail if p))] = c
    return out


def from_mbasis(coeffs: dict[SuperPartition, object], N: int) -> SuperPolynomial:
    out = SuperPolynomial(N)
    for L, c in coeffs.items():
        if c:
            out += monomial_msym(L, N).scale(c)
    return out


def power_sum(n: int, N: int) -> SuperPolynomial:
    """p_n = sum x_i^n, n >= 1."""
    if n < 1:
        raise ValueError("power sums need n >= 1")
    out = SuperPolynomial(N)
    for i in range(1, N + 1):
        out._iadd_term(((), _unit(i, n, N)), 1)
    return out


def ferm_power(n: int, N: int) -> SuperPolynomial:
    """ptilde_n = sum theta_i x_i^n, n >= 0."""
    if n < 0:
        raise ValueError("fermionic power sums need n >= 0")
    out = SuperPolynomial(N)
    for i in range(1, N + 1):
        out._iadd_term(((i,), _unit(i, n, N)), 1)
    return out


def _unit(i: int, n: int, N: int) -> tuple[int, ...]:
    e = [0] * N
    e[i - 1] = n
    return tuple(e)


def p_label(L: SuperPartition, N: int) -> SuperPolynomial:
    """p_Lambda: ordered product of fermionic then bosonic power sums."""
    out = SuperPolynomial.one(N)
    for a in L.antisym:
        out = out * ferm_power(a, N)
    for s in L.sym:
        out = out * power_sum(s, N)
    return out


def scalar_product_p(L: SuperPartition, O: SuperPartition, alpha):
    """Scalar product of p_Lambda with p_Omega at deformation alpha."""
    if L != O:
        return alpha * 0
    m = L.m
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    val = alpha ** L.length * z_stat(L.sym)
    return val if sign > 0 else -val


def to_pbasis(f: SuperPolynomial, verify: bool = True) -> dict[SuperPartition, object]:
    """Expand in the power-sum basis; needs N >= n + m for faithfulness."""
    if f.is_zero():
        return {}
    mcoeffs = to_mbasis(f, verify=verify)
    degrees = {L.degree() for L in mcoeffs}
    if len(degrees) != 1:
        raise ValueError("power-sum expansion needs a bi-homogeneous input")
    (n, m), = degrees
    if f.N < n + m:
        raise ValueError(f"need N >= {n + m} variables for a faithful expansion")
    labels = list(enumerate_sparts(n, m, f.N))
    one = next(iter(mcoeffs.values())) ** 0
    if isinstance(one, int):
        one = Fraction(1)
    columns = [to_mbasis(p_label(P, f.N), verify=False) for P in labels]
    rows = sorted({L for col in columns for L in col} | set(mcoeffs),
                  key=lambda S: S.sort_key())
    entries = []
    for L in rows:
        for col in columns:
            entries.append(col.get(L, 0) * one)
    b = [mcoeffs.get(L, 0) * one for L in rows]
    res = solve_exact(FieldMatrix(len(rows), len(labels), entries), b)
    if not isinstance(res, UniqueSolution):
        raise ValueError("power-sum basis failed to resolve the input")
    return {P: c for P, c in zip(labels, res.vector) if c}


def omega_alpha(f: SuperPolynomial, alpha) -> SuperPolynomial:
    """Duality endomorphism: p_n -> (-1)^(n-1) alpha p_n, ptilde_n -> (-1)^n alpha ptilde_n."""
    out = SuperPolynomial(f.N)
    for P, c in to_pbasis(f).items():
        scalar = alpha ** P.length
        flips = sum(a for a in P.antisym) + sum(s - 1 for s in P.sym)
        if flips % 2:
            scalar = -scalar
        out += p_label(P, f.N).scale(c * scalar)
    return out


def vandermonde(m: int, N: int) -> SuperPolynomial:
    """Product of (x_i - x_j) over 1 <= i < j <= m."""
    out = SuperPolynomial.one(N)
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            out = out * (SuperPolynomial.x(i, N) - SuperPolynomial.x(j, N))
    return out


def prescribed_part(P: SuperPolynomial, m: int) -> SuperPolynomial:
    """Coefficient of theta_1...theta_m divided exactly by the Vandermonde."""
    g = P.theta_coefficient(tuple(range(1, m + 1)))
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            g = divide_xdiff(g, i, j)
    return g


def divided_difference(f: SuperPolynomial, i: int, j: int,
                       super_swap: bool = False) -> SuperPolynomial:
    """(f - K_ij f) / (x_i - x_j); with super_swap the diagonal swap is used."""
    sigma = list(range(1, f.N + 1))
    sigma[i - 1], sigma[j - 1] = sigma[j - 1], sigma[i - 1]
    swapped = f.act_Ksigma(sigma) if super_swap else f.act_K(sigma)
    return divide_xdiff(f - swapped, i, j)


# ---------------------------------------------------------------------------
# serialization helpers (shared by the CLI)
# ---------------------------------------------------------------------------

def terms_to_json(f: SuperPolynomial) -> list[dict]:
    return [{"thetas": list(T), "exps": list(e), "coeff": str(c)}
            for (T, e), c in f.sorted_terms()]


def pair_decompose(f: SuperPolynomial, i: int, j: int):
    """Split f = A + theta_i B + theta_j C + theta_i theta_j D with A..D free of both."""
    N = f.N
    A, B, C, D = (SuperPolynomial(N) for _ in range(4))
    for (T, e), c in f.terms.items():
        has_i, has_j = i in T, j in T
        if not has_i and not has_j:
            A.terms[(T, e)] = c
        elif has_i and not has_j:
            pos = T.index(i)
            B._iadd_term((T[:pos] + T[pos + 1:], e), c if pos % 2 == 0 else -c)
        elif has_j and not has_i:
            pos = T.index(j)
            C._iadd_term((T[:pos] + T[pos + 1:], e), c if pos % 2 == 0 else -c)
        else:
            pos_i = T.index(i)
            rest = T[:pos_i] + T[pos_i + 1:]
            pos_j = rest.index(j)
            rest = rest[:pos_j] + rest[pos_j + 1:]
            sign = 1 if (pos_i + pos_j) % 2 == 0 else -1
            D._iadd_term((rest, e), c if sign > 0 else -c)
    return A, B, C, D


def pair_recompose(A, B, C, D, i: int, j: int) -> SuperPolynomial:
    return (A + B.mul_theta(i) + C.mul_theta(j)
            + D.mul_theta(j).mul_theta(i))
