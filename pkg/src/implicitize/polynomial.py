"""Sparse multivariate polynomials with complex coefficients.

A :class:`Polynomial` is an immutable map from exponent tuples to complex
coefficients. Hot loops (path tracking, interpolation) never touch these
objects directly; they go through :class:`PolySystem`, which compiles a list of
polynomials into dense exponent tables and sparse coefficient matrices so a
whole batch of points can be evaluated with a handful of numpy calls.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

Exponent = tuple[int, ...]


class PolynomialSyntaxError(ValueError):
    """Raised when a polynomial string cannot be parsed."""

    def __init__(self, message: str, text: str = "", position: int = -1):
        self.text = text
        self.position = position
        if position >= 0:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class Polynomial:
    __slots__ = ("_terms", "num_vars")

    def __init__(self, terms: Mapping[Exponent, complex] | None = None, num_vars: int = 1):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        clean: dict[Exponent, complex] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {num_vars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = complex(c)
            if c != 0:
                clean[exp] = clean.get(exp, 0) + c
                if clean[exp] == 0:
                    del clean[exp]
        self._terms = clean
        self.num_vars = num_vars

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c: complex, num_vars: int) -> Polynomial:
        return cls({(0,) * num_vars: c}, num_vars)

    @classmethod
    def variable(cls, index: int, num_vars: int) -> Polynomial:
        exp = [0] * num_vars
        exp[index] = 1
        return cls({tuple(exp): 1.0}, num_vars)

    @classmethod
    def linear(cls, coefficients: Sequence[complex], constant: complex = 0.0) -> Polynomial:
        """The affine form ``sum_j a_j x_j + constant``."""
        n = len(coefficients)
        terms = {tuple(int(i == j) for i in range(n)): a for j, a in enumerate(coefficients)}
        terms[(0,) * n] = constant
        return cls(terms, n)

    # -- basic properties ---------------------------------------------
    @property
    def terms(self) -> dict[Exponent, complex]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float, complex)):
            other = Polynomial.constant(other, self.num_vars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.num_vars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({self._terms!r}, num_vars={self.num_vars})"

    def to_string(self, names: Sequence[str] | None = None) -> str:
        """Render in the text grammar accepted by :func:`parse_polynomial`."""
        if not self._terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.num_vars)]
        out = ""
        for exp in sorted(self._terms, key=_grevlex_key):
            c = complex(self._terms[exp])
            mono = "*".join(
                names[j] if e == 1 else f"{names[j]}^{e}" for j, e in enumerate(exp) if e
            )
            negative = c.imag == 0 and c.real < 0
            if negative:
                c = -c
            coeff = _format_complex(c)
            if not mono:
                term = coeff
            elif coeff == "1":
                term = mono
            else:
                term = f"{coeff}*{mono}"
            if not out:
                out = f"-{term}" if negative else term
            else:
                out += f" - {term}" if negative else f" + {term}"
        return out

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.num_vars != self.num_vars:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Polynomial.constant(complex(other), self.num_vars)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            terms[exp] = terms.get(exp, 0) + c
        return Polynomial(terms, self.num_vars)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({e: -c for e, c in self._terms.items()}, self.num_vars)

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Exponent, complex] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(terms, self.num_vars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1.0, self.num_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, j: int) -> Polynomial:
        terms = {}
        for exp, c in self._terms.items():
            if exp[j]:
                e = list(exp)
                e[j] -= 1
                terms[tuple(e)] = c * exp[j]
        return Polynomial(terms, self.num_vars)

    def embed(self, num_vars: int, positions: Sequence[int]) -> Polynomial:
        """Re-express in a larger ring, sending variable ``j`` to ``positions[j]``."""
        terms = {}
        for exp, c in self._terms.items():
            e = [0] * num_vars
            for j, p in enumerate(positions):
                e[p] = exp[j]
            terms[tuple(e)] = c
        return Polynomial(terms, num_vars)

    def __call__(self, point) -> complex:
        return evaluate(self, point)


def _grevlex_key(exp: Exponent):
    # graded, then lex descending
    return (-sum(exp), tuple(-e for e in exp))


def _format_complex(c: complex) -> str:
    if c.imag == 0:
        r = c.real
        return str(int(r)) if r.is_integer() and abs(r) < 1e15 else repr(r)
    if c.real == 0:
        return f"{c.imag!r}i"
    sign = "+" if c.imag >= 0 else "-"
    return f"({c.real!r}{sign}{abs(c.imag)!r}i)"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[start]!r}", text, start)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group("num") is not None:
            value = float(m.group("num"))
            tokens.append(("num", complex(0, value) if m.group("imag") else complex(value), start))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), start))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.index = {v: j for j, v in enumerate(variables)}
        self.n = len(variables)
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise PolynomialSyntaxError(message, self.text, tok[2])

    def parse(self) -> Polynomial:
        p = self.sum()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def sum(self) -> Polynomial:
        if self.peek()[:2] in (("op", "-"), ("op", "+")):
            neg = self.take()[1] == "-"
            p = self.product()
            p = -p if neg else p
        else:
            p = self.product()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.product()
            p = p + q if op == "+" else p - q
        return p

    def product(self) -> Polynomial:
        p = self.power()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.power()
        return p

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                tok = self.take()
                self.error("negative exponent", tok)
            tok = self.take()
            if tok[0] != "num" or tok[1].imag != 0 or tok[1].real != int(tok[1].real):
                self.error("exponent must be a nonnegative integer literal", tok)
            base = base ** (sign * int(tok[1].real))
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Polynomial.constant(value, self.n)
        if kind == "name":
            if value in self.index:
                return Polynomial.variable(self.index[value], self.n)
            if value == "i":
                return Polynomial.constant(1j, self.n)
            self.error(f"unknown variable {value!r}", tok)
        if (kind, value) == ("op", "("):
            p = self.sum()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return p
        if (kind, value) == ("op", "-"):
            return -self.power()
        self.error("expected a number, variable or '('", tok)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` as a polynomial in ``variables``.

    Coefficients may be integers, decimals or imaginary literals such as
    ``2i`` or ``(1.5-0.5i)``. The bare name ``i`` is the imaginary unit unless
    it is one of the declared variables.
    """
    if not variables:
        raise ValueError("at least one variable is required")
    return _Parser(text, list(variables)).parse()


# ---------------------------------------------------------------------------
# evaluation and differentiation


def evaluate(p: Polynomial, point) -> complex:
    point = np.asarray(point, dtype=complex)
    if point.shape != (p.num_vars,):
        raise ValueError(f"point has shape {point.shape}, expected ({p.num_vars},)")
    total = 0j
    for exp, c in p._terms.items():
        m = c
        for x, e in zip(point, exp):
            if e:
                m *= x**e
        total += m
    return complex(total)


def jacobian(polys: Sequence[Polynomial]) -> list[list[Polynomial]]:
    if not polys:
        return []
    n = polys[0].num_vars
    if any(p.num_vars != n for p in polys):
        raise ValueError("polynomials do not share a ring")
    return [[p.diff(j) for j in range(n)] for p in polys]


def monomial_basis(d: int, num_vars: int) -> list[Exponent]:
    """All exponent vectors of total degree ``d`` in graded-lex order."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if num_vars < 1:
        raise ValueError("num_vars must be positive")
    basis = []

    def rec(prefix: list[int], remaining: int, slots: int):
        if slots == 1:
            basis.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], d, num_vars)
    assert len(basis) == comb(num_vars - 1 + d, d)
    return basis


# ---------------------------------------------------------------------------
# maps, problems and cone parametrizations


@dataclass(frozen=True)
class PolynomialMap:
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a polynomial map needs at least one component")
        n = comps[0].num_vars
        if any(c.num_vars != n for c in comps):
            raise ValueError("map components do not share a ring")

    @property
    def source_dim(self) -> int:
        return self.components[0].num_vars

    @property
    def target_dim(self) -> int:
        return len(self.components)

    def __call__(self, point) -> np.ndarray:
        return np.array([evaluate(c, point) for c in self.components])


@dataclass(frozen=True)
class ProblemSpec:
    variables: tuple[str, ...]
    ideal_generators: tuple[Polynomial, ...]
    map: PolynomialMap
    homogeneous: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "ideal_generators", tuple(self.ideal_generators))
        n = len(self.variables)
        if self.map.source_dim != n:
            raise ValueError("map and variable list disagree on the number of variables")
        if any(g.num_vars != n for g in self.ideal_generators):
            raise ValueError("ideal generators and variable list disagree")
        if self.homogeneous:
            for g in self.ideal_generators:
                if not g.is_homogeneous():
                    raise ValueError("homogeneous flag set but an ideal generator is not homogeneous")
            degrees = {c.degree for c in self.map.components if not c.is_zero()}
            if any(not c.is_homogeneous() for c in self.map.components) or len(degrees) > 1:
                raise ValueError("homogeneous flag set but map components are not forms of one degree")

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    @classmethod
    def from_strings(cls, variables, ideal, map, homogeneous=False) -> ProblemSpec:
        variables = tuple(variables)
        return cls(
            variables,
            tuple(parse_polynomial(g, variables) for g in ideal),
            PolynomialMap(tuple(parse_polynomial(f, variables) for f in map)),
            bool(homogeneous),
        )


@dataclass(frozen=True)
class ConeMap:
    """Parametrization of the affine cone over the projective closure of the image.

    When ``augmented`` is set the source coordinates are ``(lam, x_1..x_n)`` and
    the map is ``lam * (1, f_1, ..., f_m)``; ``ideal`` holds the generators of
    X re-expressed in those coordinates.
    """

    map: PolynomialMap
    ideal: tuple[Polynomial, ...]
    augmented: bool

    @property
    def cone_source_dim(self) -> int:
        return self.map.source_dim

    @property
    def target_dim(self) -> int:
        return self.map.target_dim

    def lift(self, x: np.ndarray, lam: np.ndarray | None = None) -> np.ndarray:
        """Source samples (rows) to cone source coordinates."""
        x = np.atleast_2d(np.asarray(x, dtype=complex))
        if not self.augmented:
            return x
        if lam is None:
            lam = np.ones(len(x), dtype=complex)
        return np.column_stack([lam, x])


def make_cone_map(spec: ProblemSpec) -> ConeMap:
    if spec.homogeneous:
        return ConeMap(spec.map, spec.ideal_generators, False)
    n = spec.num_vars
    positions = list(range(1, n + 1))
    lam = Polynomial.variable(0, n + 1)
    comps = [lam] + [lam * f.embed(n + 1, positions) for f in spec.map.components]
    ideal = tuple(g.embed(n + 1, positions) for g in spec.ideal_generators)
    return ConeMap(PolynomialMap(tuple(comps)), ideal, True)


# ---------------------------------------------------------------------------
# compiled batch evaluation


class PolySystem:
    """A list of polynomials compiled for batched evaluation.

    ``values(X)`` maps points of shape ``(P, n)`` to ``(P, k)`` and
    ``jacobian(X)`` to ``(P, k, n)``.
    """

    def __init__(self, polys: Iterable[Polynomial], num_vars: int | None = None):
        self.polys = tuple(polys)
        if num_vars is None:
            if not self.polys:
                raise ValueError("num_vars is required for an empty system")
            num_vars = self.polys[0].num_vars
        self.num_vars = num_vars
        if any(p.num_vars != num_vars for p in self.polys):
            raise ValueError("polynomials do not share a ring")
        k, n = len(self.polys), num_vars
        index: dict[Exponent, int] = {}
        vrows, vcols, vdata = [], [], []
        jrows, jcols, jdata = [], [], []
        for i, p in enumerate(self.polys):
            for exp, c in p._terms.items():
                vrows.append(i)
                vcols.append(index.setdefault(exp, len(index)))
                vdata.append(c)
                for j, e in enumerate(exp):
                    if e:
                        d = exp[:j] + (e - 1,) + exp[j + 1 :]
                        jrows.append(i * n + j)
                        jcols.append(index.setdefault(d, len(index)))
                        jdata.append(c * e)
        T = max(len(index), 1)
        exps = np.zeros((T, n), dtype=np.int64)
        for exp, t in index.items():
            exps[t] = exp
        self._exps = exps
        self._maxdeg = int(exps.max()) if exps.size else 0
        self._val = sp.csr_matrix((np.asarray(vdata, complex), (vrows, vcols)), shape=(k, T))
        self._jac = sp.csr_matrix((np.asarray(jdata, complex), (jrows, jcols)), shape=(k * n, T))
        self._active = [np.nonzero(exps[:, j])[0] for j in range(n)]

    def __len__(self) -> int:
        return len(self.polys)

    @property
    def degrees(self) -> list[int]:
        return [p.degree for p in self.polys]

    def _monomials(self, X: np.ndarray) -> np.ndarray:
        P = X.shape[0]
        D = self._maxdeg
        powers = np.ones((P, self.num_vars, D + 1), dtype=complex)
        for e in range(1, D + 1):
            powers[:, :, e] = powers[:, :, e - 1] * X
        M = np.ones((P, self._exps.shape[0]), dtype=complex)
        for j, cols in enumerate(self._active):
            if len(cols):
                M[:, cols] *= powers[:, j, self._exps[cols, j]]
        return M

    def _points(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=complex)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.num_vars:
            raise ValueError(f"points have {X.shape[1]} coordinates, expected {self.num_vars}")
        return X

    def values(self, X) -> np.ndarray:
        X = self._points(X)
        return np.asarray((self._val @ self._monomials(X).T).T)

    def jacobian(self, X) -> np.ndarray:
        X = self._points(X)
        J = np.asarray((self._jac @ self._monomials(X).T).T)
        return J.reshape(X.shape[0], len(self.polys), self.num_vars)

    def values_and_jacobian(self, X) -> tuple[np.ndarray, np.ndarray]:
        X = self._points(X)
        M = self._monomials(X).T
        V = np.asarray((self._val @ M).T)
        J = np.asarray((self._jac @ M).T).reshape(X.shape[0], len(self.polys), self.num_vars)
        return V, J


def total_degree_roots(degrees: Sequence[int]) -> np.ndarray:
    """All solutions of ``x_i^{d_i} = 1``, one per row."""
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degrees]
    return np.array(list(itertools.product(*roots)), dtype=complex).reshape(-1, len(degrees))
