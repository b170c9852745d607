"""Polycyclic presentations of iterated circle-bundle groups and their collector.

A height-``n`` presentation has generators ``s1, ..., sn`` and, for every
``i < j``, one relation::

    s_i s_j s_i^-1 = s_n^(a[i,j,n]) ... s_(j+1)^(a[i,j,j+1]) s_j^(eps[i,j])

Tails are stored as coefficient sequences ``(a[i,j,j+1], ..., a[i,j,n])`` but
always *mean* the descending product above.  Group elements are handled as
ascending normal forms ``(e1, ..., en)`` standing for ``s1^e1 s2^e2 ... sn^en``.

Public indices are 1-based everywhere; the private collector works 0-based.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InconsistentPresentation, StructuralError

NormalForm = tuple[int, ...]
# Syllables (generator index, exponent); the exponent is usually +-1.
GroupWord = tuple[tuple[int, int], ...]


class TowerPresentation:
    """Immutable presentation datum plus a memoized collector.

    ``eps`` maps every pair ``(i, j)`` with ``1 <= i < j <= n`` to ``+1``/``-1``.
    ``tails`` maps pairs to sequences of length ``n - j``; missing pairs are zero.
    """

    __slots__ = ("n", "_eps", "_tails", "_images_cache", "_rel_cache", "_lock")

    def __init__(
        self,
        n: int,
        eps: Mapping[tuple[int, int], int],
        tails: Mapping[tuple[int, int], Sequence[int]] | None = None,
    ):
        tails = {} if tails is None else tails
        _validate(n, eps, tails)
        self.n = n
        self._eps = {(i, j): int(eps[i, j]) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
        self._tails = {
            (i, j): tuple(int(x) for x in tails.get((i, j), (0,) * (n - j)))
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
        }
        self._images_cache: dict[tuple[int, int], tuple[NormalForm | None, ...]] = {}
        self._rel_cache: dict[tuple[int, int], NormalForm] = {}
        self._lock = threading.Lock()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def free_abelian(cls, n: int) -> TowerPresentation:
        return cls(n, {(i, j): 1 for i in range(1, n + 1) for j in range(i + 1, n + 1)})

    @classmethod
    def three(cls, a: int, eps: int, eps1: int, eps2: int) -> TowerPresentation:
        """The height-3 group with s1 s2 s1^-1 = s3^a s2^eps, s1 s3 s1^-1 = s3^eps1, s2 s3 s2^-1 = s3^eps2."""
        return cls(3, {(1, 2): eps, (1, 3): eps1, (2, 3): eps2}, {(1, 2): (a,)})

    @classmethod
    def bott(cls, matrix: Sequence[Sequence[int]]) -> TowerPresentation:
        """Real Bott form from a strictly upper-triangular 0/1 matrix (1 means sign -1)."""
        n = len(matrix)
        return cls(n, {(i, j): -1 if matrix[i - 1][j - 1] else 1
                       for i in range(1, n + 1) for j in range(i + 1, n + 1)})

    def with_data(self, eps=None, tails=None) -> TowerPresentation:
        return TowerPresentation(
            self.n, dict(self._eps) if eps is None else eps, dict(self._tails) if tails is None else tails
        )

    # -- plain data access ----------------------------------------------------

    def pairs(self) -> Iterable[tuple[int, int]]:
        return ((i, j) for i in range(1, self.n + 1) for j in range(i + 1, self.n + 1))

    def eps(self, i: int, j: int) -> int:
        return self._eps[i, j]

    def tail(self, i: int, j: int) -> tuple[int, ...]:
        return self._tails[i, j]

    def tail_entry(self, i: int, j: int, k: int) -> int:
        """The exponent a[i,j,k] of s_k in the relation for (i, j); requires k > j."""
        return self._tails[i, j][k - j - 1]

    @property
    def eps_map(self) -> dict[tuple[int, int], int]:
        return dict(self._eps)

    @property
    def tails_map(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return dict(self._tails)

    def tail_entries(self) -> Iterable[int]:
        for t in self._tails.values():
            yield from t

    def all_tails_zero(self) -> bool:
        return not any(self.tail_entries())

    def _key(self):
        return (self.n, tuple(sorted(self._eps.items())), tuple(sorted(self._tails.items())))

    def __eq__(self, other):
        if not isinstance(other, TowerPresentation):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.n == 3:
            return "TowerPresentation.three(%d, %d, %d, %d)" % (
                self.tail_entry(1, 2, 3), self.eps(1, 2), self.eps(1, 3), self.eps(2, 3))
        return f"TowerPresentation(n={self.n}, eps={self._eps}, tails={self._tails})"

    def validate(self) -> None:
        _validate(self.n, self._eps, self._tails)

    # -- elements -------------------------------------------------------------

    @property
    def identity(self) -> NormalForm:
        return (0,) * self.n

    def generator(self, i: int, exponent: int = 1) -> NormalForm:
        self._check_index(i)
        return self._unit(i - 1, exponent)

    def normal_form(self, exponents: Sequence[int]) -> NormalForm:
        nf = tuple(int(e) for e in exponents)
        if len(nf) != self.n:
            raise ValueError(f"normal form needs {self.n} exponents, got {len(nf)}")
        return nf

    def evaluate(self, word: Iterable[tuple[int, int]]) -> NormalForm:
        """Collect a word given as (generator, exponent) syllables."""
        result = self.identity
        for gen, exp in word:
            self._check_index(gen)
            result = self._mul(result, self._unit(gen - 1, exp), 0)
        return result

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> NormalForm:
        return self._mul(self.normal_form(u), self.normal_form(v), 0)

    def invert(self, u: Sequence[int]) -> NormalForm:
        return self._inv(self.normal_form(u), 0)

    def power(self, u: Sequence[int], k: int) -> NormalForm:
        return self._pow(self.normal_form(u), k, 0)

    def commutator(self, u: Sequence[int], v: Sequence[int]) -> NormalForm:
        """u v u^-1 v^-1."""
        u, v = self.normal_form(u), self.normal_form(v)
        return self._mul(self._mul(u, v, 0), self._inv(self._mul(v, u, 0), 0), 0)

    def conjugate_generator(self, i: int, sign: int, j: int) -> NormalForm:
        """Normal form of s_i^sign s_j s_i^-sign for i < j."""
        self._check_index(i)
        self._check_index(j)
        if not i < j:
            raise IndexError(f"conjugate_generator needs i < j, got ({i}, {j})")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return self._images(i - 1, sign)[j - 1]

    def relation(self, i: int, j: int) -> NormalForm:
        """Ascending normal form of the right-hand side of the (i, j) relation."""
        return self.conjugate_generator(i, 1, j)

    def relator_rhs_word(self, i: int, j: int) -> GroupWord:
        """The right-hand side of the (i, j) relation as the literal descending word."""
        word = [(k, self.tail_entry(i, j, k)) for k in range(self.n, j, -1) if self.tail_entry(i, j, k)]
        word.append((j, self.eps(i, j)))
        return tuple(word)

    def quotient_below(self, m: int) -> TowerPresentation:
        """Presentation of the quotient by <s_(m+1), ..., s_n>."""
        if not 1 <= m <= self.n:
            raise IndexError(f"quotient height {m} outside 1..{self.n}")
        eps = {(i, j): e for (i, j), e in self._eps.items() if j <= m}
        tails = {(i, j): t[: m - j] for (i, j), t in self._tails.items() if j <= m}
        return TowerPresentation(m, eps, tails)

    def consistency_check(self) -> ConsistencyResult:
        """Check that conjugation by each s_i^{+-1} respects the relations of <s_(i+1), ..., s_n>.

        Proceeds from the top of the tower downwards so that every collection
        step only uses levels already certified.
        """
        n = self.n
        for i in range(n - 3, -1, -1):
            for sign in (1, -1):
                try:
                    img = self._images(i, sign)
                except InconsistentPresentation as exc:
                    return ConsistencyResult(False, exc.args[1] if len(exc.args) > 1 else None)
                for j in range(i + 1, n):
                    inv_j = self._inv(img[j], i + 1)
                    for k in range(j + 1, n):
                        lhs = self._mul(self._mul(img[j], img[k], i + 1), inv_j, i + 1)
                        rhs = self._apply(img, self._images(j, 1)[k], i + 1)
                        if lhs != rhs:
                            return ConsistencyResult(False, (i + 1, j + 1, k + 1), lhs, rhs)
        return ConsistencyResult(True)

    def is_consistent(self) -> bool:
        return self.consistency_check().consistent

    # -- collector internals (0-based) ------------------------------------------

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise IndexError(f"generator index {i} outside 1..{self.n}")

    def _unit(self, g: int, e: int = 1) -> NormalForm:
        nf = [0] * self.n
        nf[g] = e
        return tuple(nf)

    def _mul(self, u: NormalForm, v: NormalForm, start: int) -> NormalForm:
        # u = s_i^e u', v = s_i^f v'  =>  u v = s_i^(e+f) phi_i^(-f)(u') v'
        n = self.n
        head = list(u[:start])
        u, v = list(u), list(v)
        i = start
        while i < n:
            e, f = u[i], v[i]
            if f and any(u[i + 1:]):
                u[i] = 0
                u = list(self._act(i, -f, tuple(u)))
            head.append(e + f)
            i += 1
        return tuple(head)

    def _inv(self, x: NormalForm, start: int) -> NormalForm:
        # (s_i^e x')^-1 = s_i^-e phi_i^e(x'^-1)
        for i in range(start, self.n):
            if x[i]:
                e = x[i]
                rest = list(x)
                rest[i] = 0
                y = self._inv(tuple(rest), i + 1)
                z = list(self._act(i, e, y))
                z[i] = -e
                return tuple(z)
        return x

    def _pow(self, x: NormalForm, k: int, start: int) -> NormalForm:
        if k < 0:
            x, k = self._inv(x, start), -k
        result = (0,) * self.n
        while k:
            if k & 1:
                result = self._mul(result, x, start)
            k >>= 1
            if k:
                x = self._mul(x, x, start)
        return result

    def _act(self, i: int, k: int, x: NormalForm) -> NormalForm:
        """phi_i^k(x) = s_i^k x s_i^-k for x in <s_(i+1), ..., s_n>."""
        if k == 0 or not any(x):
            return x
        return self._apply(self._images(i, k), x, i + 1)

    def _apply(self, images: Sequence[NormalForm | None], x: NormalForm, start: int) -> NormalForm:
        """Evaluate the homomorphism s_j -> images[j] on x (supported on indices >= start)."""
        result = (0,) * self.n
        for j in range(start, self.n):
            if x[j]:
                result = self._mul(result, self._pow(images[j], x[j], start), start)
        return result

    def _rel(self, i: int, j: int) -> NormalForm:
        """Collect s_n^a ... s_(j+1)^a s_j^eps (0-based indices) inside <s_j, ..., s_n>."""
        key = (i, j)
        cached = self._rel_cache.get(key)
        if cached is not None:
            return cached
        tail = self._tails[i + 1, j + 1]
        result = (0,) * self.n
        for k in range(self.n - 1, j, -1):
            a = tail[k - j - 1]
            if a:
                result = self._mul(result, self._unit(k, a), j)
        result = self._mul(result, self._unit(j, self._eps[i + 1, j + 1]), j)
        with self._lock:
            self._rel_cache.setdefault(key, result)
        return result

    def _images(self, i: int, k: int) -> tuple[NormalForm | None, ...]:
        """Images of s_j (j > i) under phi_i^k; entries at j <= i are None."""
        key = (i, k)
        cached = self._images_cache.get(key)
        if cached is not None:
            return cached
        if k == 1:
            images = tuple(None if j <= i else self._rel(i, j) for j in range(self.n))
        elif k == -1:
            images = self._inverse_images(i)
        elif k % 2 == 0:
            half = self._images(i, k // 2)
            images = self._compose(i, half, half)
        else:
            step = 1 if k > 0 else -1
            images = self._compose(i, self._images(i, step), self._images(i, k - step))
        with self._lock:
            images = self._images_cache.setdefault(key, images)
        return images

    def _compose(self, i, alpha, beta):
        return tuple(None if j <= i else self._apply(alpha, beta[j], i + 1) for j in range(self.n))

    def _inverse_images(self, i: int) -> tuple[NormalForm | None, ...]:
        # Triangular solve of phi_i(x_j) = s_j, descending from the top generator.
        n = self.n
        fwd = self._images(i, 1)
        inv: list[NormalForm | None] = [None] * n
        for j in range(n - 1, i, -1):
            eps = fwd[j][j]
            unit = self._unit(j)
            z = self._mul(self._pow(fwd[j], -eps, j), unit, j)
            if z[j] != 0 or eps not in (1, -1):
                raise InconsistentPresentation(f"cannot invert conjugation by s{i + 1}", (i + 1, j + 1, j + 1))
            y = self._apply(inv, z, j + 1)
            x = self._mul(self._unit(j, eps), y, j)
            if self._apply(fwd, x, i + 1) != unit:
                raise InconsistentPresentation(
                    f"conjugation by s{i + 1} is not invertible on s{j + 1}", (i + 1, j + 1, j + 1))
            inv[j] = x
        return tuple(inv)


@dataclass(frozen=True)
class ConsistencyResult:
    consistent: bool
    triple: tuple[int, int, int] | None = None
    lhs: NormalForm | None = None
    rhs: NormalForm | None = None

    def __bool__(self):
        return self.consistent


def _validate(n, eps, tails) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise StructuralError(f"n: expected a positive integer, got {n!r}")
    for key in eps:
        if not (isinstance(key, tuple) and len(key) == 2 and 1 <= key[0] < key[1] <= n):
            raise StructuralError(f"eps{list(key) if isinstance(key, tuple) else key}: pair outside 1 <= i < j <= {n}")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (i, j) not in eps:
                raise StructuralError(f"eps[{i},{j}]: missing")
            if eps[i, j] not in (1, -1):
                raise StructuralError(f"eps[{i},{j}]: sign must be 1 or -1, got {eps[i, j]!r}")
    for key, tail in tails.items():
        if not (isinstance(key, tuple) and len(key) == 2 and 1 <= key[0] < key[1] <= n):
            raise StructuralError(f"tails{list(key) if isinstance(key, tuple) else key}: pair outside 1 <= i < j <= {n}")
        i, j = key
        if len(tail) != n - j:
            raise StructuralError(f"tails[{i},{j}]: length must be {n - j}, got {len(tail)}")
        for x in tail:
            if isinstance(x, bool) or int(x) != x:
                raise StructuralError(f"tails[{i},{j}]: non-integer entry {x!r}")


def format_normal_form(nf: Sequence[int]) -> str:
    return "( " + ", ".join(str(e) for e in nf) + " )"


def normal_form_word(nf: Sequence[int]) -> GroupWord:
    return tuple((k + 1, e) for k, e in enumerate(nf) if e)
