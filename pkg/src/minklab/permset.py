"""Permutation sets: storage, sharp 3-transitivity, the PERMSET v1 format, relabelings."""

from __future__ import annotations

from collections import Counter
from itertools import permutations, product
from math import factorial
from pathlib import Path

import numpy as np

from .errors import NotSharply3Transitive, ParseError


class PermCodec:
    """Exact integer codes for permutations of ``n`` symbols (base-n digits).

    Falls back to byte keys and a dict when ``n**n`` overflows int64.
    """

    def __init__(self, n: int):
        self.n = n
        self.exact_int = n**n < 2**62
        if self.exact_int:
            self.weights = (n ** np.arange(n - 1, -1, -1, dtype=np.int64)).astype(np.int64)

    def encode(self, rows: np.ndarray):
        rows = np.asarray(rows, dtype=np.int64)
        if self.exact_int:
            return rows @ self.weights
        return [r.astype(np.uint8).tobytes() for r in rows.reshape(-1, self.n)]


class PermIndex:
    """Membership/lookup index from permutations to row numbers."""

    def __init__(self, perms: np.ndarray):
        self.codec = PermCodec(perms.shape[1])
        codes = self.codec.encode(perms)
        if self.codec.exact_int:
            order = np.argsort(codes, kind="stable")
            self._codes = codes[order]
            self._ids = order
            self.distinct = bool(np.all(np.diff(self._codes) != 0)) if len(codes) > 1 else True
        else:
            self._dict = {}
            for i, c in enumerate(codes):
                self._dict.setdefault(c, i)
            self.distinct = len(self._dict) == len(codes)

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Row index of each permutation in ``rows`` (shape (r, n)), -1 if absent."""
        rows = np.asarray(rows)
        single = rows.ndim == 1
        rows = rows.reshape(-1, self.codec.n)
        codes = self.codec.encode(rows)
        if self.codec.exact_int:
            if len(self._codes) == 0:
                out = np.full(len(rows), -1, dtype=np.int64)
            else:
                pos = np.searchsorted(self._codes, codes)
                pos = np.minimum(pos, len(self._codes) - 1)
                hit = self._codes[pos] == codes
                out = np.where(hit, self._ids[pos], -1)
        else:
            out = np.array([self._dict.get(c, -1) for c in codes], dtype=np.int64)
        return int(out[0]) if single else out


class PermutationSet:
    """A set of distinct permutations of ``0..n-1`` stored as image arrays.

    ``perms[i, x]`` is the image of symbol ``x`` under member ``i``.
    """

    def __init__(self, perms, n: int | None = None, name: str = ""):
        arr = np.array(perms, dtype=np.int64)
        if arr.ndim != 2:
            if arr.size == 0 and n is not None:
                arr = arr.reshape(0, n)
            else:
                raise ValueError("permutations must form a 2-d array")
        if n is not None and arr.shape[1] != n:
            raise ValueError(f"expected permutations of {n} symbols, got width {arr.shape[1]}")
        n = arr.shape[1]
        ok = np.all(np.sort(arr, axis=1) == np.arange(n), axis=1) if len(arr) else np.array([])
        if not np.all(ok):
            bad = int(np.nonzero(~ok)[0][0])
            raise ValueError(f"row {bad} is not a permutation of 0..{n - 1}")
        arr.setflags(write=False)
        self.n = n
        self.perms = arr
        self.name = name
        self.index = PermIndex(arr)
        if not self.index.distinct:
            raise ValueError("permutation set has repeated members")

    def __len__(self):
        return len(self.perms)

    def __iter__(self):
        return iter(self.perms)

    def __contains__(self, perm) -> bool:
        return self.index.lookup(np.asarray(perm)) >= 0

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<PermutationSet{label} n={self.n} count={len(self)}>"

    @property
    def inverses(self) -> np.ndarray:
        inv = np.empty_like(self.perms)
        rows = np.arange(len(self.perms))[:, None]
        inv[rows, self.perms] = np.arange(self.n)
        return inv

    def without(self, i: int) -> "PermutationSet":
        return PermutationSet(np.delete(self.perms, i, axis=0), n=self.n, name=self.name + "-minus")

    def cycle_type_histogram(self) -> Counter:
        return Counter(cycle_type(p) for p in self.perms)

    def composition_closed(self):
        """Return ``None`` when closed, else a pair ``(i, j)`` with ``perms[i] o perms[j]`` outside."""
        return first_closure_violation(self.perms, self.index)

    # -- file format -----------------------------------------------------------

    def dumps(self) -> str:
        lines = [f"PERMSET v1 n={self.n} count={len(self)}"]
        lines += [" ".join(map(str, row)) for row in self.perms.tolist()]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str, name: str = "") -> "PermutationSet":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty PERMSET file")
        head = lines[0].split()
        if len(head) != 4 or head[0] != "PERMSET" or head[1] != "v1":
            raise ParseError(f"bad PERMSET header: {lines[0]!r}")
        try:
            fields = dict(tok.split("=", 1) for tok in head[2:])
            n, count = int(fields["n"]), int(fields["count"])
        except (ValueError, KeyError):
            raise ParseError(f"bad PERMSET header: {lines[0]!r}") from None
        body = lines[1:]
        if len(body) != count:
            raise ParseError(f"header announces {count} permutations, found {len(body)}")
        rows = []
        for lineno, ln in enumerate(body, start=2):
            try:
                row = [int(t) for t in ln.split()]
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer entry") from None
            if sorted(row) != list(range(n)):
                raise ParseError(f"line {lineno}: not a permutation of 0..{n - 1}")
            rows.append(row)
        try:
            return cls(np.array(rows, dtype=np.int64).reshape(count, n), n=n, name=name)
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    @classmethod
    def load(cls, path) -> "PermutationSet":
        path = Path(path)
        return cls.loads(path.read_text(encoding="utf-8"), name=path.stem)


def cycle_type(perm) -> tuple[int, ...]:
    perm = list(perm)
    seen = [False] * len(perm)
    lengths = []
    for s in range(len(perm)):
        if not seen[s]:
            ln, x = 0, s
            while not seen[x]:
                seen[x] = True
                x = perm[x]
                ln += 1
            lengths.append(ln)
    return tuple(sorted(lengths, reverse=True))


def first_closure_violation(perms: np.ndarray, index: PermIndex, workers: int = 1):
    """First ``(i, j)`` in row-major order with ``perms[i] o perms[j]`` not in the set."""
    from ._parallel import pmap

    m = len(perms)

    def scan(i):
        comp = perms[i][perms]  # (perms[i] o perms[j])(x) = perms[i][perms[j][x]]
        hit = index.lookup(comp)
        bad = np.nonzero(hit < 0)[0]
        return (i, int(bad[0])) if len(bad) else None

    for res in pmap(scan, range(m), workers):
        if res is not None:
            return res
    return None


def sharp3_witness(perms: np.ndarray, n: int):
    """``None`` if sharply 3-transitive, else ``(source, target, count)`` with count != 1."""
    perms = np.asarray(perms, dtype=np.int64).reshape(-1, n)
    if n < 3:
        raise ValueError("sharp 3-transitivity needs at least 3 symbols")
    triples = np.array(list(permutations(range(n), 3)), dtype=np.int64)
    tcode = triples[:, 0] * n * n + triples[:, 1] * n + triples[:, 2]
    total = len(triples)
    for src in triples:
        img = perms[:, src]
        codes = img[:, 0] * n * n + img[:, 1] * n + img[:, 2]
        counts = np.bincount(codes, minlength=n**3)[tcode]
        bad = np.nonzero(counts != 1)[0]
        if len(bad):
            b = bad[0]
            return tuple(int(v) for v in src), tuple(int(v) for v in triples[b]), int(counts[b])
    if len(perms) != total:  # pragma: no cover - implied by the counts above
        return (0, 1, 2), (0, 1, 2), len(perms)
    return None


def certify_sharply_3_transitive(pset: PermutationSet) -> None:
    w = sharp3_witness(pset.perms, pset.n)
    if w is not None:
        src, dst, cnt = w
        raise NotSharply3Transitive(
            f"{cnt} members map {src} onto {dst} (need exactly 1)", witness=w)


def find_relabeling(S: PermutationSet, T: PermutationSet):
    """Search for a symbol relabeling ``s`` with ``s S s^-1 == T``.

    Returns the relabeling as an image array, or ``None`` when none exists.
    Cycle-type histograms are compared first.  Otherwise one member ``g`` of
    S with the fewest candidate conjugators is fixed; every valid relabeling
    maps ``g`` to some ``t`` in T of the same cycle type, and those
    conjugators are enumerated completely (cycles of equal length matched in
    every order and rotation).
    """
    if S.n != T.n or len(S) != len(T):
        return None
    if S.cycle_type_histogram() != T.cycle_type_histogram():
        return None
    n = S.n

    def n_conj(ct):
        c = Counter(ct)
        out = 1
        for ln, mult in c.items():
            out *= factorial(mult) * ln**mult
        return out

    def cycles(p):
        seen, out = [False] * n, []
        for s in range(n):
            if not seen[s]:
                cyc, x = [], s
                while not seen[x]:
                    seen[x] = True
                    cyc.append(x)
                    x = int(p[x])
                out.append(cyc)
        return out

    hist = T.cycle_type_histogram()
    best = min(range(len(S)), key=lambda i: n_conj(cycle_type(S.perms[i])) * hist[cycle_type(S.perms[i])])
    g = S.perms[best]
    gct = cycle_type(g)
    gcyc = cycles(g)
    by_len: dict[int, list] = {}
    for c in gcyc:
        by_len.setdefault(len(c), []).append(c)
    for t in T.perms:
        if cycle_type(t) != gct:
            continue
        tby: dict[int, list] = {}
        for c in cycles(t):
            tby.setdefault(len(c), []).append(c)
        lens = sorted(by_len)
        choices = []
        for ln in lens:
            src = by_len[ln]
            opts = []
            for order in permutations(range(len(src))):
                for rots in product(range(ln), repeat=len(src)):
                    opts.append((order, rots))
            choices.append(opts)
        for combo in product(*choices):
            sigma = np.empty(n, dtype=np.int64)
            for ln, (order, rots) in zip(lens, combo):
                for ci, (tj, r) in enumerate(zip(order, rots)):
                    sc, tc = by_len[ln][ci], tby[ln][tj]
                    for pos, x in enumerate(sc):
                        sigma[x] = tc[(pos + r) % ln]
            sinv = np.empty(n, dtype=np.int64)
            sinv[sigma] = np.arange(n)
            conj = sigma[S.perms][:, sinv]  # sigma o s o sigma^-1
            if np.all(T.index.lookup(conj) >= 0):
                return sigma
    return None
