"""On-disk cache of exact colored Jones polynomials.

One text file per N::

    jones figure-eight N=<n> v1
    <exponent> <coefficient>
    ...

sorted by exponent, decimal integers.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from .jones import JonesExact, habiro_exact
from .laurent import LaurentPolynomial

HEADER = "jones figure-eight N={n} v1"


class CacheFormatError(ValueError):
    pass


def dumps(j: JonesExact) -> str:
    lines = [HEADER.format(n=j.N)]
    lines += [f"{e} {c}" for e, c in j.poly.items()]
    return "\n".join(lines) + "\n"


def loads(text: str) -> JonesExact:
    lines = text.splitlines()
    if not lines:
        raise CacheFormatError("empty cache file")
    head = lines[0].strip()
    prefix, suffix = "jones figure-eight N=", " v1"
    if not (head.startswith(prefix) and head.endswith(suffix)):
        raise CacheFormatError(f"bad header: {head!r}")
    N = int(head[len(prefix) : -len(suffix)])
    coeffs = {}
    prev = None
    for ln in lines[1:]:
        if not ln.strip():
            continue
        e_s, c_s = ln.split()
        e, c = int(e_s), int(c_s)
        if prev is not None and e <= prev:
            raise CacheFormatError("exponents must be strictly increasing")
        prev = e
        coeffs[e] = c
    return JonesExact(N, LaurentPolynomial(coeffs))


def checksum(j: JonesExact) -> str:
    return hashlib.sha256(dumps(j).encode()).hexdigest()


class PolynomialCache:
    """Directory-backed lookup N -> JonesExact; created on first use."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def path(self, N: int) -> Path:
        return self.directory / f"jones_fig8_N{N}.txt"

    def __call__(self, N: int) -> JonesExact:
        return self.get(N)

    def get(self, N: int) -> JonesExact:
        p = self.path(N)
        if p.exists():
            j = loads(p.read_text(encoding="utf-8"))
            if j.N != N:
                raise CacheFormatError(f"{p} holds N={j.N}, expected {N}")
            self.hits += 1
            return j
        j = habiro_exact(N)
        self.misses += 1
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".txt")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(dumps(j))
        os.replace(tmp, p)
        return j
