"""Exact numerics for minimum-genus embeddings of hypercubes."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

__all__ = ["CubeReport", "connection_patterns", "cube_report", "klee_count", "sci3"]


@dataclass(frozen=True)
class CubeReport:
    d: int
    p: int
    q: int
    genus: int
    r: int
    klee: bool


def cube_report(d: int) -> CubeReport:
    """Vertices, edges, genus and region count of Q_d embedded with minimum genus.

    The genus formula gives a quarter-integer below d = 2, so those are refused.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    p = 2**d
    q = d * 2 ** (d - 1)
    # 1 + (d-4) 2^(d-3), kept integral for d = 2
    genus = (8 + (d - 4) * 2**d) // 8
    r = 2 - 2 * genus - p + q
    if r != d * 2**d // 4:
        raise ArithmeticError(f"region count mismatch at d={d}")
    return CubeReport(d, p, q, genus, r, r > p)


def connection_patterns(b: int, min_attach: int) -> int:
    """Ways to join a new vertex to at least ``min_attach`` of ``b`` boundary vertices."""
    if b < 0:
        raise ValueError("b must be >= 0")
    return sum(comb(b, j) for j in range(max(min_attach, 0), b + 1))


def klee_count(r_total: int, s_min: int, s_max: int, patterns: int) -> int:
    """Sum over k in [s_min, s_max] of C(r_total, k) * patterns**k, exactly."""
    if not 0 <= s_min <= s_max <= r_total:
        raise ValueError("need 0 <= s_min <= s_max <= r_total")
    return sum(comb(r_total, k) * patterns**k for k in range(s_min, s_max + 1))


def sci3(n: int) -> str:
    """Round a positive integer to three significant figures, e.g. ``'1.45e43'``.

    Integer arithmetic throughout, rounding half up.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    exp = len(str(n)) - 1
    if exp < 2:
        scaled, shift = n * 10 ** (2 - exp), 0
    else:
        shift = exp - 2
        scaled = (n + 5 * 10 ** (shift - 1)) // 10**shift if shift else n
    if scaled >= 1000:
        scaled //= 10
        exp += 1
    digits = str(scaled)
    return f"{digits[0]}.{digits[1:]}e{exp}"
