"""Prime-field scalars and binomial coefficients mod p."""

import threading
from dataclasses import dataclass

MAX_PRIME = 97
MAX_ORDER = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Prime:
    """Characteristic ``p`` together with the group order ``q = p**k``."""

    p: int
    k: int = 1

    def __post_init__(self):
        if not is_prime(self.p) or self.p > MAX_PRIME:
            raise ValueError(f"p must be a prime <= {MAX_PRIME}, got {self.p}")
        if self.k < 1:
            raise ValueError(f"exponent k must be positive, got {self.k}")
        if self.p**self.k > MAX_ORDER:
            raise ValueError(f"group order {self.p}^{self.k} exceeds {MAX_ORDER}")

    @property
    def q(self) -> int:
        return self.p**self.k


def ff_inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


_PASCAL: dict = {}
_PASCAL_LOCK = threading.Lock()


def _pascal_row(n: int, p: int) -> list:
    with _PASCAL_LOCK:
        rows = _PASCAL.setdefault(p, [[1]])
        while len(rows) <= n:
            prev = rows[-1]
            rows.append([1] + [(prev[j - 1] + prev[j]) % p for j in range(1, len(prev))] + [1])
        return rows[n]


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via Pascal's triangle; 0 when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binom_mod needs nonnegative arguments")
    if k > n:
        return 0
    if n > 4096:
        # Lucas' theorem keeps the triangle small for huge n.
        result = 1
        while n or k:
            result = result * binom_mod(n % p, k % p, p) % p
            n //= p
            k //= p
        return result
    return _pascal_row(n, p)[k]
