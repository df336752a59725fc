"""Regenerate src/blocktrans/data/simple_groups.csv.

Lists every nonabelian finite simple group of order at most LIMIT with its
order and the order of its outer automorphism group, from the standard order
formulas of the families that reach below the limit. Isomorphic coincidences
(L2(4) = L2(5) = A5, L2(9) = A6, L3(2) = L2(7), L4(2) = A8, S4(3) = U4(2))
are listed once.
"""

from math import gcd, prod
from pathlib import Path

LIMIT = 10**7


def prime_powers(upto):
    out = []
    for q in range(2, upto + 1):
        p = next(d for d in range(2, q + 1) if q % d == 0)
        f, r = 0, q
        while r % p == 0:
            r //= p
            f += 1
        if r == 1:
            out.append((q, p, f))
    return out


def rows():
    out = []
    a = 60
    for n in range(5, 20):
        if n > 5:
            a = a * n
        if a > LIMIT:
            break
        out.append((f"A{n}", a, 4 if n == 6 else 2))
    for q, p, f in prime_powers(400):
        if q in (2, 3, 4, 5, 9):
            continue
        order = q * (q * q - 1) // gcd(2, q - 1)
        if order <= LIMIT:
            out.append((f"L2({q})", order, gcd(2, q - 1) * f))
    for q, p, f in prime_powers(20):
        families = {
            f"L3({q})": (q**3 * (q**3 - 1) * (q**2 - 1) // gcd(3, q - 1), 2 * gcd(3, q - 1) * f, q > 2),
            f"L4({q})": (q**6 * prod(q**i - 1 for i in (2, 3, 4)) // gcd(4, q - 1), 2 * gcd(4, q - 1) * f, q > 2),
            f"L5({q})": (q**10 * prod(q**i - 1 for i in (2, 3, 4, 5)) // gcd(5, q - 1), 2 * gcd(5, q - 1) * f, True),
            f"U3({q})": (q**3 * (q**3 + 1) * (q**2 - 1) // gcd(3, q + 1), 2 * gcd(3, q + 1) * f, q > 2),
            f"U4({q})": (q**6 * (q**2 - 1) * (q**3 + 1) * (q**4 - 1) // gcd(4, q + 1), 2 * gcd(4, q + 1) * f, True),
            f"U5({q})": (q**10 * prod(q**i - (-1) ** i for i in (2, 3, 4, 5)) // gcd(5, q + 1), 2 * gcd(5, q + 1) * f, True),
            f"S4({q})": (q**4 * (q**2 - 1) * (q**4 - 1) // gcd(2, q - 1), (2 * f if p == 2 else 2 * f), q > 3),
            f"S6({q})": (q**9 * prod(q**(2 * i) - 1 for i in (1, 2, 3)) // gcd(2, q - 1), gcd(2, q - 1) * f, True),
            f"G2({q})": (q**6 * (q**6 - 1) * (q**2 - 1), (2 * f if p == 3 else f), q > 2),
        }
        for name, (order, out_order, ok) in families.items():
            if ok and order <= LIMIT:
                out.append((name, order, out_order))
        if p == 2 and f % 2 == 1 and f >= 3:
            order = q * q * (q * q + 1) * (q - 1)
            if order <= LIMIT:
                out.append((f"Sz({q})", order, f))
    out += [("M11", 7920, 1), ("M12", 95040, 2), ("J1", 175560, 1), ("M22", 443520, 2), ("J2", 604800, 2)]
    out.sort(key=lambda r: (r[1], r[0]))
    return out


if __name__ == "__main__":
    path = Path(__file__).resolve().parents[1] / "src/blocktrans/data/simple_groups.csv"
    lines = ["name,order,out_order"] + [f"{n},{o},{x}" for n, o, x in rows()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{len(lines) - 1} rows -> {path}")
