"""Reference values for the unit tests, from exact rational slope integrals.

For a radial profile with slopes sigma on its pieces, e1 = c * sum sigma^(m+1) * length,
E_w(u) = (e1(w) - e1(u)) / (m+1), I(a, b) = c * sum (sa - sb)(sa^m - sb^m) * length, and the
rooftop is the lower convex hull of min(u, v).  Nothing here shares code with the library.
Run: python3 derive.py
"""
from fractions import Fraction as F

import mpmath

mpmath.mp.dps = 40


def pieces(bps, slopes):
    """[(left, right, slope)] on [-inf, 0]; the leftmost piece has slope 0 for bounded profiles."""
    edges = [None] + list(bps) + [F(0)]
    return [(edges[i], edges[i + 1], slopes[i]) for i in range(len(slopes))]


def value(bps, slopes, x):
    v = F(0)
    for left, right, s in reversed(pieces(bps, slopes)):
        if left is None or x >= left:
            return v - s * (right - x)
        v -= s * (right - left)
    raise AssertionError


def slope_at(bps, slopes, x):
    """Slope on the piece containing the open interval just left of x."""
    for left, right, s in pieces(bps, slopes):
        if (left is None or left < x) and x <= right:
            return s
    raise AssertionError


def slope_integral(bps, slopes, power):
    return sum(s ** power * (r - l) for l, r, s in pieces(bps, slopes) if l is not None)


def mixed_integral(a, b, m):
    cuts = sorted(set(a[0]) | set(b[0]) | {F(0)})
    total = F(0)
    for l, r in zip(cuts, cuts[1:]):
        sa, sb = slope_at(*a, r), slope_at(*b, r)
        total += (sa - sb) * (sa ** m - sb ** m) * (r - l)
    return total


def rooftop(a, b):
    xs = sorted(set(a[0]) | set(b[0]))
    cuts = sorted(set(xs))
    # crossings of the two graphs between consecutive cuts
    grid = sorted(set(cuts) | {min(a[0] + b[0]) - 1, F(0)})
    extra = []
    for l, r in zip(grid, grid[1:]):
        dl = value(*a, l) - value(*b, l)
        dr = value(*a, r) - value(*b, r)
        if dl * dr < 0:
            extra.append(l + (r - l) * dl / (dl - dr))
    pts = sorted(set(grid) | set(extra))
    ys = [min(value(*a, x), value(*b, x)) for x in pts]
    hull = []
    for p in zip(pts, ys):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    bps, slopes = [], [F(0)]
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = (y2 - y1) / (x2 - x1)
        if s != slopes[-1]:
            bps.append(x1)
            slopes.append(s)
    return bps, slopes


def add(a, b):
    cuts = sorted(set(a[0]) | set(b[0]))
    slopes = [slope_at(*a, x) + slope_at(*b, x) for x in cuts] + [a[1][-1] + b[1][-1]]
    return cuts, slopes


def show(label, x):
    if isinstance(x, F):
        x = mpmath.mpf(x.numerator) / x.denominator
    print(f"{label} = {mpmath.nstr(mpmath.mpf(x), 17)}")


A = ([F(-2), F(-1)], [F(0), F(1, 2), F(3, 2)])
B = ([F(-1), F(-1, 4)], [F(0), F(1), F(4)])
W = ([F(-3)], [F(0), F(1, 4)])

for n in (2, 3):
    m = n
    c = (2 * mpmath.pi) ** n
    e1 = lambda g: c * slope_integral(*g, m + 1)
    P = rooftop(A, B)
    print(f"# n = m = {n}")
    print(f"# rooftop(A,B) breakpoints {[str(x) for x in P[0]]} slopes {[str(x) for x in P[1]]}")
    show("e1(A)", e1(A))
    show("e1(B)", e1(B))
    show("E_W(A)", (e1(W) - e1(A)) / (m + 1))
    show("d(A,B)", (2 * e1(P) - e1(A) - e1(B)) / (m + 1))
    show("I(A,B)", c * mixed_integral(A, B, m))
    show("norm(A,B)", e1(add(A, B)) ** (mpmath.mpf(1) / (m + 1)))
    show("cap(1/2)", c * (1 / mpmath.log(2)) ** m)

# m < n: everything scales with the measured constant c, so report values divided by c.
for n, m in ((2, 1), (3, 2)):
    k = mpmath.mpf(2 * n) / m - 2
    print(f"# n = {n}, m = {m}, values / c")
    show("e1(A)/c", slope_integral(*A, m + 1))
    show("d(A,B)/c", (2 * slope_integral(*rooftop(A, B), m + 1) - slope_integral(*A, m + 1)
                      - slope_integral(*B, m + 1)) / (m + 1))
    show("cap(1/2)/c", (mpmath.mpf(2) ** k - 1) ** (-m))
