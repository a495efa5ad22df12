"""Shared generators for random fans and weight matrices."""
import random

from hypothesis import strategies as st

from forge.fanpoly import AugmentedFan, convex_hull, is_fano

coord = st.integers(min_value=-6, max_value=6)
point = st.tuples(coord, coord)


def symmetric_hull(points):
    """Marked rays of the special symmetric Fano fan spanned by +-points, or None."""
    pts = {tuple(p) for p in points} | {(-p[0], -p[1]) for p in points}
    pts.discard((0, 0))
    if len(pts) < 2:
        return None
    hull = [tuple(int(c) for c in p) for p in convex_hull(pts)]
    return hull if len(hull) >= 4 else None


def fano_hull(points):
    """Hull vertices of the points when 0 is strictly inside, else None."""
    pts = {tuple(p) for p in points}
    pts.discard((0, 0))
    if len(pts) < 3:
        return None
    hull = [tuple(int(c) for c in p) for p in convex_hull(pts)]
    if len(hull) < 3:
        return None
    fan = AugmentedFan(tuple(hull))
    return hull if fan.is_valid and is_fano(fan) else None


symmetric_fans = (st.lists(point, min_size=2, max_size=6)
                  .map(symmetric_hull).filter(lambda r: r is not None).map(AugmentedFan))
fano_fans = (st.lists(point, min_size=3, max_size=7)
             .map(fano_hull).filter(lambda r: r is not None).map(AugmentedFan))


def random_symmetric_fans(count, seed=0, box=6):
    """Deterministic list of distinct-draw special symmetric fans (for the acceptance suite)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        pts = [(rng.randint(-box, box), rng.randint(-box, box)) for _ in range(rng.randint(2, 6))]
        rays = symmetric_hull(pts)
        if rays is not None:
            out.append(AugmentedFan(tuple(rays)))
    return out


def random_normal_form(k, rng, bound=9):
    """``[I_k | a | b]`` with nonzero entries in [-bound, bound]."""
    vals = [v for v in range(-bound, bound + 1) if v != 0]
    a = [rng.choice(vals) for _ in range(k)]
    b = [rng.choice(vals) for _ in range(k)]
    rows = tuple(tuple([int(i == j) for j in range(k)] + [a[i], b[i]]) for i in range(k))
    return rows, tuple(a), tuple(b)
