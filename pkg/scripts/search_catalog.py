"""Seeded search for the frozen catalog presentations (run once; results are pasted into curves.py)."""
import random
import sys
import time

from hkelliptic.errors import HKError
from hkelliptic.fields import make_extension
from hkelliptic.graded import GradedQuotientPresentation, is_projectively_smooth
from hkelliptic.polynomials import HomogeneousPoly, monomials


def random_form(rng, ctx, nvars, degree, density):
    terms = {}
    for m in monomials(nvars, degree):
        if rng.random() < density:
            terms[m] = rng.randrange(1, ctx.p)
    return HomogeneousPoly(ctx, nvars, degree, terms)


def search_ci(p, seed, bound=12):
    ctx = make_extension(p)
    rng = random.Random(seed)
    for attempt in range(1, 500):
        f = random_form(rng, ctx, 4, 2, 0.35)
        g = random_form(rng, ctx, 4, 2, 0.35)
        if f.is_zero() or g.is_zero():
            continue
        try:
            if not is_projectively_smooth([f, g]):
                continue
            pres = GradedQuotientPresentation(ctx, 4, [f, g], expected_delta=4)
            pres.verify_hilbert(bound)
        except HKError:
            continue
        return attempt, [f, g]
    return None


def pfaffians(mat):
    # 4x4 principal Pfaffians of a 5x5 skew matrix given by the upper triangle
    out = []
    for skip in range(5):
        idx = [i for i in range(5) if i != skip]
        a, b, c, d = idx
        pf = mat[(a, b)] * mat[(c, d)] - mat[(a, c)] * mat[(b, d)] + mat[(a, d)] * mat[(b, c)]
        out.append(pf)
    return out


def search_quintic(p, seed, budget=200, bound=6):
    ctx = make_extension(p)
    rng = random.Random(seed)
    for attempt in range(1, budget + 1):
        mat = {}
        for i in range(5):
            for j in range(i + 1, 5):
                mat[(i, j)] = random_form(rng, ctx, 5, 1, 0.4)
        gens = [g for g in pfaffians(mat) if not g.is_zero()]
        if len(gens) != 5:
            continue
        try:
            pres = GradedQuotientPresentation(ctx, 5, gens, expected_delta=5)
            pres.verify_hilbert(bound)
            if not is_projectively_smooth(gens):
                continue
        except HKError:
            continue
        return attempt, gens
    return None


if __name__ == "__main__":
    for p in (5, 2):
        t = time.time()
        res = search_ci(p, seed=20040201)
        print("ci", p, res[0], [g.to_text() for g in res[1]], f"{time.time() - t:.1f}s")
    t = time.time()
    res = search_quintic(3, seed=20040201)
    print("quintic", 3, res and res[0], res and [g.to_text() for g in res[1]], f"{time.time() - t:.1f}s")
    sys.stdout.flush()
