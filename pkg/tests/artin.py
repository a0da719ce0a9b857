"""Independent braid oracle: the Artin action of a braid on the free group.

Pure braid words are expanded into Artin generators and their action on the
free group ``F_m`` is computed by substitution.  Two words are the same
braid iff they act identically (the action is faithful).
"""

from __future__ import annotations

from claspkit.braid import BraidWord, Generator


def _reduce(w: list[int]) -> list[int]:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def _inverse(w: list[int]) -> list[int]:
    return [-x for x in reversed(w)]


def _sigma(k: int, e: int, m: int) -> dict[int, list[int]]:
    img = {x: [x] for x in range(1, m + 1)}
    if e == 1:
        img[k], img[k + 1] = [k, k + 1, -k], [k]
    else:
        img[k], img[k + 1] = [k + 1], [-(k + 1), k, k + 1]
    return img


def _substitute(img: dict[int, list[int]], w: list[int]) -> list[int]:
    out: list[int] = []
    for x in w:
        out += img[x] if x > 0 else _inverse(img[-x])
    return _reduce(out)


def artin_letters(g: Generator) -> list[tuple[int, int]]:
    """``A(i,j) = s_{j-1}^-1 ... s_{i+1}^-1 s_i^2 s_{i+1} ... s_{j-1}``."""
    i, j = g.i, g.j
    w = [(k, -1) for k in range(j - 1, i, -1)] + [(i, 1), (i, 1)] + [(k, 1) for k in range(i + 1, j)]
    if g.exp < 0:
        w = [(k, -e) for k, e in reversed(w)]
    return w


def action(w: BraidWord | list[Generator], m: int) -> dict[int, tuple[int, ...]]:
    res = {x: [x] for x in range(1, m + 1)}
    for g in w:
        for k, e in artin_letters(g):
            s = _sigma(k, e, m)
            res = {x: _substitute(res, s[x]) for x in range(1, m + 1)}
    return {x: tuple(v) for x, v in res.items()}


def same_braid(w1, w2) -> bool:
    m = max([g.j for g in w1] + [g.j for g in w2] + [1])
    return action(w1, m) == action(w2, m)
