"""Named presentations used by the tests, the scripts and the bundled JSON inputs."""
from __future__ import annotations

from fractions import Fraction

from .presentation import Presentation


def projective_space(k: int, c=1) -> Presentation:
    """``P^{k-1}`` as ``C^k`` mod the diagonal circle, support ``(c/k, ..., c/k)``."""
    c = Fraction(c)
    return Presentation(((1,) * k,), (c / k,) * k, name=f"P{k - 1}")


def teardrop(support=(1, 1)) -> Presentation:
    return Presentation(((1, 2),), support, name="P(1,2)")


def stacky_point() -> Presentation:
    return Presentation(((2,),), (1,), name="P(2)")


def p1xp1(a=1, b=1) -> Presentation:
    return Presentation(((1, 1, 0, 0), (0, 0, 1, 1)), (0, a, 0, b), name="P1xP1")


def p1_extra_term() -> Presentation:
    """``P^1`` with one extra spurious coordinate; the potential is ``q y^2 + y + q/y`` up to ``y -> 1/y``."""
    return Presentation(((1, 0, 2), (0, 1, 1)), (1, 0, 1), name="P1 extra term")


def p2_two_torus() -> Presentation:
    """``P^2`` presented as a quotient of ``C^4`` by a 2-torus; index 4 is spurious."""
    return Presentation(((-1, 0, 1, 1), (1, 1, 1, 0)), (0, 1, 0, 2), name="P2 via 2-torus")


def blowup(eps=Fraction(1, 2)) -> Presentation:
    """``[0,4] x [0,2]`` cut by ``mu1 + mu2 >= eps``.

    Index order: ``mu1 <= 4``, ``mu2 <= 2``, ``mu1 >= 0``, ``mu2 >= 0``, ``mu1 + mu2 >= eps``.
    """
    return Presentation(
        ((1, 0, 1, 0, 0), (0, 1, 0, 1, 0), (1, 1, 0, 0, 1)),
        (4, 2, 0, 0, -Fraction(eps)),
        name=f"blow-up eps={eps}",
    )


def hirzebruch(n: int, support=None) -> Presentation:
    """Weights ``(0,1), (-n,1), (1,0), (1,0)``."""
    support = support if support is not None else (1, 1, 0, 2 * n)
    return Presentation(((0, -n, 1, 1), (1, 1, 0, 0)), support, name=f"F{n}")


def flip_3d() -> Presentation:
    """A threefold whose program starts with a genuine flip (both partition sides of size 2)."""
    return Presentation(
        ((0, 2, 1, 1, 0), (1, 0, 1, 0, 1)),
        (Fraction(11, 4), Fraction(5, 4), Fraction(11, 4), 3, Fraction(5, 4)),
        name="flip3",
    )


ALL = {
    "p1": lambda: projective_space(2),
    "p2": lambda: projective_space(3),
    "p3": lambda: projective_space(4),
    "p4": lambda: projective_space(5),
    "teardrop": teardrop,
    "stacky_point": stacky_point,
    "p1xp1": p1xp1,
    "p1_extra_term": p1_extra_term,
    "p2_two_torus": p2_two_torus,
    "blowup": blowup,
    "blowup_eps_3_2": lambda: blowup(Fraction(3, 2)),
    "hirzebruch2": lambda: hirzebruch(2),
    "hirzebruch3": lambda: hirzebruch(3),
    "hirzebruch4": lambda: hirzebruch(4),
    "flip3": flip_3d,
}
