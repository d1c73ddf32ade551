import logging
from dataclasses import dataclass
from typing import Callable, Optional

from ..algebra.hnn import HnnFamily, HnnGroup, is_trivial, is_trivial_in_R, make_free_abelian, make_hnn
from ..algebra.presentations import (
    FamilyParams,
    Presentation,
    make_klein_form,
    make_one_relator_R,
    make_snowflake_G,
)
from ..algebra.words import Alphabet, Word, commutator
from ..exceptions import ParameterError

logger = logging.getLogger(__name__)

FAMILY_NAMES = ("R", "R_pq", "klein", "G", "Z2")


@dataclass(frozen=True)
class GroupFamily:
    """A named presentation together with its word-problem oracle, when one exists."""

    name: str
    presentation: Presentation
    hnn: Optional[HnnGroup]
    oracle: Optional[Callable[[Word], bool]]

    def require_oracle(self) -> Callable[[Word], bool]:
        if self.oracle is None:
            raise ParameterError(f"family '{self.name}' has no word-problem oracle")
        return self.oracle


def free_abelian_presentation() -> Presentation:
    alphabet = Alphabet.from_names("a b")
    return Presentation(alphabet, (commutator(alphabet.letter("a"), alphabet.letter("b")),))


def make_family(
    name: str,
    p: int = 1,
    q: int = 1,
    params: Optional[FamilyParams] = None,
) -> GroupFamily:
    """
    Build a group family by name.

    Args:
        name: one of R, R_pq, klein, G, Z2
        p, q: parameters of R_pq, klein and G
        params: (m, n, k, l) for the general R family; without them R means R_pq

    Returns:
        GroupFamily with presentation and, except for general R(m, n, k, l),
        a triviality oracle
    """
    if name == "R" and params is not None:
        return GroupFamily(name, make_one_relator_R(params), None, None)
    if name in ("R", "R_pq"):
        hnn = make_hnn(HnnFamily.R_KLEIN, p, q)
        presentation = make_one_relator_R(FamilyParams.from_pq(p, q))
        return GroupFamily(name, presentation, hnn, lambda w: is_trivial_in_R(p, q, w))
    if name == "klein":
        hnn = make_hnn(HnnFamily.R_KLEIN, p, q)
        return GroupFamily(name, make_klein_form(p, q), hnn, lambda w: is_trivial(hnn, w))
    if name == "G":
        hnn = make_hnn(HnnFamily.G_SNOWFLAKE, p, q)
        return GroupFamily(name, make_snowflake_G(p, q), hnn, lambda w: is_trivial(hnn, w))
    if name == "Z2":
        hnn = make_free_abelian()
        return GroupFamily(name, free_abelian_presentation(), hnn, lambda w: is_trivial(hnn, w))
    raise ParameterError(f"unknown family '{name}'; expected one of {', '.join(FAMILY_NAMES)}")
